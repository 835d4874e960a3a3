use rayon::prelude::*;

use crate::oneway::{self, OneWayCombinedParams, Q_MAX, Q_MIN};
use crate::rate_region::{convex_hull, Constraint, Point, RatePolytope, RateRegion};
use crate::search::{self, Dimension, SearchBudget, SearchError};
use crate::{capacity, OneWayChannel, TwoWayChannel};

use super::constraints::polytopes;
use super::params::variance;
use super::{Scheme, TwrcParams};

/// Number of boundary directions traced by default.
pub const DEFAULT_WEIGHTS: usize = 9;

/// `count` weights evenly spaced on `[0, 1]`.
pub fn boundary_weights(count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.5],
        n => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

/// A traced region together with the parameter points that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedRegion {
    pub region: RateRegion,
    /// Best parameters found for each weight, in weight order.
    pub optima: Vec<TwrcParams>,
}

/// `max` over both layer assignments of the best `w`-weighted sum rate.
pub fn weighted_rate(ch: &TwoWayChannel, prm: &TwrcParams, w: f64) -> f64 {
    polytopes(ch, prm)
        .iter()
        .map(|p| crate::rate_region::weighted_sum_max(&p.vertices(), w))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn vertices_of(ch: &TwoWayChannel, prm: &TwrcParams) -> Vec<Point> {
    polytopes(ch, prm)
        .iter()
        .flat_map(|p| p.vertices())
        .collect()
}

/// Traces the region of `scheme` by maximizing the weighted sum rate for
/// each weight and taking the hull of both polytopes at every optimum.
///
/// `seeds` are parameter sets in the full combined parameterization; they
/// are only used by [`Scheme::Combined`], whose region also includes the
/// seed polytopes.
pub fn trace_region(
    ch: &TwoWayChannel,
    scheme: Scheme,
    budget: &SearchBudget,
    weights: &[f64],
    seeds: &[TwrcParams],
) -> Result<TracedRegion, SearchError> {
    let p = ch.p;
    let domain = scheme.domain(p);
    let mut points: Vec<Point> = vec![(0.0, 0.0)];
    let mut optima = Vec::with_capacity(weights.len());

    if domain.is_empty() {
        let prm = scheme.decode(p, &[]);
        points.extend(vertices_of(ch, &prm));
        optima.resize(weights.len(), prm);
        return Ok(TracedRegion {
            region: convex_hull(&points),
            optima,
        });
    }

    let use_seeds = scheme == Scheme::Combined;
    let mut seed_vecs: Vec<Vec<f64>> = if use_seeds {
        seeds.iter().map(TwrcParams::combined_coordinates).collect()
    } else {
        vec![]
    };
    for &w in weights {
        let out = search::maximize_seeded(
            |v| weighted_rate(ch, &scheme.decode(p, v), w),
            &domain,
            budget,
            &seed_vecs,
        )?;
        let prm = scheme.decode(p, &out.params);
        points.extend(vertices_of(ch, &prm));
        if use_seeds {
            seed_vecs.push(out.params);
        }
        optima.push(prm);
    }
    if use_seeds {
        let extra: Vec<Vec<Point>> = seeds.par_iter().map(|s| vertices_of(ch, s)).collect();
        points.extend(extra.into_iter().flatten());
    }
    Ok(TracedRegion {
        region: convex_hull(&points),
        optima,
    })
}

/// Regions of all four schemes on one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRegions {
    pub combined: RateRegion,
    pub rankov_df: RateRegion,
    pub xie_df: RateRegion,
    pub lnnc: RateRegion,
}

impl SchemeRegions {
    pub fn get(&self, scheme: Scheme) -> &RateRegion {
        match scheme {
            Scheme::Combined => &self.combined,
            Scheme::RankovDf => &self.rankov_df,
            Scheme::XieDf => &self.xie_df,
            Scheme::Lnnc => &self.lnnc,
        }
    }
}

/// Traces the three special cases, then the combined scheme seeded with
/// their optima.
pub fn scheme_regions(
    ch: &TwoWayChannel,
    budget: &SearchBudget,
    weights: &[f64],
) -> Result<SchemeRegions, SearchError> {
    let rankov = trace_region(ch, Scheme::RankovDf, budget, weights, &[])?;
    let xie = trace_region(ch, Scheme::XieDf, budget, weights, &[])?;
    let lnnc = trace_region(ch, Scheme::Lnnc, budget, weights, &[])?;
    let seeds: Vec<TwrcParams> = [&rankov, &xie, &lnnc]
        .iter()
        .flat_map(|t| t.optima.iter().copied())
        .collect();
    let combined = trace_region(ch, Scheme::Combined, budget, weights, &seeds)?;
    Ok(SchemeRegions {
        combined: combined.region,
        rankov_df: rankov.region,
        xie_df: xie.region,
        lnnc: lnnc.region,
    })
}

pub fn rankov_df_region(
    ch: &TwoWayChannel,
    budget: &SearchBudget,
) -> Result<RateRegion, SearchError> {
    let w = boundary_weights(DEFAULT_WEIGHTS);
    Ok(trace_region(ch, Scheme::RankovDf, budget, &w, &[])?.region)
}

pub fn xie_df_region(ch: &TwoWayChannel, budget: &SearchBudget) -> Result<RateRegion, SearchError> {
    let w = boundary_weights(DEFAULT_WEIGHTS);
    Ok(trace_region(ch, Scheme::XieDf, budget, &w, &[])?.region)
}

pub fn lnnc_region(ch: &TwoWayChannel, budget: &SearchBudget) -> Result<RateRegion, SearchError> {
    let w = boundary_weights(DEFAULT_WEIGHTS);
    Ok(trace_region(ch, Scheme::Lnnc, budget, &w, &[])?.region)
}

pub fn combined_region(
    ch: &TwoWayChannel,
    budget: &SearchBudget,
) -> Result<RateRegion, SearchError> {
    Ok(scheme_regions(ch, budget, &boundary_weights(DEFAULT_WEIGHTS))?.combined)
}

/// Largest `R1 + R2` over the region.
pub fn sum_rate(region: &RateRegion) -> f64 {
    region.sum_rate()
}

/// Sum rates of all four schemes, in [`Scheme::ALL`] order.
pub fn sum_rates(ch: &TwoWayChannel, budget: &SearchBudget) -> Result<[f64; 4], SearchError> {
    let regions = scheme_regions(ch, budget, &[0.5])?;
    Ok(Scheme::ALL.map(|s| sum_rate(regions.get(s))))
}

/// Cut-set outer bound:
///
/// ```text
/// R1 ≤ min{C((gr1² + g21²)P), C((g21² + g2r²)P + 2|g21 g2r|P)}
/// R2 ≤ min{C((gr2² + g12²)P), C((g12² + g1r²)P + 2|g12 g1r|P)}
/// ```
pub fn twrc_cutset_bound(ch: &TwoWayChannel) -> RatePolytope {
    let TwoWayChannel {
        g12,
        g1r,
        g21,
        g2r,
        gr1,
        gr2,
        p,
    } = *ch;
    let r1 = capacity((gr1 * gr1 + g21 * g21) * p).min(capacity(
        (g21 * g21 + g2r * g2r + 2.0 * (g21 * g2r).abs()) * p,
    ));
    let r2 = capacity((gr2 * gr2 + g12 * g12) * p).min(capacity(
        (g12 * g12 + g1r * g1r + 2.0 * (g12 * g1r).abs()) * p,
    ));
    RatePolytope::new(vec![
        Constraint::new(1.0, 0.0, r1),
        Constraint::new(0.0, 1.0, r2),
    ])
}

/// The two-way channel seen by user 1 when user 2 is silent: `g21 = g`,
/// `gr1 = g1`, `g2r = g2`, all links touching user 2's transmitter or
/// user 1's receiver zero.
pub fn silenced_channel(ch: &OneWayChannel) -> TwoWayChannel {
    TwoWayChannel {
        g12: 0.0,
        g1r: 0.0,
        g21: ch.g,
        g2r: ch.g2,
        gr1: ch.g1,
        gr2: 0.0,
        p: ch.p,
    }
}

/// Best `R1` with user 2 silent and the coarse compression layer off.
///
/// User 1 splits power over its common, cooperative and private layers
/// (`α1`, `β1`, `δ1`); the relay over the coherent part of `Vr` and the
/// compression index (`α31`, `δ3`).
pub fn silenced_user2_rate(
    ch: &OneWayChannel,
    budget: &SearchBudget,
) -> Result<(TwrcParams, f64), SearchError> {
    let tw = silenced_channel(ch);
    let p = ch.p;
    let domain = [
        Dimension::PowerSphere { size: 3, budget: p },
        Dimension::PowerSphere { size: 2, budget: p },
        Dimension::LogInterval {
            lo: Q_MIN,
            hi: Q_MAX,
        },
    ];
    let decode = |v: &[f64]| TwrcParams {
        alpha1: v[0],
        beta1: v[1],
        delta1: v[2],
        alpha31: v[3],
        delta3: v[4],
        q_hat: variance(v[5]),
        ..TwrcParams::SILENT
    };
    let s = p.sqrt();
    let nnc_q = oneway::optimize_nnc(ch).q.clamp(Q_MIN, Q_MAX);
    let df = OneWayCombinedParams::decode_forward(p, oneway::optimize_df(ch).rho);
    let best_oneway = oneway::optimize_combined(ch, budget)?.params;
    // DF, NNC and the one-way optimum mapped onto the two-way layers.
    let seeds = vec![
        vec![df.alpha1, df.beta1, 0.0, s, 0.0, Q_MAX],
        vec![0.0, 0.0, s, 0.0, s, nnc_q],
        vec![
            best_oneway.alpha1,
            best_oneway.beta1,
            best_oneway.gamma1,
            best_oneway.alpha2,
            best_oneway.beta2,
            best_oneway.q.clamp(Q_MIN, Q_MAX),
        ],
    ];
    let out = search::maximize_seeded(|v| max_r1(&tw, &decode(v)), &domain, budget, &seeds)?;
    let best = decode(&out.params);
    let (q_hat, rate) = oneway::maximize_over_q(|q_hat| max_r1(&tw, &TwrcParams { q_hat, ..best }));
    Ok(if rate > out.value {
        (TwrcParams { q_hat, ..best }, rate)
    } else {
        (best, out.value)
    })
}

fn max_r1(ch: &TwoWayChannel, prm: &TwrcParams) -> f64 {
    vertices_of(ch, prm).iter().map(|v| v.0).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchBudget {
        SearchBudget {
            coarse_steps: 3,
            refine_rounds: 1,
            refine_shrink: 0.5,
            tol: 1e-3,
        }
    }

    #[test]
    fn weights() {
        assert_eq!(boundary_weights(1), vec![0.5]);
        assert_eq!(boundary_weights(3), vec![0.0, 0.5, 1.0]);
        assert_eq!(boundary_weights(9).len(), 9);
    }

    #[test]
    fn sum_rate_examples() {
        let rect = RateRegion::from_points(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
        assert_eq!(sum_rate(&rect), 3.0);
        assert_eq!(sum_rate(&RateRegion::origin()), 0.0);
    }

    #[test]
    fn cutset_examples() {
        let ch = TwoWayChannel::new(1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 3.0).unwrap();
        let b = twrc_cutset_bound(&ch);
        assert!((b.constraints()[0].c - capacity(0.75)).abs() < 1e-15);
        assert!((b.constraints()[1].c - capacity(3.0)).abs() < 1e-15);
        let sym = TwoWayChannel::new(1.0, 2.0, 1.0, 2.0, 2.0, 2.0, 3.0).unwrap();
        let b = twrc_cutset_bound(&sym);
        assert_eq!(b.constraints()[0].c, b.constraints()[1].c);
    }

    #[test]
    fn xie_region_is_a_single_evaluation() {
        let ch = TwoWayChannel::region_example();
        let t = trace_region(&ch, Scheme::XieDf, &quick(), &[0.0, 1.0], &[]).unwrap();
        assert_eq!(t.optima.len(), 2);
        assert!(t.region.max_r1() > 0.0 && t.region.max_r2() > 0.0);
    }

    #[test]
    fn dead_relay_gives_direct_links() {
        let ch = TwoWayChannel::new(1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 3.0).unwrap();
        let regions = scheme_regions(&ch, &quick(), &boundary_weights(3)).unwrap();
        let corner = (capacity(0.75), capacity(3.0));
        for s in Scheme::ALL {
            let r = regions.get(s);
            assert!(
                r.max_r1() <= corner.0 + 1e-9 && r.max_r2() <= corner.1 + 1e-9,
                "{s:?}"
            );
        }
        assert!(regions.combined.contains((corner.0, 0.0), 1e-6));
        assert!(regions.combined.contains((0.0, corner.1), 1e-6));
    }

    #[test]
    fn combined_contains_special_cases() {
        let ch = TwoWayChannel::new(1.0, 2.0, 0.8, 1.5, 2.5, 1.2, 2.0).unwrap();
        let regions = scheme_regions(&ch, &quick(), &boundary_weights(3)).unwrap();
        let cut = twrc_cutset_bound(&ch);
        for s in [Scheme::RankovDf, Scheme::XieDf, Scheme::Lnnc] {
            for &v in &regions.get(s).vertices {
                assert!(regions.combined.contains(v, 1e-6), "{s:?} {v:?}");
            }
        }
        for s in Scheme::ALL {
            for &v in &regions.get(s).vertices {
                assert!(cut.is_feasible(v, 1e-9), "{s:?} {v:?}");
            }
        }
    }
}
