//! Achievable rates on the Gaussian one-way relay channel.
//!
//! The combined scheme splits the source message into a cooperative part
//! (`U`, decoded by the relay and resent coherently through `Ur`) and a
//! private part (`X` on top of `U`) that the relay only compresses.
//!
//! Signaling used throughout, with `S1..S4` independent `N(0, 1)`:
//!
//! ```text
//! Ur = S1
//! U  = α1 S1 + β1 S2
//! X  = U + γ1 S3
//! Xr = α2 S1 + β2 S4
//! Ŷr = Yr + Z',  Z' ~ N(0, Q)
//! ```

use crate::mi_engine::GaussianSystem;
use crate::search::{self, Dimension, SearchBudget, SearchError};
use crate::{capacity, check_compression, check_power, OneWayChannel, ParamError};

/// Compression-noise search range `[Q_MIN, Q_MAX]`, searched in `log10`.
pub const Q_MIN: f64 = 1e-3;
pub const Q_MAX: f64 = 1e6;

/// Points per decade of the coarse `Q` scan.
const Q_GRID_PER_DECADE: usize = 10;

/// Resolution of the DF correlation scan before golden-section refinement.
const RHO_GRID: usize = 101;

/// Power split of the combined scheme. `q = ∞` disables compression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneWayCombinedParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub q: f64,
}

impl OneWayCombinedParams {
    pub fn validate(&self, p: f64) -> Result<(), ParamError> {
        check_power(
            "source",
            &[
                ("alpha1", self.alpha1),
                ("beta1", self.beta1),
                ("gamma1", self.gamma1),
            ],
            p,
        )?;
        check_power(
            "relay",
            &[("alpha2", self.alpha2), ("beta2", self.beta2)],
            p,
        )?;
        check_compression("q", self.q)
    }

    /// The decode-forward operating point with source-relay correlation `rho`.
    pub fn decode_forward(p: f64, rho: f64) -> Self {
        let s = p.sqrt();
        Self {
            alpha1: rho * s,
            beta1: (1.0 - rho * rho).max(0.0).sqrt() * s,
            gamma1: 0.0,
            alpha2: s,
            beta2: 0.0,
            q: f64::INFINITY,
        }
    }

    /// The noisy-network-coding operating point: no cooperative stream.
    pub fn noisy_network_coding(p: f64, q: f64) -> Self {
        let s = p.sqrt();
        Self {
            alpha1: 0.0,
            beta1: 0.0,
            gamma1: s,
            alpha2: 0.0,
            beta2: s,
            q,
        }
    }

    fn powers(&self) -> [f64; 5] {
        [
            self.alpha1,
            self.beta1,
            self.gamma1,
            self.alpha2,
            self.beta2,
        ]
    }

    fn from_powers(v: &[f64], q: f64) -> Self {
        Self {
            alpha1: v[0],
            beta1: v[1],
            gamma1: v[2],
            alpha2: v[3],
            beta2: v[4],
            q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfOptimum {
    pub rho: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NncOptimum {
    pub q: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedOptimum {
    pub params: OneWayCombinedParams,
    pub rate: f64,
}

/// `min{C(g1²(1−ρ²)P), C(g²P + g2²P + 2ρ g g2 P)}`.
pub fn df_rate(ch: &OneWayChannel, rho: f64) -> f64 {
    let OneWayChannel { g, g1, g2, p } = *ch;
    let relay = capacity(g1 * g1 * (1.0 - rho * rho) * p);
    let dest = capacity(g * g * p + g2 * g2 * p + 2.0 * rho * g * g2 * p);
    relay.min(dest)
}

/// Best `df_rate` over `ρ ∈ [0, 1)`: a grid scan followed by golden-section
/// refinement on the bracket around the best grid point.
pub fn optimize_df(ch: &OneWayChannel) -> DfOptimum {
    let step = 1.0 / (RHO_GRID - 1) as f64;
    let mut best = (0.0, df_rate(ch, 0.0));
    for k in 1..RHO_GRID {
        let rho = k as f64 * step;
        let v = df_rate(ch, rho);
        if v > best.1 {
            best = (rho, v);
        }
    }
    let lo = (best.0 - step).max(0.0);
    let hi = (best.0 + step).min(1.0);
    let (rho, rate) = search::golden_section_max(|r| df_rate(ch, r), lo, hi, 1e-12);
    if rate > best.1 {
        DfOptimum { rho, rate }
    } else {
        DfOptimum {
            rho: best.0,
            rate: best.1,
        }
    }
}

/// NNC rate with `X = √P S1`, `Xr = √P S2` independent:
/// `min{I(X;Y,Ŷr|Xr), I(X,Xr;Y) − I(Ŷr;Yr|Xr,X,Y)}`.
pub fn nnc_rate(ch: &OneWayChannel, q: f64) -> f64 {
    let OneWayChannel { g, g1, g2, p } = *ch;
    let s = p.sqrt();
    // Sources: S1, S2, Z, Zr, Z'.
    let mut sys = GaussianSystem::new(5);
    let x = sys.add_variable("X", &[s, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let xr = sys.add_variable("Xr", &[0.0, s, 0.0, 0.0, 0.0]).unwrap();
    let y = sys
        .add_variable("Y", &[g * s, g2 * s, 1.0, 0.0, 0.0])
        .unwrap();
    let yr = sys
        .add_variable("Yr", &[g1 * s, 0.0, 0.0, 1.0, 0.0])
        .unwrap();
    if q.is_infinite() {
        let first = sys.cmi_ids(&[x], &[y], &[xr]);
        let second = sys.cmi_ids(&[x, xr], &[y], &[]);
        return first.min(second).max(0.0);
    }
    let yh = sys
        .add_variable("Yhat", &[g1 * s, 0.0, 0.0, 1.0, q.sqrt()])
        .unwrap();
    let first = sys.cmi_ids(&[x], &[y, yh], &[xr]);
    let second = sys.cmi_ids(&[x, xr], &[y], &[]) - sys.cmi_ids(&[yh], &[yr], &[xr, x, y]);
    first.min(second).max(0.0)
}

/// Best `nnc_rate` over `Q ∈ [Q_MIN, Q_MAX] ∪ {∞}`.
pub fn optimize_nnc(ch: &OneWayChannel) -> NncOptimum {
    let (q, rate) = maximize_over_q(|q| nnc_rate(ch, q));
    NncOptimum { q, rate }
}

/// The Gaussian closed form of the combined rate:
///
/// ```text
/// min{C(g1²β1²/(g1²γ1²+1)), C(((gα1+g2α2)² + g²β1²)/(g²γ1² + g2²β2² + 1))}
///   + C(g²γ1² + g1²γ1² g2²β2² / (g²γ1² + g1²γ1² + g2²β2² + 1))
/// ```
pub fn combined_rate_closed_form(ch: &OneWayChannel, prm: &OneWayCombinedParams) -> f64 {
    let OneWayChannel { g, g1, g2, .. } = *ch;
    let [a1, b1, c1, a2, b2] = prm.powers();
    let (g_sq, g1_sq, g2_sq) = (g * g, g1 * g1, g2 * g2);
    let relay = capacity(g1_sq * b1 * b1 / (g1_sq * c1 * c1 + 1.0));
    let coherent = (g * a1 + g2 * a2).powi(2);
    let dest = capacity((coherent + g_sq * b1 * b1) / (g_sq * c1 * c1 + g2_sq * b2 * b2 + 1.0));
    let denom = g_sq * c1 * c1 + g1_sq * c1 * c1 + g2_sq * b2 * b2 + 1.0;
    let private = capacity(g_sq * c1 * c1 + g1_sq * c1 * c1 * g2_sq * b2 * b2 / denom);
    relay.min(dest) + private
}

/// Compression noise at which the two private-rate bounds meet; the
/// engine evaluation at this `Q` attains the closed form's private term.
/// Infinite when the relay spends no power on the compression index.
pub fn matched_compression(ch: &OneWayChannel, prm: &OneWayCombinedParams) -> f64 {
    let OneWayChannel { g, g1, g2, .. } = *ch;
    let relay_power = g2 * g2 * prm.beta2 * prm.beta2;
    if relay_power == 0.0 {
        return f64::INFINITY;
    }
    (1.0 + (g * g + g1 * g1) * prm.gamma1 * prm.gamma1) / relay_power
}

/// Cooperative and private rate bounds evaluated on the Gaussian signaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineTerms {
    /// `I(Yr;U|Ur,Xr)`.
    pub relay: f64,
    /// `I(U;Y|Ur,Xr) + I(Ur;Y)`.
    pub destination: f64,
    /// `I(X;Y,Ŷr|U,Ur,Xr)`.
    pub private_cut: f64,
    /// `I(X,Xr;Y|U,Ur) − I(Ŷr;Yr|Xr,U,Ur,X,Y)`.
    pub private_mac: f64,
}

impl EngineTerms {
    /// `R10 + R11` with each part clamped at zero.
    pub fn rate(&self) -> f64 {
        let r10 = self.relay.min(self.destination).max(0.0);
        let r11 = self.private_cut.min(self.private_mac).max(0.0);
        r10 + r11
    }
}

pub fn engine_terms(ch: &OneWayChannel, prm: &OneWayCombinedParams) -> EngineTerms {
    let OneWayChannel { g, g1, g2, .. } = *ch;
    let [a1, b1, c1, a2, b2] = prm.powers();
    // Sources: S1, S2, S3, S4, Z, Zr, Z'.
    let mut sys = GaussianSystem::new(7);
    let mut add = |name: &str, c: [f64; 7]| sys.add_variable(name, &c).unwrap();
    let ur = add("Ur", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let u = add("U", [a1, b1, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let x = add("X", [a1, b1, c1, 0.0, 0.0, 0.0, 0.0]);
    let xr = add("Xr", [a2, 0.0, 0.0, b2, 0.0, 0.0, 0.0]);
    let y = add(
        "Y",
        [g * a1 + g2 * a2, g * b1, g * c1, g2 * b2, 1.0, 0.0, 0.0],
    );
    let yr = add("Yr", [g1 * a1, g1 * b1, g1 * c1, 0.0, 0.0, 1.0, 0.0]);
    let yh = prm.q.is_finite().then(|| {
        add(
            "Yhat",
            [g1 * a1, g1 * b1, g1 * c1, 0.0, 0.0, 1.0, prm.q.sqrt()],
        )
    });

    let relay = sys.cmi_ids(&[yr], &[u], &[ur, xr]);
    let destination = sys.cmi_ids(&[u], &[y], &[ur, xr]) + sys.cmi_ids(&[ur], &[y], &[]);
    let mac = sys.cmi_ids(&[x, xr], &[y], &[u, ur]);
    let (private_cut, private_mac) = match yh {
        Some(yh) => (
            sys.cmi_ids(&[x], &[y, yh], &[u, ur, xr]),
            mac - sys.cmi_ids(&[yh], &[yr], &[xr, u, ur, x, y]),
        ),
        None => (sys.cmi_ids(&[x], &[y], &[u, ur, xr]), mac),
    };
    EngineTerms {
        relay,
        destination,
        private_cut,
        private_mac,
    }
}

/// The combined rate `R10 + R11` from the general bounds, evaluated
/// exactly on the Gaussian signaling.
///
/// The cooperative destination bound conditions on `Xr`, whose compression
/// index is still undecoded at that stage, so with both streams active this
/// value can exceed the cut-set bound. [`combined_rate_closed_form`] counts
/// that part as noise.
pub fn combined_rate_via_engine(ch: &OneWayChannel, prm: &OneWayCombinedParams) -> f64 {
    engine_terms(ch, prm).rate()
}

/// `max_Q combined_rate_via_engine` at a fixed power split.
pub fn combined_rate_via_engine_best_q(
    ch: &OneWayChannel,
    prm: &OneWayCombinedParams,
) -> (f64, f64) {
    maximize_over_q(|q| combined_rate_via_engine(ch, &OneWayCombinedParams { q, ..*prm }))
}

fn combined_domain(p: f64) -> [Dimension; 2] {
    [
        Dimension::PowerSphere { size: 3, budget: p },
        Dimension::PowerSphere { size: 2, budget: p },
    ]
}

fn reference_seeds(ch: &OneWayChannel) -> Vec<Vec<f64>> {
    let df = OneWayCombinedParams::decode_forward(ch.p, optimize_df(ch).rho);
    let nnc = OneWayCombinedParams::noisy_network_coding(ch.p, f64::INFINITY);
    vec![df.powers().to_vec(), nnc.powers().to_vec()]
}

/// Maximizes the closed form over both power spheres, seeded with the
/// optimal DF point and the NNC point.
pub fn optimize_combined(
    ch: &OneWayChannel,
    budget: &SearchBudget,
) -> Result<CombinedOptimum, SearchError> {
    let out = search::maximize_seeded(
        |v| combined_rate_closed_form(ch, &OneWayCombinedParams::from_powers(v, f64::INFINITY)),
        &combined_domain(ch.p),
        budget,
        &reference_seeds(ch),
    )?;
    let mut params = OneWayCombinedParams::from_powers(&out.params, f64::INFINITY);
    params.q = matched_compression(ch, &params);
    Ok(CombinedOptimum {
        params,
        rate: out.value,
    })
}

/// Maximizes the engine evaluation jointly over the power split and `Q`,
/// starting from the DF and NNC optima and the closed-form optimum.
pub fn optimize_combined_via_engine(
    ch: &OneWayChannel,
    budget: &SearchBudget,
) -> Result<CombinedOptimum, SearchError> {
    let [src, rel] = combined_domain(ch.p);
    let domain = [
        src,
        rel,
        Dimension::LogInterval {
            lo: Q_MIN,
            hi: Q_MAX,
        },
    ];
    let nnc_q = optimize_nnc(ch).q.clamp(Q_MIN, Q_MAX);
    let closed = optimize_combined(ch, budget)?.params;
    let mut seeds: Vec<Vec<f64>> = reference_seeds(ch)
        .into_iter()
        .zip([Q_MAX, nnc_q])
        .map(|(mut s, q)| {
            s.push(q);
            s
        })
        .collect();
    let mut closed_seed = closed.powers().to_vec();
    closed_seed.push(closed.q.clamp(Q_MIN, Q_MAX));
    seeds.push(closed_seed);
    let out = search::maximize_seeded(
        |v| combined_rate_via_engine(ch, &OneWayCombinedParams::from_powers(v, v[5])),
        &domain,
        budget,
        &seeds,
    )?;
    let start = OneWayCombinedParams::from_powers(&out.params, out.params[5]);
    let (q, rate) = combined_rate_via_engine_best_q(ch, &start);
    let params = OneWayCombinedParams { q, ..start };
    Ok(if rate >= out.value {
        CombinedOptimum { params, rate }
    } else {
        CombinedOptimum {
            params: start,
            rate: out.value,
        }
    })
}

/// `max_{ρ∈[0,1]} min{C((g² + g1²)(1−ρ²)P), C(g²P + g2²P + 2ρ g g2 P)}`.
pub fn oneway_cutset_bound(ch: &OneWayChannel) -> f64 {
    cutset_at(ch, cutset_rho(ch))
}

fn cutset_at(ch: &OneWayChannel, rho: f64) -> f64 {
    let OneWayChannel { g, g1, g2, p } = *ch;
    let broadcast = capacity((g * g + g1 * g1) * (1.0 - rho * rho) * p);
    let mac = capacity(g * g * p + g2 * g2 * p + 2.0 * rho * g * g2 * p);
    broadcast.min(mac)
}

/// The broadcast term decreases in `ρ`; when the MAC term increases the
/// optimum is where they cross.
fn cutset_rho(ch: &OneWayChannel) -> f64 {
    let OneWayChannel { g, g1, g2, .. } = *ch;
    let a = g * g + g1 * g1;
    let b = 2.0 * g * g2;
    let c = g2 * g2 - g1 * g1;
    if c >= 0.0 || b <= 0.0 {
        return 0.0;
    }
    let rho = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    rho.clamp(0.0, 1.0)
}

/// Maximizes `f` over `Q ∈ [Q_MIN, Q_MAX] ∪ {∞}`: a log-spaced scan, then
/// golden-section refinement in `log10 Q` around the best scan point.
pub fn maximize_over_q<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    let (lo, hi) = (Q_MIN.log10(), Q_MAX.log10());
    let n = ((hi - lo) as usize) * Q_GRID_PER_DECADE + 1;
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid_best = (lo, f64::NEG_INFINITY);
    for k in 0..n {
        let t = lo + k as f64 * step;
        let v = f(10f64.powf(t));
        if v > grid_best.1 {
            grid_best = (t, v);
        }
    }
    let (t, v) = search::golden_section_max(
        |t| f(10f64.powf(t)),
        (grid_best.0 - step).max(lo),
        (grid_best.0 + step).min(hi),
        1e-9,
    );
    let finite = if v > grid_best.1 { (t, v) } else { grid_best };
    let disabled = f(f64::INFINITY);
    if disabled >= finite.1 {
        (f64::INFINITY, disabled)
    } else {
        (10f64.powf(finite.0), finite.1)
    }
}
