use crate::mi_engine::{GaussianSystem, VarId};
use crate::rate_region::{Constraint, RatePolytope};
use crate::{ParamError, TwoWayChannel};

use super::signaling::{signaling, Roles};
use super::TwrcParams;

/// Largest rate any single user may be assigned; sum constraints scale it
/// by their coefficients.
pub const RATE_CAP: f64 = 30.0;

/// Which destination decodes both compression layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerAssignment {
    User1Refined,
    User2Refined,
}

impl LayerAssignment {
    pub const BOTH: [LayerAssignment; 2] =
        [LayerAssignment::User1Refined, LayerAssignment::User2Refined];
}

/// The nineteen mutual-information terms `I1..I19`, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSet {
    pub values: [f64; 19],
}

impl ConstraintSet {
    pub fn new(values: [f64; 19]) -> Self {
        Self { values }
    }

    /// `I_j` for `j` in `1..=19`.
    pub fn i(&self, j: usize) -> f64 {
        self.values[j - 1]
    }
}

/// The constraint set with user 1 refined.
pub fn constraint_set(ch: &TwoWayChannel, prm: &TwrcParams) -> Result<ConstraintSet, ParamError> {
    constraint_set_for(ch, prm, LayerAssignment::User1Refined)
}

/// The constraint set for `layers`. With user 2 refined every user index
/// is exchanged, so the result is expressed in swapped coordinates; pass it
/// to [`region_for_params`] with the same assignment.
pub fn constraint_set_for(
    ch: &TwoWayChannel,
    prm: &TwrcParams,
    layers: LayerAssignment,
) -> Result<ConstraintSet, ParamError> {
    prm.validate(ch.p)?;
    let sig = signaling(ch, prm);
    let roles = match layers {
        LayerAssignment::User1Refined => sig.roles,
        LayerAssignment::User2Refined => sig.roles.swapped(),
    };
    Ok(evaluate(&sig.system, &roles))
}

/// Both orientations from one signaling system, without validation.
pub(crate) fn both_sets(ch: &TwoWayChannel, prm: &TwrcParams) -> [ConstraintSet; 2] {
    let sig = signaling(ch, prm);
    [
        evaluate(&sig.system, &sig.roles),
        evaluate(&sig.system, &sig.roles.swapped()),
    ]
}

fn evaluate(sys: &GaussianSystem, r: &Roles) -> ConstraintSet {
    let (w1, u1, v1, x1) = (r.w1, r.u1, r.v1, r.x1);
    let (w2, u2, v2, x2) = (r.w2, r.u2, r.v2, r.x2);
    let (vr, ur, xr) = (r.vr, r.ur, r.xr);
    let (y1, y2, yr) = (r.y1, r.y2, r.yr);
    let yh: Vec<VarId> = r.y_hat.into_iter().collect();
    let yt: Vec<VarId> = r.y_tilde.into_iter().collect();

    let cmi = |a: &[VarId], b: &[VarId], c: &[VarId]| sys.cmi_ids(a, b, c);
    let cat = |parts: &[&[VarId]]| parts.concat();
    let layers = [w1, u1, v1, w2, u2, v2, vr];

    let i1 = cmi(&yt, &[xr, yr], &[ur, vr, u1, v1, u2, v2, w1, w2]);
    let i2 = i1
        + cmi(
            &yh,
            &[yr],
            &cat(&[&yt, &[xr, ur, vr, u1, v1, u2, v2, w1, w2]]),
        );
    let i3 = cmi(&[v1], &[yr], &[vr, w1, u1, w2, u2, v2]);
    let i4 = cmi(&[v2], &[yr], &[vr, w2, u2, w1, u1, v1]);
    let i5 = cmi(&[u1, v1], &[yr], &[vr, w1, w2, u2, v2]);
    let i6 = cmi(&[u2, v2], &[yr], &[vr, w2, w1, u1, v1]);
    let i7 = cmi(&[v1, v2], &[yr], &[vr, w1, u1, w2, u2]);
    let i8 = cmi(&[u1, v1, v2], &[yr], &[vr, w1, w2, u2]);
    let i9 = cmi(&[u2, v1, v2], &[yr], &[vr, w1, w2, u1]);
    let i10 = cmi(&[u1, v1, u2, v2], &[yr], &[vr, w1, w2]);
    let i11 =
        cmi(&[v1], &[y2], &[vr, w1, u1, w2, u2, v2, x2]) + cmi(&[vr], &[y2], &[w1, w2, u2, v2, x2]);
    let i12 = cmi(&[w1, u1, v1, vr], &[y2], &[w2, u2, v2, x2]);
    let i13 =
        cmi(&[v2], &[y1], &[vr, w2, u2, w1, u1, v1, x1]) + cmi(&[vr], &[y1], &[w2, w1, u1, v1, x1]);
    let i14 = cmi(&[w2, u2, v2, vr], &[y1], &[w1, u1, v1, x1]);
    let i15 = cmi(&[x1, ur], &[y2], &cat(&[&[x2], &layers]))
        + cmi(&yt, &[x1, x2, y2], &cat(&[&[ur], &layers]));
    let i16 = cmi(&[x1], &cat(&[&yt, &[y2]]), &cat(&[&[x2, ur], &layers]));
    let shared = cmi(&yh, &[x1, x2, y1], &cat(&[&yt, &[xr, ur], &layers]));
    let i17 = cmi(&[x2, xr], &[y1], &cat(&[&[x1], &layers]))
        + shared
        + cmi(&yt, &[x1, x2, xr, y2], &cat(&[&[ur], &layers]));
    let i18 = cmi(&[x2, xr], &cat(&[&[y1], &yt]), &cat(&[&[x1, ur], &layers])) + shared;
    let i19 = cmi(
        &[x2],
        &cat(&[&yt, &yh, &[y1]]),
        &cat(&[&[x1, ur, xr], &layers]),
    );

    ConstraintSet::new([
        i1, i2, i3, i4, i5, i6, i7, i8, i9, i10, i11, i12, i13, i14, i15, i16, i17, i18, i19,
    ])
}

/// Positive part; an undefined difference (`∞ − ∞`) counts as zero.
fn pos(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.max(0.0)
    }
}

/// The four rate bounds and the sum bounds of the region, in the
/// orientation of `cs`:
///
/// ```text
/// R1       ≤ min{I5, I12} + min{I5 − I1, I16}
/// R2       ≤ min{I6, I14} + min{I17 − I2, I19}
/// R1 + R2  ≤ min{ min{I5,I12} + I15 + I18 − I2 + min{I6,I14},
///                 I10 + I15 + I18 − I2,
///                 I10 + min{I15 − I1, I16} + min{I17 − I2, I19} }
/// 2R1 + R2 ≤ min{I5,I12} + I15 + I18 − I2 + I10 + min{I15 − I1, I16}
/// ```
///
/// Every min argument and every bound is clamped at zero.
///
/// The `I5 − I1` term of the first bound never charges the relay-to-user
/// link, so on channels where that link is weak the bound can exceed the
/// cut-set bound; the sum bounds use `I15 − I1` in the same place.
pub fn region_bounds(cs: &ConstraintSet) -> [Constraint; 4] {
    let i = |j: usize| cs.i(j);
    let m5_12 = pos(i(5)).min(pos(i(12)));
    let m6_14 = pos(i(6)).min(pos(i(14)));
    let tail1 = pos(i(5) - i(1)).min(pos(i(16)));
    let tail2 = pos(i(17) - i(2)).min(pos(i(19)));
    let cross = pos(i(15) - i(1)).min(pos(i(16)));
    let relay_sum = i(15) + i(18) - i(2);

    let r1 = pos(m5_12 + tail1);
    let r2 = pos(m6_14 + tail2);
    let sum = pos(m5_12 + relay_sum + m6_14)
        .min(pos(i(10) + relay_sum))
        .min(pos(i(10) + cross + tail2));
    let weighted = pos(m5_12 + relay_sum + i(10) + cross);

    [
        Constraint::new(1.0, 0.0, r1.min(RATE_CAP)),
        Constraint::new(0.0, 1.0, r2.min(RATE_CAP)),
        Constraint::new(1.0, 1.0, sum.min(2.0 * RATE_CAP)),
        Constraint::new(2.0, 1.0, weighted.min(3.0 * RATE_CAP)),
    ]
}

/// The rate polytope of one parameter point. For `User2Refined`, `cs` is
/// the swapped-role set and the resulting polytope is mirrored back.
pub fn region_for_params(cs: &ConstraintSet, layers: LayerAssignment) -> RatePolytope {
    let bounds = region_bounds(cs);
    let bounds = match layers {
        LayerAssignment::User1Refined => bounds.to_vec(),
        LayerAssignment::User2Refined => bounds
            .iter()
            .map(|k| Constraint::new(k.b, k.a, k.c))
            .collect(),
    };
    RatePolytope::new(bounds)
}

/// Both polytopes of a parameter point.
pub fn polytopes(ch: &TwoWayChannel, prm: &TwrcParams) -> [RatePolytope; 2] {
    let [a, b] = both_sets(ch, prm);
    [
        region_for_params(&a, LayerAssignment::User1Refined),
        region_for_params(&b, LayerAssignment::User2Refined),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity;
    use crate::rate_region::polytope_vertices;

    fn generic() -> TwrcParams {
        TwrcParams {
            alpha1: 0.5,
            beta1: 0.6,
            gamma1: 0.7,
            delta1: 0.8,
            alpha2: 0.4,
            beta2: 0.3,
            gamma2: 0.2,
            delta2: 1.1,
            alpha31: 0.3,
            alpha32: 0.6,
            beta3: 0.2,
            gamma3: 0.5,
            delta3: 0.9,
            q_hat: 0.7,
            q_tilde: 1.9,
        }
    }

    #[test]
    fn all_terms_finite_and_nonnegative() {
        let cs = constraint_set(&TwoWayChannel::region_example(), &generic()).unwrap();
        for (j, v) in cs.values.iter().enumerate() {
            assert!(v.is_finite() && *v >= 0.0, "I{} = {v}", j + 1);
        }
        assert!(cs.i(2) >= cs.i(1));
    }

    #[test]
    fn useless_compression_carries_nothing() {
        let prm = TwrcParams {
            q_hat: 1e12,
            q_tilde: 1e12,
            ..generic()
        };
        let cs = constraint_set(&TwoWayChannel::region_example(), &prm).unwrap();
        assert!(cs.i(2) < 1e-6);
    }

    #[test]
    fn disabled_layers_match_the_limit() {
        let ch = TwoWayChannel::region_example();
        let off = constraint_set(
            &ch,
            &TwrcParams {
                q_hat: f64::INFINITY,
                ..generic()
            },
        )
        .unwrap();
        let far = constraint_set(
            &ch,
            &TwrcParams {
                q_hat: 1e14,
                q_tilde: 1e14,
                ..generic()
            },
        )
        .unwrap();
        for j in 1..=19 {
            assert!((off.i(j) - far.i(j)).abs() < 1e-6, "I{j}");
        }
    }

    #[test]
    fn relay_decoding_terms_swap_with_users() {
        let ch = TwoWayChannel::new(1.0, 2.0, 1.0, 2.0, 2.0, 2.0, 3.0).unwrap();
        let prm = TwrcParams {
            alpha2: 0.5,
            beta2: 0.6,
            gamma2: 0.7,
            delta2: 0.8,
            alpha32: 0.3,
            ..generic()
        };
        let cs = constraint_set(&ch, &prm).unwrap();
        for (a, b) in [(3, 4), (5, 6), (8, 9), (11, 13), (12, 14)] {
            assert!((cs.i(a) - cs.i(b)).abs() < 1e-12, "I{a} vs I{b}");
        }
    }

    #[test]
    fn swapped_roles_equal_swapped_channel() {
        let ch = TwoWayChannel::region_example();
        let prm = generic();
        let a = constraint_set_for(&ch, &prm, LayerAssignment::User2Refined).unwrap();
        let b = constraint_set(&ch.swapped(), &prm.swapped()).unwrap();
        for j in 1..=19 {
            assert!((a.i(j) - b.i(j)).abs() < 1e-10, "I{j}");
        }
    }

    #[test]
    fn private_streams_only_give_direct_and_compression_rates() {
        // With only private streams and the relay silent, user 2 decodes
        // X1 from Y2 alone.
        let ch = TwoWayChannel::new(1.0, 2.0, 0.7, 3.0, 4.0, 5.0, 2.0).unwrap();
        let s = 2f64.sqrt();
        let prm = TwrcParams {
            delta1: s,
            delta2: s,
            ..TwrcParams::SILENT
        };
        let cs = constraint_set(&ch, &prm).unwrap();
        assert!((cs.i(16) - capacity(0.49 * 2.0)).abs() < 1e-12);
        assert!((cs.i(19) - capacity(2.0)).abs() < 1e-12);
        assert_eq!(cs.i(5), 0.0);
        let v = polytope_vertices(&region_for_params(&cs, LayerAssignment::User1Refined));
        assert!(v
            .iter()
            .all(|&(x, y)| x <= 1e-12 && y <= capacity(2.0) + 1e-12));
    }

    #[test]
    fn region_from_hand_set() {
        let mut values = [0.0; 19];
        let mut set = |j: usize, v: f64| values[j - 1] = v;
        set(1, 1.0);
        set(2, 1.0);
        set(5, 2.0);
        set(12, 2.0);
        set(16, 0.5);
        set(6, 1.5);
        set(14, 1.0);
        set(17, 2.0);
        set(19, 0.5);
        set(10, 2.0);
        set(15, 1.5);
        set(18, 1.0);
        let cs = ConstraintSet::new(values);
        let b = region_bounds(&cs);
        // R1 ≤ 2 + min(1, 0.5), R2 ≤ 1 + min(1, 0.5),
        // sum ≤ min(2 + 1.5 + 1, 2 + 1.5, 2 + 0.5 + 0.5), 2R1+R2 ≤ 2 + 1.5 + 2 + 0.5.
        let c: Vec<f64> = b.iter().map(|k| k.c).collect();
        assert_eq!(c, vec![2.5, 1.5, 3.0, 6.0]);
        let v = polytope_vertices(&region_for_params(&cs, LayerAssignment::User1Refined));
        assert_eq!(
            v,
            vec![(0.0, 0.0), (2.5, 0.0), (2.5, 0.5), (1.5, 1.5), (0.0, 1.5)]
        );
        let m = polytope_vertices(&region_for_params(&cs, LayerAssignment::User2Refined));
        assert_eq!(
            m,
            vec![(0.0, 0.0), (1.5, 0.0), (1.5, 1.5), (0.5, 2.5), (0.0, 2.5)]
        );
    }

    #[test]
    fn infinite_terms_hit_the_cap() {
        let mut values = [f64::INFINITY; 19];
        values[0] = 0.0;
        values[1] = 0.0;
        let b = region_bounds(&ConstraintSet::new(values));
        assert_eq!(b[0].c, RATE_CAP);
        assert_eq!(b[1].c, RATE_CAP);
        let zero = region_bounds(&ConstraintSet::new([0.0; 19]));
        assert!(zero.iter().all(|k| k.c == 0.0));
        let v = polytope_vertices(&region_for_params(
            &ConstraintSet::new([0.0; 19]),
            LayerAssignment::User1Refined,
        ));
        assert_eq!(v, vec![(0.0, 0.0)]);
    }
}
