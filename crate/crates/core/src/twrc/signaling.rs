use crate::mi_engine::{GaussianSystem, VarId};
use crate::{ParamError, TwoWayChannel};

use super::TwrcParams;

/// Independent sources: `S1..S11`, the two compression noises, then the
/// receiver noises `Z1`, `Z2`, `Zr`.
pub const SOURCE_COUNT: usize = 16;
const Z_HAT: usize = 11;
const Z_TILDE: usize = 12;
const Z1: usize = 13;
const Z2: usize = 14;
const ZR: usize = 15;

/// Handles of every named variable; disabled compression layers are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roles {
    pub w1: VarId,
    pub u1: VarId,
    pub v1: VarId,
    pub x1: VarId,
    pub w2: VarId,
    pub u2: VarId,
    pub v2: VarId,
    pub x2: VarId,
    pub vr: VarId,
    pub ur: VarId,
    pub xr: VarId,
    pub y1: VarId,
    pub y2: VarId,
    pub yr: VarId,
    pub y_hat: Option<VarId>,
    pub y_tilde: Option<VarId>,
}

impl Roles {
    /// The same variables with users 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            w1: self.w2,
            u1: self.u2,
            v1: self.v2,
            x1: self.x2,
            w2: self.w1,
            u2: self.u1,
            v2: self.v1,
            x2: self.x1,
            y1: self.y2,
            y2: self.y1,
            ..*self
        }
    }
}

#[derive(Debug, Clone)]
pub struct Signaling {
    pub system: GaussianSystem,
    pub roles: Roles,
}

/// The Gaussian system of the combined scheme, with variables named
/// `W1 U1 V1 X1 W2 U2 V2 X2 Vr Ur Xr Y1 Y2 Yr Yhat Ytilde`.
pub fn build_signaling(ch: &TwoWayChannel, prm: &TwrcParams) -> Result<GaussianSystem, ParamError> {
    prm.validate(ch.p)?;
    Ok(signaling(ch, prm).system)
}

fn scaled(terms: &[(usize, f64)], g: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
    terms.iter().map(move |&(k, v)| (k, g * v))
}

pub(crate) fn signaling(ch: &TwoWayChannel, prm: &TwrcParams) -> Signaling {
    let mut sys = GaussianSystem::new(SOURCE_COUNT);
    let mut add = |name: &str, terms: &[(usize, f64)]| {
        let mut c = [0.0; SOURCE_COUNT];
        for &(k, v) in terms {
            c[k] += v;
        }
        sys.add_variable(name, &c).expect("fixed, distinct names")
    };

    let user = |base: usize, a: f64, b: f64, c: f64, d: f64| {
        [(base, a), (base + 1, b), (base + 2, c), (base + 3, d)]
    };
    let l1 = user(0, prm.alpha1, prm.beta1, prm.gamma1, prm.delta1);
    let l2 = user(4, prm.alpha2, prm.beta2, prm.gamma2, prm.delta2);
    let relay = [
        (0, prm.alpha31),
        (4, prm.alpha32),
        (9, prm.beta3),
        (8, prm.gamma3),
        (10, prm.delta3),
    ];

    let w1 = add("W1", &l1[..1]);
    let u1 = add("U1", &l1[..2]);
    let v1 = add("V1", &l1[..3]);
    let x1 = add("X1", &l1);
    let w2 = add("W2", &l2[..1]);
    let u2 = add("U2", &l2[..2]);
    let v2 = add("V2", &l2[..3]);
    let x2 = add("X2", &l2);
    let vr = add("Vr", &relay[..3]);
    let ur = add("Ur", &relay[..4]);
    let xr = add("Xr", &relay);

    let y1: Vec<_> = scaled(&l2, ch.g12)
        .chain(scaled(&relay, ch.g1r))
        .chain([(Z1, 1.0)])
        .collect();
    let y2: Vec<_> = scaled(&l1, ch.g21)
        .chain(scaled(&relay, ch.g2r))
        .chain([(Z2, 1.0)])
        .collect();
    let yr: Vec<_> = scaled(&l1, ch.gr1)
        .chain(scaled(&l2, ch.gr2))
        .chain([(ZR, 1.0)])
        .collect();
    let y1 = add("Y1", &y1);
    let y2 = add("Y2", &y2);
    let y_hat_terms: Vec<_> = yr
        .iter()
        .copied()
        .chain([(Z_HAT, prm.q_hat.sqrt())])
        .collect();
    let y_tilde_terms: Vec<_> = y_hat_terms
        .iter()
        .copied()
        .chain([(Z_TILDE, prm.q_tilde.sqrt())])
        .collect();
    let yr = add("Yr", &yr);

    let y_hat = prm.q_hat.is_finite().then(|| add("Yhat", &y_hat_terms));
    let y_tilde =
        (prm.q_hat.is_finite() && prm.q_tilde.is_finite()).then(|| add("Ytilde", &y_tilde_terms));

    Signaling {
        system: sys,
        roles: Roles {
            w1,
            u1,
            v1,
            x1,
            w2,
            u2,
            v2,
            x2,
            vr,
            ur,
            xr,
            y1,
            y2,
            yr,
            y_hat,
            y_tilde,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity;

    fn prm() -> TwrcParams {
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
    fn relay_variance_is_its_power() {
        let ch = TwoWayChannel::region_example();
        let sys = build_signaling(&ch, &prm()).unwrap();
        let want = 0.09 + 0.36 + 0.04 + 0.25 + 0.81;
        assert!((sys.variance("Xr").unwrap() - want).abs() < 1e-14);
        assert_eq!(sys.len(), 16);
    }

    #[test]
    fn layered_compression_noise() {
        let ch = TwoWayChannel::region_example();
        let p = prm();
        let sys = build_signaling(&ch, &p).unwrap();
        let yr = sys.coefficients(sys.id("Yr").unwrap()).to_vec();
        let yt = sys.coefficients(sys.id("Ytilde").unwrap()).to_vec();
        let diff: f64 = yr.iter().zip(&yt).map(|(a, b)| (b - a).powi(2)).sum();
        assert!((diff - (p.q_hat + p.q_tilde)).abs() < 1e-14);
    }

    #[test]
    fn direct_link_without_relay() {
        let ch = TwoWayChannel::new(1.0, 2.0, 0.7, 3.0, 4.0, 5.0, 2.0).unwrap();
        let p = TwrcParams {
            delta1: 2f64.sqrt(),
            ..TwrcParams::SILENT
        };
        let sys = build_signaling(&ch, &p).unwrap();
        let got = sys.mutual_info(&["X1"], &["Y2"]).unwrap();
        assert!((got - capacity(0.49 * 2.0)).abs() < 1e-12);
        assert!(!sys.contains("Yhat") && !sys.contains("Ytilde"));
    }

    #[test]
    fn nested_layers() {
        let ch = TwoWayChannel::region_example();
        let p = prm();
        let sys = build_signaling(&ch, &p).unwrap();
        let coeffs = |n: &str| sys.coefficients(sys.id(n).unwrap()).to_vec();
        let fresh = |outer: &str, inner: &str| -> Vec<(usize, f64)> {
            coeffs(outer)
                .iter()
                .zip(coeffs(inner))
                .enumerate()
                .filter(|(_, (a, b))| **a != *b)
                .map(|(k, (a, b))| (k, a - b))
                .collect()
        };
        assert_eq!(fresh("U1", "W1"), vec![(1, p.beta1)]);
        assert_eq!(fresh("X2", "V2"), vec![(7, p.delta2)]);
        assert_eq!(fresh("Ur", "Vr"), vec![(8, p.gamma3)]);
        assert_eq!(fresh("Xr", "Ur"), vec![(10, p.delta3)]);
    }

    #[test]
    fn invalid_power_is_rejected() {
        let ch = TwoWayChannel::region_example();
        let p = TwrcParams {
            delta3: 3.0,
            ..prm()
        };
        assert!(matches!(
            build_signaling(&ch, &p),
            Err(ParamError::Power { node: "relay", .. })
        ));
    }
}
