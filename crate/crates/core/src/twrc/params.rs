use crate::oneway::{Q_MAX, Q_MIN};
use crate::search::Dimension;
use crate::{check_compression, check_power, ParamError};

/// Power split and compression noise of the combined two-way scheme.
///
/// User `l` sends `X_l = α_l S + β_l S' + γ_l S'' + δ_l S'''` with one
/// fresh source per message layer; the relay sends
/// `Xr = α31 S1 + α32 S5 + γ3 S9 + β3 S10 + δ3 S11`. Infinite `q_hat`
/// disables both compression layers, infinite `q_tilde` the coarse one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwrcParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub delta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma2: f64,
    pub delta2: f64,
    pub alpha31: f64,
    pub alpha32: f64,
    pub beta3: f64,
    pub gamma3: f64,
    pub delta3: f64,
    pub q_hat: f64,
    pub q_tilde: f64,
}

impl TwrcParams {
    /// Every coefficient zero, compression disabled.
    pub const SILENT: Self = Self {
        alpha1: 0.0,
        beta1: 0.0,
        gamma1: 0.0,
        delta1: 0.0,
        alpha2: 0.0,
        beta2: 0.0,
        gamma2: 0.0,
        delta2: 0.0,
        alpha31: 0.0,
        alpha32: 0.0,
        beta3: 0.0,
        gamma3: 0.0,
        delta3: 0.0,
        q_hat: f64::INFINITY,
        q_tilde: f64::INFINITY,
    };

    pub fn validate(&self, p: f64) -> Result<(), ParamError> {
        check_power(
            "user 1",
            &[
                ("alpha1", self.alpha1),
                ("beta1", self.beta1),
                ("gamma1", self.gamma1),
                ("delta1", self.delta1),
            ],
            p,
        )?;
        check_power(
            "user 2",
            &[
                ("alpha2", self.alpha2),
                ("beta2", self.beta2),
                ("gamma2", self.gamma2),
                ("delta2", self.delta2),
            ],
            p,
        )?;
        check_power(
            "relay",
            &[
                ("alpha31", self.alpha31),
                ("alpha32", self.alpha32),
                ("beta3", self.beta3),
                ("gamma3", self.gamma3),
                ("delta3", self.delta3),
            ],
            p,
        )?;
        check_compression("q_hat", self.q_hat)?;
        check_compression("q_tilde", self.q_tilde)
    }

    /// Exchanges the roles of the two users.
    pub fn swapped(&self) -> Self {
        Self {
            alpha1: self.alpha2,
            beta1: self.beta2,
            gamma1: self.gamma2,
            delta1: self.delta2,
            alpha2: self.alpha1,
            beta2: self.beta1,
            gamma2: self.gamma1,
            delta2: self.delta1,
            alpha31: self.alpha32,
            alpha32: self.alpha31,
            ..*self
        }
    }

    /// Coordinates in the combined search domain; an infinite variance
    /// maps to the top of its range.
    pub fn combined_coordinates(&self) -> Vec<f64> {
        vec![
            self.alpha1,
            self.beta1,
            self.gamma1,
            self.delta1,
            self.alpha2,
            self.beta2,
            self.gamma2,
            self.delta2,
            self.alpha31,
            self.alpha32,
            self.beta3,
            self.gamma3,
            self.delta3,
            self.q_hat.min(Q_MAX),
            self.q_tilde.min(Q_MAX),
        ]
    }
}

/// The combined scheme and its three special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Full combined decode-forward / layered noisy network coding.
    Combined,
    /// Markov-superposition decode-forward: common layers only.
    RankovDf,
    /// Independent decode-forward with a binned relay index.
    XieDf,
    /// Layered noisy network coding: private streams and compression only.
    Lnnc,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Combined,
        Scheme::RankovDf,
        Scheme::XieDf,
        Scheme::Lnnc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Combined => "combined",
            Scheme::RankovDf => "rankov_df",
            Scheme::XieDf => "xie_df",
            Scheme::Lnnc => "lnnc",
        }
    }

    /// Search domain at power `p`; all power groups are searched on the
    /// sphere.
    pub fn domain(self, p: f64) -> Vec<Dimension> {
        let sphere = |size| Dimension::PowerSphere { size, budget: p };
        let log_q = Dimension::LogInterval {
            lo: Q_MIN,
            hi: Q_MAX,
        };
        match self {
            Scheme::Combined => vec![sphere(4), sphere(4), sphere(5), log_q, log_q],
            Scheme::RankovDf => vec![sphere(2), sphere(2), sphere(3)],
            Scheme::XieDf => vec![],
            Scheme::Lnnc => vec![sphere(2), log_q, log_q],
        }
    }

    /// Maps decoded search parameters to a full parameter set. Variances at
    /// the top of the search range mean "layer disabled".
    pub fn decode(self, p: f64, v: &[f64]) -> TwrcParams {
        let s = p.sqrt();
        match self {
            Scheme::Combined => TwrcParams {
                alpha1: v[0],
                beta1: v[1],
                gamma1: v[2],
                delta1: v[3],
                alpha2: v[4],
                beta2: v[5],
                gamma2: v[6],
                delta2: v[7],
                alpha31: v[8],
                alpha32: v[9],
                beta3: v[10],
                gamma3: v[11],
                delta3: v[12],
                q_hat: variance(v[13]),
                q_tilde: variance(v[14]),
            },
            Scheme::RankovDf => TwrcParams {
                alpha1: v[0],
                beta1: v[1],
                alpha2: v[2],
                beta2: v[3],
                alpha31: v[4],
                alpha32: v[5],
                beta3: v[6],
                ..TwrcParams::SILENT
            },
            Scheme::XieDf => TwrcParams {
                gamma1: s,
                gamma2: s,
                beta3: s,
                ..TwrcParams::SILENT
            },
            Scheme::Lnnc => TwrcParams {
                delta1: s,
                delta2: s,
                gamma3: v[0],
                delta3: v[1],
                q_hat: variance(v[2]),
                q_tilde: variance(v[3]),
                ..TwrcParams::SILENT
            },
        }
    }
}

/// Log-range value with the top of the range read as `∞`.
pub(crate) fn variance(q: f64) -> f64 {
    if q >= Q_MAX * (1.0 - 1e-12) {
        f64::INFINITY
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_is_an_involution() {
        let prm = TwrcParams {
            alpha1: 0.1,
            beta1: 0.2,
            gamma1: 0.3,
            delta1: 0.4,
            alpha2: 0.5,
            beta2: 0.6,
            gamma2: 0.7,
            delta2: 0.8,
            alpha31: 0.9,
            alpha32: 1.0,
            beta3: 1.1,
            gamma3: 1.2,
            delta3: 1.3,
            q_hat: 2.0,
            q_tilde: 3.0,
        };
        assert_eq!(prm.swapped().swapped(), prm);
        assert_eq!(prm.swapped().alpha31, 1.0);
        prm.validate(7.0).unwrap();
        assert!(prm.validate(5.0).is_err());
    }

    #[test]
    fn special_cases_use_full_power() {
        let p = 3.0;
        for scheme in Scheme::ALL {
            let space = crate::search::Space::new(&scheme.domain(p));
            let v = match space {
                Ok(space) => space.decode(&vec![0.37; space.coords()]),
                Err(_) => vec![],
            };
            let prm = scheme.decode(p, &v);
            prm.validate(p).unwrap();
            let user1 =
                prm.alpha1.powi(2) + prm.beta1.powi(2) + prm.gamma1.powi(2) + prm.delta1.powi(2);
            assert!((user1 - p).abs() < 1e-9, "{scheme:?}");
        }
    }

    #[test]
    fn top_of_range_disables_compression() {
        assert!(variance(Q_MAX).is_infinite());
        assert_eq!(variance(10.0), 10.0);
        let v = TwrcParams::SILENT.combined_coordinates();
        let prm = Scheme::Combined.decode(1.0, &v);
        assert_eq!(prm, TwrcParams::SILENT);
    }
}
