//! Gaussian relay channel models with unit-variance noise at every receiver.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("power budget must be positive and finite, got {0}")]
    Power(f64),
    #[error("channel gain `{0}` is not finite")]
    Gain(&'static str),
    #[error("relay position must lie in (0, 1), got {0}")]
    Position(f64),
    #[error("path-loss exponent must be non-negative and finite, got {0}")]
    Exponent(f64),
}

/// `Y = g X + g2 Xr + Z`, `Yr = g1 X + Zr`; every node transmits with power `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneWayChannel {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    pub p: f64,
}

impl OneWayChannel {
    pub fn new(g: f64, g1: f64, g2: f64, p: f64) -> Result<Self, ChannelError> {
        let ch = Self { g, g1, g2, p };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        check_power(self.p)?;
        for (name, v) in [("g", self.g), ("g1", self.g1), ("g2", self.g2)] {
            if !v.is_finite() {
                return Err(ChannelError::Gain(name));
            }
        }
        Ok(())
    }
}

/// ```text
/// Y1 = g12 X2 + g1r Xr + Z1
/// Y2 = g21 X1 + g2r Xr + Z2
/// Yr = gr1 X1 + gr2 X2 + Zr
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayChannel {
    pub g12: f64,
    pub g1r: f64,
    pub g21: f64,
    pub g2r: f64,
    pub gr1: f64,
    pub gr2: f64,
    pub p: f64,
}

impl TwoWayChannel {
    pub fn new(
        g12: f64,
        g1r: f64,
        g21: f64,
        g2r: f64,
        gr1: f64,
        gr2: f64,
        p: f64,
    ) -> Result<Self, ChannelError> {
        let ch = Self {
            g12,
            g1r,
            g21,
            g2r,
            gr1,
            gr2,
            p,
        };
        ch.validate()?;
        Ok(ch)
    }

    /// The asymmetric channel used for the rate-region comparison:
    /// `P = 3`, `gr1 = 6`, `g1r = 2`, `gr2 = 2`, `g2r = 3`, `g12 = 1`, `g21 = 0.5`.
    pub fn region_example() -> Self {
        Self {
            g12: 1.0,
            g1r: 2.0,
            g21: 0.5,
            g2r: 3.0,
            gr1: 6.0,
            gr2: 2.0,
            p: 3.0,
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        check_power(self.p)?;
        let gains = [
            ("g12", self.g12),
            ("g1r", self.g1r),
            ("g21", self.g21),
            ("g2r", self.g2r),
            ("gr1", self.gr1),
            ("gr2", self.gr2),
        ];
        for (name, v) in gains {
            if !v.is_finite() {
                return Err(ChannelError::Gain(name));
            }
        }
        Ok(())
    }

    /// Exchanges the roles of the two users.
    pub fn swapped(&self) -> Self {
        Self {
            g12: self.g21,
            g1r: self.g2r,
            g21: self.g12,
            g2r: self.g1r,
            gr1: self.gr2,
            gr2: self.gr1,
            p: self.p,
        }
    }
}

fn check_power(p: f64) -> Result<(), ChannelError> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::Power(p))
    }
}

/// Nodes on a line: the relay sits at distance `d` from the first terminal and
/// `1 − d` from the second, with amplitude gain `distance^(−γ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGeometry {
    d: f64,
    rest: f64,
    gamma: f64,
}

impl LineGeometry {
    pub fn new(d: f64, gamma: f64) -> Result<Self, ChannelError> {
        if !(d > 0.0 && d < 1.0) {
            return Err(ChannelError::Position(d));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(ChannelError::Exponent(gamma));
        }
        Ok(Self {
            d,
            rest: 1.0 - d,
            gamma,
        })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Gain between the first terminal and the relay.
    pub fn near_gain(&self) -> f64 {
        self.d.powf(-self.gamma / 2.0)
    }

    /// Gain between the relay and the second terminal.
    pub fn far_gain(&self) -> f64 {
        self.rest.powf(-self.gamma / 2.0)
    }

    pub fn mirrored(&self) -> Self {
        Self {
            d: self.rest,
            rest: self.d,
            gamma: self.gamma,
        }
    }
}

/// Source–relay gain `g1 = d^(−γ/2)`, relay–destination gain
/// `g2 = (1−d)^(−γ/2)`, direct gain `g = 1`.
pub fn oneway_from_geometry(geom: LineGeometry, p: f64) -> Result<OneWayChannel, ChannelError> {
    OneWayChannel::new(1.0, geom.near_gain(), geom.far_gain(), p)
}

/// `gr1 = g1r = d^(−γ/2)`, `gr2 = g2r = (1−d)^(−γ/2)`, `g12 = g21 = 1`.
pub fn twrc_from_geometry(geom: LineGeometry, p: f64) -> Result<TwoWayChannel, ChannelError> {
    let near = geom.near_gain();
    let far = geom.far_gain();
    TwoWayChannel::new(1.0, near, 1.0, far, near, far, p)
}
