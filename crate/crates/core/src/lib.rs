//! Achievable rates of decode-forward, noisy network coding and their
//! combinations on Gaussian one-way and two-way relay channels.
//!
//! Every rate is evaluated from first principles: the coding scheme's
//! signaling is written as a [`mi_engine::GaussianSystem`] and each
//! mutual-information term is computed exactly from it. Power allocations
//! and compression noise levels are then optimized with the deterministic
//! searches in [`search`].
//!
//! Rates are in bits per channel use.

pub mod channel;
pub mod cli;
pub mod mi_engine;
pub mod oneway;
pub mod rate_region;
pub mod search;
pub mod twrc;

pub use channel::{LineGeometry, OneWayChannel, TwoWayChannel};
pub use mi_engine::{GaussianSystem, MiError};
pub use rate_region::{RatePolytope, RateRegion};
pub use search::SearchBudget;

/// Invalid power allocation or compression parameters.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("{node} power {used} exceeds the budget {budget}")]
    Power {
        node: &'static str,
        used: f64,
        budget: f64,
    },
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("compression noise variance `{0}` must be positive")]
    Compression(&'static str),
}

/// Relative slack allowed on power constraints.
pub(crate) const POWER_SLACK: f64 = 1e-9;

pub(crate) fn check_power(
    node: &'static str,
    coeffs: &[(&'static str, f64)],
    budget: f64,
) -> Result<(), ParamError> {
    for &(name, c) in coeffs {
        if !c.is_finite() {
            return Err(ParamError::NonFinite(name));
        }
    }
    let used: f64 = coeffs.iter().map(|(_, c)| c * c).sum();
    if used > budget * (1.0 + POWER_SLACK) {
        return Err(ParamError::Power { node, used, budget });
    }
    Ok(())
}

pub(crate) fn check_compression(name: &'static str, q: f64) -> Result<(), ParamError> {
    if q > 0.0 {
        Ok(())
    } else {
        Err(ParamError::Compression(name))
    }
}

/// Gaussian capacity function `C(x) = ½ log₂(1 + x)`.
pub fn capacity(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    #[test]
    fn capacity_values() {
        assert_eq!(super::capacity(0.0), 0.0);
        assert!((super::capacity(3.0) - 1.0).abs() < 1e-15);
        assert!((super::capacity(80.0) - 0.5 * 81f64.log2()).abs() < 1e-14);
    }
}
