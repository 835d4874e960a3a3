use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::search::SearchBudget;
use crate::TwoWayChannel;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    OnewaySweep,
    TwrcSumSweep,
    TwrcRegion,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::OnewaySweep => "oneway-sweep",
            Experiment::TwrcSumSweep => "twrc-sum-sweep",
            Experiment::TwrcRegion => "twrc-region",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oneway-sweep" => Ok(Experiment::OnewaySweep),
            "twrc-sum-sweep" => Ok(Experiment::TwrcSumSweep),
            "twrc-region" => Ok(Experiment::TwrcRegion),
            other => Err(CliError::Config(format!("unknown experiment `{other}`"))),
        }
    }
}

/// Settings of one experiment run. Unset optional fields take the
/// experiment's defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub p: Option<f64>,
    pub gamma: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub d_steps: Option<usize>,
    /// Channel of the region experiment.
    pub gains: TwoWayChannel,
    pub coarse_steps: Option<usize>,
    pub refine_rounds: Option<usize>,
    pub refine_shrink: Option<f64>,
    pub tol: Option<f64>,
    /// Boundary directions traced for the region experiment.
    pub weights: usize,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            p: None,
            gamma: 3.0,
            d_min: 0.05,
            d_max: 0.95,
            d_steps: None,
            gains: TwoWayChannel::region_example(),
            coarse_steps: None,
            refine_rounds: None,
            refine_shrink: None,
            tol: None,
            weights: crate::twrc::DEFAULT_WEIGHTS,
            out: None,
        }
    }

    pub fn power(&self) -> f64 {
        self.p.unwrap_or(match self.experiment {
            Experiment::TwrcRegion => self.gains.p,
            _ => 10.0,
        })
    }

    pub fn steps(&self) -> usize {
        self.d_steps.unwrap_or(match self.experiment {
            Experiment::TwrcSumSweep => 11,
            _ => 21,
        })
    }

    pub fn budget(&self) -> SearchBudget {
        let base = match self.experiment {
            Experiment::OnewaySweep => SearchBudget::one_way(),
            _ => SearchBudget::two_way(),
        };
        SearchBudget {
            coarse_steps: self.coarse_steps.unwrap_or(base.coarse_steps),
            refine_rounds: self.refine_rounds.unwrap_or(base.refine_rounds),
            refine_shrink: self.refine_shrink.unwrap_or(base.refine_shrink),
            tol: self.tol.unwrap_or(base.tol),
        }
    }

    /// Relay positions of a sweep, evenly spaced and inclusive.
    pub fn positions(&self) -> Vec<f64> {
        let n = self.steps();
        (0..n)
            .map(|k| self.d_min + (self.d_max - self.d_min) * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let p = self.power();
        if !(p > 0.0 && p.is_finite()) {
            return bad(format!("power must be positive, got {p}"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!(
                "path-loss exponent must be non-negative, got {}",
                self.gamma
            ));
        }
        if self.experiment != Experiment::TwrcRegion {
            if !(0.0 < self.d_min && self.d_min < self.d_max && self.d_max < 1.0) {
                return bad(format!(
                    "need 0 < d_min < d_max < 1, got [{}, {}]",
                    self.d_min, self.d_max
                ));
            }
            if self.steps() < 2 {
                return bad(format!("d_steps must be at least 2, got {}", self.steps()));
            }
        } else {
            if self.weights == 0 {
                return bad("weights must be at least 1".into());
            }
            TwoWayChannel { p, ..self.gains }
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        self.budget()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", n + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// Sets one field by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("invalid value `{v}` for `{key}`"))
        }
        match key {
            "experiment" => self.experiment = value.parse().map_err(|e: CliError| e.to_string())?,
            "p" => self.p = Some(num(key, value)?),
            "gamma" => self.gamma = num(key, value)?,
            "d_min" => self.d_min = num(key, value)?,
            "d_max" => self.d_max = num(key, value)?,
            "d_steps" => self.d_steps = Some(num(key, value)?),
            "g12" => self.gains.g12 = num(key, value)?,
            "g1r" => self.gains.g1r = num(key, value)?,
            "g21" => self.gains.g21 = num(key, value)?,
            "g2r" => self.gains.g2r = num(key, value)?,
            "gr1" => self.gains.gr1 = num(key, value)?,
            "gr2" => self.gains.gr2 = num(key, value)?,
            "coarse_steps" => self.coarse_steps = Some(num(key, value)?),
            "refine_rounds" => self.refine_rounds = Some(num(key, value)?),
            "refine_shrink" => self.refine_shrink = Some(num(key, value)?),
            "tol" => self.tol = Some(num(key, value)?),
            "weights" => self.weights = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::new(Experiment::OnewaySweep);
        assert_eq!((c.power(), c.steps()), (10.0, 21));
        assert_eq!(c.budget(), SearchBudget::one_way());
        let c = ExperimentConfig::new(Experiment::TwrcSumSweep);
        assert_eq!(c.steps(), 11);
        assert_eq!(c.budget(), SearchBudget::two_way());
        assert_eq!(ExperimentConfig::new(Experiment::TwrcRegion).power(), 3.0);
        let d = ExperimentConfig::new(Experiment::OnewaySweep).positions();
        assert_eq!(d.len(), 21);
        assert!((d[10] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parses_text() {
        let mut c = ExperimentConfig::new(Experiment::OnewaySweep);
        c.apply_text(
            "# sweep\nexperiment = twrc-region\np = 4 # watts\n\ngr1=5\ncoarse_steps = 3\n",
        )
        .unwrap();
        assert_eq!(c.experiment, Experiment::TwrcRegion);
        assert_eq!(c.power(), 4.0);
        assert_eq!(c.gains.gr1, 5.0);
        assert_eq!(c.budget().coarse_steps, 3);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = ExperimentConfig::new(Experiment::OnewaySweep);
        assert!(c.apply_text("nonsense").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("p = ten").is_err());
        assert!(c.apply_text("experiment = fig4").is_err());
        c.d_min = 0.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(Experiment::OnewaySweep);
        c.d_steps = Some(1);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(Experiment::OnewaySweep);
        c.coarse_steps = Some(1);
        assert!(c.validate().is_err());
    }
}
