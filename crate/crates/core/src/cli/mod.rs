//! Experiment drivers behind the `relay-rates` binary.

mod config;
mod output;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{oneway_from_geometry, twrc_from_geometry, LineGeometry};
use crate::oneway;
use crate::search::SearchError;
use crate::twrc::{self, Scheme};
use crate::TwoWayChannel;

pub use config::{Experiment, ExperimentConfig};
pub use output::{format_number, Cell, Table};

pub const ONEWAY_HEADER: [&str; 5] = ["d", "df", "nnc", "combined", "cutset"];
pub const TWRC_SUM_HEADER: [&str; 5] = ["d", "rankov_df", "xie_df", "lnnc", "combined"];
pub const TWRC_REGION_HEADER: [&str; 4] = ["scheme", "vertex_index", "r1", "r2"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Runs the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::OnewaySweep => run_oneway_sweep(cfg),
        Experiment::TwrcSumSweep => run_twrc_sum_sweep(cfg),
        Experiment::TwrcRegion => run_twrc_region(cfg),
    }
}

/// One row per relay position: optimized DF, NNC and combined rates and
/// the cut-set bound.
pub fn run_oneway_sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let (p, budget) = (cfg.power(), cfg.budget());
    let rows = cfg
        .positions()
        .par_iter()
        .map(|&d| {
            let geom = LineGeometry::new(d, cfg.gamma).map_err(config_err)?;
            let ch = oneway_from_geometry(geom, p).map_err(config_err)?;
            let combined = oneway::optimize_combined(&ch, &budget)?;
            Ok(vec![
                Cell::Num(d),
                Cell::Num(oneway::optimize_df(&ch).rate),
                Cell::Num(oneway::optimize_nnc(&ch).rate),
                Cell::Num(combined.rate),
                Cell::Num(oneway::oneway_cutset_bound(&ch)),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        header: ONEWAY_HEADER.to_vec(),
        rows,
    })
}

/// One row per relay position: sum rates of the four two-way schemes.
pub fn run_twrc_sum_sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let (p, budget) = (cfg.power(), cfg.budget());
    let rows = cfg
        .positions()
        .par_iter()
        .map(|&d| {
            let geom = LineGeometry::new(d, cfg.gamma).map_err(config_err)?;
            let ch = twrc_from_geometry(geom, p).map_err(config_err)?;
            let rates = twrc::sum_rates(&ch, &budget)?;
            let mut row = vec![Cell::Num(d)];
            for s in [
                Scheme::RankovDf,
                Scheme::XieDf,
                Scheme::Lnnc,
                Scheme::Combined,
            ] {
                let k = Scheme::ALL.iter().position(|&t| t == s).expect("listed");
                row.push(Cell::Num(rates[k]));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        header: TWRC_SUM_HEADER.to_vec(),
        rows,
    })
}

/// Hull vertices of the four schemes on the configured channel.
pub fn run_twrc_region(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let ch = TwoWayChannel {
        p: cfg.power(),
        ..cfg.gains
    };
    let weights = twrc::boundary_weights(cfg.weights);
    let regions = twrc::scheme_regions(&ch, &cfg.budget(), &weights)?;
    let mut table = Table::new(&TWRC_REGION_HEADER);
    for s in Scheme::ALL {
        for (k, &(r1, r2)) in regions.get(s).vertices.iter().enumerate() {
            table.rows.push(vec![
                Cell::Text(s.name()),
                Cell::Int(k),
                Cell::Num(r1),
                Cell::Num(r2),
            ]);
        }
    }
    Ok(table)
}
