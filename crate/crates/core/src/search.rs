//! Deterministic derivative-free maximisation over boxes, log-scaled
//! intervals and power spheres.
//!
//! Every dimension is mapped to internal coordinates in `[0, 1]`. A power
//! sphere of `k` non-negative coefficients with `Σ cᵢ² = P` uses `k − 1`
//! spherical angles, so the power constraint holds with equality by
//! construction.
//!
//! The search runs a coarse grid followed by coordinate-wise pattern
//! refinement. When the full tensor grid is too large it is replaced by block
//! coordinate ascent: each power sphere is one block, all scalar dimensions
//! together form another, and each block is scanned on its own full grid with
//! the remaining coordinates held at the incumbent.
//!
//! Grid points are evaluated in parallel; the argmax is reduced sequentially
//! in grid order with ties going to the lexicographically smallest internal
//! coordinate vector, so results do not depend on thread scheduling.

use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

/// Largest tensor grid evaluated in one piece.
pub const FULL_GRID_LIMIT: usize = 20_000;
/// Upper bound on block-coordinate sweeps during the coarse stage.
pub const MAX_BLOCK_CYCLES: usize = 3;
/// Largest group of adjacent scalar dimensions scanned jointly in block mode.
pub const MAX_SCALAR_BLOCK: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("search domain is empty")]
    EmptyDomain,
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
    #[error("seed has {got} parameters, domain expects {expected}")]
    SeedLength { got: usize, expected: usize },
    #[error("objective was not finite at any evaluated point")]
    NoFiniteValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    /// Grid points per internal coordinate (also the pattern size per
    /// coordinate during refinement).
    pub coarse_steps: usize,
    pub refine_rounds: usize,
    /// Window contraction factor per refinement round, in (0, 1).
    pub refine_shrink: f64,
    /// Block-coordinate sweeps stop once a sweep gains less than this.
    pub tol: f64,
}

impl SearchBudget {
    /// Budget for the low-dimensional one-way searches.
    pub const fn one_way() -> Self {
        Self {
            coarse_steps: 9,
            refine_rounds: 4,
            refine_shrink: 0.35,
            tol: 1e-3,
        }
    }

    /// Coarser grid with more refinement for the 12-angle two-way search.
    pub const fn two_way() -> Self {
        Self {
            coarse_steps: 5,
            refine_rounds: 6,
            refine_shrink: 0.35,
            tol: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.coarse_steps < 2 {
            return Err(SearchError::InvalidBudget(
                "coarse_steps must be at least 2".into(),
            ));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(SearchError::InvalidBudget(
                "refine_shrink must lie in (0, 1)".into(),
            ));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(SearchError::InvalidBudget("tol must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::one_way()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dimension {
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Searched uniformly in `log10`.
    LogInterval {
        lo: f64,
        hi: f64,
    },
    /// `size` non-negative coefficients whose squares sum to `budget`.
    PowerSphere {
        size: usize,
        budget: f64,
    },
}

impl Dimension {
    fn params(&self) -> usize {
        match *self {
            Dimension::PowerSphere { size, .. } => size,
            _ => 1,
        }
    }

    fn coords(&self) -> usize {
        match *self {
            Dimension::PowerSphere { size, .. } => size.saturating_sub(1),
            _ => 1,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidDimension(m));
        match *self {
            Dimension::Interval { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo <= hi) => {
                bad(format!("interval [{lo}, {hi}]"))
            }
            Dimension::LogInterval { lo, hi } if !(lo > 0.0 && hi.is_finite() && lo <= hi) => {
                bad(format!("log interval [{lo}, {hi}]"))
            }
            Dimension::PowerSphere { size, budget }
                if size == 0 || !(budget >= 0.0 && budget.is_finite()) =>
            {
                bad(format!("power sphere of size {size} with budget {budget}"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Best parameters, decoded (sphere groups expanded to coefficients).
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Incumbent value after the coarse stage and after every refinement round.
    pub history: Vec<f64>,
}

/// Maps between internal unit-cube coordinates and decoded parameters.
#[derive(Debug, Clone)]
pub struct Space {
    dims: Vec<Dimension>,
}

impl Space {
    pub fn new(dims: &[Dimension]) -> Result<Self, SearchError> {
        if dims.is_empty() {
            return Err(SearchError::EmptyDomain);
        }
        for d in dims {
            d.validate()?;
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    pub fn coords(&self) -> usize {
        self.dims.iter().map(Dimension::coords).sum()
    }

    pub fn params(&self) -> usize {
        self.dims.iter().map(Dimension::params).sum()
    }

    pub fn decode(&self, u: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.params());
        let mut k = 0;
        for dim in &self.dims {
            match *dim {
                Dimension::Interval { lo, hi } => {
                    out.push(lo + u[k] * (hi - lo));
                    k += 1;
                }
                Dimension::LogInterval { lo, hi } => {
                    let (a, b) = (lo.log10(), hi.log10());
                    out.push(10f64.powf(a + u[k] * (b - a)));
                    k += 1;
                }
                Dimension::PowerSphere { size, budget } => {
                    let mut radius = budget.sqrt();
                    for j in 0..size - 1 {
                        let (s, c) = angle(u[k + j]);
                        out.push(radius * c);
                        radius *= s;
                    }
                    out.push(radius);
                    k += size - 1;
                }
            }
        }
        out
    }

    /// Inverse of [`decode`](Self::decode). Sphere coefficients are assumed
    /// non-negative; their scale is ignored.
    pub fn encode(&self, params: &[f64]) -> Result<Vec<f64>, SearchError> {
        if params.len() != self.params() {
            return Err(SearchError::SeedLength {
                got: params.len(),
                expected: self.params(),
            });
        }
        let mut u = Vec::with_capacity(self.coords());
        let mut k = 0;
        for dim in &self.dims {
            match *dim {
                Dimension::Interval { lo, hi } => {
                    let t = if hi > lo {
                        (params[k] - lo) / (hi - lo)
                    } else {
                        0.0
                    };
                    u.push(t.clamp(0.0, 1.0));
                    k += 1;
                }
                Dimension::LogInterval { lo, hi } => {
                    let (a, b) = (lo.log10(), hi.log10());
                    let t = if b > a {
                        (params[k].log10() - a) / (b - a)
                    } else {
                        0.0
                    };
                    u.push(if t.is_nan() { 1.0 } else { t.clamp(0.0, 1.0) });
                    k += 1;
                }
                Dimension::PowerSphere { size, .. } => {
                    let c: Vec<f64> = params[k..k + size].iter().map(|x| x.abs()).collect();
                    for j in 0..size - 1 {
                        let tail = c[j + 1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                        u.push(tail.atan2(c[j]) / FRAC_PI_2);
                    }
                    k += size;
                }
            }
        }
        Ok(u)
    }

    /// Internal coordinate ranges scanned together in block mode.
    fn blocks(&self) -> Vec<Range<usize>> {
        let mut blocks = Vec::new();
        let mut scalars = Vec::new();
        let mut k = 0;
        for dim in &self.dims {
            let n = dim.coords();
            match dim {
                Dimension::PowerSphere { .. } if n > 0 => blocks.push(k..k + n),
                Dimension::PowerSphere { .. } => {}
                _ => scalars.push(k),
            }
            k += n;
        }
        // Adjacent scalar dimensions are scanned jointly, at most
        // MAX_SCALAR_BLOCK at a time.
        let mut run: Option<Range<usize>> = None;
        for s in scalars {
            run = match run {
                Some(r) if r.end == s && r.len() < MAX_SCALAR_BLOCK => Some(r.start..s + 1),
                Some(r) => {
                    blocks.push(r);
                    Some(s..s + 1)
                }
                None => Some(s..s + 1),
            };
        }
        if let Some(r) = run {
            blocks.push(r);
        }
        blocks.sort_by_key(|r| r.start);
        blocks
    }
}

fn angle(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 1.0)
    } else if u >= 1.0 {
        (1.0, 0.0)
    } else {
        (u * FRAC_PI_2).sin_cos()
    }
}

#[derive(Debug, Clone)]
struct Incumbent {
    u: Vec<f64>,
    value: f64,
}

impl Incumbent {
    fn beaten_by(&self, value: f64, u: &[f64]) -> bool {
        value > self.value || (value == self.value && lex_less(u, &self.u))
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

struct Runner<'a, F> {
    space: &'a Space,
    objective: F,
    evaluations: usize,
}

impl<'a, F> Runner<'a, F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    /// Evaluates all candidates and folds them into `best` in order.
    fn scan(&mut self, candidates: Vec<Vec<f64>>, best: &mut Option<Incumbent>) {
        let space = self.space;
        let objective = &self.objective;
        let values: Vec<f64> = candidates
            .par_iter()
            .map(|u| objective(&space.decode(u)))
            .collect();
        self.evaluations += candidates.len();
        for (u, v) in candidates.into_iter().zip(values) {
            // Non-finite values (including the +∞ sentinel) are not incumbents.
            if !v.is_finite() {
                continue;
            }
            match best {
                Some(b) if !b.beaten_by(v, &u) => {}
                _ => *best = Some(Incumbent { u, value: v }),
            }
        }
    }
}

fn levels(steps: usize) -> Vec<f64> {
    (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect()
}

/// Cartesian product of `levels` over `coords`, varying the last coordinate
/// fastest, starting from `base`.
fn grid(base: &[f64], coords: Range<usize>, levels: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![base.to_vec()];
    for k in coords {
        let mut next = Vec::with_capacity(out.len() * levels.len());
        for point in &out {
            for &l in levels {
                let mut p = point.clone();
                p[k] = l;
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Maximises `objective` over `domain`.
pub fn maximize<F>(
    objective: F,
    domain: &[Dimension],
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    maximize_seeded(objective, domain, budget, &[])
}

/// Like [`maximize`], additionally evaluating `seeds` (decoded parameter
/// vectors) before the coarse scan. The result is never worse than the best
/// seed.
pub fn maximize_seeded<F>(
    objective: F,
    domain: &[Dimension],
    budget: &SearchBudget,
    seeds: &[Vec<f64>],
) -> Result<SearchOutcome, SearchError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    budget.validate()?;
    let space = Space::new(domain)?;
    let m = space.coords();
    let seeds = seeds
        .iter()
        .map(|s| space.encode(s))
        .collect::<Result<Vec<_>, _>>()?;

    let mut runner = Runner {
        space: &space,
        objective,
        evaluations: 0,
    };
    let mut best: Option<Incumbent> = None;
    runner.scan(seeds, &mut best);

    let lv = levels(budget.coarse_steps);
    let full = budget
        .coarse_steps
        .checked_pow(m as u32)
        .is_some_and(|n| n <= FULL_GRID_LIMIT);
    if full {
        runner.scan(grid(&vec![0.0; m], 0..m, &lv), &mut best);
    } else {
        if best.is_none() {
            runner.scan(vec![vec![0.5; m]], &mut best);
        }
        let blocks = space.blocks();
        for _cycle in 0..MAX_BLOCK_CYCLES {
            let Some(start) = best.as_ref().map(|b| b.value) else {
                break;
            };
            for block in &blocks {
                let base = best
                    .as_ref()
                    .map(|b| b.u.clone())
                    .unwrap_or_else(|| vec![0.5; m]);
                runner.scan(grid(&base, block.clone(), &lv), &mut best);
            }
            let gained = best.as_ref().map_or(0.0, |b| b.value - start);
            if gained < budget.tol {
                break;
            }
        }
        if best.is_none() {
            // Nothing finite near the centre: fall back to the corners of
            // each block around the origin.
            for block in space.blocks() {
                runner.scan(grid(&vec![0.0; m], block, &lv), &mut best);
            }
        }
    }

    let Some(mut incumbent) = best else {
        return Err(SearchError::NoFiniteValue);
    };
    let mut history = vec![incumbent.value];

    let mut window = 1.0 / (budget.coarse_steps - 1) as f64;
    for _round in 0..budget.refine_rounds {
        for k in 0..m {
            let center = incumbent.u[k];
            let candidates: Vec<Vec<f64>> = lv
                .iter()
                .map(|&t| (center + window * (2.0 * t - 1.0)).clamp(0.0, 1.0))
                .filter(|&x| x != center)
                .map(|x| {
                    let mut u = incumbent.u.clone();
                    u[k] = x;
                    u
                })
                .collect();
            let mut slot = Some(incumbent);
            runner.scan(candidates, &mut slot);
            incumbent = slot.expect("incumbent is kept");
        }
        history.push(incumbent.value);
        window *= budget.refine_shrink;
    }

    Ok(SearchOutcome {
        params: space.decode(&incumbent.u),
        value: incumbent.value,
        evaluations: runner.evaluations,
        history,
    })
}

/// Golden-section maximisation of a unimodal `f` on `[lo, hi]`, returning
/// the best of the final bracket and both endpoints.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |acc, (x, v)| {
            if v > acc.1 {
                (x, v)
            } else {
                acc
            }
        })
}
