//! Jointly Gaussian random vectors and their information measures.
//!
//! A [`GaussianSystem`] holds named scalar variables, each a fixed linear
//! combination of `source_count` independent unit-variance Gaussian sources.
//! Because the sources are white, a variable is fully described by its
//! coefficient vector: covariances are inner products, conditioning is
//! orthogonal projection, and mutual information is a function of the
//! principal angles between the spans involved.
//!
//! Two routes are provided:
//!
//! * [`GaussianSystem::conditional_mutual_info`] works directly on the
//!   coefficient vectors with twice-orthogonalised Gram–Schmidt. It is the
//!   Schur-complement form `½ ln det Σ_{A|C} − ½ ln det Σ_{A|B,C}` evaluated
//!   in an orthonormal basis, which keeps full precision even at high SNR.
//! * [`GaussianSystem::conditional_mutual_info_by_entropy`] combines four
//!   differential entropies computed from symmetric eigendecompositions. It
//!   is slower and loses digits when covariances are badly conditioned; it
//!   exists as an independent cross-check.
//!
//! Entropies are in nats, mutual informations in bits.

use std::collections::HashMap;
use std::f64::consts::{E, LN_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

/// Relative eigenvalue (or squared residual) threshold below which a
/// direction is treated as deterministic.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MiError {
    #[error("variable `{0}` is already defined")]
    DuplicateName(String),
    #[error("variable `{name}` has {got} coefficients but the system has {expected} sources")]
    WrongLength {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("variable `{0}` has a non-finite coefficient")]
    NonFinite(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Index of a variable inside a [`GaussianSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(usize);

#[derive(Debug, Clone)]
pub struct GaussianSystem {
    source_count: usize,
    names: Vec<String>,
    coeffs: Vec<f64>,
    index: HashMap<String, usize>,
}

/// Differential entropy of a set of variables, restricted to the support of
/// their joint distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entropy {
    pub nats: f64,
    /// Dimension of the support (number of eigenvalues above tolerance).
    pub rank: usize,
    /// Number of variables requested.
    pub dim: usize,
}

impl Entropy {
    /// True when the variables satisfy a deterministic linear relation.
    pub fn is_degenerate(&self) -> bool {
        self.rank < self.dim
    }

    pub fn bits(&self) -> f64 {
        self.nats / LN_2
    }
}

impl GaussianSystem {
    pub fn new(source_count: usize) -> Self {
        Self {
            source_count,
            names: Vec::new(),
            coeffs: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Variable names in insertion order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn add_variable(&mut self, name: &str, coefficients: &[f64]) -> Result<VarId, MiError> {
        if self.index.contains_key(name) {
            return Err(MiError::DuplicateName(name.to_string()));
        }
        if coefficients.len() != self.source_count {
            return Err(MiError::WrongLength {
                name: name.to_string(),
                got: coefficients.len(),
                expected: self.source_count,
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(MiError::NonFinite(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.coeffs.extend_from_slice(coefficients);
        self.index.insert(name.to_string(), id);
        Ok(VarId(id))
    }

    /// Builder form of [`add_variable`](Self::add_variable).
    pub fn with_variable(mut self, name: &str, coefficients: &[f64]) -> Result<Self, MiError> {
        self.add_variable(name, coefficients)?;
        Ok(self)
    }

    pub fn id(&self, name: &str) -> Result<VarId, MiError> {
        self.index
            .get(name)
            .map(|&i| VarId(i))
            .ok_or_else(|| MiError::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn coefficients(&self, id: VarId) -> &[f64] {
        let n = self.source_count;
        &self.coeffs[id.0 * n..(id.0 + 1) * n]
    }

    pub fn variance(&self, name: &str) -> Result<f64, MiError> {
        let c = self.coefficients(self.id(name)?);
        Ok(dot(c, c))
    }

    pub fn covariance(&self, vars: &[&str]) -> Result<DMatrix<f64>, MiError> {
        let ids = self.ids(vars)?;
        Ok(self.covariance_of(&ids))
    }

    fn ids(&self, names: &[&str]) -> Result<Vec<VarId>, MiError> {
        names.iter().map(|n| self.id(n)).collect()
    }

    fn covariance_of(&self, ids: &[VarId]) -> DMatrix<f64> {
        let k = ids.len();
        DMatrix::from_fn(k, k, |i, j| {
            dot(self.coefficients(ids[i]), self.coefficients(ids[j]))
        })
    }

    /// `½ ln((2πe)^r · pdet Σ)` where `r` is the rank of Σ.
    pub fn entropy(&self, vars: &[&str]) -> Result<Entropy, MiError> {
        let ids = self.ids(vars)?;
        Ok(self.entropy_of(&ids))
    }

    fn entropy_of(&self, ids: &[VarId]) -> Entropy {
        if ids.is_empty() {
            return Entropy {
                nats: 0.0,
                rank: 0,
                dim: 0,
            };
        }
        let eig = SymmetricEigen::new(self.covariance_of(ids));
        let largest = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        let floor = RANK_TOL * largest.max(1.0);
        let mut rank = 0;
        let mut log_pdet = 0.0;
        for &lambda in eig.eigenvalues.iter() {
            if lambda > floor {
                rank += 1;
                log_pdet += lambda.ln();
            }
        }
        Entropy {
            nats: 0.5 * (rank as f64 * (2.0 * PI * E).ln() + log_pdet),
            rank,
            dim: ids.len(),
        }
    }

    /// `I(A;B)` in bits.
    pub fn mutual_info(&self, a: &[&str], b: &[&str]) -> Result<f64, MiError> {
        self.conditional_mutual_info(a, b, &[])
    }

    /// `I(A;B|C)` in bits, or `f64::INFINITY` when `A` and `B` share a
    /// deterministic component given `C`.
    ///
    /// Sets may overlap: a variable of `A` that also appears in `C` simply
    /// contributes nothing, and a variable shared by `A` and `B` that is not
    /// determined by `C` makes the result infinite.
    pub fn conditional_mutual_info(
        &self,
        a: &[&str],
        b: &[&str],
        c: &[&str],
    ) -> Result<f64, MiError> {
        let (a, b, c) = (self.ids(a)?, self.ids(b)?, self.ids(c)?);
        Ok(self.cmi_ids(&a, &b, &c))
    }

    /// Id-based form of [`conditional_mutual_info`](Self::conditional_mutual_info).
    pub fn cmi_ids(&self, a: &[VarId], b: &[VarId], c: &[VarId]) -> f64 {
        let n = self.source_count;
        let mut given = Basis::new(n);
        for &id in c {
            given.push(self.coefficients(id));
        }

        // Orthonormal directions of A that are new relative to C.
        let mut with_a = given.clone();
        let first_new = with_a.count;
        for &id in a {
            with_a.push(self.coefficients(id));
        }
        if with_a.count == first_new {
            return 0.0;
        }

        let mut with_b = given;
        for &id in b {
            with_b.push(self.coefficients(id));
        }

        // Each new A direction is a unit vector orthogonal to C; its residual
        // after projecting off span(B, C) and the earlier A directions has
        // norm sin θ, and I = −Σ ln sin θ.
        let mut nats = 0.0;
        for k in first_new..with_a.count {
            let mut v = with_a.row(k).to_vec();
            with_b.orthogonalize(&mut v);
            let r2 = dot(&v, &v);
            if r2 <= RANK_TOL {
                return f64::INFINITY;
            }
            nats -= 0.5 * r2.ln();
            with_b.push_orthogonal(&v, r2.sqrt());
        }
        (nats / LN_2).max(0.0)
    }

    /// `I(A;B|C) = h(A,C) + h(B,C) − h(A,B,C) − h(C)` from eigen-based
    /// entropies, in bits. Infinite when the support ranks do not add up.
    ///
    /// Only meaningful when each set is given without redundant members.
    pub fn conditional_mutual_info_by_entropy(
        &self,
        a: &[&str],
        b: &[&str],
        c: &[&str],
    ) -> Result<f64, MiError> {
        let (a, b, c) = (self.ids(a)?, self.ids(b)?, self.ids(c)?);
        let join = |parts: &[&[VarId]]| parts.concat();
        let h_ac = self.entropy_of(&join(&[&a, &c]));
        let h_bc = self.entropy_of(&join(&[&b, &c]));
        let h_abc = self.entropy_of(&join(&[&a, &b, &c]));
        let h_c = self.entropy_of(&c);
        if h_ac.rank + h_bc.rank > h_abc.rank + h_c.rank {
            return Ok(f64::INFINITY);
        }
        let nats = h_ac.nats + h_bc.nats - h_abc.nats - h_c.nats;
        Ok((nats / LN_2).max(0.0))
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Orthonormal row basis grown by Gram–Schmidt with one reorthogonalisation.
#[derive(Debug, Clone)]
struct Basis {
    n: usize,
    count: usize,
    rows: Vec<f64>,
}

impl Basis {
    fn new(n: usize) -> Self {
        Self {
            n,
            count: 0,
            rows: Vec::with_capacity(n * n),
        }
    }

    fn row(&self, k: usize) -> &[f64] {
        &self.rows[k * self.n..(k + 1) * self.n]
    }

    fn orthogonalize(&self, v: &mut [f64]) {
        for _pass in 0..2 {
            for k in 0..self.count {
                let q = self.row(k);
                let p = dot(q, v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
    }

    /// Adds the part of `v` outside the current span, unless it is below the
    /// rank tolerance relative to `max(|v|², 1)`.
    fn push(&mut self, v: &[f64]) {
        let scale = dot(v, v).max(1.0);
        let mut r = v.to_vec();
        self.orthogonalize(&mut r);
        let r2 = dot(&r, &r);
        if r2 > RANK_TOL * scale {
            self.push_orthogonal(&r, r2.sqrt());
        }
    }

    fn push_orthogonal(&mut self, r: &[f64], norm: f64) {
        self.rows.extend(r.iter().map(|x| x / norm));
        self.count += 1;
    }
}
