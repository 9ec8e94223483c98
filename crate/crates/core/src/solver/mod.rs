//! Partially absorbing random walks.
//!
//! A walk started from the seed distribution is absorbed at vertex `i` with
//! probability `λ_i / (λ_i + d_i)` on each visit and otherwise moves to a
//! uniformly chosen neighbor. The score of a vertex is the probability that
//! the walk is absorbed there, `Rᵀ = Iᵀ (Λ + L)⁻¹ Λ`.
//!
//! [`solve_exact`] computes this directly for small graphs. [`aparw_push`] and
//! [`aparw_sweep`] approximate it by moving probability mass from a pending
//! `run` vector into an absorbed `dry` vector.

mod exact;
mod push;
mod sweep;

pub use exact::{solve_exact, ExactSolver, DEFAULT_DENSE_CAP};
pub use push::{aparw_push, residual_mass, PushMode, PushState};
pub use sweep::{aparw_sweep, Execution};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexId};

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_GAMMA: f64 = 1e-8;
pub const DEFAULT_SWEEP_ITERS: usize = 20;

/// How absorption rates are assigned.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSpec {
    /// `Λ = α·I`: every vertex absorbs at the same rate.
    IMode {
        alpha: f64,
    },
    /// `Λ = β·D`: rates proportional to degree. Equivalent to personalized
    /// PageRank with decay `1 / (1 + β)`.
    DMode {
        beta: f64,
    },
    Custom(Vec<f64>),
}

/// Strictly positive per-vertex absorption rates.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVector(Vec<f64>);

impl LambdaVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (idx, &value) in values.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveLambda {
                    vertex: VertexId::from_index(idx),
                    value,
                });
            }
        }
        Ok(LambdaVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fraction of pending mass absorbed when vertex `index` (degree `degree`) is processed.
    #[inline]
    pub(crate) fn absorb_fraction(&self, index: usize, degree: usize) -> f64 {
        let lam = self.0[index];
        lam / (lam + degree as f64)
    }

    /// Mass sent to each neighbor per unit of pending mass.
    #[inline]
    pub(crate) fn spread_factor(&self, index: usize, degree: usize) -> f64 {
        1.0 / (self.0[index] + degree as f64)
    }
}

pub fn lambda_vector(g: &BipartiteGraph, spec: &LambdaSpec) -> Result<LambdaVector> {
    let n = g.num_vertices();
    match spec {
        LambdaSpec::IMode { alpha } => {
            positive("alpha", *alpha)?;
            LambdaVector::new(vec![*alpha; n])
        }
        LambdaSpec::DMode { beta } => {
            positive("beta", *beta)?;
            let mut values = Vec::with_capacity(n);
            for v in g.vertices() {
                let d = g.degree(v);
                if d == 0 {
                    return Err(Error::ZeroDegree(v));
                }
                values.push(beta * d as f64);
            }
            LambdaVector::new(values)
        }
        LambdaSpec::Custom(values) => {
            if values.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: values.len(),
                });
            }
            LambdaVector::new(values.clone())
        }
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Starting distribution of the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedVector {
    values: Vec<f64>,
    support: Vec<VertexId>,
}

impl SeedVector {
    /// Arbitrary non-negative distribution; rescaled to sum to 1.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter(
                "seed values must be finite and non-negative".into(),
            ));
        }
        let total: f64 = values.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::EmptySeedSet);
        }
        let values: Vec<f64> = values.into_iter().map(|v| v / total).collect();
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(i, _)| VertexId::from_index(i))
            .collect();
        Ok(SeedVector { values, support })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Vertices with positive initial mass, ascending.
    pub fn support(&self) -> &[VertexId] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Uniform distribution `1/|S|` over the seed set `S` (duplicates ignored).
pub fn seed_vector(g: &BipartiteGraph, seeds: &[VertexId]) -> Result<SeedVector> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    for &s in seeds {
        g.check(s)?;
    }
    let mut support = seeds.to_vec();
    support.sort_unstable();
    support.dedup();
    let share = 1.0 / support.len() as f64;
    let mut values = vec![0.0; g.num_vertices()];
    for s in &support {
        values[s.index()] = share;
    }
    Ok(SeedVector { values, support })
}

pub(crate) fn check_dims(g: &BipartiteGraph, lambda: &LambdaVector, seed: &SeedVector) -> Result<()> {
    let n = g.num_vertices();
    for actual in [lambda.len(), seed.len()] {
        if actual != n {
            return Err(Error::DimensionMismatch { expected: n, actual });
        }
    }
    Ok(())
}
