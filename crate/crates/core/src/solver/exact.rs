use crate::dense::Cholesky;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::scores::ScoreVector;

use super::{check_dims, LambdaVector, SeedVector};

pub const DEFAULT_DENSE_CAP: usize = 5000;

/// Dense reference solver. `Λ + L` is symmetric positive definite whenever
/// every `λ_i > 0`, so a Cholesky factorization always succeeds.
#[derive(Debug, Clone, Copy)]
pub struct ExactSolver {
    pub max_vertices: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver {
            max_vertices: DEFAULT_DENSE_CAP,
        }
    }
}

impl ExactSolver {
    pub fn check_size(&self, g: &BipartiteGraph) -> Result<()> {
        let n = g.num_vertices();
        if n > self.max_vertices {
            return Err(Error::OracleSizeExceeded {
                vertices: n,
                cap: self.max_vertices,
            });
        }
        Ok(())
    }

    /// Solves `(Λ + L) y = seed` and returns `R = Λ y`.
    pub fn solve(&self, g: &BipartiteGraph, lambda: &LambdaVector, seed: &SeedVector) -> Result<ScoreVector> {
        self.check_size(g)?;
        check_dims(g, lambda, seed)?;
        let n = g.num_vertices();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = lambda.values()[i] + g.degree_at(i) as f64;
            for &j in g.neighbor_indices(i) {
                a[i * n + j as usize] = -1.0;
            }
        }
        let y = Cholesky::factor(n, a)?.solve(seed.values());
        // An isolated vertex's row decouples to `λ y = seed`; take it as is
        // so the walk it starts is absorbed with probability exactly 1.
        let scores = (0..n)
            .map(|i| match g.degree_at(i) {
                0 => seed.values()[i],
                _ => (y[i] * lambda.values()[i]).max(0.0),
            })
            .collect();
        Ok(ScoreVector::new(scores))
    }
}

pub fn solve_exact(g: &BipartiteGraph, lambda: &LambdaVector, seed: &SeedVector) -> Result<ScoreVector> {
    ExactSolver::default().solve(g, lambda, seed)
}
