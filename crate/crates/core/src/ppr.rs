//! Personalized PageRank by power iteration, and its D-mode PARW counterpart.

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::scores::ScoreVector;
use crate::solver::{ExactSolver, LambdaSpec, SeedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Teleport {
    /// Restart mass split evenly between the uniform vector and the seed.
    #[default]
    MixedHalfUniformHalfSeed,
    SeedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PprConfig {
    /// Decay factor in (0, 1): probability of following an edge.
    pub alpha: f64,
    pub teleport: Teleport,
    /// L1 change between iterates at which the iteration stops.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PprConfig {
    fn default() -> Self {
        PprConfig {
            alpha: 0.99,
            teleport: Teleport::MixedHalfUniformHalfSeed,
            tol: 1e-10,
            max_iters: 10_000,
        }
    }
}

impl PprConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "PPR alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "PPR tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PprResult {
    pub scores: ScoreVector,
    pub iterations: usize,
    /// Whether the last step moved less than `tol` in L1.
    pub converged: bool,
}

/// Iterates `R' = α·R·T + restart` from `R = seed`, where the restart term is
/// `(1−α)/2·(1/N) + (1−α)/2·seed` for the mixed teleport and `(1−α)·seed`
/// otherwise.
pub fn ppr_iterate(g: &BipartiteGraph, cfg: &PprConfig, seed: &SeedVector) -> Result<PprResult> {
    cfg.validate()?;
    let n = g.num_vertices();
    if seed.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: seed.len(),
        });
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 0) {
        return Err(Error::DanglingVertex(v));
    }

    let restart: Vec<f64> = match cfg.teleport {
        Teleport::MixedHalfUniformHalfSeed => {
            let uniform = (1.0 - cfg.alpha) / 2.0 / n as f64;
            seed.values()
                .iter()
                .map(|s| uniform + (1.0 - cfg.alpha) / 2.0 * s)
                .collect()
        }
        Teleport::SeedOnly => seed.values().iter().map(|s| (1.0 - cfg.alpha) * s).collect(),
    };
    let inv_degree: Vec<f64> = (0..n).map(|i| 1.0 / g.degree_at(i) as f64).collect();

    let mut current = seed.values().to_vec();
    let mut next = vec![0.0; n];
    let mut outflow = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        for i in 0..n {
            outflow[i] = current[i] * inv_degree[i];
        }
        let mut change = 0.0;
        for j in 0..n {
            let inflow: f64 = g.neighbor_indices(j).iter().map(|&i| outflow[i as usize]).sum();
            next[j] = cfg.alpha * inflow + restart[j];
            change += (next[j] - current[j]).abs();
        }
        std::mem::swap(&mut current, &mut next);
        iterations += 1;
        if change <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(PprResult {
        scores: ScoreVector::new(current),
        iterations,
        converged,
    })
}

/// `I' = ½(1/N + seed)`, the start vector of the D-mode walk that reproduces
/// mixed-teleport PPR.
pub fn mixed_seed(seed: &SeedVector) -> Result<SeedVector> {
    let n = seed.len() as f64;
    SeedVector::from_values(seed.values().iter().map(|s| 0.5 * (1.0 / n + s)).collect())
}

/// Exact D-mode PARW with `Λ = (1−α)/α·D` started from `I'`. Agrees with the
/// fixed point of [`ppr_iterate`] under the mixed teleport.
pub fn dmode_equivalent(g: &BipartiteGraph, alpha: f64, seed: &SeedVector) -> Result<ScoreVector> {
    dmode_equivalent_with(&ExactSolver::default(), g, alpha, seed)
}

pub fn dmode_equivalent_with(
    solver: &ExactSolver,
    g: &BipartiteGraph,
    alpha: f64,
    seed: &SeedVector,
) -> Result<ScoreVector> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 0) {
        return Err(Error::DanglingVertex(v));
    }
    solver.check_size(g)?;
    let lambda = crate::solver::lambda_vector(
        g,
        &LambdaSpec::DMode {
            beta: (1.0 - alpha) / alpha,
        },
    )?;
    solver.solve(g, &lambda, &mixed_seed(seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::toy_graph;
    use crate::graph::VertexId;
    use crate::solver::seed_vector;

    fn v(id: u32) -> VertexId {
        VertexId::new(id)
    }

    #[test]
    fn path_seed_only_fixed_point() {
        // R = α R T + (1-α) e1 with T = [[0,1],[1,0]], α = 1/2:
        // r1 = r2/2 + 1/2, r2 = r1/2  =>  r1 = 2/3, r2 = 1/3
        let g = BipartiteGraph::from_edges(1, 1, [(0, 0)]).unwrap();
        let cfg = PprConfig {
            alpha: 0.5,
            teleport: Teleport::SeedOnly,
            tol: 1e-13,
            max_iters: 1000,
        };
        let out = ppr_iterate(&g, &cfg, &seed_vector(&g, &[v(1)]).unwrap()).unwrap();
        assert!(out.converged);
        assert!((out.scores.values()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.scores.values()[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mass_is_preserved() {
        let g = toy_graph();
        for alpha in [0.1, 0.5, 0.85, 0.99] {
            for teleport in [Teleport::MixedHalfUniformHalfSeed, Teleport::SeedOnly] {
                let cfg = PprConfig {
                    alpha,
                    teleport,
                    tol: 1e-12,
                    max_iters: 10_000,
                };
                let out = ppr_iterate(&g, &cfg, &seed_vector(&g, &[v(5)]).unwrap()).unwrap();
                assert!(out.converged);
                assert!((out.scores.sum() - 1.0).abs() <= 10.0 * cfg.tol);
            }
        }
    }

    #[test]
    fn toy_high_degree_user_wins() {
        let g = toy_graph();
        let cfg = PprConfig {
            alpha: 0.99,
            tol: 1e-12,
            ..Default::default()
        };
        let out = ppr_iterate(&g, &cfg, &seed_vector(&g, &[v(5)]).unwrap()).unwrap();
        assert!(out.scores.get(v(3)) > out.scores.get(v(2)));
    }

    #[test]
    fn dangling_vertex_rejected() {
        let g = BipartiteGraph::from_edges(2, 1, [(0, 0)]).unwrap();
        let seed = seed_vector(&g, &[v(1)]).unwrap();
        let err = ppr_iterate(&g, &PprConfig::default(), &seed).unwrap_err();
        assert!(err.to_string().starts_with("dangling vertex"));
        assert!(dmode_equivalent(&g, 0.5, &seed).is_err());
    }

    #[test]
    fn bad_config_rejected() {
        let g = toy_graph();
        let seed = seed_vector(&g, &[v(5)]).unwrap();
        for alpha in [0.0, 1.0, -0.5] {
            let cfg = PprConfig {
                alpha,
                ..Default::default()
            };
            assert!(ppr_iterate(&g, &cfg, &seed).is_err());
        }
    }

    #[test]
    fn mixed_seed_layout() {
        let g = toy_graph();
        let seed = seed_vector(&g, &[v(4), v(5)]).unwrap();
        let mixed = mixed_seed(&seed).unwrap();
        let n = 8.0;
        for (i, &x) in mixed.values().iter().enumerate() {
            let expected = if i == 3 || i == 4 { 0.5 / n + 0.5 / 2.0 } else { 0.5 / n };
            assert!((x - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn toy_equivalence_and_argmax() {
        let g = toy_graph();
        let seed = seed_vector(&g, &[v(5)]).unwrap();
        let alpha = 0.99;
        let cfg = PprConfig {
            alpha,
            tol: 1e-12,
            ..Default::default()
        };
        let ppr = ppr_iterate(&g, &cfg, &seed).unwrap().scores;
        let dmode = dmode_equivalent(&g, alpha, &seed).unwrap();
        assert!(ppr.linf_distance(dmode.values()) <= 1e-8);
        let argmax = |s: &ScoreVector| g.users().max_by(|a, b| s.get(*a).total_cmp(&s.get(*b))).unwrap();
        assert_eq!(argmax(&ppr), argmax(&dmode));
    }
}
