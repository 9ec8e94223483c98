//! Synchronous superstep execution of the push approximation.
//!
//! Each superstep reads only the previous superstep's `run` vector. A vertex
//! whose pending mass reaches `γ·d_v` absorbs its share into `dry` and spreads
//! the rest evenly to its neighbors; every other vertex keeps its mass for the
//! next superstep. New pending mass is gathered per vertex in adjacency order,
//! so the result does not depend on how vertices are split across threads.

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

use super::push::PushState;
use super::{check_dims, LambdaVector, SeedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    /// Vertices of a superstep evaluated on the rayon pool. Falls back to
    /// serial without the `parallel` feature.
    Parallel,
}

pub fn aparw_sweep(
    g: &BipartiteGraph,
    lambda: &LambdaVector,
    seed: &SeedVector,
    gamma: f64,
    max_iters: usize,
    execution: Execution,
) -> Result<PushState> {
    check_dims(g, lambda, seed)?;
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
    }

    let n = g.num_vertices();
    let mut state = PushState::from_seed(seed);
    let mut share = vec![0.0; n];
    let mut next = vec![0.0; n];

    for _ in 0..max_iters {
        let run = &state.run;
        let active = fill(&mut share, execution, |i| {
            let d = g.degree_at(i);
            if run[i] > 0.0 && run[i] >= gamma * d as f64 {
                run[i] * lambda.spread_factor(i, d)
            } else {
                0.0
            }
        });
        if active == 0 {
            break;
        }
        fill(&mut next, execution, |i| {
            let kept = if share[i] > 0.0 { 0.0 } else { run[i] };
            g.neighbor_indices(i)
                .iter()
                .fold(kept, |acc, &u| acc + share[u as usize])
        });
        for i in 0..n {
            if share[i] > 0.0 {
                state.dry[i] += lambda.absorb_fraction(i, g.degree_at(i)) * run[i];
            }
        }
        std::mem::swap(&mut state.run, &mut next);
        state.pushes += active as u64;
        state.iterations += 1;
        let residual = state.residual();
        state.residual_trace.push(residual);
    }

    if state.iterations == max_iters {
        state.truncated = (0..n).any(|i| {
            let d = g.degree_at(i);
            state.run[i] > 0.0 && state.run[i] >= gamma * d as f64
        });
    }
    Ok(state)
}

/// Writes `f(i)` into every slot and returns how many slots are positive.
fn fill<F>(out: &mut [f64], execution: Execution, f: F) -> usize
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            out.par_iter_mut()
                .enumerate()
                .map(|(i, slot)| {
                    *slot = f(i);
                    usize::from(*slot > 0.0)
                })
                .sum()
        }
        _ => out
            .iter_mut()
            .enumerate()
            .map(|(i, slot)| {
                *slot = f(i);
                usize::from(*slot > 0.0)
            })
            .sum(),
    }
}
