use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexId};
use crate::scores::{MassSummary, ScoreVector};

use super::{check_dims, LambdaVector, SeedVector};

/// Mass bookkeeping shared by the queue and sweep approximations.
///
/// At every point `Σdry + Σrun + dropped = 1` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct PushState {
    pub run: Vec<f64>,
    pub dry: Vec<f64>,
    pub dropped: f64,
    pub pushes: u64,
    /// Supersteps executed (sweep only).
    pub iterations: usize,
    /// The push budget or superstep limit stopped the run while work remained.
    pub truncated: bool,
    /// `Σrun` after each superstep (sweep only).
    pub residual_trace: Vec<f64>,
}

impl PushState {
    pub(crate) fn from_seed(seed: &SeedVector) -> Self {
        PushState {
            run: seed.values().to_vec(),
            dry: vec![0.0; seed.len()],
            dropped: 0.0,
            pushes: 0,
            iterations: 0,
            truncated: false,
            residual_trace: Vec::new(),
        }
    }

    pub fn residual(&self) -> f64 {
        self.run.iter().sum()
    }

    pub fn absorbed(&self) -> f64 {
        self.dry.iter().sum()
    }

    /// Non-zero pending entries in ID order.
    pub fn run_entries(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.run
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, m)| (VertexId::from_index(i), *m))
    }

    pub fn summary(&self) -> MassSummary {
        MassSummary {
            residual: self.residual(),
            dropped: self.dropped,
            pushes: self.pushes,
        }
    }

    pub fn dry_scores(&self) -> ScoreVector {
        ScoreVector::new(self.dry.clone())
    }

    pub fn into_dry_scores(self) -> ScoreVector {
        ScoreVector::new(self.dry)
    }
}

/// Total pending mass.
pub fn residual_mass(state: &PushState) -> f64 {
    state.residual()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PushMode {
    /// Only vertices with `run_i ≥ γ·d_i` are processed; smaller masses stay
    /// pending, so `‖exact − dry‖₁ = Σrun`.
    #[default]
    Conservative,
    /// Every dequeued entry is absorbed first; if it falls under `γ·d_i` the
    /// unabsorbed remainder is discarded into `dropped` instead of spread.
    Faithful,
}

/// Queue-based approximation. The queue is FIFO and coalescing: mass arriving
/// at a vertex that is already queued is added to its pending entry.
///
/// Stops when no entry qualifies or after `budget` push operations; in the
/// latter case the state is returned with `truncated` set.
pub fn aparw_push(
    g: &BipartiteGraph,
    lambda: &LambdaVector,
    seed: &SeedVector,
    gamma: f64,
    budget: u64,
    mode: PushMode,
) -> Result<PushState> {
    check_dims(g, lambda, seed)?;
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    let mut state = PushState::from_seed(seed);
    let n = g.num_vertices();
    let mut queued = vec![false; n];
    let mut queue: VecDeque<u32> = VecDeque::new();

    let qualifies = |run: &[f64], i: usize| run[i] > 0.0 && run[i] >= gamma * g.degree_at(i) as f64;

    for s in seed.support() {
        let i = s.index();
        if mode == PushMode::Faithful || qualifies(&state.run, i) {
            queued[i] = true;
            queue.push_back(i as u32);
        }
    }

    while !queue.is_empty() {
        if state.pushes >= budget {
            state.truncated = true;
            break;
        }
        let i = queue.pop_front().unwrap() as usize;
        queued[i] = false;
        let d = g.degree_at(i);
        let w = std::mem::take(&mut state.run[i]);
        state.pushes += 1;
        state.dry[i] += lambda.absorb_fraction(i, d) * w;

        if mode == PushMode::Faithful && w < gamma * d as f64 {
            state.dropped += w * d as f64 * lambda.spread_factor(i, d);
            continue;
        }

        let share = w * lambda.spread_factor(i, d);
        for &j in g.neighbor_indices(i) {
            let j = j as usize;
            state.run[j] += share;
            let enqueue = match mode {
                PushMode::Conservative => qualifies(&state.run, j),
                PushMode::Faithful => state.run[j] > 0.0,
            };
            if enqueue && !queued[j] {
                queued[j] = true;
                queue.push_back(j as u32);
            }
        }
    }
    Ok(state)
}
