//! Synthetic graphs for experiments: a planted low-degree community inside a
//! denser background, and plain random bipartite graphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub community_users: usize,
    pub community_items: usize,
    pub background_users: usize,
    pub background_items: usize,
    /// Community items rated by each community user.
    pub community_degree: usize,
    /// Background items rated by each background user, drawn uniformly from this range.
    pub background_degree: (usize, usize),
    /// Chance that a community user also rates one background item.
    pub leak_prob: f64,
    /// Chance that a background user also rates one community item.
    pub cross_prob: f64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            community_users: 60,
            community_items: 30,
            background_users: 300,
            background_items: 300,
            community_degree: 4,
            background_degree: (10, 40),
            leak_prob: 0.1,
            cross_prob: 0.15,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: BipartiteGraph,
    pub community_users: Vec<VertexId>,
    pub community_items: Vec<VertexId>,
}

/// Community users and items take the lowest IDs on each side. Every vertex
/// ends up with at least one edge.
pub fn planted_community(cfg: &PlantedConfig, rng_seed: u64) -> Result<PlantedGraph> {
    let PlantedConfig {
        community_users: cu,
        community_items: ci,
        background_users: bu,
        background_items: bi,
        ..
    } = *cfg;
    let (lo, hi) = cfg.background_degree;
    if cu == 0 || ci == 0 || bu == 0 || bi == 0 {
        return Err(Error::InvalidParameter("every block needs at least one vertex".into()));
    }
    if cfg.community_degree == 0 || cfg.community_degree > ci || lo == 0 || lo > hi || hi > bi {
        return Err(Error::InvalidParameter(
            "degrees must fit inside their item blocks".into(),
        ));
    }
    for p in [cfg.leak_prob, cfg.cross_prob] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for u in 0..cu {
        edges.extend(sample(&mut rng, ci, cfg.community_degree).into_iter().map(|i| (u, i)));
        if rng.random_bool(cfg.leak_prob) {
            edges.push((u, ci + rng.random_range(0..bi)));
        }
    }
    for u in cu..cu + bu {
        let k = rng.random_range(lo..=hi);
        edges.extend(sample(&mut rng, bi, k).into_iter().map(|i| (u, ci + i)));
        if rng.random_bool(cfg.cross_prob) {
            edges.push((u, rng.random_range(0..ci)));
        }
    }
    let mut touched = vec![false; ci + bi];
    for &(_, i) in &edges {
        touched[i] = true;
    }
    for (i, _) in touched.iter().enumerate().filter(|(_, t)| !**t) {
        let u = if i < ci {
            rng.random_range(0..cu)
        } else {
            cu + rng.random_range(0..bu)
        };
        edges.push((u, i));
    }

    let users = cu + bu;
    let graph = BipartiteGraph::from_edges(users, ci + bi, edges)?;
    Ok(PlantedGraph {
        community_users: (0..cu).map(VertexId::from_index).collect(),
        community_items: (0..ci).map(|i| VertexId::from_index(users + i)).collect(),
        graph,
    })
}

/// Each user-item pair is an edge independently with probability `p`.
/// Isolated vertices are kept.
pub fn random_bipartite(num_users: usize, num_items: usize, p: f64, rng_seed: u64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for u in 0..num_users {
        for i in 0..num_items {
            if rng.random_bool(p) {
                edges.push((u, i));
            }
        }
    }
    BipartiteGraph::from_edges(num_users, num_items, edges)
}
