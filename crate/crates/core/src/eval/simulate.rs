//! Synthetic push feedback for a planted audience.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexId};

use super::metrics::{Event, FeedbackLog};

/// Every user receives the push. Users in `community` click with probability
/// `p_in`, the rest with `p_out`; each user independently downloads with half
/// their click probability. The log lists users in ID order.
pub fn simulate_feedback(
    g: &BipartiteGraph,
    community: &[VertexId],
    p_in: f64,
    p_out: f64,
    rng_seed: u64,
) -> Result<FeedbackLog> {
    if !(0.0 <= p_out && p_out <= p_in && p_in <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= p_out <= p_in <= 1, got p_in={p_in} p_out={p_out}"
        )));
    }
    let mut member = vec![false; g.num_users()];
    for &u in community {
        g.check(u)?;
        if !g.is_user(u) {
            return Err(Error::InvalidParameter(format!("community member {u} is not a user")));
        }
        member[u.index()] = true;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut events = Vec::with_capacity(g.num_users() * 2);
    for u in g.users() {
        let key = g.key(u).to_owned();
        let p = if member[u.index()] { p_in } else { p_out };
        let clicked = rng.random_bool(p);
        let downloaded = rng.random_bool(p / 2.0);
        events.push((key.clone(), Event::Received));
        if clicked {
            events.push((key.clone(), Event::Clicked));
        }
        if downloaded {
            events.push((key, Event::Downloaded));
        }
    }
    FeedbackLog::new(events)
}
