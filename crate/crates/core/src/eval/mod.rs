//! Ranking, bucketed degree profiles and push-feedback metrics.

mod metrics;
mod profile;
mod ranking;
mod simulate;

pub use metrics::{auc, ctr, dtr, Event, FeedbackLog, Outcome};
pub use profile::{bucket_degree_profile, max_drop, tendency_curve, write_curve_csv, Aggregation, BucketProfile};
pub use ranking::{rank_users, FilterRules, RankedUser, Ranking};
pub use simulate::simulate_feedback;

use std::collections::HashSet;

use crate::error::Result;
use crate::graph::BipartiteGraph;

/// AUC of a ranking's scores against whether each ranked user has `outcome` in the log.
pub fn ranking_auc(ranking: &Ranking, g: &BipartiteGraph, log: &FeedbackLog, outcome: Outcome) -> Result<f64> {
    let hits: HashSet<&str> = log.users_with(outcome.event()).collect();
    let samples: Vec<(f64, bool)> = ranking
        .entries
        .iter()
        .map(|e| (e.score, hits.contains(g.key(e.user))))
        .collect();
    auc(&samples)
}
