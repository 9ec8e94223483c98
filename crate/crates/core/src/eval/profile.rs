use std::collections::HashSet;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

use super::metrics::{FeedbackLog, Outcome};
use super::ranking::Ranking;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Mean,
    Sum,
}

/// Degree statistic over consecutive equal-size groups of a ranking. Users
/// past `bucket_count * bucket_size` are left out.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketProfile {
    pub bucket_count: usize,
    pub bucket_size: usize,
    pub aggregation: Aggregation,
    pub values: Vec<f64>,
}

impl BucketProfile {
    /// First 1-based bucket at which `self` is strictly below `other`.
    pub fn first_crossing_below(&self, other: &BucketProfile) -> Option<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a < b)
            .map(|i| i + 1)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_curve_csv(out, &self.values)
    }
}

/// `bucket_index,value` rows with 1-based bucket indices.
pub fn write_curve_csv<W: Write>(mut out: W, values: &[f64]) -> Result<()> {
    writeln!(out, "bucket_index,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, v)?;
    }
    out.flush()?;
    Ok(())
}

pub fn bucket_degree_profile(
    ranking: &Ranking,
    g: &BipartiteGraph,
    bucket_count: usize,
    aggregation: Aggregation,
) -> Result<BucketProfile> {
    if bucket_count == 0 {
        return Err(Error::InvalidParameter("bucket count must be at least 1".into()));
    }
    if ranking.len() < bucket_count {
        return Err(Error::RankingTooShort {
            len: ranking.len(),
            buckets: bucket_count,
        });
    }
    let bucket_size = ranking.len() / bucket_count;
    let values = ranking.entries[..bucket_count * bucket_size]
        .chunks_exact(bucket_size)
        .map(|bucket| {
            let total: usize = bucket.iter().map(|e| g.degree(e.user)).sum();
            match aggregation {
                Aggregation::Sum => total as f64,
                Aggregation::Mean => total as f64 / bucket_size as f64,
            }
        })
        .collect();
    Ok(BucketProfile {
        bucket_count,
        bucket_size,
        aggregation,
        values,
    })
}

/// Click (or download) rate per consecutive bucket of `bucket_size` ranked
/// users, given their external keys in rank order. Every ranked user counts
/// as having received the push; a trailing partial bucket is dropped.
pub fn tendency_curve<S: AsRef<str>>(
    ranked_keys: &[S],
    log: &FeedbackLog,
    bucket_size: usize,
    outcome: Outcome,
) -> Result<Vec<f64>> {
    if bucket_size == 0 {
        return Err(Error::InvalidParameter("bucket size must be at least 1".into()));
    }
    let hits: HashSet<&str> = log.users_with(outcome.event()).collect();
    let full = ranked_keys.len() / bucket_size * bucket_size;
    Ok(ranked_keys[..full]
        .chunks_exact(bucket_size)
        .map(|bucket| {
            let n = bucket.iter().filter(|k| hits.contains(k.as_ref())).count();
            n as f64 / bucket_size as f64
        })
        .collect())
}

/// Largest decrease between consecutive buckets (0 for a non-decreasing curve).
pub fn max_drop(curve: &[f64]) -> f64 {
    curve.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
}
