use std::io::Write;

use crate::error::Result;
use crate::graph::VertexId;

/// Dense per-vertex scores indexed by zero-based vertex position.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Self {
        ScoreVector(values)
    }

    pub fn get(&self, v: VertexId) -> f64 {
        self.0[v.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn linf_distance(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `vertex_id<TAB>score` rows in ID order. Scores use the shortest
    /// representation that parses back to the same `f64`.
    pub fn write_tsv<W: Write>(&self, mut out: W, footer: Option<&MassSummary>) -> Result<()> {
        for (idx, s) in self.0.iter().enumerate() {
            writeln!(out, "{}\t{}", VertexId::from_index(idx).get(), s)?;
        }
        if let Some(f) = footer {
            writeln!(out, "{f}")?;
        }
        out.flush()?;
        Ok(())
    }
}

impl From<Vec<f64>> for ScoreVector {
    fn from(values: Vec<f64>) -> Self {
        ScoreVector(values)
    }
}

/// Unabsorbed and discarded mass left by an approximate run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSummary {
    pub residual: f64,
    pub dropped: f64,
    pub pushes: u64,
}

impl std::fmt::Display for MassSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "# residual={} dropped={} pushes={}",
            self.residual, self.dropped, self.pushes
        )
    }
}
