//! User ranking on bipartite user-item graphs with partially absorbing random
//! walks, a personalized PageRank baseline, and offline evaluation tools.

pub mod dense;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod ppr;
pub mod scores;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{build_graph, BipartiteGraph, Side, VertexId};
pub use ingest::{apply_preprocess, ingest_interactions, InputFormat, InteractionRecord, PreprocessRules};
pub use ppr::{ppr_iterate, PprConfig, PprResult, Teleport};
pub use scores::{MassSummary, ScoreVector};
pub use solver::{
    aparw_push, aparw_sweep, lambda_vector, seed_vector, solve_exact, Execution, LambdaSpec, LambdaVector, PushMode,
    PushState, SeedVector,
};
