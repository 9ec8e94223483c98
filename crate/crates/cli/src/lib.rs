//! The `parw` pipeline: build a graph from interaction logs, rank users for a
//! set of seed items, compare two rankings by degree profile, and score a
//! ranking against push feedback.

pub mod config;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use parw_core::eval::{
    auc, bucket_degree_profile, ctr, dtr, rank_users, simulate_feedback, tendency_curve, write_curve_csv, Aggregation,
    BucketProfile, FeedbackLog, FilterRules, Outcome, Ranking,
};
use parw_core::graph::{build_graph, BipartiteGraph, VertexId};
use parw_core::ingest::{apply_preprocess, ingest_interactions, InputFormat, PreprocessRules};
use parw_core::ppr::{dmode_equivalent_with, ppr_iterate, PprConfig};
use parw_core::scores::ScoreVector;
use parw_core::solver::{
    aparw_push, aparw_sweep, lambda_vector, seed_vector, ExactSolver, LambdaSpec, PushMode, PushState,
};

pub use config::{Algo, Exec, RunConfig, Threads};

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

/// Writes the whole file or nothing observable on failure.
fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

/// Reads preprocessing rules from `key=value` lines: `blocklist` (comma
/// separated, may repeat), `max_item_degree_fraction`, `min_user_degree` and
/// `drop_isolated`.
pub fn parse_rules(text: &str) -> Result<PreprocessRules> {
    let mut rules = PreprocessRules::default();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = || format!("rules line {}", idx + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}: expected key=value", ctx()))?;
        let value = value.trim();
        match key.trim() {
            "blocklist" => rules.item_blocklist.extend(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|k| !k.is_empty())
                    .map(str::to_owned),
            ),
            "max_item_degree_fraction" => rules.max_item_degree_fraction = value.parse().with_context(ctx)?,
            "min_user_degree" => rules.min_user_degree = value.parse().with_context(ctx)?,
            "drop_isolated" => rules.drop_isolated = value.parse().with_context(ctx)?,
            other => bail!("{}: unknown rule '{other}'", ctx()),
        }
    }
    rules.validate()?;
    Ok(rules)
}

/// Returns the `users=<n> items=<m> edges=<e>` summary.
pub fn cmd_build(input: &Path, format: InputFormat, rules: Option<&Path>, out: &Path) -> Result<String> {
    let rules = match rules {
        Some(p) => parse_rules(&fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?)?,
        None => PreprocessRules::default(),
    };
    let records = ingest_interactions(open(input)?, format).with_context(|| format!("in {}", input.display()))?;
    let records = apply_preprocess(records, &rules)?;
    let g = build_graph(&records)?;
    let mut buf = Vec::new();
    g.write_tsv(&mut buf)?;
    write_file(out, &buf)?;
    Ok(format!(
        "users={} items={} edges={}",
        g.num_users(),
        g.num_items(),
        g.num_edges()
    ))
}

pub fn load_graph(path: &Path) -> Result<BipartiteGraph> {
    BipartiteGraph::read_tsv(open(path)?).with_context(|| format!("in graph {}", path.display()))
}

/// Whitespace-separated keys; `#` starts a comment line.
pub fn read_keys(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(str::to_owned)
        .collect())
}

/// Maps seed keys to item vertices, rejecting unknown keys and user keys.
pub fn resolve_seeds(g: &BipartiteGraph, keys: &[String]) -> Result<Vec<VertexId>> {
    if keys.is_empty() {
        bail!("seed set is empty");
    }
    let mut seeds = Vec::with_capacity(keys.len());
    let mut offenders = Vec::new();
    for key in keys {
        match g.item_by_key(key) {
            Some(v) => seeds.push(v),
            None if g.user_by_key(key).is_some() => offenders.push(format!("{key} (a user, seeds must be items)")),
            None => offenders.push(key.clone()),
        }
    }
    if !offenders.is_empty() {
        bail!("unknown seed keys: {}", offenders.join(", "));
    }
    Ok(seeds)
}

pub fn load_filters(cfg: &RunConfig) -> Result<FilterRules> {
    let mut rules = FilterRules::new(cfg.exclude.iter().cloned());
    if let Some(path) = &cfg.filters {
        rules
            .read_attributes(open(path)?)
            .with_context(|| format!("in filters {}", path.display()))?;
    }
    Ok(rules)
}

#[derive(Debug, Clone)]
pub struct RankRun {
    pub seeds: Vec<String>,
    pub scores: ScoreVector,
    pub ranking: Ranking,
    /// Trailing comment for the ranking file, if the method reports one.
    pub footer: Option<String>,
    /// Execution actually used, as printed in the header.
    pub method: &'static str,
}

fn push_footer(state: &PushState) -> String {
    let mut s = state.summary().to_string();
    if state.truncated {
        s.push_str(" truncated=true");
    }
    s
}

/// Scores and ranks users on an already loaded graph.
pub fn run_ranking(g: &BipartiteGraph, cfg: &RunConfig) -> Result<RankRun> {
    let exact = ExactSolver::default();
    let dense = cfg.execution == Exec::Exact;
    if dense {
        exact.check_size(g)?;
    }
    let seed_path = cfg.seeds.as_deref().ok_or_else(|| anyhow!("no seeds file given"))?;
    let keys = read_keys(seed_path)?;
    let seeds = resolve_seeds(g, &keys)?;
    let filters = load_filters(cfg)?;
    let seed = seed_vector(g, &seeds)?;
    let alpha = cfg.alpha();

    let (scores, footer, method) = match cfg.algo {
        Algo::Ppr if dense => (dmode_equivalent_with(&exact, g, alpha, &seed)?, None, "exact"),
        Algo::Ppr => {
            let ppr_cfg = PprConfig {
                alpha,
                ..PprConfig::default()
            };
            let r = ppr_iterate(g, &ppr_cfg, &seed)?;
            let footer = format!("# iterations={} converged={}", r.iterations, r.converged);
            (r.scores, Some(footer), "power_iteration")
        }
        Algo::ParwI | Algo::ParwD => {
            let spec = match cfg.algo {
                Algo::ParwI => LambdaSpec::IMode { alpha },
                _ => LambdaSpec::DMode { beta: alpha },
            };
            let lambda = lambda_vector(g, &spec)?;
            let budget = cfg.budget.unwrap_or(u64::MAX);
            let state = match cfg.execution {
                Exec::Exact => None,
                Exec::PushConservative => Some(aparw_push(
                    g,
                    &lambda,
                    &seed,
                    cfg.gamma,
                    budget,
                    PushMode::Conservative,
                )?),
                Exec::PushFaithful => Some(aparw_push(g, &lambda, &seed, cfg.gamma, budget, PushMode::Faithful)?),
                Exec::Sweep => Some(aparw_sweep(
                    g,
                    &lambda,
                    &seed,
                    cfg.gamma,
                    cfg.max_iters,
                    cfg.threads.execution(),
                )?),
            };
            match state {
                None => (exact.solve(g, &lambda, &seed)?, None, "exact"),
                Some(st) => {
                    let footer = push_footer(&st);
                    (st.into_dry_scores(), Some(footer), cfg.execution.as_str())
                }
            }
        }
    };
    let ranking = rank_users(g, &scores, &filters)?;
    Ok(RankRun {
        seeds: keys,
        scores,
        ranking,
        footer,
        method,
    })
}

/// `#`-prefixed metadata, a `#rank user_key score degree` column line, one
/// row per ranked user, and the method's trailing comment if any.
pub fn format_ranking(g: &BipartiteGraph, cfg: &RunConfig, run: &RankRun) -> String {
    let mut s = String::new();
    let rng = cfg.rng_seed.map_or_else(|| "none".to_owned(), |r| r.to_string());
    let _ = writeln!(
        s,
        "# algo={} exec={} alpha={} gamma={} iters={} seeds={} rng_seed={rng} ranked={} filtered={}",
        cfg.algo,
        run.method,
        cfg.alpha(),
        cfg.gamma,
        cfg.max_iters,
        run.seeds.join(","),
        run.ranking.len(),
        run.ranking.filtered_out,
    );
    s.push_str("#rank\tuser_key\tscore\tdegree\n");
    for (i, e) in run.ranking.entries.iter().enumerate() {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", i + 1, g.key(e.user), e.score, g.degree(e.user));
    }
    if let Some(footer) = &run.footer {
        s.push_str(footer);
        s.push('\n');
    }
    s
}

pub fn cmd_rank(cfg: &RunConfig) -> Result<RankRun> {
    let out = cfg.out.as_deref().ok_or_else(|| anyhow!("no output path given"))?;
    let graph_path = cfg.graph.as_deref().ok_or_else(|| anyhow!("no graph given"))?;
    let g = load_graph(graph_path)?;
    let run = run_ranking(&g, cfg)?;
    if let Some(path) = &cfg.scores_out {
        let mut buf = Vec::new();
        run.scores.write_tsv(&mut buf, None)?;
        write_file(path, &buf)?;
    }
    write_file(out, format_ranking(&g, cfg, &run).as_bytes())?;
    Ok(run)
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub a: BucketProfile,
    pub b: BucketProfile,
    /// First 1-based bucket where profile A falls below profile B.
    pub crossing: Option<usize>,
    /// Users in the first bucket of both rankings.
    pub top_overlap: usize,
}

impl Comparison {
    pub fn summary(&self) -> String {
        let crossing = self.crossing.map_or_else(|| "none".to_owned(), |c| c.to_string());
        format!(
            "buckets={}\nbucket_size={}\na_bucket1={}\nb_bucket1={}\nfirst_crossing={crossing}\ntop_bucket_overlap={}\n",
            self.a.bucket_count, self.a.bucket_size, self.a.values[0], self.b.values[0], self.top_overlap
        )
    }
}

pub fn compare_runs(
    g: &BipartiteGraph,
    a: &RankRun,
    b: &RankRun,
    buckets: usize,
    agg: Aggregation,
) -> Result<Comparison> {
    let pa = bucket_degree_profile(&a.ranking, g, buckets, agg)?;
    let pb = bucket_degree_profile(&b.ranking, g, buckets, agg)?;
    let top: HashSet<VertexId> = a.ranking.users().take(pa.bucket_size).collect();
    let top_overlap = b
        .ranking
        .users()
        .take(pb.bucket_size)
        .filter(|u| top.contains(u))
        .count();
    Ok(Comparison {
        crossing: pa.first_crossing_below(&pb),
        a: pa,
        b: pb,
        top_overlap,
    })
}

/// Writes `<prefix>.a.csv`, `<prefix>.b.csv` and `<prefix>.summary`, and
/// returns the summary text.
pub fn cmd_compare(a: &RunConfig, b: &RunConfig, buckets: usize, agg: Aggregation, prefix: &Path) -> Result<String> {
    let graph_path = a.graph.as_deref().ok_or_else(|| anyhow!("no graph given"))?;
    if b.graph.as_deref().is_some_and(|p| p != graph_path) {
        bail!("both configurations must use the same graph");
    }
    let g = load_graph(graph_path)?;
    let ra = run_ranking(&g, a).context("configuration A")?;
    let rb = run_ranking(&g, b).context("configuration B")?;
    let cmp = compare_runs(&g, &ra, &rb, buckets, agg)?;

    let with_suffix = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        std::path::PathBuf::from(s)
    };
    for (profile, suffix) in [(&cmp.a, ".a.csv"), (&cmp.b, ".b.csv")] {
        let mut buf = Vec::new();
        profile.write_csv(&mut buf)?;
        write_file(&with_suffix(suffix), &buf)?;
    }
    let summary = cmp.summary();
    write_file(&with_suffix(".summary"), summary.as_bytes())?;
    Ok(summary)
}

/// `(user_key, score)` rows of a ranking file in file order.
pub fn read_ranking(path: &Path) -> Result<Vec<(String, f64)>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (_, key, score) = (cols.next(), cols.next(), cols.next());
        let (Some(key), Some(score)) = (key, score) else {
            bail!(
                "{} line {}: expected rank, user_key, score, degree",
                path.display(),
                idx + 1
            );
        };
        let score: f64 = score
            .parse()
            .with_context(|| format!("{} line {}: bad score", path.display(), idx + 1))?;
        rows.push((key.to_owned(), score));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Auc,
    Ctr,
    Dtr,
    Tendency,
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auc" => Ok(EvalMode::Auc),
            "ctr" => Ok(EvalMode::Ctr),
            "dtr" => Ok(EvalMode::Dtr),
            "tendency" => Ok(EvalMode::Tendency),
            _ => Err(format!("unknown mode '{s}' (expected auc, ctr, dtr or tendency)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalOutput {
    Value(f64),
    Curve(Vec<f64>),
}

pub fn cmd_eval(
    ranking: Option<&Path>,
    feedback: &Path,
    mode: EvalMode,
    outcome: Outcome,
    bucket_size: usize,
) -> Result<EvalOutput> {
    let log = FeedbackLog::read_tsv(open(feedback)?).with_context(|| format!("in {}", feedback.display()))?;
    let rows =
        || -> Result<Vec<(String, f64)>> { read_ranking(ranking.ok_or_else(|| anyhow!("mode needs a ranking file"))?) };
    Ok(match mode {
        EvalMode::Ctr => EvalOutput::Value(ctr(&log)?),
        EvalMode::Dtr => EvalOutput::Value(dtr(&log)?),
        EvalMode::Auc => {
            let hits: HashSet<&str> = log.users_with(outcome.event()).collect();
            let samples: Vec<(f64, bool)> = rows()?.iter().map(|(k, s)| (*s, hits.contains(k.as_str()))).collect();
            EvalOutput::Value(auc(&samples)?)
        }
        EvalMode::Tendency => {
            let keys: Vec<String> = rows()?.into_iter().map(|(k, _)| k).collect();
            EvalOutput::Curve(tendency_curve(&keys, &log, bucket_size, outcome)?)
        }
    })
}

pub fn format_curve(values: &[f64]) -> Result<String> {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, values)?;
    Ok(String::from_utf8(buf)?)
}

/// Simulated feedback where the users listed in `community` click at `p_in`
/// and everyone else at `p_out`.
pub fn cmd_simulate(graph: &Path, community: &Path, p_in: f64, p_out: f64, rng_seed: u64, out: &Path) -> Result<usize> {
    let g = load_graph(graph)?;
    let mut members = Vec::new();
    for key in read_keys(community)? {
        members.push(
            g.user_by_key(&key)
                .ok_or_else(|| anyhow!("unknown community user '{key}'"))?,
        );
    }
    let log = simulate_feedback(&g, &members, p_in, p_out, rng_seed)?;
    let mut buf = Vec::new();
    log.write_tsv(&mut buf)?;
    write_file(out, &buf)?;
    Ok(log.events().len())
}

/// Writes `text` to `out`, or to standard output without a path.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
