//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use parw_cli::{cmd_build, cmd_rank, compare_runs, run_ranking, Algo, Exec, RunConfig, Threads};
use parw_core::eval::simulate_feedback;
use parw_core::eval::{auc, rank_users, Aggregation, Event, FilterRules};
use parw_core::graph::{build_graph, BipartiteGraph, VertexId};
use parw_core::ingest::{InputFormat, InteractionRecord};
use parw_core::ppr::{dmode_equivalent, ppr_iterate, PprConfig};
use parw_core::scores::ScoreVector;
use parw_core::solver::{
    aparw_push, aparw_sweep, lambda_vector, seed_vector, solve_exact, Execution, LambdaSpec, PushMode, DEFAULT_ALPHA,
    DEFAULT_GAMMA, DEFAULT_SWEEP_ITERS,
};
use parw_core::synth::{planted_community, random_bipartite, PlantedConfig};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn movielens_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/ml-100k/u.data")
}

/// Random graph where every vertex has at least one edge.
fn random_connected(nu: usize, ni: usize, p: f64, seed: u64) -> BipartiteGraph {
    let g = random_bipartite(nu, ni, p, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, i)| (u.index(), i.index() - nu)).collect();
    for u in 0..nu {
        if g.degree_at(u) == 0 {
            edges.push((u, rng.random_range(0..ni)));
        }
    }
    for i in 0..ni {
        if g.degree_at(nu + i) == 0 {
            edges.push((rng.random_range(0..nu), i));
        }
    }
    BipartiteGraph::from_edges(nu, ni, edges).unwrap()
}

fn random_seeds(g: &BipartiteGraph, rng: &mut ChaCha8Rng, max: usize) -> Vec<VertexId> {
    let k = rng.random_range(1..=max.min(g.num_vertices()));
    sample(rng, g.num_vertices(), k)
        .into_iter()
        .map(VertexId::from_index)
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut isolated_graphs = 0;
    for trial in 0..100 {
        let n = rng.random_range(2..=300);
        let nu = rng.random_range(1..n);
        let p = rng.random_range(0.002..0.3);
        let g = random_bipartite(nu, n - nu, p, 1000 + trial).unwrap();
        if g.vertices().any(|v| g.degree(v) == 0) {
            isolated_graphs += 1;
        }
        let seeds = random_seeds(&g, &mut rng, 4);
        let seed = seed_vector(&g, &seeds).unwrap();
        for alpha in [0.001, 0.01, 0.1] {
            let lam = lambda_vector(&g, &LambdaSpec::IMode { alpha }).unwrap();
            let r = solve_exact(&g, &lam, &seed).unwrap();
            worst = worst.max((r.sum() - 1.0).abs());
        }
    }
    let t = start.elapsed();
    check(
        worst <= 1e-10 && within(t, 10),
        format!("max |sum-1| = {worst:.2e} over 300 solves ({isolated_graphs} graphs with isolated vertices), {t:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut unconverged = 0;
    for trial in 0..50 {
        let n = rng.random_range(2..=100);
        let nu = rng.random_range(1..n);
        let g = random_connected(nu, n - nu, rng.random_range(0.02..0.3), 2000 + trial);
        let alpha = [0.5, 0.85, 0.99][trial as usize % 3];
        let cfg = PprConfig {
            alpha,
            tol: 1e-12,
            ..PprConfig::default()
        };
        for _ in 0..5 {
            let seed = seed_vector(&g, &random_seeds(&g, &mut rng, 5)).unwrap();
            let ppr = ppr_iterate(&g, &cfg, &seed).unwrap();
            if !ppr.converged {
                unconverged += 1;
            }
            let exact = dmode_equivalent(&g, alpha, &seed).unwrap();
            worst = worst.max(exact.linf_distance(ppr.scores.values()));
        }
    }
    let t = start.elapsed();
    check(
        worst <= 1e-8 && unconverged == 0 && within(t, 30),
        format!("max L-inf gap = {worst:.2e} over 250 seed sets, {unconverged} unconverged, {t:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_identity, mut worst_faithful): (f64, f64) = (0.0, f64::NEG_INFINITY);
    let mut points = 0;
    for trial in 0..30 {
        let n = rng.random_range(2..=100);
        let nu = rng.random_range(1..n);
        let g = random_connected(nu, n - nu, rng.random_range(0.03..0.3), 3000 + trial);
        let spec = if trial % 2 == 0 {
            LambdaSpec::IMode {
                alpha: rng.random_range(0.005..0.5),
            }
        } else {
            LambdaSpec::DMode {
                beta: rng.random_range(0.005..0.5),
            }
        };
        let lam = lambda_vector(&g, &spec).unwrap();
        let seed = seed_vector(&g, &random_seeds(&g, &mut rng, 3)).unwrap();
        let gamma = [1e-8, 1e-5, 1e-3][trial as usize % 3];
        let exact = solve_exact(&g, &lam, &seed).unwrap();

        let full = aparw_push(&g, &lam, &seed, gamma, u64::MAX, PushMode::Conservative).unwrap();
        let full_f = aparw_push(&g, &lam, &seed, gamma, u64::MAX, PushMode::Faithful).unwrap();
        let full_sweep = aparw_sweep(&g, &lam, &seed, gamma, 10_000, Execution::Serial).unwrap();
        for _ in 0..10 {
            let budget = rng.random_range(0..=full.pushes);
            let st = aparw_push(&g, &lam, &seed, gamma, budget, PushMode::Conservative).unwrap();
            worst_identity = worst_identity.max((exact.l1_distance(&st.dry) - st.residual()).abs());

            let budget = rng.random_range(0..=full_f.pushes);
            let st = aparw_push(&g, &lam, &seed, gamma, budget, PushMode::Faithful).unwrap();
            worst_faithful = worst_faithful.max(exact.l1_distance(&st.dry) - st.residual() - st.dropped);

            let iters = rng.random_range(1..=full_sweep.iterations.max(1));
            let st = aparw_sweep(&g, &lam, &seed, gamma, iters, Execution::Serial).unwrap();
            worst_identity = worst_identity.max((exact.l1_distance(&st.dry) - st.residual()).abs());
            points += 1;
        }
    }
    let t = start.elapsed();
    check(
        worst_identity <= 1e-9 && worst_faithful <= 1e-9,
        format!(
            "{points} stopping points per mode: max identity gap = {worst_identity:.2e}, \
             max faithful excess = {worst_faithful:.2e}, {t:.2?}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let pairs = [
        ("U1", "A1"),
        ("U1", "A2"),
        ("U1", "A3"),
        ("U2", "A2"),
        ("U3", "A2"),
        ("U3", "A3"),
        ("U3", "A4"),
        ("U3", "A5"),
    ];
    let records: Vec<_> = pairs.iter().map(|(u, i)| InteractionRecord::new(*u, *i)).collect();
    let g = build_graph(&records).unwrap();
    let seed = seed_vector(&g, &[g.item_by_key("A2").unwrap()]).unwrap();
    let user = |k: &str| g.user_by_key(k).unwrap();
    let top = |r: &ScoreVector| {
        let ranking = rank_users(&g, r, &FilterRules::default()).unwrap();
        g.key(ranking.entries[0].user).to_owned()
    };
    let score = |r: &ScoreVector, k: &str| r.get(user(k));

    let i = solve_exact(
        &g,
        &lambda_vector(&g, &LambdaSpec::IMode { alpha: 0.01 }).unwrap(),
        &seed,
    )
    .unwrap();
    let d = solve_exact(
        &g,
        &lambda_vector(&g, &LambdaSpec::DMode { beta: 0.01 }).unwrap(),
        &seed,
    )
    .unwrap();
    let p = ppr_iterate(&g, &PprConfig::default(), &seed).unwrap().scores;
    let ok = top(&i) == "U2" && score(&d, "U3") > score(&d, "U2") && score(&p, "U3") > score(&p, "U2");
    check(
        ok,
        format!(
            "I-mode top user {} (U2 {:.5}, U3 {:.5}); D-mode U3 {:.5} vs U2 {:.5}; PPR U3 {:.5} vs U2 {:.5}",
            top(&i),
            score(&i, "U2"),
            score(&i, "U3"),
            score(&d, "U3"),
            score(&d, "U2"),
            score(&p, "U3"),
            score(&p, "U2")
        ),
    )
}

fn movielens_graph(dir: &Path) -> PathBuf {
    let graph = dir.join("ml-100k.graph");
    let summary = cmd_build(&movielens_path(), InputFormat::MovielensTab, None, &graph).unwrap();
    assert_eq!(summary, "users=943 items=1682 edges=100000");
    graph
}

fn criterion_5(dir: &Path, graph_path: &Path) -> Outcome {
    let start = Instant::now();
    let g = parw_cli::load_graph(graph_path).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let movies: Vec<usize> = sample(&mut rng, g.num_items(), 50).into_vec();
    let (mut higher, mut crossing) = (0, 0);
    for (t, m) in movies.iter().enumerate() {
        let seeds = dir.join(format!("seed-{t}"));
        fs::write(&seeds, g.key(VertexId::from_index(g.num_users() + m))).unwrap();
        let base = RunConfig {
            seeds: Some(seeds),
            ..RunConfig::default()
        };
        let ppr = RunConfig {
            algo: Algo::Ppr,
            ..base.clone()
        };
        let aparw = RunConfig {
            algo: Algo::ParwI,
            execution: Exec::Sweep,
            ..base
        };
        let a = run_ranking(&g, &ppr).unwrap();
        let b = run_ranking(&g, &aparw).unwrap();
        let cmp = compare_runs(&g, &a, &b, 100, Aggregation::Mean).unwrap();
        if cmp.a.values[0] > cmp.b.values[0] {
            higher += 1;
        }
        if cmp.a.values.iter().zip(&cmp.b.values).skip(1).any(|(x, y)| x < y) {
            crossing += 1;
        }
    }
    let t = start.elapsed();
    check(
        higher >= 40 && crossing >= 30 && within(t, 300),
        format!("PPR bucket-1 mean degree higher in {higher}/50, later crossing in {crossing}/50, {t:.2?}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = PlantedConfig::default();
    let mut wins = 0;
    let mut layout_ok = true;
    let (mut sum_i, mut sum_d) = (0.0, 0.0);
    for trial in 0..20u64 {
        let p = planted_community(&cfg, 600 + trial).unwrap();
        let g = &p.graph;
        let mut degrees: Vec<usize> = g.users().map(|u| g.degree(u)).collect();
        degrees.sort_unstable();
        let median = degrees[degrees.len() / 2];
        layout_ok &= g.num_vertices() <= 2000 && p.community_users.iter().all(|&u| g.degree(u) < median);

        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let seeds: Vec<VertexId> = sample(&mut rng, p.community_items.len(), 3)
            .into_iter()
            .map(|k| p.community_items[k])
            .collect();
        let seed = seed_vector(g, &seeds).unwrap();
        let log = simulate_feedback(g, &p.community_users, 0.6, 0.05, 900 + trial).unwrap();
        let clicked: std::collections::HashSet<&str> = log.users_with(Event::Clicked).collect();
        let auc_of = |spec: LambdaSpec| {
            let r = solve_exact(g, &lambda_vector(g, &spec).unwrap(), &seed).unwrap();
            let samples: Vec<(f64, bool)> = g.users().map(|u| (r.get(u), clicked.contains(g.key(u)))).collect();
            auc(&samples).unwrap()
        };
        let ai = auc_of(LambdaSpec::IMode { alpha: 0.01 });
        let ad = auc_of(LambdaSpec::DMode { beta: 0.01 });
        sum_i += ai;
        sum_d += ad;
        if ai >= ad {
            wins += 1;
        }
    }
    let t = start.elapsed();
    check(
        layout_ok && wins >= 16 && within(t, 120),
        format!(
            "I-mode AUC >= D-mode AUC in {wins}/20 (mean {:.3} vs {:.3}), community below median degree: {layout_ok}, {t:.2?}",
            sum_i / 20.0,
            sum_d / 20.0
        ),
    )
}

fn criterion_7(graph_path: &Path) -> Outcome {
    let g = parw_cli::load_graph(graph_path).unwrap();
    let lam = lambda_vector(&g, &LambdaSpec::IMode { alpha: DEFAULT_ALPHA }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut items: Vec<VertexId> = sample(&mut rng, g.num_items(), 8)
        .into_iter()
        .map(|k| VertexId::from_index(g.num_users() + k))
        .collect();
    // the most and least connected movies as well
    items.push(g.items().max_by_key(|&i| g.degree(i)).unwrap());
    items.push(g.items().min_by_key(|&i| g.degree(i)).unwrap());

    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for item in &items {
        let start = Instant::now();
        let seed = seed_vector(&g, &[*item]).unwrap();
        let st = aparw_sweep(&g, &lam, &seed, DEFAULT_GAMMA, DEFAULT_SWEEP_ITERS, Execution::Parallel).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let trace = &st.residual_trace;
        let decreasing = trace.len() >= 5 && trace[..5].windows(2).all(|w| w[1] < w[0]);
        if st.iterations > DEFAULT_SWEEP_ITERS || !decreasing || !within(elapsed, 30) {
            failures.push(g.key(*item).to_owned());
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} seeds, supersteps <= {DEFAULT_SWEEP_ITERS}, residual strictly decreasing over first 5; failures {:?}; slowest {slowest:.2?}",
            items.len(),
            failures
        ),
    )
}

fn criterion_8(dir: &Path, graph_path: &Path) -> Outcome {
    let seeds = dir.join("det-seeds");
    fs::write(&seeds, "50 181\n").unwrap();
    let mut files = Vec::new();
    for threads in [Threads::Serial, Threads::Parallel] {
        for run in 0..2 {
            let out = dir.join(format!("det-{threads:?}-{run}.tsv"));
            let cfg = RunConfig {
                graph: Some(graph_path.to_owned()),
                seeds: Some(seeds.clone()),
                threads,
                rng_seed: Some(42),
                out: Some(out.clone()),
                ..RunConfig::default()
            };
            cmd_rank(&cfg).unwrap();
            files.push(fs::read(out).unwrap());
        }
    }
    let serial_stable = files[0] == files[1];
    let parallel_stable = files[2] == files[3];
    let across = files[0] == files[2];
    check(
        serial_stable && parallel_stable && across,
        format!(
            "serial repeat identical: {serial_stable}, parallel repeat identical: {parallel_stable}, \
             serial == parallel: {across} ({} bytes)",
            files[0].len()
        ),
    )
}

fn main() -> ExitCode {
    let dir = TempDir::new().unwrap();
    let graph = movielens_graph(dir.path());
    let results = [
        ("1 oracle normalization", criterion_1()),
        ("2 PPR equals D-mode", criterion_2()),
        ("3 residual identity", criterion_3()),
        ("4 toy graph ordering", criterion_4()),
        ("5 MovieLens degree-profile crossing", criterion_5(dir.path(), &graph)),
        ("6 planted-community AUC", criterion_6()),
        ("7 default sweep convergence", criterion_7(&graph)),
        ("8 ranking determinism", criterion_8(dir.path(), &graph)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} ({})", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
