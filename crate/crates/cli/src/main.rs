use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use parw_cli::{
    cmd_build, cmd_compare, cmd_eval, cmd_rank, cmd_simulate, emit, format_curve, Algo, EvalMode, EvalOutput, Exec,
    RunConfig, Threads,
};
use parw_core::eval::{Aggregation, Outcome};
use parw_core::ingest::InputFormat;

#[derive(Parser)]
#[command(
    name = "parw",
    version,
    about = "Rank users for push campaigns with absorbing random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph file from an interaction log.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// edge_tsv, movielens_tab or movielens_double_colon
        #[arg(long, default_value = "edge_tsv")]
        format: InputFormat,
        /// Preprocessing rules as key=value lines.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank users for a seed item set.
    Rank {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare the degree profiles of two rankings on one graph.
    Compare {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        /// Overrides the graph of both configurations.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Overrides the seeds of both configurations.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long)]
        filters: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        buckets: usize,
        /// mean or sum
        #[arg(long, default_value = "mean")]
        agg: String,
        /// Output prefix for `.a.csv`, `.b.csv` and `.summary`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a ranking against a feedback log.
    Eval {
        #[arg(long)]
        ranking: Option<PathBuf>,
        #[arg(long)]
        feedback: PathBuf,
        /// auc, ctr, dtr or tendency
        #[arg(long)]
        mode: EvalMode,
        /// click or download
        #[arg(long, default_value = "click")]
        event: String,
        #[arg(long, default_value_t = 100)]
        bucket_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic feedback log for a known community of users.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// User keys of the community, whitespace separated.
        #[arg(long)]
        community: PathBuf,
        #[arg(long, default_value_t = 0.6)]
        p_in: f64,
        #[arg(long, default_value_t = 0.05)]
        p_out: f64,
        #[arg(long)]
        rng_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key=value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    /// parw_i, parw_d or ppr
    #[arg(long)]
    algo: Option<Algo>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    /// exact, push_conservative, push_faithful or sweep
    #[arg(long)]
    exec: Option<Exec>,
    /// serial or parallel sweep supersteps
    #[arg(long)]
    threads: Option<Threads>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long)]
    filters: Option<PathBuf>,
    /// Comma-separated user flags that exclude a user.
    #[arg(long)]
    exclude: Option<String>,
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the full score vector here.
    #[arg(long)]
    scores: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.graph {
            cfg.graph = Some(v);
        }
        if let Some(v) = self.algo {
            cfg.algo = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = Some(v);
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.exec {
            cfg.execution = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = self.budget {
            cfg.budget = Some(v);
        }
        if let Some(v) = self.seeds {
            cfg.seeds = Some(v);
        }
        if let Some(v) = self.filters {
            cfg.filters = Some(v);
        }
        if let Some(v) = self.exclude {
            cfg.set("exclude", &v, "".as_ref())?;
        }
        if let Some(v) = self.rng_seed {
            cfg.rng_seed = Some(v);
        }
        if let Some(v) = self.out {
            cfg.out = Some(v);
        }
        if let Some(v) = self.scores {
            cfg.scores_out = Some(v);
        }
        Ok(cfg)
    }
}

fn outcome(event: &str) -> Result<Outcome> {
    match event {
        "click" => Ok(Outcome::Click),
        "download" => Ok(Outcome::Download),
        _ => Err(anyhow!("unknown event '{event}' (expected click or download)")),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            input,
            format,
            rules,
            out,
        } => {
            println!("{}", cmd_build(&input, format, rules.as_deref(), &out)?);
        }
        Command::Rank { run } => {
            let cfg = run.into_config()?;
            let r = cmd_rank(&cfg)?;
            eprintln!("ranked {} users ({} filtered)", r.ranking.len(), r.ranking.filtered_out);
        }
        Command::Compare {
            config_a,
            config_b,
            graph,
            seeds,
            filters,
            buckets,
            agg,
            out,
        } => {
            let agg = match agg.as_str() {
                "mean" => Aggregation::Mean,
                "sum" => Aggregation::Sum,
                _ => return Err(anyhow!("unknown aggregation '{agg}' (expected mean or sum)")),
            };
            let mut a = RunConfig::load(&config_a)?;
            let mut b = RunConfig::load(&config_b)?;
            for cfg in [&mut a, &mut b] {
                if let Some(g) = &graph {
                    cfg.graph = Some(g.clone());
                }
                if let Some(s) = &seeds {
                    cfg.seeds = Some(s.clone());
                }
                if let Some(f) = &filters {
                    cfg.filters = Some(f.clone());
                }
            }
            print!("{}", cmd_compare(&a, &b, buckets, agg, &out)?);
        }
        Command::Eval {
            ranking,
            feedback,
            mode,
            event,
            bucket_size,
            out,
        } => match cmd_eval(ranking.as_deref(), &feedback, mode, outcome(&event)?, bucket_size)? {
            EvalOutput::Value(v) => emit(out.as_deref(), &format!("{v}\n"))?,
            EvalOutput::Curve(curve) => {
                if curve.is_empty() {
                    eprintln!("warning: bucket size {bucket_size} exceeds the ranking; the curve is empty");
                }
                emit(out.as_deref(), &format_curve(&curve)?)?;
            }
        },
        Command::Simulate {
            graph,
            community,
            p_in,
            p_out,
            rng_seed,
            out,
        } => {
            let n = cmd_simulate(&graph, &community, p_in, p_out, rng_seed, &out)?;
            eprintln!("wrote {n} events");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
