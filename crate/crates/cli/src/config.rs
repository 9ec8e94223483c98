//! Run configuration: flat `key=value` files, overridable from the command line.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use parw_core::solver::{Execution, DEFAULT_ALPHA, DEFAULT_GAMMA, DEFAULT_SWEEP_ITERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algo {
    #[default]
    ParwI,
    ParwD,
    Ppr,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::ParwI => "parw_i",
            Algo::ParwD => "parw_d",
            Algo::Ppr => "ppr",
        }
    }

    /// `alpha` when none is configured. For `ppr` it is the decay factor.
    pub fn default_alpha(self) -> f64 {
        match self {
            Algo::Ppr => 0.99,
            _ => DEFAULT_ALPHA,
        }
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "parw_i" => Ok(Algo::ParwI),
            "parw_d" => Ok(Algo::ParwD),
            "ppr" => Ok(Algo::Ppr),
            _ => Err(format!("unknown algorithm '{s}' (expected parw_i, parw_d or ppr)")),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Exact,
    PushConservative,
    PushFaithful,
    #[default]
    Sweep,
}

impl Exec {
    pub fn as_str(self) -> &'static str {
        match self {
            Exec::Exact => "exact",
            Exec::PushConservative => "push_conservative",
            Exec::PushFaithful => "push_faithful",
            Exec::Sweep => "sweep",
        }
    }
}

impl FromStr for Exec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Exec::Exact),
            "push_conservative" => Ok(Exec::PushConservative),
            "push_faithful" => Ok(Exec::PushFaithful),
            "sweep" => Ok(Exec::Sweep),
            _ => Err(format!(
                "unknown execution '{s}' (expected exact, push_conservative, push_faithful or sweep)"
            )),
        }
    }
}

impl fmt::Display for Exec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    #[default]
    Serial,
    Parallel,
}

impl Threads {
    pub fn execution(self) -> Execution {
        match self {
            Threads::Serial => Execution::Serial,
            Threads::Parallel => Execution::Parallel,
        }
    }
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "serial" => Ok(Threads::Serial),
            "parallel" => Ok(Threads::Parallel),
            _ => Err(format!("unknown thread mode '{s}' (expected serial or parallel)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: Option<PathBuf>,
    pub algo: Algo,
    /// Absorption rate for `parw_i`, degree coefficient for `parw_d`, decay for `ppr`.
    pub alpha: Option<f64>,
    pub gamma: f64,
    /// Superstep cap for `sweep`.
    pub max_iters: usize,
    pub execution: Exec,
    pub threads: Threads,
    /// Push operation cap for the queue-based modes.
    pub budget: Option<u64>,
    pub seeds: Option<PathBuf>,
    pub filters: Option<PathBuf>,
    pub exclude: Vec<String>,
    pub out: Option<PathBuf>,
    pub scores_out: Option<PathBuf>,
    pub rng_seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            graph: None,
            algo: Algo::default(),
            alpha: None,
            gamma: DEFAULT_GAMMA,
            max_iters: DEFAULT_SWEEP_ITERS,
            execution: Exec::default(),
            threads: Threads::default(),
            budget: None,
            seeds: None,
            filters: None,
            exclude: vec!["push_disabled".to_owned()],
            out: None,
            scores_out: None,
            rng_seed: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| anyhow!("bad value for {key}: {e}"))
}

impl RunConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or_else(|| self.algo.default_alpha())
    }

    /// Sets one configuration key. Relative paths are resolved against `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || base.join(value);
        match key {
            "graph" => self.graph = Some(path()),
            "algo" | "algorithm" => self.algo = parse(key, value)?,
            "alpha" => self.alpha = Some(parse(key, value)?),
            "gamma" => self.gamma = parse(key, value)?,
            "iters" | "max_iters" => self.max_iters = parse(key, value)?,
            "exec" | "execution" => self.execution = parse(key, value)?,
            "threads" => self.threads = parse(key, value)?,
            "budget" => self.budget = Some(parse(key, value)?),
            "seeds" => self.seeds = Some(path()),
            "filters" => self.filters = Some(path()),
            "exclude" => {
                self.exclude = value
                    .split(',')
                    .map(str::trim)
                    .filter(|f| !f.is_empty())
                    .map(str::to_owned)
                    .collect()
            }
            "out" | "output" => self.out = Some(path()),
            "scores" => self.scores_out = Some(path()),
            "rng_seed" => self.rng_seed = Some(parse(key, value)?),
            _ => bail!("unknown configuration key '{key}'"),
        }
        Ok(())
    }

    pub fn parse_str(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", idx + 1))?;
            cfg.set(key.trim(), value.trim(), base)
                .with_context(|| format!("line {}", idx + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::parse_str(&text, base).with_context(|| format!("in config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.alpha(), 0.01);
        assert_eq!(cfg.gamma, 1e-8);
        assert_eq!(cfg.max_iters, 20);
        assert_eq!(cfg.execution, Exec::Sweep);
        let ppr = RunConfig {
            algo: Algo::Ppr,
            ..RunConfig::default()
        };
        assert_eq!(ppr.alpha(), 0.99);
    }

    #[test]
    fn key_value_file() {
        let text = "# ranking run\nalgo = parw_d\nalpha=0.5\nexec=exact\nseeds=seeds.txt\nexclude=a, b\n";
        let cfg = RunConfig::parse_str(text, Path::new("/tmp/run")).unwrap();
        assert_eq!(cfg.algo, Algo::ParwD);
        assert_eq!(cfg.alpha(), 0.5);
        assert_eq!(cfg.execution, Exec::Exact);
        assert_eq!(cfg.seeds.as_deref(), Some(Path::new("/tmp/run/seeds.txt")));
        assert_eq!(cfg.exclude, vec!["a", "b"]);
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(RunConfig::parse_str("colour=red", Path::new("")).is_err());
        assert!(RunConfig::parse_str("algo=pagerank", Path::new("")).is_err());
        assert!(RunConfig::parse_str("just words", Path::new("")).is_err());
    }
}
