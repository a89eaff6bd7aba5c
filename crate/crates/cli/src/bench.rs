use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use planted_clique::randgen::{generate, GenParams, PlantKind};
use planted_clique::rng::trial_seed;
use rayon::prelude::*;

use crate::commands::{run_algorithm, AlgoArg, AlgoOptions, FillArg, StrategyArg};
use crate::output::{write_text, CliError};

pub const THREADS_ENV: &str = "PLANTED_CLIQUE_THREADS";

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "random")]
    pub strategy: Vec<StrategyArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "theta")]
    pub algo: Vec<AlgoArg>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Worker threads; the PLANTED_CLIQUE_THREADS variable takes precedence.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    #[arg(long, default_value_t = 5)]
    pub t_size: usize,
    #[arg(long, value_enum, default_value = "greedy")]
    pub fill: FillArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub opts: AlgoOptions,
}

#[derive(Clone, Copy)]
struct Trial {
    n: usize,
    p: f64,
    k: usize,
    strategy: StrategyArg,
    algo: AlgoArg,
    trial: u64,
    seed: u64,
}

pub const HEADER: &str = "n,p,k,strategy,algo,trial,seed,success,clique_size,theta_value,wall_ms,error";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_trial(t: Trial, a: &BenchArgs) -> String {
    let start = Instant::now();
    let result = GenParams::new(t.n, t.p, t.k, t.seed)
        .and_then(|params| generate(&params, &t.strategy.to_strategy(a.t_size, a.fill)))
        .and_then(|inst| {
            let independent = inst.kind() == PlantKind::IndependentSet;
            run_algorithm(&inst.planted_graph, t.k, t.p, independent, t.algo, &a.opts)
        });
    let wall = start.elapsed().as_millis();
    let (success, size, theta, err) = match result {
        Ok(o) => (o.verified, o.clique.len().to_string(), o.theta_value.map(|v| format!("{v:.6}")).unwrap_or_default(), String::new()),
        Err(e) => (false, String::new(), String::new(), csv_field(&e.to_string())),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        t.n,
        t.p,
        t.k,
        t.strategy.name(),
        t.algo.name(),
        t.trial,
        t.seed,
        success,
        size,
        theta,
        wall,
        err
    )
}

fn thread_count(jobs: Option<usize>) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::input(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(jobs.unwrap_or(0)),
    }
}

/// Every grid point gets the same trial seeds, so algorithms and strategies
/// are compared on the same base graphs.
pub fn run(a: BenchArgs) -> Result<(), CliError> {
    let mut trials = Vec::new();
    for &n in &a.n {
        for &p in &a.p {
            for &k in &a.k {
                for &strategy in &a.strategy {
                    for &algo in &a.algo {
                        for trial in 0..a.trials {
                            trials.push(Trial {
                                n,
                                p,
                                k,
                                strategy,
                                algo,
                                trial,
                                seed: trial_seed(a.master_seed, trial),
                            });
                        }
                    }
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(a.jobs)?)
        .build()
        .map_err(|e| CliError::input(e.to_string()))?;
    let rows: Vec<String> = pool.install(|| trials.par_iter().map(|&t| run_trial(t, &a)).collect());
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    write_text(a.out.as_deref(), &out)
}
