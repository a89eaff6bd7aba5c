use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use planted_clique::bundle::{Bundle, BundleKind};
use planted_clique::certificate::{certify as build_and_verify, empirical_varbound, write_certificate, VARBOUND_SLACK};
use planted_clique::enumeration::recover_sparse;
use planted_clique::oracle::{ground_truth_max_clique, max_clique_exact};
use planted_clique::randgen::{generate, Adversary, GenParams, NeighborhoodFill, PlantKind, PlantedInstance, Strategy};
use planted_clique::recovery::{recover_guessing, recover_high_degree, recover_high_degree_independent, recover_theta, RecoveryParams};
use planted_clique::theta::{theta as solve_theta, SolveStatus, SolverConfig};
use planted_clique::{Graph, VertexSet};
use serde_json::{json, Value};

use crate::output::{print_json, read_bundle, with_schema, write_text, CliError, EXIT_NOT_CONVERGED, EXIT_UNVERIFIED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Random,
    CommonNeighborhood,
    LowDegree,
    IsRandom,
    IsLowDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FillArg {
    Strict,
    Greedy,
}

impl StrategyArg {
    pub fn to_strategy(self, t_size: usize, fill: FillArg) -> Strategy {
        match self {
            StrategyArg::Random => Strategy::Random,
            StrategyArg::CommonNeighborhood => Strategy::CommonNeighborhood {
                t_size,
                fill: match fill {
                    FillArg::Strict => NeighborhoodFill::Strict,
                    FillArg::Greedy => NeighborhoodFill::Greedy,
                },
            },
            StrategyArg::LowDegree => Strategy::LowDegree,
            StrategyArg::IsRandom => Strategy::IsRandom,
            StrategyArg::IsLowDegree => Strategy::IsLowDegree,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyArg::Random => "random",
            StrategyArg::CommonNeighborhood => "common-neighborhood",
            StrategyArg::LowDegree => "low-degree",
            StrategyArg::IsRandom => "is-random",
            StrategyArg::IsLowDegree => "is-low-degree",
        }
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "random")]
    pub strategy: StrategyArg,
    /// Helper-set size of the common-neighborhood adversary.
    #[arg(long, default_value_t = 5)]
    pub t_size: usize,
    /// What the common-neighborhood adversary does when `N*(T)` is too small.
    #[arg(long, value_enum, default_value = "strict")]
    pub fill: FillArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen(a: GenArgs) -> Result<(), CliError> {
    let params = GenParams::new(a.n, a.p, a.k, a.seed)?;
    let inst = generate(&params, &a.strategy.to_strategy(a.t_size, a.fill))?;
    write_text(a.out.as_deref(), &Bundle::from_instance(&inst).to_string()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Theta,
    Guess,
    HighDegree,
    Enumerate,
}

impl AlgoArg {
    pub fn name(self) -> &'static str {
        match self {
            AlgoArg::Theta => "theta",
            AlgoArg::Guess => "guess",
            AlgoArg::HighDegree => "high-degree",
            AlgoArg::Enumerate => "enumerate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyArg {
    Oracle,
    GroundTruth,
    None,
}

/// Solver knobs shared by `recover` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct AlgoOptions {
    /// Theta solver tolerance.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Clique-size parameter T of the enumeration algorithm.
    #[arg(long, default_value_t = 3)]
    pub t_param: u32,
    /// Subset size for guessing, overriding the formula (at most 8).
    #[arg(long)]
    pub s_guess: Option<usize>,
    /// Stop guessing after this many subsets.
    #[arg(long)]
    pub guess_budget: Option<u64>,
    #[arg(long)]
    pub depth_cap: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Bundle, edge list or DIMACS file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target size; defaults to the planted size recorded in the bundle.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "none")]
    pub verify: VerifyArg,
    /// Edge probability; defaults to the bundle's, else the edge density.
    #[arg(long)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub opts: AlgoOptions,
}

pub struct Outcome {
    pub report: Value,
    pub clique: VertexSet,
    pub verified: bool,
    pub theta_value: Option<f64>,
}

fn edge_density(g: &Graph) -> f64 {
    let n = g.n();
    if n < 2 {
        return 0.5;
    }
    (g.edge_count() as f64 / (n * (n - 1) / 2) as f64).clamp(1e-3, 0.999)
}

/// Runs one algorithm. For a planted independent set the clique algorithms
/// run on the complement.
pub fn run_algorithm(g: &Graph, k: usize, p: f64, independent: bool, algo: AlgoArg, opts: &AlgoOptions) -> planted_clique::Result<Outcome> {
    let work_p = if independent { 1.0 - p } else { p };
    let mut params = RecoveryParams::new(g.n(), work_p)?;
    if let Some(eps) = opts.eps {
        params.theta_cfg.eps = eps;
    }
    if let Some(m) = opts.max_iters {
        params.theta_cfg.max_iters = m;
    }
    if let Some(s) = opts.s_guess {
        params.s_guess = s;
    }
    params.guess_budget = opts.guess_budget;
    if let Some(d) = opts.depth_cap {
        params.branch_depth_cap = d;
    }
    let complement;
    let work = if independent && algo != AlgoArg::HighDegree {
        complement = g.complement();
        &complement
    } else {
        g
    };
    let (report, clique, verified, theta_value) = match algo {
        AlgoArg::Theta | AlgoArg::Guess | AlgoArg::HighDegree => {
            let r = match algo {
                AlgoArg::Theta => recover_theta(work, k, &params)?,
                AlgoArg::Guess => recover_guessing(work, k, &params)?,
                _ if independent => recover_high_degree_independent(work, k, &params)?,
                _ => recover_high_degree(work, k, &params)?,
            };
            (serde_json::to_value(&r)?, r.clique, r.verified, r.theta_value)
        }
        AlgoArg::Enumerate => {
            let r = recover_sparse(work, k, opts.t_param, work_p)?;
            let clique = r.enumeration.max_clique.clone();
            (serde_json::to_value(&r)?, clique, r.verified, None)
        }
    };
    Ok(Outcome {
        report,
        clique,
        verified,
        theta_value,
    })
}

/// The same instance seen through the complement, so that a planted
/// independent set becomes a planted clique.
pub fn complement_instance(inst: &PlantedInstance) -> PlantedInstance {
    let strategy = match inst.adversary.strategy {
        Strategy::IsRandom => Strategy::Random,
        Strategy::IsLowDegree => Strategy::LowDegree,
        s => s,
    };
    PlantedInstance {
        base: inst.base.complement(),
        planted_graph: inst.planted_graph.complement(),
        planted: inst.planted.clone(),
        params: GenParams {
            p: 1.0 - inst.params.p,
            ..inst.params
        },
        adversary: Adversary {
            strategy,
            ..inst.adversary.clone()
        },
    }
}

fn is_independent_bundle(b: &Bundle) -> bool {
    b.header
        .as_ref()
        .and_then(|h| h.adversary.as_ref())
        .is_some_and(|a| a.strategy.kind() == PlantKind::IndependentSet)
}

pub fn recover(a: RecoverArgs) -> Result<(), CliError> {
    let bundle = read_bundle(&a.input)?;
    let g = &bundle.graph;
    let independent = is_independent_bundle(&bundle);
    let header_params = bundle.header.as_ref().and_then(|h| h.params);
    let k = a
        .k
        .or(header_params.map(|p| p.k))
        .ok_or_else(|| CliError::input("--k is required for inputs without a planted-instance header"))?;
    let p = a.p.or(header_params.map(|p| p.p)).unwrap_or_else(|| edge_density(g));
    let outcome = run_algorithm(g, k, p, independent, a.algo, &a.opts)?;
    let mut report = outcome.report;
    let mut verified = outcome.verified;
    match a.verify {
        VerifyArg::None => {}
        VerifyArg::Oracle => {
            let target = if independent { g.complement() } else { g.clone() };
            let best = max_clique_exact(&target)?;
            let matches = outcome.clique.len() == best.len();
            verified &= matches;
            report["oracle"] = json!({ "omega": best.len(), "matches": matches });
        }
        VerifyArg::GroundTruth => {
            let inst = bundle.to_instance()?;
            let inst = if independent { complement_instance(&inst) } else { inst };
            let truth = ground_truth_max_clique(&inst)?;
            let equal = truth.clique == outcome.clique;
            verified &= equal;
            report["ground_truth"] = json!({
                "size": truth.clique.len(),
                "equal": equal,
                "same_size": truth.clique.len() == outcome.clique.len(),
                "contains_planted": inst.planted.is_subset(&outcome.clique),
                "in_regime": truth.in_regime,
            });
        }
    }
    report["verified"] = Value::Bool(verified);
    print_json(&with_schema("planted-clique/recovery/1", &report)?)?;
    if verified {
        Ok(())
    } else {
        Err(CliError::silent(EXIT_UNVERIFIED))
    }
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Solve for the complement of the input graph.
    #[arg(long)]
    pub complement: bool,
    #[arg(long, default_value_t = 1e-5)]
    pub eps: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iters: usize,
    /// Per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Final primal matrix as little-endian f64, row-major.
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
}

pub fn theta(a: ThetaArgs) -> Result<(), CliError> {
    let bundle = read_bundle(&a.input)?;
    let g = if a.complement { bundle.graph.complement() } else { bundle.graph };
    let cfg = SolverConfig {
        eps: a.eps,
        max_iters: a.max_iters,
        trace: a.trace.is_some(),
        ..SolverConfig::default()
    };
    let sol = solve_theta(&g, &cfg)?;
    if let Some(path) = &a.trace {
        sol.write_trace_csv(BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &a.dump_matrix {
        sol.write_matrix(BufWriter::new(File::create(path)?))?;
    }
    print_json(&with_schema("planted-clique/theta/1", &sol)?)?;
    match sol.status {
        SolveStatus::Converged => Ok(()),
        SolveStatus::MaxIters => Err(CliError {
            code: EXIT_NOT_CONVERGED,
            message: format!("theta solver stopped after {} iterations, best value {}", sol.iterations, sol.value),
        }),
        SolveStatus::InfeasibleInput => Err(CliError::input("theta of an empty graph is undefined")),
    }
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Planted-instance bundle.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Certificate matrix as little-endian f64, row-major.
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
}

pub fn certify(a: CertifyArgs) -> Result<(), CliError> {
    let bundle = read_bundle(&a.input)?;
    if bundle.header.as_ref().map(|h| h.kind) != Some(BundleKind::Planted) {
        return Err(CliError::input("certify needs a planted-instance bundle with ground truth"));
    }
    let inst = bundle.to_instance()?;
    if inst.kind() != PlantKind::Clique {
        return Err(CliError::input("certify needs a planted clique"));
    }
    let (report, m) = build_and_verify(&inst)?;
    if let Some(path) = &a.dump_matrix {
        write_certificate(&m, BufWriter::new(File::create(path)?))?;
    }
    let varbound = empirical_varbound(&inst, VARBOUND_SLACK);
    let out = json!({ "certificate": report, "varbound": varbound });
    print_json(&with_schema("planted-clique/certificate/1", &out)?)?;
    if report.valid {
        Ok(())
    } else {
        Err(CliError::silent(EXIT_UNVERIFIED))
    }
}
