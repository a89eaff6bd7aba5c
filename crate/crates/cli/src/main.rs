//! `planted-clique`: generate instances, run the recovery algorithms, check
//! certificates and drive the hardness experiments from the shell.
//!
//! Exit codes: 0 success, 2 bad input or parameters, 3 result not verified,
//! 4 algorithm error, 5 theta solver did not converge.

mod bench;
mod commands;
mod hardness;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::CliError;

#[derive(Parser, Debug)]
#[command(name = "planted-clique", version, about = "Planted clique generation, recovery and certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a graph, plant a clique or independent set and write the bundle.
    Gen(commands::GenArgs),
    /// Recover the planted clique (or independent set) from a graph.
    Recover(commands::RecoverArgs),
    /// Solve the theta program of a graph.
    Theta(commands::ThetaArgs),
    /// Build and check the spectral certificate of a planted instance.
    Certify(commands::CertifyArgs),
    /// Reduction gadgets, gadget planting and the repetition loop.
    Hardness(hardness::HardnessArgs),
    /// Sweep parameter grids and write one CSV row per trial.
    Bench(bench::BenchArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Recover(a) => commands::recover(a),
        Command::Theta(a) => commands::theta(a),
        Command::Certify(a) => commands::certify(a),
        Command::Hardness(a) => hardness::run(a),
        Command::Bench(a) => bench::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // also governs the parallel loops inside the library
    if let Ok(v) = std::env::var(bench::THREADS_ENV) {
        if let Ok(t) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
