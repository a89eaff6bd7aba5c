use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use planted_clique::bundle::Bundle;
use planted_clique::hardness::{
    algrand, count_xh, expected_xh, is_balanced, named_graph, plan, plant_h_with_is, reduce_3regular, AlgrandParams,
    PlanInput,
};
use planted_clique::oracle::max_is_exact;
use planted_clique::recovery::{recover_theta, RecoveryParams};
use serde_json::json;

use crate::output::{print_json, read_bundle, with_schema, write_text, CliError};

#[derive(Args, Debug)]
pub struct HardnessArgs {
    #[command(subcommand)]
    pub action: Action,
}

#[derive(Subcommand, Debug)]
pub enum Action {
    /// Subdivide every edge of a cubic graph into a path through 2t vertices.
    Reduce {
        /// k4, prism, k33, petersen.
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Write the gadget bundle here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plant a partition-obeying copy of a gadget plus an independent set.
    PlantH {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// k4, diamond, prism, k33, petersen, edgeless:M, cycle:M, complete:M.
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        k_prime: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count partition-obeying copies in a plant-h bundle.
    CountXh {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Repeated planting with an independent-set solver.
    Algrand {
        #[arg(long)]
        h: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        k_prime: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "oracle")]
        recover: RecoverFn,
    },
    /// Admissible parameters of the copy-counting bounds at a given n.
    Plan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 5.0)]
        k_const: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecoverFn {
    /// Exact maximum independent set (small n).
    Oracle,
    /// Theta pipeline on the complement.
    Theta,
}

pub fn run(a: HardnessArgs) -> Result<(), CliError> {
    let out = match a.action {
        Action::Reduce { h, t, out } => {
            let r = reduce_3regular(&named_graph(&h)?, t)?;
            if out.is_some() {
                write_text(out.as_deref(), &Bundle::from_reduction(&r)?.to_string()?)?;
            }
            let mut v = with_schema("planted-clique/reduction/1", &r)?;
            v["h"] = json!(h);
            v["balanced"] = json!(is_balanced(&r.gadget));
            v
        }
        Action::PlantH {
            n,
            p,
            h,
            k,
            k_prime,
            seed,
            out,
        } => {
            let inst = plant_h_with_is(n, p, &named_graph(&h)?, k, k_prime, seed)?;
            let bundle = Bundle::from_planted_h(&inst)?;
            if out.is_some() {
                write_text(out.as_deref(), &bundle.to_string()?)?;
            }
            with_schema("planted-clique/plant-h/1", &inst)?
        }
        Action::CountXh { input } => {
            let inst = read_bundle(&input)?.to_planted_h()?;
            let count = count_xh(&inst.graph, &inst.h, inst.partition)?;
            let expected = expected_xh(inst.graph.n(), &inst.h, inst.params.p);
            with_schema(
                "planted-clique/count-xh/1",
                &json!({ "count": count, "expected": expected, "likelihood_ratio": count as f64 / expected }),
            )?
        }
        Action::Algrand {
            h,
            n,
            p,
            k,
            k_prime,
            gamma,
            seed,
            recover,
        } => {
            let hg = named_graph(&h)?;
            let params = AlgrandParams {
                n,
                p,
                k,
                k_prime,
                gamma,
                seed,
            };
            let transcript = match recover {
                RecoverFn::Oracle => algrand(&hg, params, |g, _| max_is_exact(g).ok())?,
                RecoverFn::Theta => {
                    let rp = RecoveryParams::new(n, 1.0 - p)?;
                    algrand(&hg, params, |g, k| recover_theta(&g.complement(), k, &rp).ok().map(|r| r.clique))?
                }
            };
            let mut v = serde_json::to_value(&transcript)?;
            v["h"] = json!(h);
            v
        }
        Action::Plan {
            n,
            delta,
            epsilon,
            k_const,
        } => with_schema(
            "planted-clique/plan/1",
            &plan(PlanInput {
                n,
                delta,
                epsilon,
                k_const,
            })?,
        )?,
    };
    print_json(&out)
}
