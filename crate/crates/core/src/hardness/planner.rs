//! Which `(m, alpha, rho)` the copy-counting bounds admit at a given `n`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanInput {
    pub n: usize,
    /// Edge probability is `n^(delta - 1)`.
    pub delta: f64,
    pub epsilon: f64,
    /// Constant in the lower end `c n^(1-delta) ln n` of the admissible `k` range.
    pub k_const: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Plan {
    pub input: PlanInput,
    pub p: f64,
    /// Smallest subdivision `t` whose gadget density stays below `2/(1-delta)`.
    pub t: usize,
    pub alpha: f64,
    pub alpha_limit: f64,
    pub rho_max: f64,
    pub rho: f64,
    pub m_real: f64,
    pub m: usize,
    /// `epsilon >= m^2 p`.
    pub copy_density_ok: bool,
    /// `epsilon^2 >= C m^4 / (n^2 p^alpha)` with `C = 1`.
    pub copy_variance_ok_c1: bool,
    /// The same with `C = 2`; the verdict uses this one.
    pub copy_variance_ok_c2: bool,
    pub k_min: f64,
    pub k_max: f64,
    pub feasible: bool,
}

pub fn plan(input: PlanInput) -> Result<Plan> {
    let PlanInput { n, delta, epsilon, k_const } = input;
    if n < 2 || !(delta > 0.0 && delta < 1.0) || !(epsilon > 0.0 && epsilon < 1.0) || !(k_const > 0.0) {
        return Err(Error::InvalidParameter(
            "planner needs n >= 2, delta and epsilon in (0,1), k_const > 0".into(),
        ));
    }
    let nf = n as f64;
    let p = nf.powf(delta - 1.0);
    let alpha_limit = 2.0 / (1.0 - delta);
    // density (6t+3)/(3t+1) = 2 + 1/(3t+1)
    let t = ((1.0 / (alpha_limit - 2.0) - 1.0) / 3.0).floor().max(0.0) as usize + 1;
    let alpha = 2.0 + 1.0 / (3 * t + 1) as f64;
    debug_assert!(alpha < alpha_limit);
    let slack = 2.0 - alpha * (1.0 - delta);
    let rho_max = ((1.0 - delta) / 2.0).min(slack / 4.0);
    let rho = rho_max / 2.0;
    let m_real = epsilon.sqrt() * nf.powf((1.0 - delta) / 2.0).min(nf.powf(slack / 4.0));
    let m = m_real.floor() as usize;
    let mf = m as f64;
    let copy_density_ok = epsilon >= mf * mf * p;
    let variance = mf.powi(4) / (nf * nf * p.powf(alpha));
    let copy_variance_ok_c1 = epsilon * epsilon >= variance;
    let copy_variance_ok_c2 = epsilon * epsilon >= 2.0 * variance;
    let k_min = k_const * nf.powf(1.0 - delta) * nf.ln();
    let k_max = nf - 2.0 * nf.powf(delta + rho);
    let feasible = m >= 4 && copy_density_ok && copy_variance_ok_c2 && k_min <= k_max;
    Ok(Plan {
        input,
        p,
        t,
        alpha,
        alpha_limit,
        rho_max,
        rho,
        m_real,
        m,
        copy_density_ok,
        copy_variance_ok_c1,
        copy_variance_ok_c2,
        k_min,
        k_max,
        feasible,
    })
}
