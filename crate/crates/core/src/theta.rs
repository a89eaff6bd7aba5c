//! Lovász theta function by an alternating-direction method on the SDP
//!
//! ```text
//! maximize <J, B>  subject to  B ⪰ 0,  tr B = 1,  B_ij = 0 for every edge ij.
//! ```
//!
//! The iteration works on the dual side (in the style of Wen, Goldfarb and
//! Yin): the equality multipliers have a closed form because the constraint
//! matrices are mutually orthogonal, and the slack/primal pair comes from one
//! symmetric eigendecomposition that splits `V` into its positive part (dual
//! slack) and negative part (primal iterate). Residuals are the violations
//! left by the two projections; the penalty is rebalanced whenever one of
//! them lags the other by a wide margin.
//!
//! Plain iteration spirals in slowly on these problems (thousands of steps at
//! n = 400), so the map `(X, S) -> (X', S')` is driven by safeguarded Anderson
//! extrapolation over the last few steps. A rejected extrapolation falls back
//! to the plain step and clears the history.
//!
//! Per-vertex contributions come from a Gram factorization `B = Σ b_i b_iᵀ`:
//! with handle `h = Σ b_i / ‖Σ b_i‖`, `c_i = (h·b_i)² / ‖b_i‖²`, which needs
//! only the row sums and diagonal of `B`.

use std::io::Write;

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::linalg::{low_rank_sum, sym_eigen, write_dense_le};
use crate::randgen::PlantedInstance;
use crate::{Error, Result};

/// Norm below which a Gram vector always counts as zero.
const ZERO_VECTOR_NORM: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Target for the primal, dual and gap residuals.
    pub eps: f64,
    pub max_iters: usize,
    /// Step length of the primal update, in `[1, 1.9]`.
    pub relaxation: f64,
    /// Record one [`TraceRow`] per iteration.
    #[serde(default)]
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-5,
            max_iters: 50_000,
            relaxation: 1.6,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        if !(1.0..=1.9).contains(&self.relaxation) {
            return Err(Error::InvalidParameter(format!(
                "relaxation {} outside [1, 1.9]",
                self.relaxation
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    MaxIters,
    InfeasibleInput,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    pub penalty: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaSolution {
    pub value: f64,
    /// Objective of the dual iterate; within `gap` of `value` at convergence.
    pub dual_value: f64,
    /// `c_i` clamped to `[0, 1]`.
    pub contributions: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub status: SolveStatus,
    /// Largest distance of an unclamped `c_i` outside `[0, 1]`.
    pub contribution_excess: f64,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
    /// Final primal matrix `B`.
    #[serde(skip)]
    pub matrix: Option<Mat<f64>>,
}

impl ThetaSolution {
    pub fn contribution_sum(&self) -> f64 {
        self.contributions.iter().sum()
    }

    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "iter,primal_residual,dual_residual,gap,primal_value,dual_value,penalty")?;
        for r in &self.trace {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{},{},{:e}",
                r.iter, r.primal_residual, r.dual_residual, r.gap, r.primal_value, r.dual_value, r.penalty
            )?;
        }
        Ok(())
    }

    /// Dumps `B` row-major as little-endian `f64`.
    pub fn write_matrix<W: Write>(&self, w: W) -> Result<()> {
        match &self.matrix {
            Some(m) => write_dense_le(m.as_ref(), w),
            None => Err(Error::InvalidParameter("solution carries no matrix".into())),
        }
    }
}

/// Penalty rebalancing: every `ADAPT_EVERY` iterations the penalty moves by
/// `ADAPT_FACTOR` when the mean log-ratio of the residuals exceeds
/// `ADAPT_BAND`.
const ADAPT_EVERY: usize = 50;
const ADAPT_FACTOR: f64 = 1.5;
const ADAPT_BAND: f64 = 1.1;

pub fn theta(g: &Graph, cfg: &SolverConfig) -> Result<ThetaSolution> {
    cfg.validate()?;
    let n = g.n();
    if n == 0 {
        return Ok(ThetaSolution {
            value: 0.0,
            dual_value: 0.0,
            contributions: Vec::new(),
            iterations: 0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
            status: SolveStatus::InfeasibleInput,
            contribution_excess: 0.0,
            trace: Vec::new(),
            matrix: None,
        });
    }
    let prob = Problem::new(g, cfg.relaxation);
    let nf = n as f64;
    let mut z = Pair {
        x: Mat::<f64>::from_fn(n, n, |i, j| if i == j { 1.0 / nf } else { 0.0 }),
        s: Mat::<f64>::zeros(n, n),
    };
    let mut mu = nf;
    let mut accel = Anderson::new(ANDERSON_MEMORY);
    let mut trace = Vec::new();
    let mut log_ratio_acc = 0.0;
    let mut since_adapt = 0usize;
    let mut status = SolveStatus::MaxIters;
    let mut best: Option<(TraceRow, Mat<f64>)> = None;
    // (fallback state, residual norm it must not exceed) for a pending extrapolation
    let mut pending: Option<(Pair, f64)> = None;
    let mut iterations = 0;

    for iter in 1..=cfg.max_iters {
        iterations = iter;
        let st = prob.step(&z, mu)?;
        let row = TraceRow { iter, penalty: mu, ..st.row };
        let g = st.next.sub(&z);
        let g_norm = g.norm(mu);

        if let Some((fallback, bound)) = pending.take() {
            if !(g_norm <= bound) {
                accel.clear();
                z = fallback;
                if cfg.trace {
                    trace.push(row);
                }
                continue;
            }
        }
        if cfg.trace {
            trace.push(row);
        }
        let score = |r: &TraceRow| r.primal_residual.max(r.dual_residual).max(r.gap);
        if best.as_ref().is_none_or(|(b, _)| score(&row) <= score(b) || !score(b).is_finite()) {
            best = Some((row, st.x_psd.clone()));
        }
        if score(&row) < cfg.eps {
            best = Some((row, st.x_psd));
            status = SolveStatus::Converged;
            break;
        }

        log_ratio_acc += (row.primal_residual.max(1e-300) / row.dual_residual.max(1e-300)).ln();
        since_adapt += 1;
        if since_adapt == ADAPT_EVERY {
            let mean = log_ratio_acc / ADAPT_EVERY as f64;
            let old = mu;
            if mean > ADAPT_BAND {
                mu *= ADAPT_FACTOR;
            } else if mean < -ADAPT_BAND {
                mu /= ADAPT_FACTOR;
            }
            if mu != old {
                accel.clear();
            }
            log_ratio_acc = 0.0;
            since_adapt = 0;
        }

        accel.push(&st.next, &g);
        match accel.extrapolate(&st.next, &g, mu) {
            Some(za) => {
                pending = Some((st.next, SAFEGUARD * g_norm));
                z = za;
            }
            None => z = st.next,
        }
    }

    let (last, x_psd) = best.expect("at least one iteration");
    let (contributions, contribution_excess) = contributions_from(&x_psd, cfg.eps);
    Ok(ThetaSolution {
        value: last.primal_value,
        dual_value: last.dual_value,
        contributions,
        iterations,
        primal_residual: last.primal_residual,
        dual_residual: last.dual_residual,
        gap: last.gap,
        status,
        contribution_excess,
        trace,
        matrix: Some(x_psd),
    })
}

/// Primal/dual iterate pair.
#[derive(Clone)]
struct Pair {
    x: Mat<f64>,
    s: Mat<f64>,
}

impl Pair {
    fn sub(&self, o: &Pair) -> Pair {
        Pair {
            x: &self.x - &o.x,
            s: &self.s - &o.s,
        }
    }

    /// Inner product with the primal part weighted by `mu`, so both halves
    /// are on the scale of the matrix `V`.
    fn dot(&self, o: &Pair, mu: f64) -> f64 {
        let mut px = 0.0;
        let mut ps = 0.0;
        for j in 0..self.x.ncols() {
            let (ax, bx) = (self.x.col(j), o.x.col(j));
            let (as_, bs) = (self.s.col(j), o.s.col(j));
            for i in 0..self.x.nrows() {
                px += ax[i] * bx[i];
                ps += as_[i] * bs[i];
            }
        }
        mu * mu * px + ps
    }

    fn norm(&self, mu: f64) -> f64 {
        self.dot(self, mu).sqrt()
    }

    fn axpy(&mut self, a: f64, o: &Pair) {
        self.x += &o.x * a;
        self.s += &o.s * a;
    }
}

const ANDERSON_MEMORY: usize = 5;
/// An extrapolated point is kept only if its fixed-point residual stays
/// within this factor of the residual it was built from.
const SAFEGUARD: f64 = 1.0;
/// An extrapolated point may move at most this multiple of the iterate's own
/// norm away from `F(z)`; larger steps are ill-conditioned solves.
const MAX_EXTRAPOLATION: f64 = 1.0;

/// Type-II Anderson acceleration of the fixed-point map `z -> F(z)`.
struct Anderson {
    mem: usize,
    /// Differences of consecutive `F(z)` and residuals.
    df: Vec<Pair>,
    dg: Vec<Pair>,
    last: Option<(Pair, Pair)>,
}

impl Anderson {
    fn new(mem: usize) -> Self {
        Self {
            mem,
            df: Vec::new(),
            dg: Vec::new(),
            last: None,
        }
    }

    fn clear(&mut self) {
        self.df.clear();
        self.dg.clear();
        self.last = None;
    }

    fn push(&mut self, fz: &Pair, g: &Pair) {
        if let Some((f0, g0)) = self.last.take() {
            if self.df.len() == self.mem {
                self.df.remove(0);
                self.dg.remove(0);
            }
            self.df.push(fz.sub(&f0));
            self.dg.push(g.sub(&g0));
        }
        self.last = Some((fz.clone(), g.clone()));
    }

    fn extrapolate(&self, fz: &Pair, g: &Pair, mu: f64) -> Option<Pair> {
        let m = self.dg.len();
        if m == 0 {
            return None;
        }
        let mut a = Mat::<f64>::zeros(m, m);
        let mut rhs = Mat::<f64>::zeros(m, 1);
        for i in 0..m {
            for j in 0..=i {
                let d = self.dg[i].dot(&self.dg[j], mu);
                a[(i, j)] = d;
                a[(j, i)] = d;
            }
            rhs[(i, 0)] = self.dg[i].dot(g, mu);
        }
        let scale = (0..m).map(|i| a[(i, i)]).fold(0.0, f64::max);
        if !(scale > 0.0) {
            return None;
        }
        for i in 0..m {
            a[(i, i)] += 1e-10 * scale;
        }
        let gamma = a.as_ref().llt(faer::Side::Lower).ok()?.solve(&rhs);
        let mut out = fz.clone();
        for i in 0..m {
            let c = gamma[(i, 0)];
            if !c.is_finite() {
                return None;
            }
            out.axpy(-c, &self.df[i]);
        }
        if !(out.sub(fz).norm(mu) <= MAX_EXTRAPOLATION * fz.norm(mu)) {
            return None;
        }
        Some(out)
    }
}

struct StepOut {
    next: Pair,
    x_psd: Mat<f64>,
    row: TraceRow,
}

struct Problem {
    n: usize,
    /// Row-major edge indicator.
    edge: Vec<bool>,
    rho: f64,
}

impl Problem {
    fn new(g: &Graph, rho: f64) -> Self {
        let n = g.n();
        let edge = (0..n * n).map(|k| g.has_edge(k / n, k % n)).collect();
        Self { n, edge, rho }
    }

    fn step(&self, z: &Pair, mu: f64) -> Result<StepOut> {
        let n = self.n;
        let nf = n as f64;
        let (x, s) = (&z.x, &z.s);
        let tr_x: f64 = (0..n).map(|i| x[(i, i)]).sum();
        let tr_s: f64 = (0..n).map(|i| s[(i, i)]).sum();
        // multiplier of tr B = 1; edge multipliers are eliminated in closed form
        let y0 = -(mu * (tr_x - 1.0) + tr_s + nf) / nf;

        let v = Mat::<f64>::from_fn(n, n, |i, j| {
            if i == j {
                -1.0 - y0 - mu * x[(i, i)]
            } else if self.edge[i * n + j] {
                s[(i, j)]
            } else {
                -1.0 - mu * x[(i, j)]
            }
        });

        let eig = sym_eigen(v.as_ref())?;
        let neg: Vec<(usize, f64)> = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < 0.0)
            .map(|(j, &l)| (j, -l))
            .collect();
        let pos: Vec<(usize, f64)> = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0.0)
            .map(|(j, &l)| (j, l))
            .collect();
        // V = V+ + V-; only the lower-rank side needs rebuilding.
        let (s_new, minus_vneg) = if neg.len() <= pos.len() {
            let mvn = low_rank_sum(eig.vectors.as_ref(), &neg, n);
            (&v + &mvn, mvn)
        } else {
            let sp = low_rank_sum(eig.vectors.as_ref(), &pos, n);
            let mvn = &sp - &v;
            (sp, mvn)
        };
        let x_psd = minus_vneg * (1.0 / mu);

        let mut dres2 = 0.0;
        let mut pres2 = 0.0;
        let mut tr = 0.0;
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                let b = x_psd[(i, j)];
                let r = if i == j {
                    tr += b;
                    -1.0 - y0 - s_new[(i, i)]
                } else if self.edge[i * n + j] {
                    pres2 += b * b;
                    mu * x[(i, j)] + s[(i, j)] - s_new[(i, j)]
                } else {
                    -1.0 - s_new[(i, j)]
                };
                dres2 += r * r;
                total += b;
            }
        }
        // trace-normalized; scaling preserves the edge constraints
        let pobj = if tr > 0.0 { total / tr } else { total };
        let dobj = -y0;
        let row = TraceRow {
            iter: 0,
            primal_residual: ((tr - 1.0).powi(2) + pres2).sqrt() / 2.0,
            dual_residual: dres2.sqrt() / (1.0 + nf),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
            primal_value: pobj,
            dual_value: dobj,
            penalty: mu,
        };
        let rho = self.rho;
        let next = Pair {
            x: Mat::from_fn(n, n, |i, j| (1.0 - rho) * x[(i, j)] + rho * x_psd[(i, j)]),
            s: s_new,
        };
        Ok(StepOut { next, x_psd, row })
    }
}

/// `c_i = (Σ_j B_ij)² / (B_ii · Σ_jk B_jk)`, zero for vanishing Gram vectors.
///
/// A Gram vector is vanishing when `‖b_i‖² = B_ii` is below
/// `max(1e-18, eps · tr B / n)`. An eigendecomposition leaves entries of
/// order 1e-13 on vertices whose exact vector is zero, and with a near rank-one
/// `B` those would otherwise score `c_i ≈ 1`. At an optimum `c_i = ϑ B_ii`, so
/// anything under the cutoff has a true contribution of at most `eps`.
fn contributions_from(b: &Mat<f64>, eps: f64) -> (Vec<f64>, f64) {
    let n = b.nrows();
    let row_sums: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b[(i, j)]).sum()).collect();
    let total: f64 = row_sums.iter().sum();
    let tr: f64 = (0..n).map(|i| b[(i, i)]).sum();
    let cutoff = (ZERO_VECTOR_NORM * ZERO_VECTOR_NORM).max(eps * tr / n as f64);
    let mut excess: f64 = 0.0;
    let c = (0..n)
        .map(|i| {
            let d = b[(i, i)];
            if d <= cutoff || total <= 0.0 {
                return 0.0;
            }
            let raw = row_sums[i] * row_sums[i] / (d * total);
            excess = excess.max(-raw).max(raw - 1.0);
            raw.clamp(0.0, 1.0)
        })
        .collect();
    (c, excess.max(0.0))
}

/// Theta of the complement of the planted graph.
pub fn theta_of_complement(inst: &PlantedInstance, cfg: &SolverConfig) -> Result<ThetaSolution> {
    theta(&inst.planted_graph.complement(), cfg)
}
