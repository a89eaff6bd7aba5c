//! Spectral certificate for the theta bound on a planted instance.
//!
//! `Q` extends the planted clique by every vertex with at least
//! `(1+p)/2 · k` neighbors in it. The matrix `M` has an all-ones `Q` block,
//! `1` on edges elsewhere, `-p/(1-p)` on nonedges outside `Q`, and on
//! nonedges between `i ∉ Q` and `Q` the value `-d(i,Q)/(k' - d(i,Q))`, which
//! makes every such row of the off-diagonal block sum to zero. Then `1_Q` is
//! an eigenvector with eigenvalue `k' = |Q|`, and `λ₂(M) < k'` certifies
//! `ϑ(Ḡ) ≤ k'`.
//!
//! Diagonal: `1` on `Q`, `0` elsewhere, so that `M = U + V + W` holds
//! exactly with the three parts defined below. The strictly feasible variant
//! with an all-ones diagonal is `M + I_{V∖Q}`; its eigenvalues are reported
//! alongside.

use std::io::Write;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::graph::{popcount_and, Graph, VertexSet};
use crate::linalg::{eigenvalues_desc, frobenius, write_dense_le};
use crate::randgen::PlantedInstance;
use crate::{Error, Result};

/// Fraction of `k'` allowed on top of `4/(1-p) · sqrt(np)` for `λ₂`.
pub const LAMBDA2_SLACK: f64 = 0.2;
/// Relative slack on the variance bound.
pub const VARBOUND_SLACK: f64 = 0.25;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    #[serde(rename = "Q")]
    pub q: VertexSet,
    pub k: usize,
    pub k_prime: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(rename = "lambda1_U")]
    pub lambda1_u: f64,
    #[serde(rename = "lambda2_V")]
    pub lambda2_v: f64,
    #[serde(rename = "lambda1_W")]
    pub lambda1_w: f64,
    #[serde(rename = "trace_W2")]
    pub trace_w2: f64,
    /// `x_i` for `i ∉ Q`, in vertex order.
    pub x_weights: Vec<f64>,
    /// Largest entry of `|U + V + W - M|`.
    pub reconstruction_error: f64,
    /// `‖M 1_Q - k' 1_Q‖∞`.
    pub eigenvector_residual: f64,
    /// `λ₁(U) + λ₂(V) + λ₁(W)`.
    pub weyl_bound: f64,
    /// `4/(1-p) · sqrt(np) + 0.2 k'`.
    pub lambda2_bound: f64,
    /// Eigenvalues of `M + I_{V∖Q}`.
    pub lambda1_unit_diagonal: f64,
    pub lambda2_unit_diagonal: f64,
    /// Edges added inside `Q` to make it a clique.
    pub augmented_edges: usize,
    pub valid: bool,
}

/// `Q = K ∪ {v ∉ K : d(v,K) ≥ (1+p)/2 · k}`.
pub fn extend_clique(inst: &PlantedInstance) -> VertexSet {
    let g = &inst.planted_graph;
    let k = inst.planted.len() as f64;
    let need = (1.0 + inst.params.p) / 2.0 * k;
    let mut q = inst.planted.clone();
    for v in 0..g.n() {
        if !q.contains(v) && popcount_and(g.row(v), inst.planted.words()) as f64 >= need {
            q.insert(v);
        }
    }
    q
}

/// The three summands; `M = U + V + W`.
pub struct Decomposition {
    pub u: Mat<f64>,
    pub v: Mat<f64>,
    pub w: Mat<f64>,
    /// `x_i` for `i ∉ Q` (zero inside `Q`).
    pub x: Vec<f64>,
}

fn off_weight(p: f64) -> f64 {
    -p / (1.0 - p)
}

/// Builds `U` from the base graph, the `Q`-block correction `V`, and the
/// row-sum correction `W`.
pub fn decompose(inst: &PlantedInstance, q: &VertexSet) -> Result<Decomposition> {
    let g = &inst.planted_graph;
    let base = &inst.base;
    let n = g.n();
    let p = inst.params.p;
    let kp = q.len();
    let neg = off_weight(p);
    let mut x = vec![0.0; n];
    for i in 0..n {
        if q.contains(i) {
            continue;
        }
        let d = popcount_and(g.row(i), q.words());
        if d >= kp {
            return Err(Error::Certificate(format!(
                "vertex {i} outside Q is adjacent to all of Q ({d} = k')"
            )));
        }
        x[i] = (kp as f64 * p - d as f64) / ((1.0 - p) * (kp - d) as f64);
    }
    let u = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else if base.has_edge(i, j) {
            1.0
        } else {
            neg
        }
    });
    let v = Mat::<f64>::from_fn(n, n, |i, j| {
        if q.contains(i) && q.contains(j) {
            1.0 - u[(i, j)]
        } else {
            0.0
        }
    });
    let w = Mat::<f64>::from_fn(n, n, |i, j| {
        let (a, b) = match (q.contains(i), q.contains(j)) {
            (false, true) => (i, j),
            (true, false) => (j, i),
            _ => return 0.0,
        };
        if g.has_edge(a, b) {
            0.0
        } else {
            x[a]
        }
    });
    Ok(Decomposition { u, v, w, x })
}

/// The certificate matrix, assembled entrywise from the block description.
pub fn build_certificate(inst: &PlantedInstance, q: &VertexSet) -> Result<Mat<f64>> {
    let g = &inst.planted_graph;
    let n = g.n();
    let p = inst.params.p;
    let kp = q.len();
    if !inst.planted.is_subset(q) {
        return Err(Error::Certificate("Q must contain the planted clique".into()));
    }
    let mut b_off = vec![0.0; n];
    for i in 0..n {
        if !q.contains(i) {
            let d = popcount_and(g.row(i), q.words());
            if d >= kp {
                return Err(Error::Certificate(format!(
                    "vertex {i} outside Q is adjacent to all of Q ({d} = k')"
                )));
            }
            b_off[i] = -(d as f64) / (kp - d) as f64;
        }
    }
    let neg = off_weight(p);
    Ok(Mat::<f64>::from_fn(n, n, |i, j| {
        match (q.contains(i), q.contains(j)) {
            (true, true) => 1.0,
            _ if i == j => 0.0,
            _ if g.has_edge(i, j) => 1.0,
            (false, false) => neg,
            (false, true) => b_off[i],
            (true, false) => b_off[j],
        }
    }))
}

fn count_missing_edges(g: &Graph, q: &VertexSet) -> usize {
    let k = q.len();
    k * k.saturating_sub(1) / 2 - g.edges_within(q)
}

pub fn verify_certificate(inst: &PlantedInstance, q: &VertexSet, m: &Mat<f64>) -> Result<CertificateReport> {
    let n = inst.planted_graph.n();
    let p = inst.params.p;
    let kp = q.len();
    let kpf = kp as f64;
    let dec = decompose(inst, q)?;

    let mut recon: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            recon = recon.max((dec.u[(i, j)] + dec.v[(i, j)] + dec.w[(i, j)] - m[(i, j)]).abs());
        }
    }
    let mut eigres: f64 = 0.0;
    for i in 0..n {
        let s: f64 = q.iter().map(|j| m[(i, j)]).sum();
        let target = if q.contains(i) { kpf } else { 0.0 };
        eigres = eigres.max((s - target).abs());
    }

    let ev = eigenvalues_desc(m.as_ref())?;
    let (lambda1, lambda2) = (ev[0], ev.get(1).copied().unwrap_or(f64::NEG_INFINITY));
    let lambda1_u = eigenvalues_desc(dec.u.as_ref())?[0];
    let lambda2_v = eigenvalues_desc(dec.v.as_ref())?.get(1).copied().unwrap_or(0.0);
    let lambda1_w = eigenvalues_desc(dec.w.as_ref())?[0];
    let trace_w2 = frobenius(dec.w.as_ref()).powi(2);

    let mut unit = m.clone();
    for i in 0..n {
        if !q.contains(i) {
            unit[(i, i)] += 1.0;
        }
    }
    let evu = eigenvalues_desc(unit.as_ref())?;

    let valid = (lambda1 - kpf).abs() <= 1e-6 * kpf && lambda2 < kpf;
    Ok(CertificateReport {
        q: q.clone(),
        k: inst.planted.len(),
        k_prime: kp,
        lambda1,
        lambda2,
        lambda1_u,
        lambda2_v,
        lambda1_w,
        trace_w2,
        x_weights: (0..n).filter(|&i| !q.contains(i)).map(|i| dec.x[i]).collect(),
        reconstruction_error: recon,
        eigenvector_residual: eigres,
        weyl_bound: lambda1_u + lambda2_v + lambda1_w,
        lambda2_bound: 4.0 / (1.0 - p) * (n as f64 * p).sqrt() + LAMBDA2_SLACK * kpf,
        lambda1_unit_diagonal: evu[0],
        lambda2_unit_diagonal: evu.get(1).copied().unwrap_or(f64::NEG_INFINITY),
        augmented_edges: count_missing_edges(&inst.planted_graph, q),
        valid,
    })
}

/// `tr(W²) = 2 Σ_{i∉Q} (k' - d(i,Q)) x_i²`.
pub fn trace_w2_closed_form(inst: &PlantedInstance, q: &VertexSet) -> f64 {
    let g = &inst.planted_graph;
    let p = inst.params.p;
    let kp = q.len();
    (0..g.n())
        .filter(|&i| !q.contains(i))
        .map(|i| {
            let d = popcount_and(g.row(i), q.words());
            let x = (kp as f64 * p - d as f64) / ((1.0 - p) * (kp - d) as f64);
            2.0 * (kp - d) as f64 * x * x
        })
        .sum()
}

/// Extends, builds and verifies in one call.
pub fn certify(inst: &PlantedInstance) -> Result<(CertificateReport, Mat<f64>)> {
    let q = extend_clique(inst);
    let m = build_certificate(inst, &q)?;
    let report = verify_certificate(inst, &q, &m)?;
    Ok((report, m))
}

pub fn write_certificate<W: Write>(m: &Mat<f64>, w: W) -> Result<()> {
    write_dense_le(m.as_ref(), w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Base-graph degrees into `K` for every vertex outside `K`.
pub fn degrees_into_planted(inst: &PlantedInstance) -> Vec<usize> {
    let k = &inst.planted;
    (0..inst.base.n())
        .filter(|&i| !k.contains(i))
        .map(|i| popcount_and(inst.base.row(i), k.words()))
        .collect()
}

/// `Σ_{i∉K} (d_base(i,K) - kp)²` against `(n-k) k p (1-p) (1 + slack)`.
pub fn empirical_varbound(inst: &PlantedInstance, slack: f64) -> VarBound {
    let n = inst.base.n() as f64;
    let k = inst.planted.len() as f64;
    let p = inst.params.p;
    let lhs = degrees_into_planted(inst)
        .into_iter()
        .map(|d| (d as f64 - k * p).powi(2))
        .sum();
    let rhs = (n - k) * k * p * (1.0 - p) * (1.0 + slack);
    VarBound { lhs, rhs, ok: lhs <= rhs }
}

/// Fourth central moment of `Bin(k, p)`.
pub fn binomial_fourth_moment(k: usize, p: f64) -> f64 {
    let k = k as f64;
    k * p * (1.0 - p) * (1.0 + (3.0 * k - 6.0) * p * (1.0 - p))
}
