//! Clique recovery: the theta pipeline, its subset-guessing wrapper for
//! smaller cliques, and the degree-based algorithm for large `k`.
//!
//! All three end in the same step. Given a candidate set `F` that should
//! contain the maximum clique plus a few stray vertices, the strays are cut
//! away as an exact minimum vertex cover of the complement of `G[F]`.

mod cover;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{popcount_and, Graph, VertexSet};
use crate::theta::{theta, SolveStatus, SolverConfig, ThetaSolution};
use crate::{Error, Result};

pub use cover::{is_vertex_cover, min_vertex_cover_branching, min_vertex_cover_counted};

/// Largest subset size the guessing wrapper will enumerate.
pub const MAX_GUESS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryParams {
    /// Clique-size constant: `k >= epsilon * sqrt(n p)`.
    pub epsilon: f64,
    /// Upper bound `c` on the edge probability.
    pub c_cap: f64,
    /// `5 / (1 - c)`.
    pub zeta: f64,
    pub beta: f64,
    /// Subset size used by [`recover_guessing`], already capped.
    pub s_guess: usize,
    /// Value of the subset-size formula before capping.
    pub s_guess_formula: usize,
    pub branch_depth_cap: usize,
    /// `c_i` cutoff for `H`.
    pub h_threshold: f64,
    /// Fraction of `k` a vertex must see in `H` to join `F`.
    pub f_threshold: f64,
    /// `C` in the large-clique regime test `k >= C sqrt(n p ln n)`.
    pub high_degree_c: f64,
    /// Fraction of `|D|` a vertex must see in `D` to join `P`.
    pub high_degree_threshold: f64,
    /// Stop guessing after this many clique subsets.
    pub guess_budget: Option<u64>,
    pub theta_cfg: SolverConfig,
}

/// `(zeta, beta, s)` of the subset-guessing analysis.
pub fn guessing_constants(p: f64, c_cap: f64, epsilon: f64) -> Result<(f64, f64, usize)> {
    if !(p > 0.0 && p < c_cap && c_cap < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p < c < 1, got p = {p}, c = {c_cap}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let zeta = 5.0 / (1.0 - c_cap);
    if epsilon >= zeta {
        return Ok((zeta, 2.0 / 3.0, 2));
    }
    let l = ((2.0 * zeta / epsilon).ln() / (1.0 / p).ln()).ceil() as usize;
    let beta = 1.0 - 1.0 / (4 * l + 3) as f64;
    Ok((zeta, beta, 2 * l + 2))
}

/// Default vertex-cover depth cap, `ceil(10 ln n) + 20`.
pub fn default_depth_cap(n: usize) -> usize {
    (10.0 * (n.max(1) as f64).ln()).ceil() as usize + 20
}

impl RecoveryParams {
    /// Defaults for an `n`-vertex graph of edge density `p`, with `epsilon = 1`
    /// and `c = max(0.9, (1 + p) / 2)`.
    pub fn new(n: usize, p: f64) -> Result<Self> {
        Self::with_guessing(n, p, 1.0, 0.9f64.max((1.0 + p) / 2.0))
    }

    pub fn with_guessing(n: usize, p: f64, epsilon: f64, c_cap: f64) -> Result<Self> {
        let (zeta, beta, s) = guessing_constants(p, c_cap, epsilon)?;
        Ok(Self {
            epsilon,
            c_cap,
            zeta,
            beta,
            s_guess: s.min(MAX_GUESS),
            s_guess_formula: s,
            branch_depth_cap: default_depth_cap(n),
            h_threshold: 0.75,
            f_threshold: 0.75,
            high_degree_c: 1.0,
            high_degree_threshold: 0.75,
            guess_budget: None,
            theta_cfg: SolverConfig::default(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_guess == 0 || self.s_guess > MAX_GUESS {
            return Err(Error::InvalidParameter(format!(
                "s_guess must be in 1..={MAX_GUESS}, got {}",
                self.s_guess
            )));
        }
        if self.branch_depth_cap == 0 {
            return Err(Error::InvalidParameter("branch_depth_cap must be at least 1".into()));
        }
        self.theta_cfg.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Theta,
    Guess,
    HighDegree,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub algorithm: Algorithm,
    pub k: usize,
    pub clique: VertexSet,
    pub theta_value: Option<f64>,
    pub theta_iterations: Option<usize>,
    /// Theta pipeline: `{c_i >= 3/4}`. Degree algorithm: the top-degree set.
    #[serde(rename = "H")]
    pub h: VertexSet,
    /// Candidate set the cover step ran on.
    #[serde(rename = "F")]
    pub f: VertexSet,
    pub cover_size: usize,
    pub branch_nodes: u64,
    pub wall_ms: u64,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_guess: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subsets_tried: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub regime_ok: Option<bool>,
}

/// Removes a minimum vertex cover of the complement of `G[f]`. The search
/// stops once `k` vertices would remain.
fn cut_to_clique(g: &Graph, f: &VertexSet, k: usize, depth_cap: usize) -> Result<(VertexSet, usize, u64)> {
    if f.len() < k {
        return Err(Error::NotFound { k });
    }
    let (sub, map) = g.induced_subgraph(f);
    let slack = f.len() - k;
    let cap = slack.min(depth_cap);
    match min_vertex_cover_counted(&sub.complement(), cap) {
        Ok((cover, nodes)) => {
            let keep: Vec<usize> = (0..sub.n()).filter(|&v| !cover.contains(v)).map(|v| map[v]).collect();
            Ok((VertexSet::from_vertices(g.n(), keep)?, cover.len(), nodes))
        }
        Err(Error::DepthExceeded { .. }) if slack <= depth_cap => Err(Error::NotFound { k }),
        Err(e) => Err(e),
    }
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Main pipeline: theta of the complement, `H`, `F`, then the cover step.
pub fn recover_theta(g: &Graph, k: usize, params: &RecoveryParams) -> Result<RecoveryReport> {
    params.validate()?;
    let start = Instant::now();
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={n}")));
    }
    let sol = theta(&g.complement(), &params.theta_cfg)?;
    let mut r = recover_from_solution(g, k, params, &sol)?;
    r.wall_ms = elapsed_ms(start);
    Ok(r)
}

/// The steps of [`recover_theta`] after the solve, given the theta solution
/// of the complement of `g`.
pub fn recover_from_solution(g: &Graph, k: usize, params: &RecoveryParams, sol: &ThetaSolution) -> Result<RecoveryReport> {
    let start = Instant::now();
    let n = g.n();
    if k == 0 || k > n || sol.contributions.len() != n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={n}, or solution of the wrong size")));
    }
    if sol.status != SolveStatus::Converged {
        return Err(Error::NotConverged {
            iterations: sol.iterations,
            value: sol.value,
        });
    }
    let h = VertexSet::from_vertices(n, (0..n).filter(|&i| sol.contributions[i] >= params.h_threshold))?;
    let need = params.f_threshold * k as f64;
    let mut f = h.clone();
    for v in 0..n {
        if popcount_and(g.row(v), h.words()) as f64 >= need {
            f.insert(v);
        }
    }
    let (clique, cover_size, branch_nodes) = cut_to_clique(g, &f, k, params.branch_depth_cap)?;
    let verified = g.is_clique(&clique) && clique.len() >= k;
    assert!(verified, "cover step returned a non-clique");
    Ok(RecoveryReport {
        algorithm: Algorithm::Theta,
        k,
        clique,
        theta_value: Some(sol.value),
        theta_iterations: Some(sol.iterations),
        h,
        f,
        cover_size,
        branch_nodes,
        wall_ms: elapsed_ms(start),
        verified,
        s_guess: None,
        subsets_tried: None,
        regime_ok: None,
    })
}

/// All cliques of size `s` in lexicographic order, at most `limit` of them.
fn clique_subsets(g: &Graph, s: usize, limit: Option<u64>) -> (Vec<Vec<usize>>, bool) {
    let n = g.n();
    let mut out = Vec::new();
    let mut truncated = false;
    // (partial subset, candidates above its last vertex)
    let mut stack = vec![(Vec::new(), VertexSet::full(n))];
    while let Some((cur, cand)) = stack.pop() {
        if cur.len() == s {
            if limit.is_some_and(|l| out.len() as u64 >= l) {
                truncated = true;
                break;
            }
            out.push(cur);
            continue;
        }
        if cur.len() + cand.len() < s {
            continue;
        }
        // push in reverse so the smallest vertex is expanded first
        let vs: Vec<usize> = cand.to_vec();
        for &v in vs.iter().rev() {
            let mut next = cand.intersection(&g.neighbor_set(v));
            for u in next.to_vec() {
                if u <= v {
                    next.remove(u);
                }
            }
            let mut c = cur.clone();
            c.push(v);
            stack.push((c, next));
        }
    }
    (out, truncated)
}

/// Guesses `s` clique vertices, solves the common neighborhood with the
/// theta pipeline for `k - s`, and keeps the largest `S ∪ M_S`.
pub fn recover_guessing(g: &Graph, k: usize, params: &RecoveryParams) -> Result<RecoveryReport> {
    params.validate()?;
    let start = Instant::now();
    let n = g.n();
    let s = params.s_guess;
    if k <= s || k > n {
        return Err(Error::InvalidParameter(format!("need s_guess < k <= n, got s = {s}, k = {k}")));
    }
    let (subsets, _) = clique_subsets(g, s, params.guess_budget);
    let tried = subsets.len() as u64;
    let inner_k = k - s;

    let attempt = |set: &Vec<usize>| -> Option<(VertexSet, RecoveryReport)> {
        let sv = VertexSet::from_vertices(n, set.iter().copied()).ok()?;
        let common = g.common_neighborhood(&sv).ok()?;
        if common.len() < inner_k {
            return None;
        }
        let (sub, map) = g.induced_subgraph(&common);
        let r = recover_theta(&sub, inner_k, params).ok()?;
        let mut full = r.clique.map_into(n, &map);
        for &v in set {
            full.insert(v);
        }
        g.is_clique(&full).then_some((full, r.map_sets(n, &map)))
    };
    let results: Vec<Option<(VertexSet, RecoveryReport)>> = subsets.par_iter().map(attempt).collect();
    // first largest in subset order
    let mut best: Option<(VertexSet, RecoveryReport)> = None;
    for (clique, r) in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| clique.len() > b.len()) {
            best = Some((clique, r));
        }
    }
    let Some((clique, inner)) = best else {
        return Err(Error::NotFound { k });
    };
    let verified = g.is_clique(&clique) && clique.len() >= k;
    if !verified {
        return Err(Error::NotFound { k });
    }
    Ok(RecoveryReport {
        algorithm: Algorithm::Guess,
        k,
        clique,
        wall_ms: elapsed_ms(start),
        verified,
        s_guess: Some(s),
        subsets_tried: Some(tried),
        ..inner
    })
}

impl RecoveryReport {
    fn map_sets(self, n: usize, map: &[usize]) -> Self {
        Self {
            clique: self.clique.map_into(n, map),
            h: self.h.map_into(n, map),
            f: self.f.map_into(n, map),
            ..self
        }
    }
}

/// Large-clique algorithm: the `k/2` highest-degree vertices `D`, every
/// vertex adjacent to at least `3/4` of `D`, then the cover step.
pub fn recover_high_degree(g: &Graph, k: usize, params: &RecoveryParams) -> Result<RecoveryReport> {
    params.validate()?;
    let start = Instant::now();
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={n}")));
    }
    let half = k.div_ceil(2);
    let deg = g.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let d = VertexSet::from_vertices(n, order[..half].iter().copied())?;
    let need = params.high_degree_threshold * half as f64;
    let mut p_set = d.clone();
    for v in 0..n {
        if popcount_and(g.row(v), d.words()) as f64 >= need {
            p_set.insert(v);
        }
    }
    let (clique, cover_size, branch_nodes) = cut_to_clique(g, &p_set, k, params.branch_depth_cap)?;
    let verified = g.is_clique(&clique) && clique.len() >= k;
    assert!(verified, "cover step returned a non-clique");
    let p_hat = if n > 1 {
        g.edge_count() as f64 / (n * (n - 1) / 2) as f64
    } else {
        0.0
    };
    let regime_ok = k as f64 >= params.high_degree_c * (n as f64 * p_hat * (n as f64).ln()).sqrt();
    Ok(RecoveryReport {
        algorithm: Algorithm::HighDegree,
        k,
        clique,
        theta_value: None,
        theta_iterations: None,
        h: d,
        f: p_set,
        cover_size,
        branch_nodes,
        wall_ms: elapsed_ms(start),
        verified,
        s_guess: None,
        subsets_tried: None,
        regime_ok: Some(regime_ok),
    })
}

/// Independent-set form of [`recover_high_degree`]: the planted set hides
/// among the lowest degrees, which are the highest in the complement.
pub fn recover_high_degree_independent(g: &Graph, k: usize, params: &RecoveryParams) -> Result<RecoveryReport> {
    recover_high_degree(&g.complement(), k, params)
}
