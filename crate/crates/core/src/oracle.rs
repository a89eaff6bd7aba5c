//! Ground-truth computations used to judge the recovery algorithms.
//!
//! Nothing here shares code paths with the theta pipeline: exact search is
//! branch and bound with a greedy-coloring bound, and the planted-instance
//! oracle starts from the known planted set instead of from solver output.
//! Timeouts are reported as errors, never replaced by a fallback answer.

use serde::Serialize;

use crate::graph::{Graph, VertexSet};
use crate::randgen::{PlantKind, PlantedInstance};
use crate::recovery::min_vertex_cover_branching;
use crate::{Error, Result};

/// Default node budget for exact search.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest `n` accepted by exhaustive clique counting.
pub const COUNT_MAX_N: usize = 30;

/// `48 / (1-p)^2 * p * ln n`, the allowance for vertices outside the planted
/// set that see at least a `(1+p)/2` fraction of it.
pub fn extension_allowance(n: usize, p: f64) -> f64 {
    48.0 / ((1.0 - p) * (1.0 - p)) * p * (n.max(2) as f64).ln()
}

struct CliqueSearch<'a> {
    g: &'a Graph,
    nodes: u64,
    budget: u64,
    best: Vec<usize>,
    /// Stop as soon as a clique of this size is found.
    target: usize,
}

impl CliqueSearch<'_> {
    /// Greedy sequential coloring of `cand`; returns vertices in
    /// nondecreasing color order with their color numbers (1-based).
    fn color(&self, cand: &VertexSet) -> Vec<(usize, usize)> {
        let mut uncolored = cand.clone();
        let mut order = Vec::with_capacity(cand.len());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            loop {
                let Some(v) = avail.iter().next() else { break };
                order.push((v, color));
                uncolored.remove(v);
                avail.remove(v);
                for (a, r) in avail.words_mut().iter_mut().zip(self.g.row(v)) {
                    *a &= !r;
                }
            }
        }
        order
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut cand: VertexSet) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::OracleTimeout { nodes: self.nodes });
        }
        let order = self.color(&cand);
        for &(v, color) in order.iter().rev() {
            if current.len() + color <= self.best.len() || self.best.len() >= self.target {
                return Ok(());
            }
            current.push(v);
            let next = cand.intersection(&self.g.neighbor_set(v));
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next)?;
            }
            current.pop();
            cand.remove(v);
        }
        Ok(())
    }
}

fn max_clique_within(g: &Graph, cand: &VertexSet, target: usize, budget: &mut u64) -> Result<Vec<usize>> {
    let mut search = CliqueSearch {
        g,
        nodes: 0,
        budget: *budget,
        best: Vec::new(),
        target,
    };
    let res = if cand.is_empty() {
        Ok(())
    } else {
        search.expand(&mut Vec::new(), cand.clone())
    };
    *budget = budget.saturating_sub(search.nodes);
    res.map(|_| search.best)
}

/// A maximum clique, ties broken toward the lexicographically smallest sorted
/// vertex list.
pub fn max_clique_exact(g: &Graph) -> Result<VertexSet> {
    max_clique_exact_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn max_clique_exact_with_budget(g: &Graph, node_budget: u64) -> Result<VertexSet> {
    let n = g.n();
    let mut budget = node_budget;
    let omega = max_clique_within(g, &VertexSet::full(n), usize::MAX, &mut budget)?.len();
    // Fix vertices in increasing order whenever the remainder can still reach omega.
    let mut chosen = VertexSet::new(n);
    let mut cand = VertexSet::full(n);
    for v in 0..n {
        if chosen.len() == omega {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let need = omega - chosen.len() - 1;
        let next = cand.intersection(&g.neighbor_set(v));
        let reachable = need == 0 || max_clique_within(g, &next, need, &mut budget)?.len() >= need;
        if reachable {
            chosen.insert(v);
            cand = next;
        } else {
            cand.remove(v);
        }
    }
    debug_assert!(g.is_clique(&chosen) && chosen.len() == omega);
    Ok(chosen)
}

pub fn max_is_exact(g: &Graph) -> Result<VertexSet> {
    max_clique_exact(&g.complement())
}

/// Number of nonempty vertex subsets that induce cliques, by size:
/// entry `s` counts cliques on `s` vertices (entry 0 is always 0).
pub fn clique_counts_by_size(g: &Graph) -> Result<Vec<u64>> {
    if g.n() > COUNT_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "exhaustive clique counting needs n <= {COUNT_MAX_N}, got {}",
            g.n()
        )));
    }
    fn walk(g: &Graph, cand: &VertexSet, depth: usize, counts: &mut Vec<u64>) {
        for v in cand.iter() {
            if counts.len() <= depth + 1 {
                counts.push(0);
            }
            counts[depth + 1] += 1;
            let mut next = cand.intersection(&g.neighbor_set(v));
            for u in 0..=v {
                next.remove(u);
            }
            if !next.is_empty() {
                walk(g, &next, depth + 1, counts);
            }
        }
    }
    let mut counts = vec![0u64];
    walk(g, &VertexSet::full(g.n()), 0, &mut counts);
    Ok(counts)
}

pub fn count_all_cliques(g: &Graph) -> Result<u64> {
    Ok(clique_counts_by_size(g)?.iter().sum())
}

/// Planted-set-assisted maximum clique together with the candidate set it
/// searched.
#[derive(Clone, Debug, Serialize)]
pub struct GroundTruth {
    pub clique: VertexSet,
    pub candidates: VertexSet,
    /// Whether `k >= 10 sqrt(n)`, the regime where the candidate set is
    /// guaranteed to contain every maximum clique.
    pub in_regime: bool,
}

/// Maximum clique of a planted instance, found inside
/// `K ∪ {v : |N(v) ∩ K| >= 3k/4}` by removing a minimum vertex cover of the
/// candidates' non-edges.
pub fn ground_truth_max_clique(inst: &PlantedInstance) -> Result<GroundTruth> {
    if inst.kind() != PlantKind::Clique {
        return Err(Error::InvalidParameter("ground truth needs a planted clique".into()));
    }
    let g = &inst.planted_graph;
    let n = g.n();
    let k = inst.planted.len();
    let threshold = 0.75 * k as f64;
    let mut candidates = inst.planted.clone();
    for v in 0..n {
        if g.degree_in(v, &inst.planted) as f64 >= threshold {
            candidates.insert(v);
        }
    }
    let allowance = 10.0 * extension_allowance(n, inst.params.p);
    if candidates.len() as f64 > k as f64 + allowance {
        return Err(Error::OracleUnavailable(format!(
            "candidate set has {} vertices, limit k + 10a = {:.1}",
            candidates.len(),
            k as f64 + allowance
        )));
    }
    let (sub, map) = g.induced_subgraph(&candidates);
    // K itself survives, so the cover never needs more than |P*| - k vertices.
    let cap = candidates.len() - k;
    let cover = min_vertex_cover_branching(&sub.complement(), cap)
        .map_err(|e| Error::OracleUnavailable(format!("cover search failed: {e}")))?;
    let kept = cover.complement().map_into(n, &map);
    Ok(GroundTruth {
        clique: kept,
        candidates,
        in_regime: k as f64 >= 10.0 * (n as f64).sqrt(),
    })
}
