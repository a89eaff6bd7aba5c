//! Maximal clique listing (Bron–Kerbosch with a max-degree pivot, explicit
//! stack) and the sparse-regime recovery built on it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::oracle::{count_all_cliques, COUNT_MAX_N};
use crate::randgen::PlantedInstance;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumReport {
    pub max_clique: VertexSet,
    pub maximal_count: u64,
    pub clique_budget: u64,
    pub truncated: bool,
}

struct Frame {
    depth: usize,
    p: VertexSet,
    x: VertexSet,
    todo: Vec<usize>,
    next: usize,
}

/// Pivot `u ∈ P ∪ X` maximizing `|P ∩ N(u)|`; branch on `P \ N(u)`.
fn branch_set(g: &Graph, p: &VertexSet, x: &VertexSet) -> Vec<usize> {
    let mut best = None;
    let mut best_deg = 0;
    for u in p.iter().chain(x.iter()) {
        let d = p.intersection_len(&g.neighbor_set(u));
        if best.is_none() || d > best_deg {
            best = Some(u);
            best_deg = d;
        }
    }
    match best {
        Some(u) => p.difference(&g.neighbor_set(u)).to_vec(),
        None => Vec::new(),
    }
}

/// Calls `emit` on every maximal clique (sorted vertex list) until `budget`
/// cliques have been emitted. Returns `(count, truncated)`.
pub fn for_each_maximal_clique<F: FnMut(&[usize])>(g: &Graph, budget: u64, mut emit: F) -> (u64, bool) {
    let n = g.n();
    if n == 0 {
        return (0, false);
    }
    let mut r: Vec<usize> = Vec::new();
    let mut count = 0u64;
    let root_p = VertexSet::full(n);
    let root_x = VertexSet::new(n);
    let todo = branch_set(g, &root_p, &root_x);
    let mut stack = vec![Frame {
        depth: 0,
        p: root_p,
        x: root_x,
        todo,
        next: 0,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next == top.todo.len() {
            stack.pop();
            continue;
        }
        let v = top.todo[top.next];
        top.next += 1;
        let nv = g.neighbor_set(v);
        let p = top.p.intersection(&nv);
        let x = top.x.intersection(&nv);
        top.p.remove(v);
        top.x.insert(v);
        r.truncate(top.depth);
        r.push(v);
        if p.is_empty() {
            if x.is_empty() {
                if count == budget {
                    return (count, true);
                }
                count += 1;
                let mut clique = r.clone();
                clique.sort_unstable();
                emit(&clique);
            }
            continue;
        }
        let todo = branch_set(g, &p, &x);
        stack.push(Frame {
            depth: r.len(),
            p,
            x,
            todo,
            next: 0,
        });
    }
    (count, false)
}

pub fn list_maximal_cliques(g: &Graph, budget: u64) -> Result<EnumReport> {
    if budget == 0 {
        return Err(Error::InvalidParameter("clique budget must be at least 1".into()));
    }
    let mut best: Vec<usize> = Vec::new();
    let (count, truncated) = for_each_maximal_clique(g, budget, |c| {
        if c.len() > best.len() {
            best = c.to_vec();
        }
    });
    Ok(EnumReport {
        max_clique: VertexSet::from_vertices(g.n(), best)?,
        maximal_count: count,
        clique_budget: budget,
        truncated,
    })
}

/// As [`list_maximal_cliques`], also writing each clique as one JSON array
/// per line.
pub fn write_maximal_cliques<W: Write>(g: &Graph, budget: u64, mut w: W) -> Result<EnumReport> {
    if budget == 0 {
        return Err(Error::InvalidParameter("clique budget must be at least 1".into()));
    }
    let mut best: Vec<usize> = Vec::new();
    let mut io_err = None;
    let (count, truncated) = for_each_maximal_clique(g, budget, |c| {
        if c.len() > best.len() {
            best = c.to_vec();
        }
        if io_err.is_none() {
            let line = serde_json::to_string(c).expect("vertex list serializes");
            if let Err(e) = writeln!(w, "{line}") {
                io_err = Some(e);
            }
        }
    });
    if let Some(e) = io_err {
        return Err(e.into());
    }
    Ok(EnumReport {
        max_clique: VertexSet::from_vertices(g.n(), best)?,
        maximal_count: count,
        clique_budget: budget,
        truncated,
    })
}

/// `ceil(4 n^(T/4 + 1/2))`.
pub fn sparse_budget(n: usize, t_param: u32) -> u64 {
    (4.0 * (n as f64).powf(t_param as f64 / 4.0 + 0.5)).ceil() as u64
}

/// Whether `p ≤ n^(-2/T) / ln n`.
pub fn sparse_regime(n: usize, p: f64, t_param: u32) -> bool {
    let nf = n as f64;
    p <= nf.powf(-2.0 / t_param as f64) / nf.ln()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparseReport {
    #[serde(flatten)]
    pub enumeration: EnumReport,
    pub k: usize,
    pub t_param: u32,
    pub regime_ok: bool,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

/// Lists maximal cliques under the sparse budget and returns the largest.
pub fn recover_sparse(g: &Graph, k: usize, t_param: u32, p: f64) -> Result<SparseReport> {
    if t_param == 0 {
        return Err(Error::InvalidParameter("T must be at least 1".into()));
    }
    let n = g.n();
    let enumeration = list_maximal_cliques(g, sparse_budget(n, t_param))?;
    let warning = enumeration
        .truncated
        .then(|| format!("enumeration stopped at {} maximal cliques; outside the sparse regime?", enumeration.clique_budget));
    let verified = g.is_clique(&enumeration.max_clique) && enumeration.max_clique.len() >= k;
    Ok(SparseReport {
        enumeration,
        k,
        t_param,
        regime_ok: sparse_regime(n, p, t_param),
        verified,
        warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountComparison {
    pub cliques_base: u64,
    pub maximal_planted: u64,
    pub ok: bool,
}

/// Nonempty cliques of the base graph against maximal cliques after
/// planting; the first always bounds the second.
pub fn count_cliques_vs_maximal(base: &Graph, inst: &PlantedInstance) -> Result<CountComparison> {
    if base.n() > COUNT_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "exhaustive counting needs n <= {COUNT_MAX_N}, got {}",
            base.n()
        )));
    }
    let cliques_base = count_all_cliques(base)?;
    let maximal_planted = list_maximal_cliques(&inst.planted_graph, u64::MAX)?.maximal_count;
    Ok(CountComparison {
        cliques_base,
        maximal_planted,
        ok: maximal_planted <= cliques_base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::{plant, sample_gnp, GenParams, Strategy};

    pub(crate) fn brute_maximal(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 1u32..1 << n {
            let s: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let set = VertexSet::from_vertices(n, s.iter().copied()).unwrap();
            if !g.is_clique(&set) {
                continue;
            }
            let extendable = (0..n).any(|v| !set.contains(v) && s.iter().all(|&u| g.has_edge(u, v)));
            if !extendable {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    fn all_maximal(g: &Graph) -> Vec<Vec<usize>> {
        let mut v = Vec::new();
        for_each_maximal_clique(g, u64::MAX, |c| v.push(c.to_vec()));
        v.sort();
        v
    }

    #[test]
    fn small_cases() {
        let r = list_maximal_cliques(&Graph::complete(6), 10).unwrap();
        assert_eq!(r.maximal_count, 1);
        assert_eq!(r.max_clique.len(), 6);
        assert_eq!(list_maximal_cliques(&Graph::empty(7), 100).unwrap().maximal_count, 7);
        let c5 = all_maximal(&Graph::cycle(5));
        assert_eq!(c5, brute_maximal(&Graph::cycle(5)));
        assert_eq!(c5.len(), 5);
        assert_eq!(list_maximal_cliques(&Graph::empty(0), 1).unwrap().maximal_count, 0);
        assert!(list_maximal_cliques(&Graph::empty(3), 0).is_err());
    }

    #[test]
    fn budget_truncates() {
        let r = list_maximal_cliques(&Graph::empty(10), 4).unwrap();
        assert_eq!(r.maximal_count, 4);
        assert!(r.truncated);
        let r = list_maximal_cliques(&Graph::empty(10), 10).unwrap();
        assert!(!r.truncated);
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..40 {
            let n = 6 + seed as usize % 9;
            let g = sample_gnp(n, 0.2 + 0.1 * (seed % 6) as f64, seed).unwrap();
            assert_eq!(all_maximal(&g), brute_maximal(&g), "seed {seed}");
        }
    }

    #[test]
    fn streaming_writes_one_line_per_clique() {
        let mut out = Vec::new();
        let r = write_maximal_cliques(&Graph::cycle(5), 100, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count() as u64, r.maximal_count);
        assert_eq!(text.lines().next(), Some("[0,1]"));
    }

    #[test]
    fn budget_formula() {
        assert_eq!(sparse_budget(3000, 3), (4.0 * 3000f64.powf(1.25)).ceil() as u64);
        assert!(sparse_regime(3000, 3000f64.powf(-0.8) / 10.0, 3));
    }

    #[test]
    fn counting_inequality_on_small_instances() {
        let base = Graph::empty(5);
        let inst = plant(&base, &GenParams::new(5, 0.5, 3, 0).unwrap(), &Strategy::Random).unwrap();
        let c = count_cliques_vs_maximal(&base, &inst).unwrap();
        assert!(c.ok);
        assert_eq!(c.cliques_base, 5);
        // the triangle plus two isolated vertices
        assert_eq!(c.maximal_planted, 3);
        let k5 = Graph::complete(5);
        let inst = plant(&k5, &GenParams::new(5, 0.5, 5, 0).unwrap(), &Strategy::Random).unwrap();
        let c = count_cliques_vs_maximal(&k5, &inst).unwrap();
        assert_eq!((c.maximal_planted, c.cliques_base), (1, 31));
    }
}
