//! Hardness-side machinery: the cubic-graph reduction, planting a gadget
//! copy that obeys a vertex partition, counting such copies, and the
//! repeated-planting loop that turns a semi-random solver into an
//! independent-set finder for the gadget.

mod planner;
mod reduction;

pub use planner::{plan, Plan, PlanInput};
pub use reduction::{
    average_degree, is_balanced, is_balanced_exhaustive, is_balanced_flow, is_three_regular, reduce_3regular, Ratio,
    ReductionOutput, EXHAUSTIVE_BALANCE_MAX_N,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::for_each_maximal_clique;
use crate::graph::{Graph, VertexSet};
use crate::randgen::{random_subset_of, sample_gnp};
use crate::rng::{stream, trial_seed, Stream};
use crate::{Error, Result};

/// Copy counting is limited to `m <= 8` parts of at most 64 vertices.
pub const COUNT_MAX_PARTS: usize = 8;
pub const COUNT_MAX_PART_SIZE: usize = 64;
/// Largest graph for which all maximum independent sets are listed.
pub const UNIQUE_STRUCTURE_MAX_N: usize = 30;

/// `m` contiguous blocks of `n/m` vertices; part `i` hosts vertex `i` of the gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub n: usize,
    pub m: usize,
}

impl Partition {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || n % m != 0 {
            return Err(Error::InvalidParameter(format!(
                "partition needs m >= 1 dividing n, got n={n}, m={m}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn part_size(&self) -> usize {
        self.n / self.m
    }

    pub fn part_of(&self, v: usize) -> usize {
        v / self.part_size()
    }

    pub fn part(&self, i: usize) -> std::ops::Range<usize> {
        i * self.part_size()..(i + 1) * self.part_size()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HParams {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub k_prime: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlantedHInstance {
    #[serde(skip)]
    pub graph: Graph,
    #[serde(skip)]
    pub h: Graph,
    pub partition: Partition,
    /// The copy's vertices, one per part, in part order.
    #[serde(rename = "M")]
    pub copy: Vec<usize>,
    /// Planted independent set outside `M ∪ N(M)`; the fallback `k`-set when
    /// `failed_default` is set.
    pub i_prime: VertexSet,
    pub params: HParams,
    pub failed_default: bool,
}

impl PlantedHInstance {
    pub fn copy_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), self.copy.iter().copied()).expect("copy vertices in range")
    }

    /// Checks that the copy obeys the partition and, unless the fallback
    /// planting ran, that it induces `h` under the part-index map and `I'`
    /// sits outside the closed neighborhood of `M`.
    pub fn audit(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Generation(msg.into()));
        let m = self.h.n();
        if self.copy.len() != m || self.copy.iter().enumerate().any(|(i, &v)| self.partition.part_of(v) != i) {
            return fail("copy does not obey the partition");
        }
        if !self.graph.is_independent(&self.i_prime) {
            return fail("I' is not independent");
        }
        // the fallback set may cut edges of the copy
        if !self.failed_default {
            for i in 0..m {
                for j in i + 1..m {
                    if self.graph.has_edge(self.copy[i], self.copy[j]) != self.h.has_edge(i, j) {
                        return fail("copy does not induce h");
                    }
                }
            }
            let copy = self.copy_set();
            if !self.i_prime.is_disjoint(&copy) || self.copy.iter().any(|&v| self.graph.neighbor_set(v).intersection_len(&self.i_prime) > 0) {
                return fail("I' meets M or N(M)");
            }
        }
        Ok(())
    }
}

fn place_copy(g: &mut Graph, h: &Graph, partition: Partition, seed: u64) -> Vec<usize> {
    let mut rng = stream(seed, Stream::CopyPlacement);
    let copy: Vec<usize> = (0..partition.m).map(|i| rng.random_range(partition.part(i))).collect();
    for i in 0..copy.len() {
        for j in i + 1..copy.len() {
            if h.has_edge(i, j) {
                g.add_edge(copy[i], copy[j]);
            } else {
                g.remove_edge(copy[i], copy[j]);
            }
        }
    }
    copy
}

/// Samples `G(n,p)`, picks one uniform vertex per part and overwrites the
/// induced subgraph on them with `h`.
pub fn plant_h(n: usize, p: f64, h: &Graph, seed: u64) -> Result<PlantedHInstance> {
    let partition = Partition::new(n, h.n())?;
    let mut graph = sample_gnp(n, p, seed)?;
    let copy = place_copy(&mut graph, h, partition, seed);
    Ok(PlantedHInstance {
        graph,
        h: h.clone(),
        partition,
        copy,
        i_prime: VertexSet::new(n),
        params: HParams {
            n,
            p,
            k: 0,
            k_prime: 0,
            seed,
        },
        failed_default: false,
    })
}

/// [`plant_h`] followed by an independent set of size `k - k'` among the
/// common non-neighbors of the copy. With too few of them, a uniform
/// independent set of size `k` is planted anywhere instead.
pub fn plant_h_with_is(n: usize, p: f64, h: &Graph, k: usize, k_prime: usize, seed: u64) -> Result<PlantedHInstance> {
    let m = h.n();
    if k_prime > k || k + m > n {
        return Err(Error::InvalidParameter(format!(
            "need k' <= k <= n - m, got k'={k_prime}, k={k}, n={n}, m={m}"
        )));
    }
    let mut inst = plant_h(n, p, h, seed)?;
    inst.params.k = k;
    inst.params.k_prime = k_prime;
    let mut outside = inst.copy_set();
    for &v in &inst.copy {
        outside = outside.union(&inst.graph.neighbor_set(v));
    }
    let pool = outside.complement().to_vec();
    let mut rng = stream(seed, Stream::IndependentSet);
    let i_prime = if pool.len() >= k - k_prime {
        random_subset_of(&pool, k - k_prime, &mut rng, n)
    } else {
        inst.failed_default = true;
        let all: Vec<usize> = (0..n).collect();
        random_subset_of(&all, k, &mut rng, n)
    };
    inst.graph.make_independent(&i_prime);
    inst.i_prime = i_prime;
    debug_assert!(inst.failed_default || inst.audit().is_ok());
    Ok(inst)
}

/// Number of vertex sets with one vertex per part whose induced subgraph is
/// `h` under the part-index map.
pub fn count_xh(g: &Graph, h: &Graph, partition: Partition) -> Result<u64> {
    let m = h.n();
    if partition.m != m || partition.n != g.n() {
        return Err(Error::InvalidParameter("partition does not match g and h".into()));
    }
    if m > COUNT_MAX_PARTS || partition.part_size() > COUNT_MAX_PART_SIZE {
        return Err(Error::InvalidParameter(format!(
            "copy counting needs m <= {COUNT_MAX_PARTS} and n/m <= {COUNT_MAX_PART_SIZE}"
        )));
    }
    // one frame per part: the part's vertices not yet tried
    let mut placed: Vec<usize> = Vec::with_capacity(m);
    let mut count = 0u64;
    let mut stack: Vec<(usize, std::ops::Range<usize>)> = vec![(0, partition.part(0))];
    while let Some((i, range)) = stack.last_mut() {
        let i = *i;
        let Some(v) = range.next() else {
            stack.pop();
            placed.pop();
            continue;
        };
        placed.truncate(i);
        if placed.iter().enumerate().any(|(j, &u)| g.has_edge(u, v) != h.has_edge(j, i)) {
            continue;
        }
        if i + 1 == m {
            count += 1;
            continue;
        }
        placed.push(v);
        stack.push((i + 1, partition.part(i + 1)));
    }
    Ok(count)
}

/// `(n/m)^m p^|E(h)| (1-p)^(C(m,2) - |E(h)|)`.
pub fn expected_xh(n: usize, h: &Graph, p: f64) -> f64 {
    let m = h.n();
    let e = h.edge_count() as i32;
    let pairs = (m * m.saturating_sub(1) / 2) as i32;
    (n as f64 / m as f64).powi(m as i32) * p.powi(e) * (1.0 - p).powi(pairs - e)
}

/// `X_H(g) / E[X_H]`, the density of the planted distribution relative to `G(n,p)` at `g`.
pub fn likelihood_ratio(g: &Graph, h: &Graph, partition: Partition, p: f64) -> Result<f64> {
    Ok(count_xh(g, h, partition)? as f64 / expected_xh(g.n(), h, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlgrandParams {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub k_prime: usize,
    pub gamma: f64,
    pub seed: u64,
}

impl AlgrandParams {
    /// `ceil(10 ln n / gamma)`.
    pub fn iterations(&self) -> usize {
        (10.0 * (self.n as f64).ln() / self.gamma).ceil() as usize
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgrandStep {
    pub iteration: usize,
    pub seed: u64,
    pub failed_default: bool,
    /// Size of the set the solver returned, if any.
    pub returned: Option<usize>,
    pub independent: bool,
    pub in_copy: usize,
    pub outcome: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgrandTranscript {
    pub schema: &'static str,
    pub params: AlgrandParams,
    pub planned_iterations: usize,
    pub steps: Vec<AlgrandStep>,
    /// Independent set of `h`, in `h`'s vertex ids.
    pub certificate: Option<Vec<usize>>,
}

/// Repeats planting with fresh seeds and runs `recover(graph, k)` on each
/// instance; succeeds once the solver returns an independent set of size at
/// least `k` with at least `k'` vertices in the copy. After a fallback
/// planting the copy may be damaged, so its vertices are checked against `h`.
pub fn algrand<F>(h: &Graph, params: AlgrandParams, mut recover: F) -> Result<AlgrandTranscript>
where
    F: FnMut(&Graph, usize) -> Option<VertexSet>,
{
    if !(params.gamma > 0.0 && params.gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", params.gamma)));
    }
    let planned = params.iterations();
    let mut steps = Vec::new();
    let mut certificate = None;
    for iteration in 0..planned {
        let seed = trial_seed(params.seed, iteration as u64);
        let inst = plant_h_with_is(params.n, params.p, h, params.k, params.k_prime, seed)?;
        let found = recover(&inst.graph, params.k);
        let mut step = AlgrandStep {
            iteration,
            seed,
            failed_default: inst.failed_default,
            returned: found.as_ref().map(VertexSet::len),
            independent: false,
            in_copy: 0,
            outcome: "no-answer",
        };
        if let Some(s) = found {
            step.independent = inst.graph.is_independent(&s);
            let hits: Vec<usize> = inst.copy.iter().enumerate().filter(|&(_, &v)| s.contains(v)).map(|(i, _)| i).collect();
            step.in_copy = hits.len();
            step.outcome = if !step.independent {
                "not-independent"
            } else if s.len() < params.k {
                "too-small"
            } else if hits.len() < params.k_prime {
                "outside-copy"
            } else {
                let in_h = VertexSet::from_vertices(h.n(), hits.iter().copied())?;
                if inst.failed_default {
                    // the fallback set may have cut edges of the copy
                    if h.is_independent(&in_h) {
                        "success"
                    } else {
                        "copy-broken"
                    }
                } else {
                    assert!(h.is_independent(&in_h), "copy vertices returned by the solver are not independent in h");
                    "success"
                }
            };
            if step.outcome == "success" {
                certificate = Some(hits);
            }
        }
        steps.push(step);
        if certificate.is_some() {
            break;
        }
    }
    Ok(AlgrandTranscript {
        schema: "algrand/1",
        params,
        planned_iterations: planned,
        steps,
        certificate,
    })
}

/// Whether every maximum independent set of the instance has at least `k'`
/// vertices in the copy.
pub fn check_unique_structure(inst: &PlantedHInstance) -> Result<bool> {
    let n = inst.graph.n();
    if n > UNIQUE_STRUCTURE_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "listing maximum independent sets needs n <= {UNIQUE_STRUCTURE_MAX_N}, got {n}"
        )));
    }
    let copy = inst.copy_set();
    let mut best = 0usize;
    let mut ok = true;
    for_each_maximal_clique(&inst.graph.complement(), u64::MAX, |s| {
        let inside = s.iter().filter(|&&v| copy.contains(v)).count();
        if s.len() > best {
            best = s.len();
            ok = inside >= inst.params.k_prime;
        } else if s.len() == best {
            ok &= inside >= inst.params.k_prime;
        }
    });
    Ok(ok)
}

/// Small named gadget graphs: `k4`, `diamond`, `prism`, `k33`, `petersen`,
/// `edgeless:M`, `cycle:M`, `complete:M`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let bad = || Error::InvalidParameter(format!("unknown graph name {name:?}"));
    if let Some((kind, size)) = name.split_once(':') {
        let m: usize = size.parse().map_err(|_| bad())?;
        return match kind {
            "edgeless" => Ok(Graph::empty(m)),
            "cycle" => Ok(Graph::cycle(m)),
            "complete" => Ok(Graph::complete(m)),
            _ => Err(bad()),
        };
    }
    match name {
        "k4" => Ok(Graph::complete(4)),
        "diamond" => Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        "prism" => Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]),
        "k33" => Ok(Graph::from_fn(6, |u, v| (u < 3) != (v < 3))),
        "petersen" => Graph::from_edges(
            10,
            (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]),
        ),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::max_is_exact;

    fn diamond() -> Graph {
        named_graph("diamond").unwrap()
    }

    fn brute_xh(g: &Graph, h: &Graph, part: Partition) -> u64 {
        let m = h.n();
        let s = part.part_size();
        let mut count = 0;
        for code in 0..s.pow(m as u32) {
            let pick: Vec<usize> = (0..m).map(|i| i * s + code / s.pow(i as u32) % s).collect();
            let ok = (0..m).all(|i| (i + 1..m).all(|j| g.has_edge(pick[i], pick[j]) == h.has_edge(i, j)));
            count += ok as u64;
        }
        count
    }

    #[test]
    fn named_graphs_are_what_they_claim() {
        for name in ["k4", "prism", "k33", "petersen"] {
            let g = named_graph(name).unwrap();
            g.check_invariants().unwrap();
            assert!(is_three_regular(&g), "{name}");
        }
        assert_eq!(diamond().edge_count(), 5);
        assert_eq!(max_is_exact(&named_graph("petersen").unwrap()).unwrap().len(), 4);
        assert_eq!(named_graph("edgeless:4").unwrap(), Graph::empty(4));
        assert!(named_graph("k5").is_err());
        assert!(named_graph("cycle:x").is_err());
    }

    #[test]
    fn partition_layout() {
        let p = Partition::new(12, 4).unwrap();
        assert_eq!(p.part(2), 6..9);
        assert_eq!(p.part_of(8), 2);
        assert!(Partition::new(10, 4).is_err());
        assert!(Partition::new(10, 0).is_err());
    }

    #[test]
    fn planted_copy_obeys_partition() {
        for seed in 0..200 {
            let inst = plant_h(16, 0.5, &diamond(), seed).unwrap();
            inst.audit().unwrap();
            assert!(count_xh(&inst.graph, &inst.h, inst.partition).unwrap() >= 1);
        }
        let inst = plant_h(4, 0.7, &Graph::empty(2), 3).unwrap();
        assert!(!inst.graph.has_edge(inst.copy[0], inst.copy[1]));
        assert!(inst.copy[0] < 2 && inst.copy[1] >= 2);
        assert!(plant_h(10, 0.5, &diamond(), 0).is_err());
    }

    #[test]
    fn count_matches_brute_force() {
        assert_eq!(count_xh(&Graph::empty(4), &Graph::empty(2), Partition::new(4, 2).unwrap()).unwrap(), 4);
        for seed in 0..60 {
            let g = sample_gnp(12, 0.5, seed).unwrap();
            for h in [diamond(), Graph::complete(4), Graph::cycle(4)] {
                let part = Partition::new(12, 4).unwrap();
                assert_eq!(count_xh(&g, &h, part).unwrap(), brute_xh(&g, &h, part));
            }
            let h3 = Graph::cycle(3);
            let part = Partition::new(12, 3).unwrap();
            assert_eq!(count_xh(&g, &h3, part).unwrap(), brute_xh(&g, &h3, part));
        }
        assert!(count_xh(&Graph::empty(18), &Graph::empty(9), Partition::new(18, 9).unwrap()).is_err());
    }

    #[test]
    fn expected_count_formula() {
        assert!((expected_xh(16, &diamond(), 0.5) - 4.0).abs() < 1e-12);
        assert_eq!(likelihood_ratio(&Graph::complete(16), &diamond(), Partition::new(16, 4).unwrap(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn sampling_identity_is_exact_on_four_vertices() {
        // Averaging the planting map over all 64 base graphs and all 4 copy
        // placements gives the planted law; it must equal LR(g) / 64.
        let h = Graph::from_edges(2, [(0, 1)]).unwrap();
        let part = Partition::new(4, 2).unwrap();
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let decode = |code: u32| Graph::from_edges(4, pairs.iter().enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
        let encode = |g: &Graph| pairs.iter().enumerate().fold(0u32, |c, (i, &(u, v))| c | (g.has_edge(u, v) as u32) << i);
        let mut law = [0.0f64; 64];
        for code in 0..64 {
            for a in 0..2 {
                for b in 2..4 {
                    let mut g = decode(code);
                    g.add_edge(a, b);
                    law[encode(&g) as usize] += 1.0 / 256.0;
                }
            }
        }
        for code in 0..64u32 {
            let lr = likelihood_ratio(&decode(code), &h, part, 0.5).unwrap();
            assert!((law[code as usize] - lr / 64.0).abs() < 1e-15);
        }
        // and the seeded sampler follows that law
        let trials = 64_000;
        let mut freq = [0u32; 64];
        for seed in 0..trials {
            freq[encode(&plant_h(4, 0.5, &h, seed).unwrap().graph) as usize] += 1;
        }
        for code in 0..64 {
            let q = law[code];
            let sd = (trials as f64 * q * (1.0 - q)).sqrt();
            assert!((freq[code] as f64 - trials as f64 * q).abs() <= 4.0 * sd.max(1.0), "graph {code}");
        }
    }

    #[test]
    fn copy_count_mean() {
        let part = Partition::new(16, 4).unwrap();
        let trials = 20_000u64;
        let mean = (0..trials)
            .map(|s| count_xh(&sample_gnp(16, 0.5, s).unwrap(), &diamond(), part).unwrap() as f64)
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 4.0).abs() < 0.2, "mean {mean}");
    }

    #[test]
    fn independent_set_planting() {
        let n = 300;
        let p = (n as f64).powf(-0.4);
        for seed in 0..100 {
            let inst = plant_h_with_is(n, p, &diamond(), 20, 2, seed).unwrap();
            assert!(!inst.failed_default);
            assert_eq!(inst.i_prime.len(), 18);
            inst.audit().unwrap();
        }
        let inst = plant_h_with_is(16, 0.5, &diamond(), 3, 3, 1).unwrap();
        assert!(inst.i_prime.is_empty());
        assert!(plant_h_with_is(16, 0.5, &diamond(), 2, 3, 1).is_err());
        assert!(plant_h_with_is(16, 0.5, &diamond(), 13, 3, 1).is_err());
        // too few non-neighbors forces the default
        let inst = plant_h_with_is(8, 0.9, &Graph::empty(4), 4, 0, 5).unwrap();
        if inst.failed_default {
            assert_eq!(inst.i_prime.len(), 4);
            assert!(inst.graph.is_independent(&inst.i_prime));
        }
    }

    fn oracle(g: &Graph, _k: usize) -> Option<VertexSet> {
        max_is_exact(g).ok()
    }

    #[test]
    fn algrand_edgeless_and_soundness() {
        let params = AlgrandParams {
            n: 16,
            p: 0.5,
            k: 4,
            k_prime: 4,
            gamma: 1.0,
            seed: 0,
        };
        let t = algrand(&Graph::empty(4), params, oracle).unwrap();
        assert_eq!(params.iterations(), 28);
        assert!(t.certificate.is_some());
        for seed in 0..20 {
            let t = algrand(&Graph::complete(4), AlgrandParams { k_prime: 2, k: 6, seed, ..params }, oracle).unwrap();
            assert!(t.certificate.is_none());
            assert_eq!(t.steps.len(), 28);
        }
        assert!(algrand(&Graph::empty(4), AlgrandParams { gamma: 0.0, ..params }, oracle).is_err());
    }

    #[test]
    fn unique_structure_small() {
        let inst = plant_h_with_is(24, 0.45, &diamond(), 8, 2, 3).unwrap();
        let direct = {
            let copy = inst.copy_set();
            let alpha = max_is_exact(&inst.graph).unwrap().len();
            let mut all_ok = true;
            for mask in 0u32..1 << 24 {
                if mask.count_ones() as usize != alpha {
                    continue;
                }
                let s = VertexSet::from_vertices(24, (0..24).filter(|v| mask >> v & 1 == 1)).unwrap();
                if inst.graph.is_independent(&s) {
                    all_ok &= s.intersection_len(&copy) >= 2;
                }
            }
            all_ok
        };
        assert_eq!(check_unique_structure(&inst).unwrap(), direct);
        let big = plant_h(32, 0.5, &diamond(), 0).unwrap();
        assert!(check_unique_structure(&big).is_err());
    }
}
