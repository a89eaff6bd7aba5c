//! Seeded `G(n, p)` sampling and planting strategies.
//!
//! A strategy sees only the base graph and a seed, never the solver. Planting
//! a clique inserts every missing edge inside the chosen set; planting an
//! independent set deletes every edge inside it. The base graph is retained
//! so the modification can be audited.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Redraws of the helper set `T` before the common-neighborhood adversary
/// gives up (or falls back to filling).
pub const COMMON_NEIGHBORHOOD_REDRAWS: usize = 32;

/// Edge probabilities below this use geometric skipping.
const SPARSE_SAMPLING_THRESHOLD: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn new(n: usize, p: f64, k: usize, seed: u64) -> Result<Self> {
        let params = Self { n, p, k, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.k > self.n {
            return Err(Error::InvalidParameter(format!(
                "planted size k={} exceeds n={}",
                self.k, self.n
            )));
        }
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("edge probability {p} not in (0,1)")))
    }
}

/// What the common-neighborhood adversary does when no helper set `T` has
/// `k` common neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborhoodFill {
    /// Fail with a generation error.
    #[default]
    Strict,
    /// Take all of `N*(T)` and complete `K` with the vertices having the most
    /// neighbors in `T`.
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Strategy {
    Random,
    CommonNeighborhood {
        t_size: usize,
        #[serde(default)]
        fill: NeighborhoodFill,
    },
    LowDegree,
    IsRandom,
    IsLowDegree,
}

impl Strategy {
    pub fn kind(&self) -> PlantKind {
        match self {
            Strategy::IsRandom | Strategy::IsLowDegree => PlantKind::IndependentSet,
            _ => PlantKind::Clique,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantKind {
    Clique,
    IndependentSet,
}

/// Strategy plus whatever it decided along the way.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adversary {
    pub strategy: Strategy,
    /// Helper set of the common-neighborhood adversary.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<Vec<usize>>,
    /// `|N*(T)|` of the helper set that was used.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub common_neighborhood_size: Option<usize>,
    /// Number of planted vertices taken from outside `N*(T)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filled: Option<usize>,
}

impl Adversary {
    fn plain(strategy: Strategy) -> Self {
        Self {
            strategy,
            t: None,
            common_neighborhood_size: None,
            filled: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub base: Graph,
    pub planted_graph: Graph,
    /// The planted set `K`.
    pub planted: VertexSet,
    pub params: GenParams,
    pub adversary: Adversary,
}

impl PlantedInstance {
    pub fn kind(&self) -> PlantKind {
        self.adversary.strategy.kind()
    }

    pub fn k(&self) -> usize {
        self.planted.len()
    }

    /// Checks the planting postconditions against the retained base graph.
    pub fn audit(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Generation(msg));
        self.planted_graph.check_invariants()?;
        if self.planted.len() != self.params.k {
            return fail(format!("|K|={} but k={}", self.planted.len(), self.params.k));
        }
        let kind = self.kind();
        match kind {
            PlantKind::Clique if !self.planted_graph.is_clique(&self.planted) => {
                return fail("K is not a clique".into())
            }
            PlantKind::IndependentSet if !self.planted_graph.is_independent(&self.planted) => {
                return fail("K is not independent".into())
            }
            _ => {}
        }
        for u in 0..self.base.n() {
            let diff: Vec<u64> = self
                .base
                .row(u)
                .iter()
                .zip(self.planted_graph.row(u))
                .map(|(a, b)| a ^ b)
                .collect();
            let touched = crate::graph::Ones::new(&diff);
            for v in touched {
                if !(self.planted.contains(u) && self.planted.contains(v)) {
                    return fail(format!("pair ({u},{v}) changed outside K"));
                }
                let added = self.planted_graph.has_edge(u, v);
                if added != (kind == PlantKind::Clique) {
                    return fail(format!("pair ({u},{v}) changed in the wrong direction"));
                }
            }
        }
        Ok(())
    }
}

/// Each unordered pair independently with probability `p`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = stream(seed, Stream::Edges);
    let mut g = Graph::empty(n);
    if p >= SPARSE_SAMPLING_THRESHOLD {
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    g.add_edge(u, v);
                }
            }
        }
    } else {
        // Walk the pairs (u, v), u < v, in lexicographic order, jumping over
        // Geometric(p) gaps.
        let log_q = (1.0 - p).ln();
        let (mut u, mut v) = (0usize, 0usize);
        loop {
            let r: f64 = rng.random::<f64>();
            let skip = ((1.0 - r).ln() / log_q).floor() as usize;
            v += skip + 1;
            while u < n && v >= n {
                v = v - n + u + 2;
                u += 1;
            }
            if u + 1 >= n {
                break;
            }
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Edge-count deviation of `g` from `p * C(n,2)` in binomial standard deviations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DensityCheck {
    pub edges: usize,
    pub expected: f64,
    pub z: f64,
    /// Set when `n >= 100` and `|z| > 3`.
    pub flagged: bool,
}

pub fn density_check(g: &Graph, p: f64) -> DensityCheck {
    let pairs = (g.n() * g.n().saturating_sub(1) / 2) as f64;
    let expected = pairs * p;
    let sd = (pairs * p * (1.0 - p)).sqrt();
    let edges = g.edge_count();
    let z = if sd > 0.0 { (edges as f64 - expected) / sd } else { 0.0 };
    DensityCheck {
        edges,
        expected,
        z,
        flagged: g.n() >= 100 && z.abs() > 3.0,
    }
}

pub(crate) fn random_subset_of(pool: &[usize], k: usize, rng: &mut impl Rng, n: usize) -> VertexSet {
    let mut s = VertexSet::new(n);
    for i in index::sample(rng, pool.len(), k) {
        s.insert(pool[i]);
    }
    s
}

fn finish(base: &Graph, params: GenParams, planted: VertexSet, adversary: Adversary) -> PlantedInstance {
    let mut planted_graph = base.clone();
    match adversary.strategy.kind() {
        PlantKind::Clique => planted_graph.make_clique(&planted),
        PlantKind::IndependentSet => planted_graph.make_independent(&planted),
    }
    let inst = PlantedInstance {
        base: base.clone(),
        planted_graph,
        planted,
        params,
        adversary,
    };
    debug_assert!(inst.audit().is_ok());
    inst
}

fn check_base(base: &Graph, params: &GenParams) -> Result<()> {
    params.validate()?;
    if base.n() != params.n {
        return Err(Error::InvalidParameter(format!(
            "base graph has {} vertices, params say {}",
            base.n(),
            params.n
        )));
    }
    Ok(())
}

/// Samples the base graph from `params` and plants with `strategy`.
pub fn generate(params: &GenParams, strategy: &Strategy) -> Result<PlantedInstance> {
    params.validate()?;
    let base = sample_gnp(params.n, params.p, params.seed)?;
    plant(&base, params, strategy)
}

pub fn plant(base: &Graph, params: &GenParams, strategy: &Strategy) -> Result<PlantedInstance> {
    match *strategy {
        Strategy::Random => plant_random(base, params),
        Strategy::CommonNeighborhood { t_size, fill } => {
            plant_common_neighborhood(base, params, t_size, fill)
        }
        Strategy::LowDegree => plant_low_degree(base, params),
        Strategy::IsRandom => plant_independent_set(base, params, IsStrategy::Random),
        Strategy::IsLowDegree => plant_independent_set(base, params, IsStrategy::LowDegreeComplement),
    }
}

/// Uniform `k`-subset made into a clique.
pub fn plant_random(base: &Graph, params: &GenParams) -> Result<PlantedInstance> {
    check_base(base, params)?;
    let n = base.n();
    let mut rng = stream(params.seed, Stream::PlantedSet);
    let pool: Vec<usize> = (0..n).collect();
    let k_set = random_subset_of(&pool, params.k, &mut rng, n);
    Ok(finish(base, *params, k_set, Adversary::plain(Strategy::Random)))
}

/// Draws a helper set `T` of `t_size` vertices and plants `K` inside its
/// common neighborhood, so any clique inside `T` extends `K`.
pub fn plant_common_neighborhood(
    base: &Graph,
    params: &GenParams,
    t_size: usize,
    fill: NeighborhoodFill,
) -> Result<PlantedInstance> {
    check_base(base, params)?;
    let n = base.n();
    let k = params.k;
    if t_size + k > n {
        return Err(Error::InvalidParameter(format!(
            "t_size={t_size} plus k={k} exceeds n={n}"
        )));
    }
    let mut t_rng = stream(params.seed, Stream::HelperSet);
    let mut best: Option<(VertexSet, VertexSet)> = None;
    for _ in 0..COMMON_NEIGHBORHOOD_REDRAWS {
        let t = random_subset_of(&(0..n).collect::<Vec<_>>(), t_size, &mut t_rng, n);
        let common = if t.is_empty() {
            VertexSet::full(n)
        } else {
            base.common_neighborhood(&t)?
        };
        let better = best.as_ref().is_none_or(|(_, c)| common.len() > c.len());
        let enough = common.len() >= k;
        if better {
            best = Some((t, common));
        }
        if enough {
            break;
        }
    }
    let (t, common) = best.expect("at least one draw");
    let mut rng = stream(params.seed, Stream::PlantedSet);
    let strategy = Strategy::CommonNeighborhood { t_size, fill };
    let mut adversary = Adversary {
        strategy,
        t: Some(t.to_vec()),
        common_neighborhood_size: Some(common.len()),
        filled: None,
    };
    let k_set = if common.len() >= k {
        random_subset_of(&common.to_vec(), k, &mut rng, n)
    } else {
        match fill {
            NeighborhoodFill::Strict => {
                return Err(Error::Generation(format!(
                    "no helper set of size {t_size} has {k} common neighbors after \
                     {COMMON_NEIGHBORHOOD_REDRAWS} draws; largest was {}",
                    common.len()
                )))
            }
            NeighborhoodFill::Greedy => {
                let mut rest: Vec<usize> = (0..n)
                    .filter(|&v| !t.contains(v) && !common.contains(v))
                    .collect();
                rest.shuffle(&mut rng);
                rest.sort_by_key(|&v| std::cmp::Reverse(base.degree_in(v, &t)));
                let missing = k - common.len();
                adversary.filled = Some(missing);
                let mut k_set = common.clone();
                for &v in &rest[..missing] {
                    k_set.insert(v);
                }
                k_set
            }
        }
    };
    Ok(finish(base, *params, k_set, adversary))
}

/// Greedily picks `k` vertices spanning few edges of `g`: each step adds a
/// vertex with the fewest neighbors among those already chosen, preferring
/// lower overall degree, then a seeded random choice.
pub(crate) fn greedy_sparse_subset(g: &Graph, k: usize, seed: u64) -> VertexSet {
    let n = g.n();
    let mut rng = stream(seed, Stream::TieBreak);
    let mut jitter: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let degree = g.degrees();
    let mut into = vec![0usize; n];
    let mut chosen = VertexSet::new(n);
    for _ in 0..k {
        let v = (0..n)
            .filter(|&v| !chosen.contains(v))
            .min_by_key(|&v| (into[v], degree[v], jitter[v]))
            .expect("k <= n");
        chosen.insert(v);
        jitter[v] = u64::MAX;
        for u in g.neighbors(v) {
            into[u] += 1;
        }
    }
    chosen
}

/// Plants on a greedily chosen sparse subset, muting the degree signal that
/// a planted clique otherwise leaves.
pub fn plant_low_degree(base: &Graph, params: &GenParams) -> Result<PlantedInstance> {
    check_base(base, params)?;
    let k_set = greedy_sparse_subset(base, params.k, params.seed);
    Ok(finish(base, *params, k_set, Adversary::plain(Strategy::LowDegree)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsStrategy {
    Random,
    /// Greedy sparse subset of the complement, i.e. a dense subset of `g`.
    LowDegreeComplement,
}

/// Deletes all edges inside the chosen `k`-set.
pub fn plant_independent_set(base: &Graph, params: &GenParams, strategy: IsStrategy) -> Result<PlantedInstance> {
    check_base(base, params)?;
    let n = base.n();
    let (k_set, strategy) = match strategy {
        IsStrategy::Random => {
            let mut rng = stream(params.seed, Stream::PlantedSet);
            let pool: Vec<usize> = (0..n).collect();
            (random_subset_of(&pool, params.k, &mut rng, n), Strategy::IsRandom)
        }
        IsStrategy::LowDegreeComplement => (
            greedy_sparse_subset(&base.complement(), params.k, params.seed),
            Strategy::IsLowDegree,
        ),
    };
    Ok(finish(base, *params, k_set, Adversary::plain(strategy)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, k: usize, seed: u64) -> GenParams {
        GenParams::new(n, p, k, seed).unwrap()
    }

    #[test]
    fn gnp_is_deterministic() {
        assert_eq!(sample_gnp(50, 0.3, 9).unwrap(), sample_gnp(50, 0.3, 9).unwrap());
        assert_ne!(sample_gnp(50, 0.3, 9).unwrap(), sample_gnp(50, 0.3, 10).unwrap());
        assert_eq!(sample_gnp(0, 0.5, 1).unwrap().n(), 0);
    }

    #[test]
    fn gnp_rejects_bad_probability() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(sample_gnp(10, p, 0).is_err());
        }
    }

    #[test]
    fn gnp_mean_edge_count() {
        let pairs = 200.0 * 199.0 / 2.0;
        let mean = (0..1000u64)
            .map(|s| sample_gnp(200, 0.5, s).unwrap().edge_count() as f64)
            .sum::<f64>()
            / 1000.0;
        assert!((0.48 * pairs..=0.52 * pairs).contains(&mean), "mean {mean}");
    }

    #[test]
    fn sparse_sampler_matches_density() {
        // geometric skipping path
        let n = 1500;
        let p = 0.004;
        let mut flagged = 0;
        let mut total = 0.0;
        for s in 0..20 {
            let g = sample_gnp(n, p, s).unwrap();
            g.check_invariants().unwrap();
            let chk = density_check(&g, p);
            flagged += chk.flagged as usize;
            total += chk.z;
        }
        assert!(flagged <= 1, "{flagged} flagged");
        assert!((total / 20.0).abs() < 1.0);
    }

    #[test]
    fn sparse_sampler_covers_last_pair() {
        // With p just below the threshold on a tiny graph every pair is reachable.
        let mut seen = Graph::empty(4);
        for s in 0..3000 {
            let g = sample_gnp(4, 0.009, s).unwrap();
            for (u, v) in g.edges() {
                seen.add_edge(u, v);
            }
        }
        assert_eq!(seen, Graph::complete(4));
    }

    #[test]
    fn random_planting_edge_cases() {
        let base = sample_gnp(30, 0.5, 1).unwrap();
        let none = plant_random(&base, &params(30, 0.5, 0, 1)).unwrap();
        assert_eq!(none.planted_graph, base);
        let all = plant_random(&base, &params(30, 0.5, 30, 1)).unwrap();
        assert_eq!(all.planted_graph, Graph::complete(30));
        assert!(GenParams::new(30, 0.5, 31, 0).is_err());
    }

    #[test]
    fn random_planting_is_a_clique() {
        for seed in 0..100 {
            let inst = generate(&params(60, 0.5, 12, seed), &Strategy::Random).unwrap();
            assert!(inst.planted_graph.is_clique(&inst.planted));
            inst.audit().unwrap();
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let strategies = [
            Strategy::Random,
            Strategy::CommonNeighborhood {
                t_size: 2,
                fill: NeighborhoodFill::Greedy,
            },
            Strategy::LowDegree,
            Strategy::IsRandom,
            Strategy::IsLowDegree,
        ];
        for s in strategies {
            let a = generate(&params(80, 0.5, 20, 3), &s).unwrap();
            let b = generate(&params(80, 0.5, 20, 3), &s).unwrap();
            assert_eq!(a.planted_graph, b.planted_graph);
            assert_eq!(a.planted, b.planted);
            assert_eq!(a.adversary, b.adversary);
            a.audit().unwrap();
        }
    }

    #[test]
    fn empty_helper_set_is_random_planting_in_v() {
        let inst = generate(
            &params(50, 0.5, 10, 2),
            &Strategy::CommonNeighborhood {
                t_size: 0,
                fill: NeighborhoodFill::Strict,
            },
        )
        .unwrap();
        assert_eq!(inst.adversary.common_neighborhood_size, Some(50));
        assert_eq!(inst.adversary.t.as_deref(), Some(&[][..]));
        inst.audit().unwrap();
    }

    #[test]
    fn common_neighborhood_planting_is_adjacent_to_t() {
        // |N*(T)| is about n / 2^t, so k has to fit below it.
        for seed in 0..10 {
            let inst = generate(
                &params(400, 0.5, 40, seed),
                &Strategy::CommonNeighborhood {
                    t_size: 3,
                    fill: NeighborhoodFill::Strict,
                },
            )
            .unwrap();
            let t = inst.adversary.t.clone().unwrap();
            assert_eq!(t.len(), 3);
            for v in inst.planted.iter() {
                assert!(t.iter().all(|&u| inst.planted_graph.has_edge(u, v)));
            }
            inst.audit().unwrap();
        }
    }

    #[test]
    fn strict_common_neighborhood_reports_largest_draw() {
        let err = generate(
            &params(400, 0.5, 200, 0),
            &Strategy::CommonNeighborhood {
                t_size: 3,
                fill: NeighborhoodFill::Strict,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Generation(ref m) if m.contains("largest was")), "{err}");
    }

    #[test]
    fn greedy_fill_takes_whole_neighborhood() {
        let inst = generate(
            &params(400, 0.5, 200, 4),
            &Strategy::CommonNeighborhood {
                t_size: 5,
                fill: NeighborhoodFill::Greedy,
            },
        )
        .unwrap();
        let t = VertexSet::from_vertices(400, inst.adversary.t.clone().unwrap()).unwrap();
        let common = inst.base.common_neighborhood(&t).unwrap();
        assert!(common.is_subset(&inst.planted));
        assert!(inst.planted.is_disjoint(&t));
        assert_eq!(inst.adversary.filled, Some(200 - common.len()));
        // filled vertices are at least as attached to T as any vertex left out
        let min_in = inst.planted.iter().map(|v| inst.base.degree_in(v, &t)).min().unwrap();
        let outside = inst.planted.union(&t).complement();
        let max_out = outside.iter().map(|v| inst.base.degree_in(v, &t)).max().unwrap();
        assert!(min_in >= max_out);
        inst.audit().unwrap();
    }

    #[test]
    fn low_degree_edge_cases() {
        let base = sample_gnp(25, 0.5, 5).unwrap();
        let all = plant_low_degree(&base, &params(25, 0.5, 25, 5)).unwrap();
        assert_eq!(all.planted.len(), 25);
        let one = plant_low_degree(&base, &params(25, 0.5, 1, 5)).unwrap();
        assert_eq!(one.planted_graph, base);
    }

    #[test]
    fn low_degree_selection_is_sparser_than_random() {
        let mut wins = 0;
        for seed in 0..20 {
            let base = sample_gnp(300, 0.5, seed).unwrap();
            let p = params(300, 0.5, 120, seed);
            let greedy = plant_low_degree(&base, &p).unwrap();
            let random = plant_random(&base, &p).unwrap();
            if base.edges_within(&greedy.planted) <= base.edges_within(&random.planted) {
                wins += 1;
            }
        }
        assert!(wins >= 18, "{wins}/20");
    }

    #[test]
    fn independent_set_planting() {
        let base = sample_gnp(40, 0.5, 8).unwrap();
        let none = plant_independent_set(&base, &params(40, 0.5, 0, 8), IsStrategy::Random).unwrap();
        assert_eq!(none.planted_graph, base);
        for seed in 0..50 {
            for s in [IsStrategy::Random, IsStrategy::LowDegreeComplement] {
                let inst = plant_independent_set(&base, &params(40, 0.5, 9, seed), s).unwrap();
                assert!(inst.planted_graph.is_independent(&inst.planted));
                inst.audit().unwrap();
            }
        }
    }

    #[test]
    fn independent_set_is_dual_to_clique() {
        let base = sample_gnp(40, 0.5, 11).unwrap();
        let p = params(40, 0.5, 10, 11);
        let is = plant_independent_set(&base, &p, IsStrategy::Random).unwrap();
        let mut clique_on_complement = base.complement();
        clique_on_complement.make_clique(&is.planted);
        assert_eq!(is.planted_graph.complement(), clique_on_complement);
    }

    #[test]
    fn audit_catches_tampering() {
        let mut inst = generate(&params(30, 0.5, 5, 1), &Strategy::Random).unwrap();
        let outside: Vec<usize> = inst.planted.complement().iter().take(2).collect();
        if inst.planted_graph.has_edge(outside[0], outside[1]) {
            inst.planted_graph.remove_edge(outside[0], outside[1]);
        } else {
            inst.planted_graph.add_edge(outside[0], outside[1]);
        }
        assert!(inst.audit().is_err());
    }

    #[test]
    fn strategy_json_shape() {
        let s = Strategy::CommonNeighborhood {
            t_size: 5,
            fill: NeighborhoodFill::Greedy,
        };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"name":"common-neighborhood","t_size":5,"fill":"greedy"}"#);
        assert_eq!(serde_json::from_str::<Strategy>(&j).unwrap(), s);
        assert_eq!(serde_json::to_string(&Strategy::IsRandom).unwrap(), r#"{"name":"is-random"}"#);
    }
}
