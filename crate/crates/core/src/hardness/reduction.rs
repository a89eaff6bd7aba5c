//! Edge subdivision of cubic graphs and the balance test.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::Graph;
use crate::{Error, Result};

/// Exhaustive balance check up to this many vertices; flow above it.
pub const EXHAUSTIVE_BALANCE_MAX_N: usize = 24;

/// Nonnegative fraction in lowest terms, serialized as `"num/den"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Average degree `2|E|/|V|` as an exact fraction.
pub fn average_degree(g: &Graph) -> Ratio {
    Ratio::new(2 * g.edge_count() as u64, g.n().max(1) as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionOutput {
    #[serde(skip)]
    pub gadget: Graph,
    pub vertices: usize,
    pub edges: usize,
    pub t: usize,
    pub alpha_avg: Ratio,
    pub n_half: usize,
    /// Added to an independent set size of `H` to get one of the gadget.
    pub is_shift: usize,
}

impl ReductionOutput {
    pub fn map_is_size(&self, k: usize) -> usize {
        k + self.is_shift
    }
}

pub fn is_three_regular(h: &Graph) -> bool {
    (0..h.n()).all(|v| h.degree(v) == 3)
}

/// Replaces each edge of the cubic graph `h` by a path through `2t` new
/// vertices. Vertices of `h` keep their ids; the path vertices of the edges,
/// taken in lexicographic order, follow.
pub fn reduce_3regular(h: &Graph, t: usize) -> Result<ReductionOutput> {
    if t == 0 {
        return Err(Error::InvalidParameter("subdivision parameter t must be at least 1".into()));
    }
    if h.n() == 0 || !is_three_regular(h) {
        return Err(Error::InvalidParameter("reduction input must be a nonempty 3-regular graph".into()));
    }
    let n = h.n();
    let edges: Vec<(usize, usize)> = h.edges().collect();
    let total = n + 2 * t * edges.len();
    let mut path_edges = Vec::with_capacity(edges.len() * (2 * t + 1));
    let mut next = n;
    for &(u, v) in &edges {
        let mut prev = u;
        for _ in 0..2 * t {
            path_edges.push((prev, next));
            prev = next;
            next += 1;
        }
        path_edges.push((prev, v));
    }
    let gadget = Graph::from_edges(total, path_edges)?;
    let n_half = n / 2;
    Ok(ReductionOutput {
        vertices: gadget.n(),
        edges: gadget.edge_count(),
        alpha_avg: average_degree(&gadget),
        gadget,
        t,
        n_half,
        is_shift: 3 * n_half * t,
    })
}

/// Whether no induced subgraph is denser than the whole graph.
pub fn is_balanced(g: &Graph) -> bool {
    if g.n() <= EXHAUSTIVE_BALANCE_MAX_N {
        is_balanced_exhaustive(g)
    } else {
        is_balanced_flow(g)
    }
}

/// Gray-code walk over all vertex subsets, tracking the induced edge count.
pub fn is_balanced_exhaustive(g: &Graph) -> bool {
    let n = g.n();
    assert!(n <= 30, "exhaustive balance check needs n <= 30");
    if n == 0 {
        return true;
    }
    let a = n as u64;
    let b = g.edge_count() as u64;
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let mut mask = 0u32;
    let mut e = 0u64;
    for i in 1u64..1 << n {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let into = (nbr[v] & mask).count_ones() as u64;
        if mask & bit == 0 {
            mask |= bit;
            e += into;
        } else {
            mask &= !bit;
            e -= into;
        }
        // e/|S| > b/a
        if e * a > b * mask.count_ones() as u64 {
            return false;
        }
    }
    true
}

/// Maximum-closure formulation: an edge node of weight `|V|` requires both
/// endpoints, each of weight `-|E|`. Some subset beats the global density
/// exactly when the closure value `|V||E| - mincut` is positive.
pub fn is_balanced_flow(g: &Graph) -> bool {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.is_empty() {
        return true;
    }
    let a = n as i64;
    let b = edges.len() as i64;
    let src = 0;
    let sink = 1;
    let vbase = 2;
    let ebase = 2 + n;
    let mut flow = Dinic::new(ebase + edges.len());
    let inf = a * b + 1;
    for (i, &(u, v)) in edges.iter().enumerate() {
        flow.add(src, ebase + i, a);
        flow.add(ebase + i, vbase + u, inf);
        flow.add(ebase + i, vbase + v, inf);
    }
    for v in 0..n {
        flow.add(vbase + v, sink, b);
    }
    flow.max_flow(src, sink) == a * b
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    it: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Self {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            it: vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Blocking flow by iterative DFS over the level graph.
    fn push(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= f;
                    self.cap[e ^ 1] += f;
                }
                total += f;
                path.clear();
                u = s;
                continue;
            }
            let mut advanced = false;
            while self.it[u] < self.head[u].len() {
                let e = self.head[u][self.it[u]];
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                self.it[u] += 1;
            }
            if advanced {
                continue;
            }
            // dead end: retreat
            self.level[u] = -1;
            match path.pop() {
                Some(e) => {
                    u = self.to[e ^ 1];
                    self.it[u] += 1;
                }
                None => return total,
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut f = 0;
        while self.bfs(s, t) {
            self.it.fill(0);
            f += self.push(s, t);
        }
        f
    }
}
