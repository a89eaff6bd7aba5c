//! Dense undirected simple graphs with bitset adjacency rows.
//!
//! Every algorithm in the crate works on [`Graph`] and [`VertexSet`]. Rows are
//! stored contiguously so that neighborhood intersections reduce to
//! popcount-AND over machine words.

mod bitset;
pub mod io;

pub use bitset::VertexSet;
pub(crate) use bitset::{popcount, popcount_and, words_for, Ones};

use crate::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Symmetric, loop-free, and immutable once built. Mutation is only exposed
/// to the crate so that planting can produce new graphs from old ones.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    w: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            w,
            adj: vec![0; n * w],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        let full = VertexSet::full(n);
        for v in 0..n {
            g.adj[v * g.w..(v + 1) * g.w].copy_from_slice(full.words());
            g.clear_bit(v, v);
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) outside vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if f(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// The cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.add_edge(i, (i + 1) % n);
            }
        }
        g
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize) {
        self.adj[u * self.w + v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    fn clear_bit(&mut self, u: usize, v: usize) {
        self.adj[u * self.w + v / 64] &= !(1u64 << (v % 64));
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.set_bit(u, v);
        self.set_bit(v, u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.clear_bit(u, v);
        self.clear_bit(v, u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.adj[u * self.w + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Raw neighbor bitset of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.w..(v + 1) * self.w]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        Ones::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn degree(&self, v: usize) -> usize {
        popcount(self.row(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        popcount(&self.adj) / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `|N(v) ∩ s|`.
    #[inline]
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        debug_assert_eq!(s.universe(), self.n);
        popcount_and(self.row(v), s.words())
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let full = VertexSet::full(self.n);
        for v in 0..self.n {
            let dst = &mut g.adj[v * g.w..(v + 1) * g.w];
            for ((d, a), f) in dst.iter_mut().zip(self.row(v)).zip(full.words()) {
                *d = !a & f;
            }
            g.clear_bit(v, v);
        }
        g
    }

    /// Subgraph induced on `s`, re-indexed to `0..|s|`; `map[i]` is the
    /// original id of new vertex `i`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut g = Graph::empty(map.len());
        for (a, &u) in map.iter().enumerate() {
            for (b, &v) in map.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        (g, map)
    }

    /// Vertices outside `s` adjacent to every member of `s`.
    pub fn common_neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        let mut it = s.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidParameter("common neighborhood of empty set".into()))?;
        let mut acc = self.row(first).to_vec();
        for v in it {
            for (a, r) in acc.iter_mut().zip(self.row(v)) {
                *a &= r;
            }
        }
        for (a, b) in acc.iter_mut().zip(s.words()) {
            *a &= !b;
        }
        Ok(VertexSet::from_words(self.n, acc))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let k = s.len();
        s.iter().all(|v| self.degree_in(v, s) == k - 1)
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.degree_in(v, s) == 0)
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree_in(v, s)).sum::<usize>() / 2
    }

    /// Adds every missing edge inside `s`.
    pub(crate) fn make_clique(&mut self, s: &VertexSet) {
        for v in s.iter() {
            let row = &mut self.adj[v * self.w..(v + 1) * self.w];
            for (r, b) in row.iter_mut().zip(s.words()) {
                *r |= b;
            }
            self.clear_bit(v, v);
        }
    }

    /// Removes every edge inside `s`.
    pub(crate) fn make_independent(&mut self, s: &VertexSet) {
        for v in s.iter() {
            let row = &mut self.adj[v * self.w..(v + 1) * self.w];
            for (r, b) in row.iter_mut().zip(s.words()) {
                *r &= !b;
            }
        }
    }

    /// Checks symmetry, absence of loops and that no bit beyond `n` is set.
    pub fn check_invariants(&self) -> Result<()> {
        let full = VertexSet::full(self.n);
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            if self.row(u).iter().zip(full.words()).any(|(r, f)| r & !f != 0) {
                return Err(Error::InvalidParameter(format!("row {u} has bits beyond n")));
            }
            for v in self.neighbors(u) {
                if !self.has_edge(v, u) {
                    return Err(Error::InvalidParameter(format!("asymmetric pair ({u},{v})")));
                }
            }
        }
        Ok(())
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}
