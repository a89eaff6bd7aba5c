use crate::graph::{popcount_and, Graph, Ones, VertexSet};
use crate::{Error, Result};

/// Exact minimum vertex cover of `g`, provided one of size at most
/// `depth_cap` exists.
///
/// Iterative deepening over the cover size; each level branches on the
/// lexicographically smallest remaining edge `(u, v)`, putting `u` or `v`
/// into the cover. A vertex whose degree exceeds the remaining budget is
/// forced into the cover, and a level is abandoned as soon as the remaining
/// edges cannot be covered by `budget` vertices of the current maximum degree.
pub fn min_vertex_cover_branching(g: &Graph, depth_cap: usize) -> Result<VertexSet> {
    min_vertex_cover_counted(g, depth_cap).map(|(c, _)| c)
}

/// As [`min_vertex_cover_branching`], also returning the number of search
/// nodes visited over all deepening rounds.
pub fn min_vertex_cover_counted(g: &Graph, depth_cap: usize) -> Result<(VertexSet, u64)> {
    let n = g.n();
    let alive = VertexSet::full(n);
    let mut nodes = 0;
    for budget in 0..=depth_cap {
        let mut search = CoverSearch {
            g,
            cover: Vec::new(),
            nodes: 0,
        };
        let found = search.solve(alive.clone(), budget);
        nodes += search.nodes;
        if found {
            return Ok((VertexSet::from_vertices(n, search.cover)?, nodes));
        }
    }
    Err(Error::DepthExceeded { cap: depth_cap })
}

struct CoverSearch<'a> {
    g: &'a Graph,
    cover: Vec<usize>,
    nodes: u64,
}

impl CoverSearch<'_> {
    fn live_degree(&self, v: usize, alive: &VertexSet) -> usize {
        popcount_and(self.g.row(v), alive.words())
    }

    fn solve(&mut self, mut alive: VertexSet, mut budget: usize) -> bool {
        let mark = self.cover.len();
        self.nodes += 1;
        loop {
            // forced vertices: degree above budget
            let mut edges2 = 0usize;
            let mut max_deg = 0usize;
            let mut forced = None;
            let mut first_edge = None;
            for v in alive.iter() {
                let d = self.live_degree(v, &alive);
                if d == 0 {
                    continue;
                }
                if first_edge.is_none() {
                    let u = Ones::new(self.g.row(v))
                        .find(|&u| alive.contains(u))
                        .expect("positive live degree");
                    first_edge = Some((v, u));
                }
                edges2 += d;
                max_deg = max_deg.max(d);
                if d > budget && forced.is_none() {
                    forced = Some(v);
                }
            }
            let Some((u, v)) = first_edge else {
                return true;
            };
            if budget == 0 || edges2 / 2 > budget * max_deg {
                self.cover.truncate(mark);
                return false;
            }
            if let Some(f) = forced {
                self.cover.push(f);
                alive.remove(f);
                budget -= 1;
                continue;
            }
            for pick in [u, v] {
                let mut next = alive.clone();
                next.remove(pick);
                let inner = self.cover.len();
                self.cover.push(pick);
                if self.solve(next, budget - 1) {
                    return true;
                }
                self.cover.truncate(inner);
            }
            self.cover.truncate(mark);
            return false;
        }
    }
}

pub fn is_vertex_cover(g: &Graph, cover: &VertexSet) -> bool {
    g.edges().all(|(u, v)| cover.contains(u) || cover.contains(v))
}
