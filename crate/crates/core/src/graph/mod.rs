//! Graph representations and the exact small-scale oracles used to check
//! every step of the pipeline.

mod degeneracy;
mod induced;
pub mod oracles;
mod tree;

use fixedbitset::FixedBitSet;

use crate::geometry::AxisBox;

pub use degeneracy::degeneracy_coloring;
pub use induced::{find_induced_copy, is_path_induced, is_path_induced_in, verify_induced_embedding};
pub use oracles::{alpha, chi, max_clique_in, maximum_independent_set, omega, OracleLimits};
pub use tree::{make_trk, trk_size, RootedTree};

/// Anything that can answer "are `u` and `v` adjacent?" in an undirected sense.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn adjacent(&self, u: usize, v: usize) -> bool;
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Panics on self-loops.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].ones()
    }

    pub fn neighbor_set(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.adj
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

/// Directed graph without self-loops; at most one arc per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self {
            out: vec![FixedBitSet::with_capacity(n); n],
            inn: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut dg = Self::new(n);
        for (u, v) in arcs {
            dg.add_arc(u, v);
        }
        dg
    }

    /// Panics on self-loops.
    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop at {u}");
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].ones()
    }

    pub fn in_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.inn[u].ones()
    }

    pub fn out_set(&self, u: usize) -> &FixedBitSet {
        &self.out[u]
    }

    pub fn in_set(&self, u: usize) -> &FixedBitSet {
        &self.inn[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].count_ones(..)
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.out[u].ones().map(move |v| (u, v)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Forget directions.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.arcs() {
            g.add_edge(u, v);
        }
        g
    }

    /// Kahn's algorithm; `None` if there is a directed cycle. Among ready
    /// vertices the smallest id goes first.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inn[v].count_ones(..)).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for v in self.out[u].ones() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices reachable from `u` by a directed path of length >= 1.
    pub fn descendants(&self, u: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.n());
        let mut stack: Vec<usize> = self.out[u].ones().collect();
        while let Some(v) = stack.pop() {
            if seen.contains(v) {
                continue;
            }
            seen.insert(v);
            stack.extend(self.out[v].ones().filter(|&w| !seen.contains(w)));
        }
        seen
    }
}

impl Adjacency for Digraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }
}

/// Vertex colouring with colours in `0..palette_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub palette_size: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, palette_size: usize) -> Self {
        Self {
            colors,
            palette_size,
        }
    }

    /// Palette size is one more than the largest colour used.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let palette_size = colors.iter().max().map_or(0, |&c| c + 1);
        Self {
            colors,
            palette_size,
        }
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn distinct_colors(&self) -> usize {
        let mut seen: Vec<usize> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// First monochromatic edge, if any, in lexicographic order.
    pub fn first_conflict<A: Adjacency>(&self, g: &A) -> Option<(usize, usize)> {
        let n = g.vertex_count();
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .find(|&(u, v)| g.adjacent(u, v) && self.colors[u] == self.colors[v])
    }

    /// Proper on `g`, covers every vertex, and stays inside the palette.
    pub fn is_proper_on<A: Adjacency>(&self, g: &A) -> bool {
        self.colors.len() == g.vertex_count()
            && self.colors.iter().all(|&c| c < self.palette_size)
            && self.first_conflict(g).is_none()
    }
}

/// Intersection graph: vertex `i` is `boxes[i]`.
pub fn intersection_graph(boxes: &[AxisBox]) -> Graph {
    let n = boxes.len();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if boxes[u].intersects(&boxes[v]) {
                g.add_edge(u, v);
            }
        }
    }
    g
}
