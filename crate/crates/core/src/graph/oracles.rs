//! Exact clique, independence and chromatic numbers.
//!
//! These are exponential in the worst case, so every public entry point is
//! guarded by an [`OracleLimits`] size check that refuses rather than
//! approximates.

use fixedbitset::FixedBitSet;

use super::{Coloring, Graph};
use crate::error::{Error, Result};

/// Maximum instance sizes the exact oracles will accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// ω and α.
    pub clique: usize,
    /// χ.
    pub chi: usize,
    /// Pattern tree size for induced-copy search.
    pub induced: usize,
    /// Vertex count for the path-enumerating structural checks.
    pub paths: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            clique: 40,
            chi: 20,
            induced: 40,
            paths: 14,
        }
    }
}

impl OracleLimits {
    pub fn check(limit: usize, size: usize, what: &'static str) -> Result<()> {
        if size > limit {
            Err(Error::OracleLimit { what, size, limit })
        } else {
            Ok(())
        }
    }
}

/// Maximum clique among `candidates` in the graph given by adjacency rows.
/// Returned sorted. No size limit: callers decide whether it is affordable.
pub fn max_clique_in(rows: &[FixedBitSet], candidates: &FixedBitSet) -> Vec<usize> {
    let mut best = Vec::new();
    let mut current = Vec::new();
    let mut p = FixedBitSet::with_capacity(rows.len());
    p.union_with(candidates);
    expand(rows, p, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn expand(rows: &[FixedBitSet], mut p: FixedBitSet, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let (order, bounds) = color_sort(rows, &p);
    for i in (0..order.len()).rev() {
        if current.len() + bounds[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let mut next = p.clone();
        next.intersect_with(&rows[v]);
        if next.is_clear() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(rows, next, current, best);
        }
        current.pop();
        p.set(v, false);
    }
}

// Greedy colour classes give an upper bound on the clique size in each suffix.
fn color_sort(rows: &[FixedBitSet], p: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = p.clone();
    let mut order = Vec::new();
    let mut bounds = Vec::new();
    let mut color = 0;
    while !uncolored.is_clear() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.minimum() {
            uncolored.set(v, false);
            q.set(v, false);
            q.difference_with(&rows[v]);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

fn all_vertices(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub fn maximum_clique(g: &Graph, limits: &OracleLimits) -> Result<Vec<usize>> {
    OracleLimits::check(limits.clique, g.n(), "clique oracle")?;
    Ok(max_clique_in(g.rows(), &all_vertices(g.n())))
}

pub fn omega(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    maximum_clique(g, limits).map(|c| c.len())
}

pub fn maximum_independent_set(g: &Graph, limits: &OracleLimits) -> Result<Vec<usize>> {
    OracleLimits::check(limits.clique, g.n(), "independence oracle")?;
    let co = g.complement();
    Ok(max_clique_in(co.rows(), &all_vertices(g.n())))
}

pub fn alpha(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    maximum_independent_set(g, limits).map(|s| s.len())
}

pub fn chi(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    optimal_coloring(g, limits).map(|c| c.palette_size)
}

/// Optimal colouring: binary search on `k` between ω and the DSATUR greedy
/// count, with exact k-colourability by DSATUR-ordered backtracking.
pub fn optimal_coloring(g: &Graph, limits: &OracleLimits) -> Result<Coloring> {
    OracleLimits::check(limits.chi, g.n(), "chromatic oracle")?;
    let n = g.n();
    if n == 0 {
        return Ok(Coloring::new(Vec::new(), 0));
    }
    let mut lo = max_clique_in(g.rows(), &all_vertices(n)).len();
    let mut best = dsatur_greedy(g);
    let mut hi = best.palette_size;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match k_coloring(g, mid) {
            Some(colors) => {
                best = Coloring::new(colors, mid);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok(best)
}

struct Dsatur<'a> {
    g: &'a Graph,
    k: usize,
    colors: Vec<Option<usize>>,
    // nbr_count[v][c]: coloured neighbours of v using c
    nbr_count: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    used: usize,
    colored: usize,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let n = g.n();
        Self {
            g,
            k,
            colors: vec![None; n],
            nbr_count: vec![vec![0; k.max(1)]; n],
            saturation: vec![0; n],
            used: 0,
            colored: 0,
        }
    }

    // max saturation, then max degree, then smallest id
    fn pick(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.colors[v].is_none())
            .max_by(|&a, &b| {
                self.saturation[a]
                    .cmp(&self.saturation[b])
                    .then(self.g.degree(a).cmp(&self.g.degree(b)))
                    .then(b.cmp(&a))
            })
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        self.colored += 1;
        for u in self.g.neighbors(v) {
            if self.nbr_count[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.nbr_count[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = None;
        self.colored -= 1;
        for u in self.g.neighbors(v) {
            self.nbr_count[u][c] -= 1;
            if self.nbr_count[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn search(&mut self) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        let limit = self.k.min(self.used + 1);
        for c in 0..limit {
            if self.nbr_count[v][c] != 0 {
                continue;
            }
            let prev_used = self.used;
            self.used = self.used.max(c + 1);
            self.assign(v, c);
            if self.search() {
                return true;
            }
            self.unassign(v, c);
            self.used = prev_used;
        }
        false
    }
}

fn k_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return (g.n() == 0).then(Vec::new);
    }
    let mut state = Dsatur::new(g, k);
    state
        .search()
        .then(|| state.colors.into_iter().map(|c| c.expect("all coloured")).collect())
}

/// DSATUR greedy colouring (upper bound for χ).
pub fn dsatur_greedy(g: &Graph) -> Coloring {
    let n = g.n();
    let mut state = Dsatur::new(g, n.max(1));
    while let Some(v) = state.pick() {
        let c = (0..n).find(|&c| state.nbr_count[v][c] == 0).expect("n colours suffice");
        state.used = state.used.max(c + 1);
        state.assign(v, c);
    }
    debug_assert_eq!(state.colored, n);
    Coloring::from_colors(state.colors.into_iter().map(|c| c.unwrap()).collect())
}
