//! Splitting a box intersection graph into one digraph per intersection
//! pattern, the structural checks those digraphs must pass, and the product
//! colouring that recombines per-pattern colourings.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{common_dimension, intersection_pattern, AxisBox, Pattern};
use crate::graph::{Adjacency, Coloring, Digraph, Graph, OracleLimits};

/// Arc `u -> v` iff box `u` has `pattern` with respect to box `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternDigraph {
    pub pattern: Pattern,
    pub digraph: Digraph,
}

/// One digraph per pattern, in canonical pattern order, empty ones included.
/// Every ordered intersecting pair lands in exactly one of them.
pub fn decompose(boxes: &[AxisBox]) -> Result<Vec<PatternDigraph>> {
    let d = common_dimension(boxes)?;
    let n = boxes.len();
    let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); Pattern::count(d)];
    for u in 0..n {
        for v in u + 1..n {
            if let Some(p) = intersection_pattern(&boxes[u], &boxes[v])? {
                buckets[p.mirror().index()].push((v, u));
                buckets[p.index()].push((u, v));
            }
        }
    }
    Ok(buckets
        .into_par_iter()
        .enumerate()
        .map(|(idx, arcs)| PatternDigraph {
            pattern: Pattern::from_index(d, idx),
            digraph: Digraph::from_arcs(n, arcs),
        })
        .collect())
}

/// Outcome of the three structural checks on one pattern digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasicReport {
    pub acyclic: bool,
    /// For every arc `u -> v`, every directed `u -> v` path spans a clique of
    /// the host graph.
    pub modest: bool,
    /// Two directed paths leaving a common vertex through non-adjacent first
    /// vertices never end at adjacent (or equal) vertices.
    pub divergent: bool,
}

impl BasicReport {
    pub fn all(&self) -> bool {
        self.acyclic && self.modest && self.divergent
    }
}

pub fn verify_basic(pd: &PatternDigraph, g: &Graph, limits: &OracleLimits) -> Result<BasicReport> {
    let dg = &pd.digraph;
    if dg.n() != g.n() {
        return Err(Error::Precondition(format!(
            "pattern digraph has {} vertices, host graph {}",
            dg.n(),
            g.n()
        )));
    }
    let acyclic = dg.is_acyclic();
    OracleLimits::check(limits.paths, dg.n(), "modesty/divergence check")?;
    Ok(BasicReport {
        acyclic,
        modest: is_modest(dg, g),
        divergent: is_divergent(dg, g),
    })
}

pub fn is_modest(dg: &Digraph, g: &Graph) -> bool {
    dg.arcs().into_iter().all(|(u, v)| {
        let reaches_v = ancestors(dg, v);
        let mut path = vec![u];
        let mut on_path = FixedBitSet::with_capacity(dg.n());
        on_path.insert(u);
        paths_are_cliques(dg, g, v, &reaches_v, &mut path, &mut on_path, true)
    })
}

// Walk every simple path from the end of `path` to `target`; `clique` says
// whether the current prefix is a clique of `g`.
fn paths_are_cliques(
    dg: &Digraph,
    g: &Graph,
    target: usize,
    reaches_target: &FixedBitSet,
    path: &mut Vec<usize>,
    on_path: &mut FixedBitSet,
    clique: bool,
) -> bool {
    let last = *path.last().expect("path starts non-empty");
    for w in dg.out_neighbors(last) {
        if on_path.contains(w) {
            continue;
        }
        let still_clique = clique && path.iter().all(|&x| g.has_edge(x, w));
        if w == target {
            if !still_clique {
                return false;
            }
            continue;
        }
        if !reaches_target.contains(w) {
            continue;
        }
        path.push(w);
        on_path.insert(w);
        let ok = paths_are_cliques(dg, g, target, reaches_target, path, on_path, still_clique);
        on_path.set(w, false);
        path.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn ancestors(dg: &Digraph, v: usize) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(dg.n());
    let mut stack: Vec<usize> = dg.in_neighbors(v).collect();
    while let Some(u) = stack.pop() {
        if !seen.put(u) {
            stack.extend(dg.in_neighbors(u));
        }
    }
    seen
}

pub fn is_divergent(dg: &Digraph, g: &Graph) -> bool {
    let n = dg.n();
    let closure: Vec<FixedBitSet> = (0..n)
        .map(|x| {
            let mut r = dg.descendants(x);
            r.insert(x);
            r
        })
        .collect();
    (0..n).all(|u| {
        let outs: Vec<usize> = dg.out_neighbors(u).collect();
        outs.iter().enumerate().all(|(i, &x)| {
            outs[i + 1..].iter().all(|&y| {
                g.has_edge(x, y)
                    || closure[x].ones().all(|a| {
                        !closure[y].contains(a) && closure[y].ones().all(|b| !g.has_edge(a, b))
                    })
            })
        })
    })
}

/// Colour each vertex by the tuple of its per-pattern colours, re-indexed to
/// `0..` in order of first appearance.
pub fn product_coloring(
    family: &[PatternDigraph],
    colorings: &BTreeMap<Pattern, Coloring>,
) -> Result<Coloring> {
    let n = family.first().map_or(0, |pd| pd.digraph.n());
    let mut parts = Vec::with_capacity(family.len());
    for pd in family {
        let c = colorings.get(&pd.pattern).ok_or_else(|| {
            Error::Precondition(format!("no colouring supplied for pattern {}", pd.pattern))
        })?;
        if c.colors.len() != n || c.colors.iter().any(|&x| x >= c.palette_size) {
            return Err(Error::Precondition(format!(
                "colouring for pattern {} does not cover 0..{n} inside its palette",
                pd.pattern
            )));
        }
        if let Some((u, v)) = c.first_conflict(&pd.digraph) {
            return Err(Error::Precondition(format!(
                "colouring for pattern {} is improper on edge {u}-{v}",
                pd.pattern
            )));
        }
        parts.push(c);
    }

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let colors = (0..n)
        .map(|v| {
            let tuple: Vec<usize> = parts.iter().map(|c| c.colors[v]).collect();
            let next = index.len();
            *index.entry(tuple).or_insert(next)
        })
        .collect();
    Ok(Coloring::new(colors, index.len()))
}

/// Sum over patterns of arc counts, as a check against ordered intersecting
/// pairs.
pub fn total_arcs(family: &[PatternDigraph]) -> usize {
    family.iter().map(|pd| pd.digraph.arc_count()).sum()
}

impl Adjacency for PatternDigraph {
    fn vertex_count(&self) -> usize {
        self.digraph.n()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.digraph.adjacent(u, v)
    }
}
