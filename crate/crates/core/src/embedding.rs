//! Peeling a digraph into a grading or a cheap layered colouring, transitive
//! tournament sizes, calm tree embeddings and the path-induced tree search
//! built from them.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{
    degeneracy_coloring, is_path_induced, is_path_induced_in, max_clique_in, Coloring, Digraph,
    Graph, RootedTree,
};

/// Nested vertex sets `X_1 ⊆ … ⊆ X_m = V` where every vertex of `X_i`
/// (`i < m`) has at least `k` out-neighbours in `X_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    /// `levels[i]` is `X_{i+1}`, sorted.
    pub levels: Vec<Vec<usize>>,
    /// 1-based index of the first level containing each vertex.
    pub level_of: Vec<usize>,
    pub k: usize,
}

impl Grading {
    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn g(&self, v: usize) -> usize {
        self.level_of[v]
    }

    /// Re-check every grading condition against `dg` by direct counting.
    pub fn check(&self, dg: &Digraph) -> bool {
        let n = dg.n();
        let m = self.m();
        if m == 0 || self.levels[0].is_empty() || self.level_of.len() != n {
            return false;
        }
        let sets: Vec<FixedBitSet> = self
            .levels
            .iter()
            .map(|l| {
                let mut s = FixedBitSet::with_capacity(n);
                s.extend(l.iter().copied().filter(|&v| v < n));
                s
            })
            .collect();
        if sets[m - 1].count_ones(..) != n {
            return false;
        }
        for i in 0..m {
            if sets[i].count_ones(..) != self.levels[i].len() {
                return false;
            }
            if i + 1 < m && !sets[i].is_subset(&sets[i + 1]) {
                return false;
            }
        }
        for v in 0..n {
            let first = (0..m).find(|&i| sets[i].contains(v)).map(|i| i + 1);
            if first != Some(self.level_of[v]) {
                return false;
            }
        }
        (0..m - 1).all(|i| {
            sets[i].ones().all(|v| {
                dg.out_neighbors(v).filter(|&w| sets[i + 1].contains(w)).count() >= self.k
            })
        })
    }
}

/// Disjoint layers, each of small out-degree, coloured on disjoint palettes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredColoring {
    pub layers: Vec<Vec<usize>>,
    pub coloring: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelResult {
    Grading(Grading),
    Layered(LayeredColoring),
}

/// Strip vertices of out-degree below `k` for `m - 1` rounds. Survivors give
/// a `(k, m)`-grading; if nothing survives the stripped layers are coloured.
pub fn peel_grading(dg: &Digraph, k: usize, m: usize) -> PeelResult {
    assert!(k >= 1 && m >= 1, "peel_grading needs k >= 1 and m >= 1");
    let n = dg.n();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut outdeg: Vec<usize> = (0..n).map(|v| dg.out_degree(v)).collect();
    // survivors[i] is Z_{i+1}
    let mut survivors: Vec<FixedBitSet> = vec![alive.clone()];
    let mut layers = Vec::with_capacity(m.saturating_sub(1));

    for _ in 1..m {
        let layer: Vec<usize> = alive.ones().filter(|&v| outdeg[v] < k).collect();
        for &v in &layer {
            alive.set(v, false);
        }
        for &v in &layer {
            for u in dg.in_neighbors(v) {
                outdeg[u] -= 1;
            }
        }
        layers.push(layer);
        survivors.push(alive.clone());
        if alive.is_clear() {
            break;
        }
    }

    if alive.is_clear() {
        layers.resize(m - 1, Vec::new());
        let coloring = color_layers(dg, &layers);
        return PeelResult::Layered(LayeredColoring { layers, coloring });
    }

    let levels: Vec<Vec<usize>> = survivors.iter().rev().map(|z| z.ones().collect()).collect();
    let mut level_of = vec![0; n];
    for (i, level) in levels.iter().enumerate().rev() {
        for &v in level {
            level_of[v] = i + 1;
        }
    }
    PeelResult::Grading(Grading {
        levels,
        level_of,
        k,
    })
}

// A layer whose out-degrees are below k has an underlying graph that is
// 2(k-1)-degenerate, so greedy needs at most 2k-1 colours per layer.
fn color_layers(dg: &Digraph, layers: &[Vec<usize>]) -> Coloring {
    let mut colors = vec![0; dg.n()];
    let mut offset = 0;
    let und = dg.underlying();
    for layer in layers.iter().filter(|l| !l.is_empty()) {
        let sub = und.induced(layer);
        let c = degeneracy_coloring(&sub, sub.n()).expect("bound n always suffices");
        for (i, &v) in layer.iter().enumerate() {
            colors[v] = offset + c.colors[i];
        }
        offset += c.palette_size;
    }
    Coloring::new(colors, offset)
}

/// Memoised transitive tournament sizes for one acyclic digraph.
pub struct TournamentTable<'a> {
    dg: &'a Digraph,
    underlying: Graph,
    memo: HashMap<(usize, usize), usize>,
}

impl<'a> TournamentTable<'a> {
    pub fn new(dg: &'a Digraph) -> Result<Self> {
        if !dg.is_acyclic() {
            return Err(Error::NotAcyclic);
        }
        Ok(Self {
            dg,
            underlying: dg.underlying(),
            memo: HashMap::new(),
        })
    }

    /// Largest transitive tournament with source `u` and sink `v`; 0 if
    /// there is no arc `u -> v`.
    pub fn get(&mut self, u: usize, v: usize) -> usize {
        if !self.dg.has_arc(u, v) {
            return 0;
        }
        if let Some(&t) = self.memo.get(&(u, v)) {
            return t;
        }
        let mut between = self.dg.out_set(u).clone();
        between.intersect_with(self.dg.in_set(v));
        // every clique of an acyclic digraph is a transitive tournament
        let t = 2 + max_clique_in(self.underlying.rows(), &between).len();
        self.memo.insert((u, v), t);
        t
    }

    pub fn underlying(&self) -> &Graph {
        &self.underlying
    }
}

pub fn tournament_size(dg: &Digraph, u: usize, v: usize) -> Result<usize> {
    Ok(TournamentTable::new(dg)?.get(u, v))
}

/// Embedding of a rooted tree into a graded digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalmEmbedding {
    pub tree: RootedTree,
    /// Tree vertex -> digraph vertex.
    pub map: Vec<usize>,
    /// Tree arc `(parent, child)` -> `t(map[parent], map[child])`.
    pub arc_sizes: BTreeMap<(usize, usize), usize>,
}

fn calm_slack_ok(t: usize, g_from: usize, g_to: usize) -> bool {
    t as i64 > g_to as i64 - g_from as i64
}

fn clique_number(dg: &Digraph) -> usize {
    let mut all = FixedBitSet::with_capacity(dg.n());
    all.insert_range(..);
    max_clique_in(dg.underlying().rows(), &all).len()
}

/// Levels needed so a calm copy of a tree of this depth can always be
/// extended: a parent sits at most `(depth - 1)(ω - 1)` levels above `X_1`
/// and its new child needs the level after that.
pub fn required_levels(depth: usize, omega: usize) -> usize {
    if depth == 0 {
        1
    } else {
        2 + (depth - 1) * omega.saturating_sub(1)
    }
}

/// Greedy calm embedding: tree vertices are placed in preorder, each child
/// at the out-neighbour of its parent's image with the largest tournament
/// size among those satisfying the slack condition (smallest id on ties).
///
/// Violated preconditions are errors; `Ok(None)` means the search itself
/// ran out of candidates.
pub fn embed_calm_tree(
    dg: &Digraph,
    grading: &Grading,
    t: &RootedTree,
) -> Result<Option<CalmEmbedding>> {
    let mut table = TournamentTable::new(dg)?;
    let omega = clique_number(dg);
    embed_with(&mut table, omega, grading, t)
}

fn embed_with(
    table: &mut TournamentTable<'_>,
    omega: usize,
    grading: &Grading,
    t: &RootedTree,
) -> Result<Option<CalmEmbedding>> {
    let dg = table.dg;
    if !grading.check(dg) {
        return Err(Error::Precondition("grading invariants do not hold".into()));
    }
    if grading.k + 1 < t.n() {
        return Err(Error::Precondition(format!(
            "grading has k = {} but the tree has {} vertices",
            grading.k,
            t.n()
        )));
    }
    let need = required_levels(t.depth(), omega);
    if grading.m() < need {
        return Err(Error::Precondition(format!(
            "grading has {} levels, a tree of depth {} with clique number {omega} needs {need}",
            grading.m(),
            t.depth()
        )));
    }

    let n = dg.n();
    let mut map = vec![usize::MAX; t.n()];
    let mut used = FixedBitSet::with_capacity(n);
    let mut arc_sizes = BTreeMap::new();
    let order = t.preorder();
    map[order[0]] = grading.levels[0][0];
    used.insert(map[order[0]]);

    for &c in &order[1..] {
        let p = t.parent(c).expect("non-root has a parent");
        let x = map[p];
        let mut best: Option<(usize, usize)> = None;
        for w in dg.out_neighbors(x) {
            if used.contains(w) {
                continue;
            }
            let tw = table.get(x, w);
            if !calm_slack_ok(tw, grading.g(x), grading.g(w)) {
                continue;
            }
            if best.is_none_or(|(bt, _)| tw > bt) {
                best = Some((tw, w));
            }
        }
        let Some((tw, w)) = best else {
            return Ok(None);
        };
        map[c] = w;
        used.insert(w);
        arc_sizes.insert((p, c), tw);
    }

    Ok(Some(CalmEmbedding {
        tree: t.clone(),
        map,
        arc_sizes,
    }))
}

/// Literal check of every calm-copy condition, recomputing tournament sizes.
pub fn verify_calm(dg: &Digraph, grading: &Grading, emb: &CalmEmbedding) -> bool {
    let Ok(mut table) = TournamentTable::new(dg) else {
        return false;
    };
    let t = &emb.tree;
    let n = dg.n();
    if emb.map.len() != t.n() || !grading.check(dg) {
        return false;
    }
    let mut image = FixedBitSet::with_capacity(n);
    for &x in &emb.map {
        if x >= n || image.put(x) {
            return false;
        }
    }
    if grading.g(emb.map[t.root()]) != 1 {
        return false;
    }
    let arcs = t.arcs();
    if emb.arc_sizes.len() != arcs.len() {
        return false;
    }
    for (p, c) in arcs {
        let (x, y) = (emb.map[p], emb.map[c]);
        if !dg.has_arc(x, y) {
            return false;
        }
        let txy = table.get(x, y);
        if emb.arc_sizes.get(&(p, c)) != Some(&txy) || !calm_slack_ok(txy, grading.g(x), grading.g(y)) {
            return false;
        }
        // competitors: anything outside the image of the tree minus T_c
        let mut sub_image = FixedBitSet::with_capacity(n);
        sub_image.extend(t.subtree(c).into_iter().map(|v| emb.map[v]));
        for w in dg.out_neighbors(x) {
            if image.contains(w) && !sub_image.contains(w) {
                continue;
            }
            let tw = table.get(x, w);
            if calm_slack_ok(tw, grading.g(x), grading.g(w)) && tw > txy {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeSearch {
    Embedded(CalmEmbedding),
    Colored(LayeredColoring),
}

/// Either a path-induced copy of `t` in `dg` (checked in both `dg` and the
/// host `g`) or a layered colouring of `dg` with fewer than
/// `2 · |t| · (m - 1)` colours, where `m = max(depth(t) · ω(dg), 2)`.
pub fn find_path_induced_tree(dg: &Digraph, g: &Graph, t: &RootedTree) -> Result<TreeSearch> {
    search_tree(dg, g, t.depth(), t.n(), Some(t))
}

/// Shared driver. With `tree = None` the caller knows the tree has more
/// than `dg.n()` vertices, so no embedding exists and peeling with
/// `k = min(|T|, n)` is used instead of building the tree.
pub(crate) fn search_tree(
    dg: &Digraph,
    g: &Graph,
    depth: usize,
    k: usize,
    tree: Option<&RootedTree>,
) -> Result<TreeSearch> {
    if dg.n() != g.n() {
        return Err(Error::Precondition(format!(
            "digraph has {} vertices, host graph {}",
            dg.n(),
            g.n()
        )));
    }
    let mut table = TournamentTable::new(dg)?;
    let omega = {
        let mut all = FixedBitSet::with_capacity(dg.n());
        all.insert_range(..);
        max_clique_in(table.underlying().rows(), &all).len()
    };
    let m = if depth == 0 { 1 } else { (depth * omega).max(2) };

    let grading = match peel_grading(dg, k.max(1), m) {
        PeelResult::Layered(lc) => return Ok(TreeSearch::Colored(lc)),
        PeelResult::Grading(gr) => gr,
    };
    let Some(t) = tree else {
        return Err(Error::Internal(format!(
            "peeling with k = {k} left survivors in a digraph on {} vertices",
            dg.n()
        )));
    };
    let emb = embed_with(&mut table, omega, &grading, t)?
        .ok_or_else(|| Error::Internal("calm extension found no candidate".into()))?;
    if !verify_calm(dg, &grading, &emb) {
        return Err(Error::Internal("greedy embedding is not calm".into()));
    }
    if !is_path_induced(dg, t, &emb.map)? {
        return Err(Error::Internal("calm embedding is not path-induced in its digraph".into()));
    }
    if !is_path_induced_in(g, t, &emb.map)? {
        return Err(Error::HostInconsistency(
            "embedding is path-induced in the digraph but not in the host graph; \
             the digraph is not modest"
                .into(),
        ));
    }
    Ok(TreeSearch::Embedded(emb))
}
