//! Colour a box intersection graph within the proven palette bound, or
//! return an induced copy of the complete `k`-ary tree of depth `r`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::embedding::{search_tree, CalmEmbedding, TreeSearch};
use crate::error::{Error, Result};
use crate::geometry::{common_dimension, in_general_position, AxisBox, Coord, Pattern};
use crate::graph::{
    intersection_graph, make_trk, maximum_independent_set, omega, trk_size,
    verify_induced_embedding, Coloring, Graph, OracleLimits, RootedTree,
};
use crate::pattern::{decompose, product_coloring};

/// Largest dimension for which bounds are evaluated exactly.
pub const MAX_BOUND_DIM: usize = 8;
/// Refuse bounds whose base would need more bits than this.
const MAX_BASE_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// `(2 r k^d ω²)^(4^d)`.
    pub paper_bound: BigUint,
    /// `(2 r |T| ω)^(4^d)` with `T` the complete `k^d ω`-ary tree of depth `r`.
    pub derived_bound: BigUint,
    /// `k^d ω`.
    pub branching: BigUint,
    /// Vertex count of that tree.
    pub tree_size: BigUint,
}

pub fn chi_bound(d: usize, r: usize, k: usize, omega: usize) -> Result<BoundReport> {
    if d == 0 || r == 0 || k == 0 || omega == 0 {
        return Err(Error::Precondition(format!(
            "chi_bound needs d, r, k, omega >= 1 (got {d}, {r}, {k}, {omega})"
        )));
    }
    if d > MAX_BOUND_DIM {
        return Err(Error::BoundTooLarge(format!(
            "dimension {d} exceeds {MAX_BOUND_DIM}; the exponent 4^d is too large"
        )));
    }
    let (r_big, k_big, w_big) = (BigUint::from(r), BigUint::from(k), BigUint::from(omega));
    let branching = k_big.pow(d as u32) * &w_big;
    if branching.bits().saturating_mul(r as u64) > MAX_BASE_BITS {
        return Err(Error::BoundTooLarge(format!(
            "tree of depth {r} with branching {branching} is too large to count"
        )));
    }
    let tree_size = trk_size(r as u32, &branching);
    let exponent = 4u32.pow(d as u32);
    let two = BigUint::from(2u32);
    let paper_base = &two * &r_big * k_big.pow(d as u32) * &w_big * &w_big;
    let derived_base = &two * &r_big * &tree_size * &w_big;
    Ok(BoundReport {
        paper_bound: paper_base.pow(exponent),
        derived_bound: derived_base.pow(exponent),
        branching,
        tree_size,
    })
}

// ---- interval sweeps --------------------------------------------------------

/// Maximum set of pairwise disjoint closed intervals among `idx` on `axis`,
/// greedy by right endpoint. Returned sorted.
pub fn interval_max_independent(boxes: &[AxisBox], idx: &[usize], axis: usize) -> Vec<usize> {
    let mut order = idx.to_vec();
    order.sort_by(|&a, &b| boxes[a].sides[axis].hi.cmp(&boxes[b].sides[axis].hi).then(a.cmp(&b)));
    let mut chosen = Vec::new();
    let mut last: Option<&Coord> = None;
    for i in order {
        let side = &boxes[i].sides[axis];
        if last.is_none_or(|h| side.lo > *h) {
            chosen.push(i);
            last = Some(&side.hi);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Maximum clique of closed intervals: everything covering the point of
/// maximum coverage. Returned sorted.
pub fn interval_max_clique(boxes: &[AxisBox], idx: &[usize], axis: usize) -> Vec<usize> {
    // (value, closes, position); opens sort before closes at equal values
    let mut events: Vec<(&Coord, bool, usize)> = idx
        .iter()
        .flat_map(|&i| {
            let s = &boxes[i].sides[axis];
            [(&s.lo, false, i), (&s.hi, true, i)]
        })
        .collect();
    events.sort();
    let mut depth = 0usize;
    let mut best: Option<(usize, &Coord)> = None;
    for (value, closes, _) in events {
        if closes {
            depth -= 1;
        } else {
            depth += 1;
            if best.is_none_or(|(b, _)| depth > b) {
                best = Some((depth, value));
            }
        }
    }
    let Some((_, point)) = best else {
        return Vec::new();
    };
    let mut clique: Vec<usize> = idx
        .iter()
        .copied()
        .filter(|&i| {
            let s = &boxes[i].sides[axis];
            s.lo <= *point && *point <= s.hi
        })
        .collect();
    clique.sort_unstable();
    clique
}

/// Colour intervals by left endpoint, reusing the smallest colour released.
/// Uses exactly as many colours as the largest clique.
pub fn interval_greedy_coloring(boxes: &[AxisBox], axis: usize) -> Coloring {
    let n = boxes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| boxes[a].sides[axis].lo.cmp(&boxes[b].sides[axis].lo).then(a.cmp(&b)));
    let mut colors = vec![0; n];
    let mut free: BTreeSet<usize> = BTreeSet::new();
    let mut active: BinaryHeap<Reverse<(&Coord, usize)>> = BinaryHeap::new();
    let mut palette = 0;
    for i in order {
        let lo = &boxes[i].sides[axis].lo;
        while let Some(Reverse((hi, c))) = active.peek() {
            if *hi < lo {
                free.insert(*c);
                active.pop();
            } else {
                break;
            }
        }
        let c = match free.pop_first() {
            Some(c) => c,
            None => {
                palette += 1;
                palette - 1
            }
        };
        colors[i] = c;
        active.push(Reverse((&boxes[i].sides[axis].hi, c)));
    }
    Coloring::new(colors, palette)
}

// ---- independent-set extraction ---------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    /// Positions into the input slice, sorted.
    pub ids: Vec<usize>,
    /// The requested target was not reached.
    pub shortfall: bool,
}

/// Independent set by projection: on the last axis either take pairwise
/// disjoint projections, or recurse into a clique of projections using the
/// remaining axes. Always at least `ceil((n/ω)^(1/d))` boxes.
pub fn extract_independent(boxes: &[AxisBox], target: Option<usize>) -> Result<Extraction> {
    let d = common_dimension(boxes)?;
    let all: Vec<usize> = (0..boxes.len()).collect();
    let mut ids = extract_rec(boxes, &all, d);
    let shortfall = target.is_some_and(|t| ids.len() < t);
    if let Some(t) = target {
        ids.truncate(t);
    }
    Ok(Extraction { ids, shortfall })
}

fn extract_rec(boxes: &[AxisBox], idx: &[usize], axes: usize) -> Vec<usize> {
    let axis = axes - 1;
    let spread = interval_max_independent(boxes, idx, axis);
    if axes == 1 {
        return spread;
    }
    let stacked = interval_max_clique(boxes, idx, axis);
    let inner = extract_rec(boxes, &stacked, axes - 1);
    if inner.len() > spread.len() {
        inner
    } else {
        spread
    }
}

// ---- certificates -------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    ProperColoring {
        /// Indexed by position in the box slice.
        coloring: Coloring,
        bound: BigUint,
        per_pattern: BTreeMap<Pattern, usize>,
    },
    InducedTree {
        r: usize,
        k: usize,
        tree: RootedTree,
        /// Tree vertex -> position in the box slice.
        map: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub certificate: Certificate,
    pub omega: usize,
    pub bounds: BoundReport,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineConfig {
    pub limits: OracleLimits,
    /// Caller-supplied upper bound on ω(G), used instead of the exact oracle.
    pub omega_override: Option<usize>,
    /// Worker threads for the per-pattern stage; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Keep `k` pairwise non-adjacent children at every kept vertex, level by
/// level from the root, turning an embedding of a wider tree into an induced
/// copy of the complete `k`-ary tree of the same depth.
///
/// Returns the new tree with its map into `g`'s vertices.
pub fn prune_children(
    emb: &CalmEmbedding,
    boxes: &[AxisBox],
    g: &Graph,
    k: usize,
    limits: &OracleLimits,
) -> Result<(RootedTree, Vec<usize>)> {
    let old = &emb.tree;
    let r = old.depth();
    let tree = make_trk(r, k);
    let mut corresponding = vec![usize::MAX; tree.n()];
    corresponding[tree.root()] = old.root();
    // BFS numbering means parents precede their children
    for v in 0..tree.n() {
        let ov = corresponding[v];
        let kids = tree.children(v);
        if kids.is_empty() {
            continue;
        }
        let old_kids = old.children(ov);
        let images: Vec<usize> = old_kids.iter().map(|&c| emb.map[c]).collect();
        let picked = independent_positions(&images, boxes, g, k, limits)?;
        for (&nv, &pos) in kids.iter().zip(&picked) {
            corresponding[nv] = old_kids[pos];
        }
    }
    let map: Vec<usize> = corresponding.iter().map(|&ov| emb.map[ov]).collect();
    if let Some((a, b)) = verify_induced_embedding(g, &tree, &map) {
        return Err(Error::Internal(format!(
            "pruned tree is not induced: tree vertices {a},{b} (boxes {},{})",
            boxes[map[a]].id, boxes[map[b]].id
        )));
    }
    Ok((tree, map))
}

// First k positions (into `images`) of a maximum independent set.
fn independent_positions(
    images: &[usize],
    boxes: &[AxisBox],
    g: &Graph,
    k: usize,
    limits: &OracleLimits,
) -> Result<Vec<usize>> {
    let mut picked = if images.len() <= limits.clique {
        maximum_independent_set(&g.induced(images), limits)?
    } else {
        let sub: Vec<AxisBox> = images.iter().map(|&v| boxes[v].clone()).collect();
        extract_independent(&sub, Some(k))?.ids
    };
    if picked.len() < k {
        return Err(Error::Internal(format!(
            "only {} pairwise disjoint children among {}, need {k}",
            picked.len(),
            images.len()
        )));
    }
    picked.truncate(k);
    Ok(picked)
}

/// Colour within the bound, or find an induced tree.
///
/// Boxes must be in general position (see `normalize`). Positions in the
/// slice are the vertex ids of the certificate.
pub fn color_or_find_forest(
    boxes: &[AxisBox],
    r: usize,
    k: usize,
    config: &PipelineConfig,
) -> Result<Outcome> {
    let d = common_dimension(boxes)?;
    if r == 0 || k == 0 {
        return Err(Error::Precondition(format!("need r >= 1 and k >= 1 (got r={r}, k={k})")));
    }
    if !in_general_position(boxes) {
        return Err(Error::Precondition(
            "boxes share endpoints or have zero-width sides; normalize them first".into(),
        ));
    }
    let n = boxes.len();
    let g = intersection_graph(boxes);
    let w = match config.omega_override {
        Some(0) => return Err(Error::Precondition("omega override must be >= 1".into())),
        Some(w) => w,
        None => omega(&g, &config.limits)?,
    };
    let bounds = chi_bound(d, r, k, w)?;

    if d == 1 {
        let coloring = interval_greedy_coloring(boxes, 0);
        let cert = Certificate::ProperColoring {
            coloring,
            bound: bounds.derived_bound.clone(),
            per_pattern: BTreeMap::new(),
        };
        check_certificate(&cert, &g, boxes)?;
        return Ok(Outcome {
            certificate: cert,
            omega: w,
            bounds,
        });
    }

    let family = decompose(boxes)?;
    // Only build the tree when it could fit; otherwise peeling with k = n
    // already strips everything in the first round.
    let tree = match bounds.tree_size.to_usize() {
        Some(size) if size <= n => Some(make_trk(r, bounds.branching.to_usize().expect("fits below n"))),
        _ => None,
    };
    let peel_k = tree.as_ref().map_or(n, |t| t.n());
    let run = || -> Vec<Result<TreeSearch>> {
        family
            .par_iter()
            .map(|pd| search_tree(&pd.digraph, &g, r, peel_k, tree.as_ref()))
            .collect()
    };
    let results = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut colorings = BTreeMap::new();
    let mut per_pattern = BTreeMap::new();
    for (pd, res) in family.iter().zip(results) {
        match res? {
            TreeSearch::Embedded(emb) => {
                let (tree, map) = prune_children(&emb, boxes, &g, k, &config.limits)?;
                let cert = Certificate::InducedTree { r, k, tree, map };
                check_certificate(&cert, &g, boxes)?;
                return Ok(Outcome {
                    certificate: cert,
                    omega: w,
                    bounds,
                });
            }
            TreeSearch::Colored(lc) => {
                per_pattern.insert(pd.pattern.clone(), lc.coloring.palette_size);
                colorings.insert(pd.pattern.clone(), lc.coloring);
            }
        }
    }
    let coloring = product_coloring(&family, &colorings)?;
    let cert = Certificate::ProperColoring {
        coloring,
        bound: bounds.derived_bound.clone(),
        per_pattern,
    };
    check_certificate(&cert, &g, boxes)?;
    Ok(Outcome {
        certificate: cert,
        omega: w,
        bounds,
    })
}

fn check_certificate(cert: &Certificate, g: &Graph, boxes: &[AxisBox]) -> Result<()> {
    match cert {
        Certificate::ProperColoring { coloring, bound, .. } => {
            if let Some((u, v)) = coloring.first_conflict(g) {
                return Err(Error::Internal(format!(
                    "colouring conflict on edge {}-{}",
                    boxes[u].id, boxes[v].id
                )));
            }
            if !coloring.is_proper_on(g) || BigUint::from(coloring.palette_size) > *bound {
                return Err(Error::Internal(format!(
                    "palette {} is invalid or exceeds the bound",
                    coloring.palette_size
                )));
            }
        }
        Certificate::InducedTree { tree, map, .. } => {
            let distinct: BTreeSet<_> = map.iter().collect();
            if distinct.len() != map.len() {
                return Err(Error::Internal("tree map is not injective".into()));
            }
            if let Some((a, b)) = verify_induced_embedding(g, tree, map) {
                return Err(Error::Internal(format!(
                    "tree vertices {a},{b} break inducedness (boxes {},{})",
                    boxes[map[a]].id, boxes[map[b]].id
                )));
            }
        }
    }
    Ok(())
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ProperColoring { .. } => "coloring",
            Certificate::InducedTree { .. } => "induced_tree",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::normalize;
    use crate::graph::{alpha, find_induced_copy};

    #[test]
    fn smallest_bounds() {
        let b = chi_bound(1, 1, 1, 1).unwrap();
        assert_eq!(b.paper_bound, BigUint::from(16u32));
        let b = chi_bound(1, 1, 2, 1).unwrap();
        assert_eq!(b.tree_size, BigUint::from(3u32));
        assert_eq!(b.derived_bound, BigUint::from(1296u32));
        assert!(chi_bound(9, 1, 1, 1).is_err());
        assert!(chi_bound(1, 0, 1, 1).is_err());
    }

    #[test]
    fn interval_sweeps() {
        let boxes: Vec<AxisBox> = [(0, 3), (1, 4), (2, 5), (6, 7), (8, 9)]
            .iter()
            .enumerate()
            .map(|(i, &s)| AxisBox::from_ints(i, &[s]))
            .collect();
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(interval_max_independent(&boxes, &all, 0), vec![0, 3, 4]);
        assert_eq!(interval_max_clique(&boxes, &all, 0), vec![0, 1, 2]);
        let c = interval_greedy_coloring(&boxes, 0);
        assert_eq!(c.palette_size, 3);
        assert!(c.is_proper_on(&intersection_graph(&boxes)));
    }

    #[test]
    fn extraction_examples() {
        let disjoint: Vec<AxisBox> =
            (0..6).map(|i| AxisBox::from_ints(i, &[(2 * i as i64, 2 * i as i64 + 1)])).collect();
        assert_eq!(extract_independent(&disjoint, None).unwrap().ids.len(), 6);

        let nested: Vec<AxisBox> = (0..5)
            .map(|i| AxisBox::from_ints(i, &[(i as i64, 20 - i as i64), (i as i64, 20 - i as i64)]))
            .collect();
        let e = extract_independent(&nested, Some(2)).unwrap();
        assert_eq!(e.ids.len(), 1);
        assert!(e.shortfall);
    }

    #[test]
    fn grid_of_squares_gets_one_colour() {
        let grid: Vec<AxisBox> = (0..9)
            .map(|i| {
                let (x, y) = ((i % 3) as i64, (i / 3) as i64);
                AxisBox::from_ints(i, &[(3 * x, 3 * x + 1), (3 * y, 3 * y + 1)])
            })
            .collect();
        let grid = normalize(&grid).unwrap();
        let out = color_or_find_forest(&grid, 1, 1, &PipelineConfig::default()).unwrap();
        match out.certificate {
            Certificate::ProperColoring { coloring, .. } => assert_eq!(coloring.palette_size, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn big_box_over_grid_yields_a_star() {
        let mut boxes = vec![AxisBox::from_ints(0, &[(-1, 100), (-1, 100)])];
        for i in 0..9 {
            let (x, y) = ((i % 3) as i64, (i / 3) as i64);
            boxes.push(AxisBox::from_ints(i + 1, &[(3 * x, 3 * x + 1), (3 * y, 3 * y + 1)]));
        }
        let boxes = normalize(&boxes).unwrap();
        let g = intersection_graph(&boxes);
        let out = color_or_find_forest(&boxes, 1, 1, &PipelineConfig::default()).unwrap();
        let Certificate::InducedTree { tree, map, .. } = out.certificate else {
            panic!("expected a tree");
        };
        assert_eq!(tree.n(), 2);
        assert!(verify_induced_embedding(&g, &tree, &map).is_none());
        assert!(find_induced_copy(&g, &tree, &OracleLimits::default()).unwrap().is_some());
        assert!(alpha(&g, &OracleLimits::default()).unwrap() >= 2);
    }

    #[test]
    fn shared_endpoints_are_rejected() {
        let boxes = vec![
            AxisBox::from_ints(0, &[(0, 1), (0, 1)]),
            AxisBox::from_ints(1, &[(1, 2), (2, 3)]),
        ];
        assert!(color_or_find_forest(&boxes, 1, 1, &PipelineConfig::default()).is_err());
    }
}
