//! Brute-force oracles written independently of the library, for tests only.
#![allow(dead_code)]

use boxchi_core::geometry::AxisBox;
use boxchi_core::graph::{Digraph, Graph, RootedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn mask_is_clique(g: &Graph, mask: u32) -> bool {
    let n = g.n();
    (0..n).filter(|&u| mask >> u & 1 == 1).all(|u| {
        (u + 1..n).filter(|&v| mask >> v & 1 == 1).all(|v| g.has_edge(u, v))
    })
}

/// Largest clique by trying every subset.
pub fn brute_omega(g: &Graph) -> usize {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&m| mask_is_clique(g, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn brute_alpha(g: &Graph) -> usize {
    brute_omega(&g.complement())
}

/// Chromatic number by dynamic programming over vertex subsets: the best
/// colouring of `S` peels an independent set containing the lowest vertex.
pub fn brute_chi(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 14);
    let full = (1u32 << n) - 1;
    let co = g.complement();
    let independent: Vec<bool> = (0..=full).map(|m| mask_is_clique(&co, m)).collect();
    let mut best = vec![usize::MAX; full as usize + 1];
    best[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // subsets of `rest`, each joined with `low`
        let mut sub = rest;
        loop {
            let t = sub | low;
            if independent[t as usize] && best[(s ^ t) as usize] != usize::MAX {
                best[s as usize] = best[s as usize].min(best[(s ^ t) as usize] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full as usize]
}

/// Every directed path with at least one vertex, as vertex sequences.
pub fn all_paths(dg: &Digraph) -> Vec<Vec<usize>> {
    fn go(dg: &Digraph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        for w in dg.out_neighbors(last).collect::<Vec<_>>() {
            if !path.contains(&w) {
                path.push(w);
                go(dg, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..dg.n() {
        go(dg, &mut vec![v], &mut out);
    }
    out
}

pub fn modest_by_paths(dg: &Digraph, g: &Graph, paths: &[Vec<usize>]) -> bool {
    paths.iter().all(|p| {
        let (u, v) = (p[0], *p.last().unwrap());
        p.len() < 2 || !dg.has_arc(u, v) || g.is_clique(p)
    })
}

pub fn divergent_by_paths(dg: &Digraph, g: &Graph, paths: &[Vec<usize>]) -> bool {
    for u in 0..dg.n() {
        let outs: Vec<usize> = dg.out_neighbors(u).collect();
        for &x in &outs {
            for &y in &outs {
                if x >= y || g.has_edge(x, y) {
                    continue;
                }
                let ends = |s: usize| -> Vec<usize> {
                    paths.iter().filter(|p| p[0] == s).map(|p| *p.last().unwrap()).collect()
                };
                for a in ends(x) {
                    for b in ends(y) {
                        if a == b || g.has_edge(a, b) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Largest transitive tournament with source `u` and sink `v`, by trying
/// every subset of the vertices strictly between them.
pub fn brute_tournament(dg: &Digraph, u: usize, v: usize) -> usize {
    if !dg.has_arc(u, v) {
        return 0;
    }
    let mid: Vec<usize> = (0..dg.n())
        .filter(|&w| dg.has_arc(u, w) && dg.has_arc(w, v))
        .collect();
    assert!(mid.len() <= 20);
    let mut best = 0;
    for mask in 0u32..1 << mid.len() {
        let s: Vec<usize> = (0..mid.len()).filter(|&i| mask >> i & 1 == 1).map(|i| mid[i]).collect();
        let joined = s.iter().enumerate().all(|(i, &a)| {
            s[i + 1..].iter().all(|&b| dg.has_arc(a, b) || dg.has_arc(b, a))
        });
        if joined {
            best = best.max(s.len());
        }
    }
    best + 2
}

/// Adjacency in `g` agrees with the tree on every pair of the image.
pub fn pairwise_induced(g: &Graph, t: &RootedTree, map: &[usize]) -> bool {
    let n = t.n();
    let mut image = map.to_vec();
    image.sort_unstable();
    image.dedup();
    image.len() == n
        && (0..n).all(|a| (a + 1..n).all(|b| g.has_edge(map[a], map[b]) == t.adjacent(a, b)))
}

/// Closed-box intersection straight from coordinates.
pub fn boxes_meet(a: &AxisBox, b: &AxisBox) -> bool {
    a.sides
        .iter()
        .zip(&b.sides)
        .all(|(s, t)| s.lo <= t.hi && t.lo <= s.hi)
}

pub fn graph_of(boxes: &[AxisBox]) -> Graph {
    let mut g = Graph::new(boxes.len());
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            if boxes_meet(&boxes[i], &boxes[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// A big box over a shuffled grid of `cells` small squares, normalized.
pub fn star_over_grid(rng: &mut ChaCha8Rng, cells: usize) -> Vec<AxisBox> {
    let side = (1..).find(|s| s * s >= cells).unwrap() as i64;
    let mut slots: Vec<i64> = (0..side * side).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.gen_range(0..=i));
    }
    let mut boxes = Vec::with_capacity(cells + 1);
    let root_at = rng.gen_range(0..=cells);
    for (i, &slot) in slots.iter().take(cells).enumerate() {
        let (x, y) = (slot % side, slot / side);
        let (dx, dy) = (rng.gen_range(0..3), rng.gen_range(0..3));
        boxes.push((i, [(10 * x + dx, 10 * x + 5 + dx), (10 * y + dy, 10 * y + 5 + dy)]));
    }
    boxes.insert(root_at, (cells, [(-1, 10 * side + 1), (-1, 10 * side + 1)]));
    let raw: Vec<AxisBox> = boxes
        .iter()
        .enumerate()
        .map(|(id, (_, s))| AxisBox::from_ints(id, s))
        .collect();
    boxchi_core::geometry::normalize(&raw).unwrap()
}
