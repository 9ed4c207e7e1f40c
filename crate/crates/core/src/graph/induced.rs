use super::{Adjacency, Digraph, Graph, OracleLimits, RootedTree};
use crate::error::{Error, Result};

/// Backtracking search for an induced copy of `t` (as an undirected tree) in
/// `g`. Returns `map[tree vertex] = graph vertex`.
pub fn find_induced_copy(
    g: &Graph,
    t: &RootedTree,
    limits: &OracleLimits,
) -> Result<Option<Vec<usize>>> {
    OracleLimits::check(limits.induced, t.n(), "induced-copy search")?;
    if t.n() > g.n() {
        return Ok(None);
    }
    let order = t.preorder();
    let mut map = vec![usize::MAX; t.n()];
    let mut used = vec![false; g.n()];
    Ok(extend(g, t, &order, 0, &mut map, &mut used).then_some(map))
}

fn extend(
    g: &Graph,
    t: &RootedTree,
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    let candidates: Vec<usize> = match t.parent(v) {
        Some(p) => g.neighbors(map[p]).collect(),
        None => (0..g.n()).collect(),
    };
    for x in candidates {
        if used[x] || g.degree(x) < t.degree(v) {
            continue;
        }
        let consistent = order[..pos]
            .iter()
            .all(|&u| g.has_edge(map[u], x) == t.adjacent(u, v));
        if !consistent {
            continue;
        }
        map[v] = x;
        used[x] = true;
        if extend(g, t, order, pos + 1, map, used) {
            return true;
        }
        used[x] = false;
    }
    map[v] = usize::MAX;
    false
}

fn check_injective(t: &RootedTree, map: &[usize], n: usize) -> Result<()> {
    if map.len() != t.n() {
        return Err(Error::Precondition(format!(
            "map has {} entries for a tree on {} vertices",
            map.len(),
            t.n()
        )));
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Precondition(format!("map is not injective into 0..{n} (at {x})")));
        }
    }
    Ok(())
}

/// Every directed path of the embedded tree is an induced path of the
/// digraph's underlying graph.
///
/// Errors if `map` is not an injection that sends tree arcs to digraph arcs.
pub fn is_path_induced(dg: &Digraph, t: &RootedTree, map: &[usize]) -> Result<bool> {
    check_injective(t, map, dg.n())?;
    for (p, c) in t.arcs() {
        if !dg.has_arc(map[p], map[c]) {
            return Err(Error::Precondition(format!(
                "tree arc {p}->{c} maps to {}->{}, which is not an arc",
                map[p], map[c]
            )));
        }
    }
    Ok(chordless_ancestry(dg, t, map))
}

/// As [`is_path_induced`], but in an undirected host where tree arcs only need
/// to land on edges.
pub fn is_path_induced_in<A: Adjacency>(host: &A, t: &RootedTree, map: &[usize]) -> Result<bool> {
    check_injective(t, map, host.vertex_count())?;
    for (p, c) in t.arcs() {
        if !host.adjacent(map[p], map[c]) {
            return Err(Error::Precondition(format!(
                "tree arc {p}->{c} maps to a non-edge {}-{}",
                map[p], map[c]
            )));
        }
    }
    Ok(chordless_ancestry(host, t, map))
}

// A directed path in a rooted tree runs from an ancestor down to a
// descendant, so the paths are induced iff no ancestor/descendant pair at
// distance >= 2 is adjacent.
fn chordless_ancestry<A: Adjacency>(host: &A, t: &RootedTree, map: &[usize]) -> bool {
    (0..t.n()).all(|v| {
        let mut anc = t.parent(v).and_then(|p| t.parent(p));
        while let Some(a) = anc {
            if host.adjacent(map[a], map[v]) {
                return false;
            }
            anc = t.parent(a);
        }
        true
    })
}

/// First pair of tree vertices whose adjacency in `g` disagrees with the
/// tree, or `None` if `map` is an induced embedding. Injectivity is the
/// caller's concern.
pub fn verify_induced_embedding(g: &Graph, t: &RootedTree, map: &[usize]) -> Option<(usize, usize)> {
    let n = t.n();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| g.has_edge(map[u], map[v]) != t.adjacent(u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_trk;

    #[test]
    fn no_induced_p3_in_triangle() {
        let tri = Graph::complete(3);
        let p3 = RootedTree::path(3);
        assert_eq!(find_induced_copy(&tri, &p3, &OracleLimits::default()).unwrap(), None);
    }

    #[test]
    fn star_into_path_maps_centre_to_middle() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let star = make_trk(1, 2);
        let map = find_induced_copy(&path, &star, &OracleLimits::default())
            .unwrap()
            .unwrap();
        assert_eq!(map[0], 1);
        assert_eq!(verify_induced_embedding(&path, &star, &map), None);
    }

    #[test]
    fn path_induced_examples() {
        let dg = Digraph::new(1);
        assert!(is_path_induced(&dg, &RootedTree::single_vertex(), &[0]).unwrap());

        let dg = Digraph::from_arcs(3, [(0, 1), (1, 2), (0, 2)]);
        let p = RootedTree::path(3);
        assert!(!is_path_induced(&dg, &p, &[0, 1, 2]).unwrap());
        let dg = Digraph::from_arcs(3, [(0, 1), (1, 2)]);
        assert!(is_path_induced(&dg, &p, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn path_induced_rejects_bad_maps() {
        let dg = Digraph::from_arcs(3, [(0, 1), (1, 2)]);
        let p = RootedTree::path(3);
        assert!(is_path_induced(&dg, &p, &[0, 0, 2]).is_err());
        assert!(is_path_induced(&dg, &p, &[2, 1, 0]).is_err());
        assert!(is_path_induced(&dg, &p, &[0, 1]).is_err());
    }

    #[test]
    fn limit_refuses_large_patterns() {
        let g = Graph::new(3);
        let t = RootedTree::path(5);
        let limits = OracleLimits {
            induced: 4,
            ..OracleLimits::default()
        };
        assert!(find_induced_copy(&g, &t, &limits).is_err());
    }
}
