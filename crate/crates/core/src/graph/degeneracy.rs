use super::{Coloring, Graph};

/// Greedy colouring along a smallest-last order.
///
/// Repeatedly removes a minimum-degree vertex (smallest id on ties). If every
/// removed vertex has fewer than `bound` remaining neighbours, colouring in
/// reverse removal order needs at most `bound` colours; otherwise `None`.
pub fn degeneracy_coloring(g: &Graph, bound: usize) -> Option<Coloring> {
    let n = g.n();
    let mut removed = vec![false; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a vertex remains");
        if deg[v] >= bound {
            return None;
        }
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }

    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut taken = Vec::new();
    for &v in order.iter().rev() {
        taken.clear();
        taken.extend(g.neighbors(v).filter_map(|u| colors[u]));
        taken.sort_unstable();
        taken.dedup();
        let c = taken
            .iter()
            .enumerate()
            .find(|&(i, &c)| i != c)
            .map_or(taken.len(), |(i, _)| i);
        colors[v] = Some(c);
    }
    Some(Coloring::from_colors(
        colors.into_iter().map(|c| c.expect("every vertex coloured")).collect(),
    ))
}
