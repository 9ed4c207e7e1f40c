use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Rooted tree with every arc directed parent -> child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl RootedTree {
    /// Build from a parent map. Exactly one vertex may have no parent and
    /// every vertex must reach it.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::Precondition(format!(
                "tree must have exactly one root, found {}",
                roots.len()
            )));
        };
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return Err(Error::Precondition(format!("bad parent {p} for {v}")));
                }
                children[p].push(v);
            }
        }
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::Precondition("parent map has a cycle".into()));
                }
            }
        }
        Ok(Self {
            parent,
            children,
            root,
        })
    }

    pub fn single_vertex() -> Self {
        Self {
            parent: vec![None],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    /// Directed path `0 -> 1 -> ... -> len-1`.
    pub fn path(len: usize) -> Self {
        assert!(len >= 1);
        let parent = (0..len).map(|v| v.checked_sub(1)).collect();
        Self::from_parents(parent).expect("a path is a tree")
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn depth_of(&self, v: usize) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            cur = p;
            d += 1;
        }
        d
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        (0..self.n()).map(|v| self.depth_of(v)).max().unwrap_or(0)
    }

    /// Arcs `(parent, child)` in preorder of the child.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.preorder()
            .into_iter()
            .filter_map(|v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    /// Depth-first preorder from the root, children in stored order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    /// `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = b;
        while let Some(p) = self.parent[cur] {
            if p == a {
                return true;
            }
            cur = p;
        }
        false
    }

    /// `v` and all its descendants.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Undirected tree adjacency.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.parent[u] == Some(v) || self.parent[v] == Some(u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }
}

/// Vertex count of the complete `k`-ary tree of depth `r`.
pub fn trk_size(r: u32, k: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    let mut level = BigUint::one();
    for _ in 0..=r {
        total += &level;
        level *= k;
    }
    total
}

/// Complete `k`-ary rooted tree of depth `r`, numbered breadth-first so the
/// children of each vertex are consecutive and increasing.
///
/// Panics if `k == 0`.
pub fn make_trk(r: usize, k: usize) -> RootedTree {
    assert!(k >= 1, "T_(r,k) needs k >= 1");
    let mut parent = vec![None];
    let mut frontier = vec![0usize];
    for _ in 0..r {
        let mut next = Vec::with_capacity(frontier.len() * k);
        for &v in &frontier {
            for _ in 0..k {
                next.push(parent.len());
                parent.push(Some(v));
            }
        }
        frontier = next;
    }
    RootedTree::from_parents(parent).expect("complete k-ary tree is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trk_sizes() {
        let star = make_trk(1, 3);
        assert_eq!(star.n(), 4);
        assert_eq!(star.depth(), 1);
        assert_eq!(star.children(0), &[1, 2, 3]);
        assert_eq!(make_trk(2, 2).n(), 7);
        assert_eq!(make_trk(3, 1).n(), 4);
        assert_eq!(make_trk(0, 5).n(), 1);
    }

    #[test]
    fn trk_size_matches_geometric_sum() {
        // (k^(r+1) - 1) / (k - 1) computed independently
        for r in 0..5u32 {
            for k in 1..5usize {
                let expect = if k == 1 {
                    r as usize + 1
                } else {
                    (k.pow(r + 1) - 1) / (k - 1)
                };
                assert_eq!(make_trk(r as usize, k).n(), expect);
                assert_eq!(trk_size(r, &BigUint::from(k)), BigUint::from(expect));
            }
        }
        assert_eq!(make_trk(3, 3).n(), 40);
    }

    #[test]
    fn rejects_bad_parent_maps() {
        assert!(RootedTree::from_parents(vec![None, None]).is_err());
        assert!(RootedTree::from_parents(vec![None, Some(2), Some(1)]).is_err());
        assert!(RootedTree::from_parents(vec![Some(1), Some(0)]).is_err());
    }

    #[test]
    fn ancestry() {
        let t = make_trk(2, 2);
        assert!(t.is_ancestor(0, 5));
        assert!(t.is_ancestor(1, 3));
        assert!(!t.is_ancestor(1, 5));
        assert!(!t.is_ancestor(3, 3));
        let mut sub = t.subtree(2);
        sub.sort();
        assert_eq!(sub, vec![2, 5, 6]);
        assert_eq!(t.preorder(), vec![0, 1, 3, 4, 2, 5, 6]);
    }
}
