use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Directed graph over nodes `0..n`, used for scoring arbitrary (possibly
/// non-tree) reconstructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl DiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
            return Err(Error::Input(format!("edge ({u}, {v}) invalid for {n} nodes")));
        }
        Ok(Self { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, v) in &self.edges {
            d[v] += 1;
        }
        d
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, _) in &self.edges {
            d[u] += 1;
        }
        d
    }
}

/// Rooted directed tree: one root without a parent, every other node with
/// exactly one parent, everything reachable from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhylogenyTree {
    root: usize,
    parents: Vec<Option<usize>>,
}

impl PhylogenyTree {
    /// Builds a tree from a parent table (`None` marks the root).
    pub fn from_parents(parents: Vec<Option<usize>>) -> Result<Self> {
        let n = parents.len();
        let roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => *r,
            [] => return Err(Error::InvalidShape("no root node".into())),
            _ => return Err(Error::InvalidShape(format!("multiple roots: {roots:?}"))),
        };
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return Err(Error::InvalidShape(format!("node {v} has invalid parent {p}")));
                }
            }
        }
        // Every node must reach the root within n steps, otherwise it sits on a cycle.
        for start in 0..n {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parents[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidShape(format!("cycle through node {start}")));
                }
            }
        }
        Ok(Self { root, parents })
    }

    /// Builds a tree from `n` nodes and a parent -> child edge list.
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if root >= n {
            return Err(Error::InvalidShape(format!("root {root} out of range for {n} nodes")));
        }
        let mut parents = vec![None; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidShape(format!("edge ({u}, {v}) out of range")));
            }
            if parents[v].replace(u).is_some() {
                return Err(Error::InvalidShape(format!("node {v} has more than one parent")));
            }
        }
        let tree = Self::from_parents(parents)?;
        if tree.root != root {
            return Err(Error::InvalidShape(format!(
                "declared root {root} but node {} has no parent",
                tree.root
            )));
        }
        Ok(tree)
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    /// Parent -> child edges sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> =
            self.parents.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect();
        e.sort_unstable();
        e
    }

    pub fn children(&self, u: usize) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.parents[v] == Some(u)).collect()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.ancestors(v).len()
    }

    /// Ancestors of `v`, nearest first.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parents[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn is_ancestor(&self, u: usize, v: usize) -> bool {
        self.ancestors(v).contains(&u)
    }

    /// Root-first order in which every parent precedes its children.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            order.push(u);
            let mut kids = self.children(u);
            kids.reverse();
            stack.extend(kids);
        }
        order
    }

    /// Ancestor/descendant relation as an `n x n` 0/1 matrix.
    pub fn transitive_closure(&self) -> Vec<Vec<u8>> {
        let n = self.node_count();
        let mut m = vec![vec![0u8; n]; n];
        for v in 0..n {
            for a in self.ancestors(v) {
                m[a][v] = 1;
            }
        }
        m
    }

    pub fn to_graph(&self) -> DiGraph {
        DiGraph { n: self.node_count(), edges: self.edges().into_iter().collect() }
    }

    /// Returns the same tree with node `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        let mut parents = vec![None; n];
        for (v, p) in self.parents.iter().enumerate() {
            parents[perm[v]] = p.map(|p| perm[p]);
        }
        Self::from_parents(parents)
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson { root: self.root, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

/// JSON form of a tree: `{"root": id, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub root: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TreeJson {
    pub fn to_tree(&self, n: usize) -> Result<PhylogenyTree> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        PhylogenyTree::from_edges(n, self.root, &edges)
    }
}
