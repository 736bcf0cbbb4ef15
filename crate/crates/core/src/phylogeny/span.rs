use crate::{Error, Result};

use super::{IndicatorMatrix, PhylogenyTree, SimilarityMatrix};

/// Spans a tree from `root` over the indicator relation.
///
/// A depth-first search from `root` (children taken by descending `S`, ties by
/// id) fixes a placement order; each reached node then takes as parent the
/// earlier-placed `u` with `B[u][v] = 1` and the largest `S_uv`. Nodes the
/// search cannot reach hang directly off the root.
pub fn span_ipt(b: &IndicatorMatrix, s: &SimilarityMatrix, root: usize) -> Result<PhylogenyTree> {
    let n = b.len();
    if s.len() != n {
        return Err(Error::Input(format!("indicator has {n} nodes, similarity has {}", s.len())));
    }
    if root >= n {
        return Err(Error::Input(format!("root {root} out of range for {n} nodes")));
    }
    let order = dfs_order(b, s, root);
    let mut rank = vec![usize::MAX; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut parents = vec![Some(root); n];
    parents[root] = None;
    for &v in order.iter().skip(1) {
        let best = order[..rank[v]]
            .iter()
            .copied()
            .filter(|&u| b.get(u, v))
            .fold(None, |best: Option<usize>, u| match best {
                Some(p) if s.get(p, v) >= s.get(u, v) => Some(p),
                _ => Some(u),
            });
        parents[v] = best;
    }
    let tree = PhylogenyTree::from_parents(parents)?;
    debug_assert_eq!(tree.root(), root);
    Ok(tree)
}

/// Reverse postorder of the depth-first search; a topological order whenever
/// the reachable part of `b` is acyclic.
fn dfs_order(b: &IndicatorMatrix, s: &SimilarityMatrix, root: usize) -> Vec<usize> {
    let n = b.len();
    let children = |u: usize| {
        let mut c: Vec<usize> = (0..n).filter(|&v| b.get(u, v)).collect();
        c.sort_by(|&x, &y| s.get(u, y).total_cmp(&s.get(u, x)).then(x.cmp(&y)));
        c
    };
    let mut seen = vec![false; n];
    let mut post = Vec::with_capacity(n);
    let mut stack = vec![(root, children(root), 0usize)];
    seen[root] = true;
    while let Some((u, kids, next)) = stack.last_mut() {
        if let Some(&v) = kids.get(*next) {
            *next += 1;
            if !seen[v] {
                seen[v] = true;
                let c = children(v);
                stack.push((v, c, 0));
            }
        } else {
            post.push(*u);
            stack.pop();
        }
    }
    post.reverse();
    post
}
