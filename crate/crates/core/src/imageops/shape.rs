use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::phylogeny::PhylogenyTree;
use crate::{Error, Result};

/// Topology of a synthetic near-duplicate set. Node 0 is the root of every
/// preset; [`synth_ipt`](super::synth_ipt) shuffles labels afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    name: String,
    tree: PhylogenyTree,
}

const PRESETS: &[(&str, &[(usize, usize)])] = &[
    ("pair", &[(0, 1)]),
    // 10 nodes, balanced: two subtrees of similar size below the root.
    ("fig4a", &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (3, 7), (3, 8), (6, 9)]),
    // 10 nodes, deeper than it is wide.
    ("fig4c", &[(0, 1), (0, 2), (1, 3), (3, 4), (4, 5), (5, 6), (2, 7), (7, 8), (8, 9)]),
    // 10 nodes, three nodes at every depth below the root.
    ("fig4d", &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6), (4, 7), (5, 8), (6, 9)]),
    // 5-node shapes covering the breadth/depth extremes.
    ("fig5-1", &[(0, 1), (0, 2), (0, 3), (0, 4)]),
    ("fig5-2", &[(0, 1), (1, 2), (2, 3), (3, 4)]),
    ("fig5-3", &[(0, 1), (0, 2), (1, 3), (1, 4)]),
    ("fig5-4", &[(0, 1), (0, 2), (1, 3), (2, 4)]),
];

impl TreeShape {
    pub fn preset_names() -> impl Iterator<Item = &'static str> {
        PRESETS.iter().map(|(n, _)| *n)
    }

    pub fn preset(name: &str) -> Result<Self> {
        let (_, edges) = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::InvalidShape(format!("unknown shape preset `{name}`")))?;
        let n = edges.len() + 1;
        Ok(Self { name: name.to_string(), tree: PhylogenyTree::from_edges(n, 0, edges)? })
    }

    /// Random recursive tree: node `k` picks its parent uniformly from `0..k`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidShape("a tree shape needs at least 2 nodes".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parents = (0..n).map(|k| (k > 0).then(|| rng.gen_range(0..k))).collect();
        Ok(Self { name: format!("random:{n}:{seed}"), tree: PhylogenyTree::from_parents(parents)? })
    }

    /// Arbitrary shape given as a parent table (`None` marks the root).
    pub fn from_parents(parents: Vec<Option<usize>>) -> Result<Self> {
        if parents.len() < 2 {
            return Err(Error::InvalidShape("a tree shape needs at least 2 nodes".into()));
        }
        Ok(Self { name: "custom".into(), tree: PhylogenyTree::from_parents(parents)? })
    }

    pub fn tree(&self) -> &PhylogenyTree {
        &self.tree
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }
}

impl FromStr for TreeShape {
    type Err = Error;

    /// Accepts a preset name or `random:<n>:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("random:") {
            let (n, seed) = rest
                .split_once(':')
                .ok_or_else(|| Error::InvalidShape(format!("expected random:<n>:<seed>, got `{s}`")))?;
            let n = n.parse().map_err(|_| Error::InvalidShape(format!("bad node count in `{s}`")))?;
            let seed = seed.parse().map_err(|_| Error::InvalidShape(format!("bad seed in `{s}`")))?;
            return Self::random(n, seed);
        }
        Self::preset(s)
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
