//! Root identification hits, edge recovery accuracy and the degree-based
//! von Neumann entropy of directed graphs.

mod entropy;
mod report;

pub use entropy::{entropy_bounds, entropy_delta, von_neumann_entropy};
pub use report::{evaluate_trial, Aggregate, EvalReport, ReportFile, TrialRecord};

use crate::phylogeny::{DiGraph, PhylogenyTree};
use crate::{Error, Result};

/// True iff `true_root` is among the first `k` candidates.
pub fn root_rank_hit(candidates: &[usize], true_root: usize, k: usize) -> bool {
    candidates.iter().take(k).any(|&c| c == true_root)
}

/// Fraction of truth edges present in `recon`. Extra edges are not penalized.
pub fn ipt_accuracy(recon: &DiGraph, truth: &DiGraph) -> Result<f64> {
    if recon.node_count() != truth.node_count() {
        return Err(Error::Input(format!(
            "reconstruction has {} nodes, truth has {}",
            recon.node_count(),
            truth.node_count()
        )));
    }
    if truth.edges().is_empty() {
        return Ok(1.0);
    }
    let hit = truth.edges().iter().filter(|&&(u, v)| recon.contains(u, v)).count();
    Ok(hit as f64 / truth.edges().len() as f64)
}

/// [`ipt_accuracy`] for two trees.
pub fn tree_accuracy(recon: &PhylogenyTree, truth: &PhylogenyTree) -> Result<f64> {
    ipt_accuracy(&recon.to_graph(), &truth.to_graph())
}
