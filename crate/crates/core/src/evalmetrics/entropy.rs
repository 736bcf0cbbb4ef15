use crate::phylogeny::{DiGraph, PhylogenyTree};
use crate::{Error, Result};

/// Degree-based approximation of the von Neumann entropy of a directed graph.
///
/// One-way edges `(u, v)` add `d_in(u) / (d_in(v) d_out(u)^2)` (zero when `u`
/// has no in-edges); each edge of a 2-cycle adds `1 / (d_out(u) d_out(v))`.
pub fn von_neumann_entropy(g: &DiGraph) -> Result<f64> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::UndefinedEntropy);
    }
    let din = g.in_degrees();
    let dout = g.out_degrees();
    let mut sum = 0.0;
    for &(u, v) in g.edges() {
        if g.contains(v, u) {
            sum += 1.0 / (dout[u] * dout[v]) as f64;
        } else if din[u] > 0 {
            sum += din[u] as f64 / (din[v] as f64 * (dout[u] * dout[u]) as f64);
        }
    }
    let n = n as f64;
    Ok(1.0 - 1.0 / n - sum / (2.0 * n * n))
}

/// `(1 - 1.5/n, 1 - 1/n)`.
pub fn entropy_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Input(format!("entropy bounds need n >= 2, got {n}")));
    }
    let n = n as f64;
    Ok((1.0 - 1.5 / n, 1.0 - 1.0 / n))
}

/// `H(recon) - H(truth)`.
pub fn entropy_delta(truth: &PhylogenyTree, recon: &PhylogenyTree) -> Result<f64> {
    if truth.node_count() != recon.node_count() {
        return Err(Error::Input(format!(
            "truth has {} nodes, reconstruction has {}",
            truth.node_count(),
            recon.node_count()
        )));
    }
    Ok(von_neumann_entropy(&recon.to_graph())? - von_neumann_entropy(&truth.to_graph())?)
}
