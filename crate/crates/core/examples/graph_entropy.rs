//! Degree-based graph entropy of the bundled tree shapes and a toy graph.

use phylokit::evalmetrics::{entropy_bounds, von_neumann_entropy};
use phylokit::imageops::TreeShape;
use phylokit::phylogeny::DiGraph;

fn main() -> phylokit::Result<()> {
    for name in TreeShape::preset_names() {
        let shape = TreeShape::preset(name)?;
        let n = shape.node_count();
        let h = von_neumann_entropy(&shape.tree().to_graph())?;
        let (lo, hi) = entropy_bounds(n)?;
        println!("{name:<7} n={n:<3} H={h:.4}  bounds [{lo:.4}, {hi:.4}]");
    }
    // Three-node toy graphs: star, chain, and a 2-cycle hanging off a root.
    for (label, edges) in [
        ("star", vec![(0, 1), (0, 2)]),
        ("chain", vec![(0, 1), (1, 2)]),
        ("2-cycle", vec![(0, 1), (1, 2), (2, 1)]),
    ] {
        let h = von_neumann_entropy(&DiGraph::new(3, edges)?)?;
        println!("{label:<7} H={h:.4}");
    }
    Ok(())
}
