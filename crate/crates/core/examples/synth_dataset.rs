//! Synthesize a near-duplicate set with known ground truth and write it to
//! disk.
//!
//! ```text
//! cargo run --example synth_dataset -- [out_dir] [shape] [seed]
//! ```

use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{synth_ipt, TransformClass, TreeShape};

fn main() -> phylokit::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "target/example_synth".into());
    let shape: TreeShape = args.next().unwrap_or_else(|| "fig4a".into()).parse()?;
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed must be an integer"));

    let root = procedural_image(64, 64, seed);
    let set = synth_ipt(&root, &shape, TransformClass::Mixed, seed)?;
    set.write(&out)?;

    println!("wrote {} images to {out} (root = {})", set.images.len(), set.manifest.root);
    for (u, v) in set.truth().edges() {
        let specs = &set.manifest.edge_specs[&format!("{u}-{v}")];
        println!("  {u} -> {v}: {specs:?}");
    }
    Ok(())
}
