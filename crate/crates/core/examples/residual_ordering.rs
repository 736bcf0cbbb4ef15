//! Mean fit residual of each basis family over photometric edits.
//!
//! ```text
//! cargo run --release --example residual_ordering -- [pairs]
//! ```

use phylokit::basisfit::{fit_direction, BasisFamily, IceSettings};
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{apply_transform, TransformKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> phylokit::Result<()> {
    let count: usize = std::env::args().nth(1).map_or(20, |s| s.parse().expect("pair count"));
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut pairs = Vec::new();
    for i in 0..count {
        let original = procedural_image(64, 64, 100 + i as u64);
        let spec = TransformKind::PHOTOMETRIC[i % 4].sample(&mut rng);
        pairs.push((original.clone(), apply_transform(&original, &spec)?));
    }
    for family in BasisFamily::ALL {
        let mut total = 0.0;
        for (original, edited) in &pairs {
            total += fit_direction(edited, original, family, &IceSettings::default())?.residual_pe;
        }
        println!("{:<14} mean residual {:.4e}", family.name(), total / count as f64);
    }
    Ok(())
}
