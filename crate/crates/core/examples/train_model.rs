//! Train a forward/reverse density model from synthetic edit pairs and
//! score a few held-out pairs in both directions.
//!
//! ```text
//! cargo run --release --example train_model -- [family] [model.json]
//! ```

use phylokit::basisfit::{model_pair, BasisFamily, IceSettings};
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{apply_transform, GrayImage, TransformKind};
use phylokit::likelihood::{auc, train_model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pairs(count: usize, first: u64) -> Vec<(GrayImage, GrayImage)> {
    let mut rng = ChaCha8Rng::seed_from_u64(first);
    (0..count)
        .map(|i| {
            let original = procedural_image(64, 64, first + i as u64);
            let spec = TransformKind::PHOTOMETRIC[i % 4].sample(&mut rng);
            let edited = apply_transform(&original, &spec).expect("sampled specs are valid");
            (original, edited)
        })
        .collect()
}

fn main() -> phylokit::Result<()> {
    let mut args = std::env::args().skip(1);
    let family: BasisFamily = args.next().unwrap_or_else(|| "legendre".into()).parse()?;
    let out = args.next().unwrap_or_else(|| "target/example_model.json".into());
    let settings = IceSettings::default();

    let model = train_model(&pairs(80, 0), family, &settings)?;
    model.save(&out)?;
    println!("trained {family} on {} pairs, saved to {out}", model.meta().n_pairs);
    println!("bandwidth: {:.4?}", model.bandwidth());

    let (mut fwd, mut rev) = (Vec::new(), Vec::new());
    for (original, edited) in pairs(40, 10_000) {
        let (oe, eo) = model_pair(&original, &edited, family, &settings)?;
        fwd.push(model.likelihood_ratio(&oe.alpha)?.ln());
        rev.push(model.likelihood_ratio(&eo.alpha)?.ln());
    }
    println!("held-out AUC (parent->child vs child->parent): {:.3}", auc(&fwd, &rev));
    Ok(())
}
