//! Fit every basis family to one edited pair, in both directions.

use phylokit::basisfit::{model_pair, BasisFamily, IceSettings};
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{apply_transform, TransformSpec};

fn main() -> phylokit::Result<()> {
    let original = procedural_image(64, 64, 3);
    let edit = TransformSpec::Gamma { gamma: 0.7 };
    let edited = apply_transform(&original, &edit)?;
    println!("edit: {edit:?}");
    println!("{:<14} {:>5} {:>12} {:>12}", "family", "m", "pe(o|e)", "pe(e|o)");
    for family in BasisFamily::ALL {
        // First vector explains the original by the edited image.
        let (oe, eo) = model_pair(&original, &edited, family, &IceSettings::default())?;
        println!("{:<14} {:>5} {:>12.3e} {:>12.3e}", family.name(), family.m(), oe.residual_pe, eo.residual_pe);
        if family.is_polynomial() {
            let a: Vec<String> = eo.alpha.iter().map(|v| format!("{v:+.4}")).collect();
            println!("    edited ~ [{}]", a.join(", "));
        }
    }
    Ok(())
}
