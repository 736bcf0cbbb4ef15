//! Reconstruct the phylogeny of one synthetic set and compare it with the
//! truth.

use phylokit::basisfit::{BasisFamily, IceSettings};
use phylokit::evalmetrics::evaluate_trial;
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{synth_ipt, GrayImage, TransformClass, TreeShape};
use phylokit::likelihood::train_model;
use phylokit::phylogeny::{reconstruct, DEFAULT_TAU};

fn edge_pairs(seed: u64) -> phylokit::Result<Vec<(GrayImage, GrayImage)>> {
    let shape = TreeShape::preset("fig4a")?;
    let set = synth_ipt(&procedural_image(64, 64, seed), &shape, TransformClass::Photometric, seed)?;
    Ok(set.truth().edges().into_iter().map(|(u, v)| (set.images[u].clone(), set.images[v].clone())).collect())
}

fn main() -> phylokit::Result<()> {
    let family = BasisFamily::Legendre;
    let settings = IceSettings::default();
    let mut training = Vec::new();
    for seed in 0..10 {
        training.extend(edge_pairs(seed)?);
    }
    let model = train_model(&training, family, &settings)?;

    let shape = TreeShape::preset("fig4a")?;
    let test = synth_ipt(&procedural_image(64, 64, 999), &shape, TransformClass::Photometric, 999)?;
    let recon = reconstruct(&test.images, family, &model, &settings, DEFAULT_TAU, 3)?;
    let truth = test.truth();

    println!("true root {}, candidates {:?}", truth.root(), recon.candidates);
    println!("truth edges {:?}", truth.edges());
    println!("top tree    {:?}", recon.trees[0].edges());
    let report = evaluate_trial(&recon, &truth)?;
    println!(
        "rank hits {:?}, edge accuracy {:.2}, entropy delta {:+.4}",
        report.root_rank_hits, report.ipt_accuracy, report.entropy_delta
    );
    let names: Vec<String> = test.manifest.images.clone();
    print!("{}", recon.to_dot(&names)?.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}
