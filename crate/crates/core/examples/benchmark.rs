//! End-to-end benchmark: train on synthetic trees, reconstruct held-out
//! trees, and aggregate the evaluation metrics.
//!
//! ```text
//! cargo run --release --example benchmark -- [family] [train_sets] [test_sets]
//! ```

use phylokit::basisfit::{BasisFamily, IceSettings};
use phylokit::evalmetrics::{evaluate_trial, Aggregate};
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{synth_ipt, SyntheticIpt, TransformClass, TreeShape};
use phylokit::likelihood::train_model;
use phylokit::phylogeny::{reconstruct, DEFAULT_TAU};

fn set(seed: u64) -> phylokit::Result<SyntheticIpt> {
    let shape = TreeShape::preset("fig4a")?;
    synth_ipt(&procedural_image(64, 64, seed), &shape, TransformClass::Photometric, seed)
}

fn main() -> phylokit::Result<()> {
    let mut args = std::env::args().skip(1);
    let family: BasisFamily = args.next().unwrap_or_else(|| "legendre".into()).parse()?;
    let n_train: u64 = args.next().map_or(10, |s| s.parse().expect("train set count"));
    let n_test: u64 = args.next().map_or(10, |s| s.parse().expect("test set count"));
    let settings = IceSettings::default();

    let mut pairs = Vec::new();
    for seed in 0..n_train {
        let s = set(seed)?;
        pairs.extend(s.truth().edges().into_iter().map(|(u, v)| (s.images[u].clone(), s.images[v].clone())));
    }
    let model = train_model(&pairs, family, &settings)?;

    let mut reports = Vec::new();
    for seed in 0..n_test {
        let s = set(50_000 + seed)?;
        let recon = reconstruct(&s.images, family, &model, &settings, DEFAULT_TAU, 3)?;
        reports.push(evaluate_trial(&recon, &s.truth())?);
    }
    let agg = Aggregate::from_reports(&reports)?;
    println!("{family}: {n_train} training sets, {n_test} test sets");
    println!("root in top 1/2/3: {:.2} / {:.2} / {:.2}", agg.rank1, agg.rank2, agg.rank3);
    println!("edge accuracy {:.3} (top-candidate tree {:.3})", agg.mean_ipt_accuracy, agg.mean_ipt_accuracy_top);
    println!("entropy delta {:+.4} ± {:.4}", agg.entropy_delta_mean, agg.entropy_delta_std);
    Ok(())
}
