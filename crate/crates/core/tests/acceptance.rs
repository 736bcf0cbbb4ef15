//! One line per acceptance criterion. Failures are reported, not fatal,
//! unless `ACCEPTANCE_STRICT=1` is set.

mod common;

use std::path::Path;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use phylokit::basisfit::{
    eval_poly, fit_blockwise_with, fit_direction, fit_ice_traced, model_pair, BasisFamily,
    IceSettings,
};
use phylokit::evalmetrics::{entropy_bounds, evaluate_trial, von_neumann_entropy, Aggregate};
use phylokit::imageops::procedural::{procedural_image, procedural_image_in_range};
use phylokit::imageops::{
    apply_transform, save_image, synth_ipt, tessellate, GrayImage, TransformClass, TransformSpec, TreeShape,
};
use phylokit::likelihood::{auc, likelihood_ratio, train_model, DensityModel, ModelMeta, ParzenDensity};
use phylokit::phylogeny::{
    reconstruct, span_ipt, DiGraph, IndicatorMatrix, PhylogenyTree, SimilarityMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn entropy_reproduction() -> Outcome {
    let h = |n: usize, e: &[(usize, usize)]| von_neumann_entropy(&DiGraph::new(n, e.iter().copied()).unwrap()).unwrap();
    let gt = h(3, &[(0, 1), (0, 2)]);
    let ipt1 = h(3, &[(0, 1), (0, 2), (1, 2)]);
    let ipt2 = h(3, &[(0, 1), (1, 2)]);
    let fig4a = TreeShape::preset("fig4a").unwrap();
    let h10 = von_neumann_entropy(&fig4a.tree().to_graph()).unwrap();
    // Closed forms of the toy graphs: 2/3, 2/3 - 1/36, 2/3 - 1/18.
    let exact = close(gt, 2.0 / 3.0, 1e-9)
        && close(ipt1, 2.0 / 3.0 - 1.0 / 36.0, 1e-9)
        && close(ipt2, 2.0 / 3.0 - 1.0 / 18.0, 1e-9);
    let reported = close(gt, 0.67, 0.005) && close(ipt1, 0.64, 0.005) && close(ipt2, 0.61, 0.005);
    let bounds = entropy_bounds(10).unwrap() == (0.85, 0.90);
    let ok = exact && reported && close(h10, 0.89, 0.005) && bounds;
    (ok, format!("toy {gt:.4}/{ipt1:.4}/{ipt2:.4}, 10-node {h10:.4}, bounds(10) exact: {bounds}"))
}

fn legendre_sum(n: usize, x: f64) -> f64 {
    // Rodrigues expansion: L_n(x) = 2^-n Σ_k C(n,k)^2 (x-1)^(n-k) (x+1)^k
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    (0..=n).map(|k| binom(n, k).powi(2) * (x - 1.0).powi((n - k) as i32) * (x + 1.0).powi(k as i32)).sum::<f64>()
        / 2f64.powi(n as i32)
}

fn chebyshev_sum(n: usize, x: f64) -> f64 {
    // T_n(x) = Σ_k C(n, 2k) x^(n-2k) (x^2 - 1)^k
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    (0..=n / 2).map(|k| binom(n, 2 * k) * x.powi((n - 2 * k) as i32) * (x * x - 1.0).powi(k as i32)).sum()
}

fn polynomial_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-1.0..=1.0);
        for n in 0..=5 {
            worst = worst.max((eval_poly(BasisFamily::Legendre, n, x).unwrap() - legendre_sum(n, x)).abs());
            worst = worst.max((eval_poly(BasisFamily::Chebyshev, n, x).unwrap() - chebyshev_sum(n, x)).abs());
        }
    }
    let ends = (0..=5).all(|n| {
        eval_poly(BasisFamily::Legendre, n, 1.0).unwrap() == 1.0
            && eval_poly(BasisFamily::Chebyshev, n, 1.0).unwrap() == 1.0
    });
    (worst < 1e-9 && ends, format!("max deviation {worst:.2e}, unit value at 1: {ends}"))
}

fn ice_fit_quality() -> Outcome {
    let settings = IceSettings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut good = 0;
    let mut worst = 0.0f64;
    for i in 0..100 {
        // Range chosen so no gain/bias in the brightness table clips.
        let original = procedural_image_in_range(64, 64, 300 + i, 35.0, 150.0);
        let spec = TransformSpec::Brightness { a: rng.gen_range(0.9..=1.5), b: rng.gen_range(-30.0..=30.0) };
        let edited = apply_transform(&original, &spec).unwrap();
        let t = fit_ice_traced(&edited, &original, BasisFamily::Legendre, &settings).unwrap();
        worst = worst.max(t.params.residual_pe);
        if t.params.residual_pe < 1e-4 && t.converged && t.iterations <= 30 {
            good += 1;
        }
    }
    (good >= 95, format!("{good}/100 converged with residual < 1e-4 (worst {worst:.2e})"))
}

fn residual_ordering() -> Outcome {
    let settings = IceSettings::default();
    let pairs = common::photometric_pairs(200, 10_000);
    let mut means = Vec::new();
    for fam in BasisFamily::ALL {
        let total: f64 =
            pairs.iter().map(|(o, e)| fit_direction(e, o, fam, &settings).unwrap().residual_pe).sum();
        means.push((fam, total / pairs.len() as f64));
    }
    let get = |f: BasisFamily| means.iter().find(|(g, _)| *g == f).unwrap().1;
    let (g, b, l, c, gb) = (
        get(BasisFamily::GaussianRbf),
        get(BasisFamily::BumpRbf),
        get(BasisFamily::Legendre),
        get(BasisFamily::Chebyshev),
        get(BasisFamily::Gabor),
    );
    let ok = g <= b && b < l.min(c) && l.max(c) < gb;
    (
        ok,
        format!("gaussian_rbf {g:.3e}, bump_rbf {b:.3e}, legendre {l:.3e}, chebyshev {c:.3e}, gabor {gb:.3e}"),
    )
}

fn discriminability() -> Outcome {
    let settings = IceSettings::default();
    let train = common::photometric_pairs(200, 20_000);
    let held_out = common::photometric_pairs(100, 30_000);
    let mut ok = true;
    let mut parts = Vec::new();
    for fam in [BasisFamily::Legendre, BasisFamily::Chebyshev] {
        let model = train_model(&train, fam, &settings).unwrap();
        let mut fwd = Vec::new();
        let mut rev = Vec::new();
        for (o, e) in &held_out {
            let (rs, sr) = model_pair(o, e, fam, &settings).unwrap();
            fwd.push(model.likelihood_ratio(&rs.alpha).unwrap());
            rev.push(model.likelihood_ratio(&sr.alpha).unwrap());
        }
        let a = auc(&fwd, &rev);
        ok &= a >= 0.75;
        parts.push(format!("{fam} AUC {a:.3}"));
    }
    (ok, parts.join(", "))
}

fn end_to_end() -> Outcome {
    let settings = IceSettings::default();
    let fam = BasisFamily::Legendre;
    let shape = TreeShape::preset("fig4a").unwrap();
    let mut train = Vec::new();
    for t in 0..20u64 {
        let set = synth_ipt(&procedural_image(64, 64, 50_000 + t), &shape, TransformClass::Photometric, 60_000 + t)
            .unwrap();
        for (u, v) in set.truth().edges() {
            train.push((set.images[u].clone(), set.images[v].clone()));
        }
    }
    let model = train_model(&train, fam, &settings).unwrap();
    let mut reports = Vec::new();
    for t in 0..50u64 {
        let set = synth_ipt(&procedural_image(64, 64, 70_000 + t), &shape, TransformClass::Photometric, 80_000 + t)
            .unwrap();
        let recon = reconstruct(&set.images, fam, &model, &settings, 1.0, 3).unwrap();
        reports.push(evaluate_trial(&recon, &set.truth()).unwrap());
    }
    let agg = Aggregate::from_reports(&reports).unwrap();
    let ok = agg.rank3 >= 0.60 && agg.mean_ipt_accuracy >= 0.55;
    (
        ok,
        format!(
            "rank1 {:.2}, rank2 {:.2}, rank3 {:.2}, ipt accuracy {:.3} (top candidate tree {:.3}), entropy delta {:.4} ± {:.4}",
            agg.rank1,
            agg.rank2,
            agg.rank3,
            agg.mean_ipt_accuracy,
            agg.mean_ipt_accuracy_top,
            agg.entropy_delta_mean,
            agg.entropy_delta_std
        ),
    )
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> PhylogenyTree {
    let mut labels: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let mut parents = vec![None; n];
    for k in 1..n {
        parents[labels[k]] = Some(labels[rng.gen_range(0..k)]);
    }
    PhylogenyTree::from_parents(parents).unwrap()
}

/// Independent block solve: explicit kernel, pseudo-inverse of the stacked
/// ridge system `[Φ; √w I] α = [t; 0]`, block mean.
fn blockwise_oracle(src: &GrayImage, tgt: &GrayImage, fam: BasisFamily, block: usize, ridge: f64) -> Vec<f64> {
    let kernel = |z: f64| match fam {
        BasisFamily::GaussianRbf => (-z * z).exp(),
        _ if z * z < 1.0 => (-1.0 / (1.0 - z * z)).exp(),
        _ => 0.0,
    };
    let sb = tessellate(src, block).unwrap();
    let tb = tessellate(tgt, block).unwrap();
    let m = block * block;
    let mut acc = vec![0.0; m];
    for (s, t) in sb.iter().zip(&tb) {
        let s: Vec<f64> = s.data.iter().map(|&p| p / 127.5 - 1.0).collect();
        let mean = s.iter().sum::<f64>() / m as f64;
        let z: Vec<f64> = s.iter().map(|v| v - mean).collect();
        let stacked = DMatrix::from_fn(2 * m, m, |r, h| {
            if r < m {
                kernel(z[r] - z[h])
            } else if r - m == h {
                ridge.sqrt()
            } else {
                0.0
            }
        });
        let rhs = DVector::from_iterator(2 * m, (0..2 * m).map(|r| if r < m { t.data[r] / 127.5 - 1.0 } else { 0.0 }));
        let a = stacked.pseudo_inverse(1e-14).unwrap() * rhs;
        acc.iter_mut().zip(a.iter()).for_each(|(x, y)| *x += y);
    }
    acc.iter().map(|x| x / sb.len() as f64).collect()
}

/// Toy image of independent uniform intensities.
fn noise_image(side: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(side, side, |_, _| rng.gen_range(0.0..=255.0))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut recovered = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let truth = random_tree(&mut rng, n);
        let b = IndicatorMatrix::new(truth.transitive_closure()).unwrap();
        // Consistent similarities: the immediate parent outranks every other ancestor.
        let s = SimilarityMatrix::new(
            (0..n)
                .map(|u| {
                    (0..n)
                        .map(|v| {
                            if truth.is_ancestor(u, v) {
                                1.0 + 10.0 / (truth.depth(v) - truth.depth(u)) as f64 + rng.gen_range(0.0..0.1)
                            } else {
                                rng.gen_range(0.01..5.0)
                            }
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        if span_ipt(&b, &s, truth.root()).unwrap() == truth {
            recovered += 1;
        }
    }
    let mut worst = 0.0f64;
    for seed in 0..4u64 {
        let src = noise_image(16, 900 + seed);
        let tgt = apply_transform(&src, &TransformSpec::Gamma { gamma: 0.7 + 0.2 * seed as f64 }).unwrap();
        for fam in [BasisFamily::GaussianRbf, BasisFamily::BumpRbf] {
            let ours = fit_blockwise_with(&src, &tgt, fam, 8, 1e-6).unwrap();
            let oracle = blockwise_oracle(&src, &tgt, fam, 8, 1e-6);
            for (a, b) in ours.alpha.iter().zip(&oracle) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    (
        recovered == 100 && worst < 1e-6,
        format!("{recovered}/100 trees recovered, block solve max deviation {worst:.2e}"),
    )
}

fn likelihood_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let samples = |rng: &mut ChaCha8Rng, shift: f64| -> Vec<Vec<f64>> {
        (0..30).map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0) + shift).collect()).collect()
    };
    let meta = ModelMeta { n_pairs: 30, settings: IceSettings::default() };
    let fwd = samples(&mut rng, 0.0);
    let rev = samples(&mut rng, 0.3);
    let model = DensityModel::fit(BasisFamily::Legendre, fwd.clone(), rev, meta.clone()).unwrap();
    let swapped = model.swapped();
    let same = DensityModel::fit(BasisFamily::Legendre, fwd.clone(), fwd, meta).unwrap();
    let mut recip: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for _ in 0..200 {
        let q: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let l = model.likelihood_ratio(&q).unwrap();
        recip = recip.max((l * swapped.likelihood_ratio(&q).unwrap() - 1.0).abs());
        unit = unit.max((same.likelihood_ratio(&q).unwrap() - 1.0).abs());
    }
    let side = |x: f64| ParzenDensity::with_bandwidth(vec![vec![x]], vec![1.0]).unwrap();
    let l = likelihood_ratio(&side(0.0), &side(4.0), &[0.0]).unwrap();
    let rel = (l / 8f64.exp() - 1.0).abs();
    (
        recip <= 1e-12 && unit <= 1e-12 && rel <= 1e-6,
        format!("swap identity {recip:.1e}, equal sides {unit:.1e}, e^8 relative error {rel:.1e}"),
    )
}

/// Runs every subcommand from inside `root` with relative paths and returns
/// all produced files.
fn run_pipeline(root: &Path) -> Vec<(String, Vec<u8>)> {
    std::env::set_current_dir(root).unwrap();
    let seed_img = procedural_image(48, 48, 4242);
    save_image(&seed_img, "seed.png").unwrap();
    let p = |s: &str| s.to_string();
    let run = |args: Vec<String>| {
        let mut argv = vec!["phylokit".to_string()];
        argv.extend(args);
        assert_eq!(phylokit::cli::dispatch(argv.clone()), 0, "{argv:?}");
    };
    let v = |a: &[&str]| a.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for (name, seed) in [("train_a", "11"), ("train_b", "12"), ("test", "13")] {
        run(v(&["synth", "--input", &p("seed.png"), "--shape", "fig5-3", "--class", "photometric", "--seed", seed, "--out", &p(name)]));
    }
    run(v(&[
        "train", "--manifest", &p("train_a/manifest.json"), "--manifest", &p("train_b/manifest.json"),
        "--family", "chebyshev", "--out", &p("model.json"),
    ]));
    run(v(&[
        "reconstruct", "--images", &p("test"), "--model", &p("model.json"), "--family", "chebyshev",
        "--tau", "1.0", "--k", "3", "--out", &p("recon.json"), "--dot", &p("recon.dot"),
    ]));
    run(v(&[
        "evaluate", "--recon", &p("recon.json"), "--truth", &p("test/manifest.json"), "--out", &p("report.json"),
        "--csv", &p("report.csv"),
    ]));
    run(v(&["export-params", "--images", &p("test"), "--family", "gabor", "--out", &p("params.csv")]));
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                files.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cwd = std::env::current_dir().unwrap();
    let fa = run_pipeline(a.path());
    let fb = run_pipeline(b.path());
    std::env::set_current_dir(cwd).unwrap();
    let same = fa == fb;
    (same && fa.len() > 10, format!("{} files compared, identical: {same}", fa.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("entropy reproduction", entropy_reproduction),
        ("polynomial correctness", polynomial_correctness),
        ("ICE fit quality", ice_fit_quality),
        ("residual ordering", residual_ordering),
        ("direction discriminability", discriminability),
        ("end-to-end benchmark", end_to_end),
        ("oracle equivalence", oracle_equivalence),
        ("likelihood-ratio algebra", likelihood_algebra),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {} {name}: {} ({detail}; {secs:.1}s)", i + 1, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
            std::process::exit(1);
        }
    }
}
