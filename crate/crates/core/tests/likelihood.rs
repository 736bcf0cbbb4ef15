mod common;

use phylokit::basisfit::{BasisFamily, IceSettings};
use phylokit::imageops::TransformKind;
use phylokit::likelihood::{
    fit_parzen, silverman_bandwidth, train_model, DensityModel, ModelMeta, ParzenDensity, BANDWIDTH_FLOOR,
};
use phylokit::phylogeny::similarity_matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A six-coefficient vector with two free entries.
fn v6(a: f64, b: f64) -> Vec<f64> {
    vec![a, b, 0.3, -0.2, 0.1, 0.05]
}

fn meta() -> ModelMeta {
    ModelMeta { n_pairs: 0, settings: IceSettings::default() }
}

#[test]
fn density_integrates_to_one_in_1d() {
    let d = ParzenDensity::with_bandwidth(vec![vec![0.0], vec![1.0], vec![3.5]], vec![0.4]).unwrap();
    let (lo, hi, k) = (-6.0, 10.0, 16_000);
    let h = (hi - lo) / k as f64;
    let mut s = 0.0;
    for i in 0..=k {
        let w = if i == 0 || i == k { 0.5 } else { 1.0 };
        s += w * d.density(&[lo + i as f64 * h]).unwrap();
    }
    assert!((s * h - 1.0).abs() < 1e-9, "{}", s * h);
}

#[test]
fn density_integrates_to_one_in_2d() {
    let d = ParzenDensity::with_bandwidth(vec![vec![0.0, 0.0], vec![0.5, -1.0]], vec![0.3, 0.6]).unwrap();
    let (lo, hi, k) = (-5.0, 5.0, 500);
    let h = (hi - lo) / k as f64;
    let mut s = 0.0;
    for i in 0..=k {
        for j in 0..=k {
            let w = if i == 0 || i == k { 0.5 } else { 1.0 } * if j == 0 || j == k { 0.5 } else { 1.0 };
            s += w * d.density(&[lo + i as f64 * h, lo + j as f64 * h]).unwrap();
        }
    }
    assert!((s * h * h - 1.0).abs() < 1e-6, "{}", s * h * h);
}

#[test]
fn silverman_matches_direct_formula_on_gaussian_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let samples: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            // Box-Muller, sigma 2 in the first coordinate and 0.5 in the second.
            let (u1, u2): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.gen());
            let r = (-2.0 * u1.ln()).sqrt();
            let t = std::f64::consts::TAU * u2;
            vec![2.0 * r * t.cos(), 0.5 * r * t.sin()]
        })
        .collect();
    let bw = silverman_bandwidth(&samples);
    for (d, sigma) in [(0, 2.0), (1, 0.5)] {
        let xs: Vec<f64> = samples.iter().map(|s| s[d]).collect();
        let mean = xs.iter().sum::<f64>() / 1000.0;
        let sd = (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 999.0).sqrt();
        let want = 1.06 * sd * 1000f64.powf(-0.2);
        assert!((bw[d] - want).abs() < 1e-12);
        // And the sample deviation is close to the generating one.
        assert!((bw[d] / (1.06 * sigma * 1000f64.powf(-0.2)) - 1.0).abs() < 0.1);
    }
}

#[test]
fn constant_samples_use_the_floor() {
    let bw = silverman_bandwidth(&[vec![2.0], vec![2.0], vec![2.0]]);
    assert_eq!(bw, vec![BANDWIDTH_FLOOR]);
    assert!(fit_parzen(vec![vec![1.0]]).is_err());
}

#[test]
fn ratio_of_the_swapped_model_is_reciprocal() {
    let fwd = vec![v6(0.0, 1.0), v6(0.2, 0.8), v6(-0.1, 1.1)];
    let rev = vec![v6(1.0, 0.0), v6(0.9, 0.1), v6(1.2, -0.2)];
    let model = DensityModel::fit(BasisFamily::Legendre, fwd, rev, meta()).unwrap();
    let swapped = model.swapped();
    for alpha in [v6(0.0, 1.0), v6(0.5, 0.5), v6(1.0, 0.0), v6(3.0, -2.0)] {
        let a = model.likelihood_ratio(&alpha).unwrap();
        let b = swapped.likelihood_ratio(&alpha).unwrap();
        assert!((a * b - 1.0).abs() < 1e-12);
    }
}

#[test]
fn model_json_round_trips() {
    let model = DensityModel::fit(
        BasisFamily::Chebyshev,
        vec![v6(0.1, 0.2), v6(0.3, 0.1)],
        vec![v6(0.0, 0.0), v6(0.4, 0.5)],
        meta(),
    )
    .unwrap();
    let text = model.to_json().unwrap();
    let back = DensityModel::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    assert!(DensityModel::from_json(&text.replace("\"family\"", "\"famly\"")).is_err());
}

#[test]
fn training_is_deterministic() {
    let pairs = common::photometric_pairs(16, 900);
    let a = train_model(&pairs, BasisFamily::Legendre, &IceSettings::default()).unwrap();
    let b = train_model(&pairs, BasisFamily::Legendre, &IceSettings::default()).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.meta().n_pairs, 16);
}

#[test]
fn brightness_edits_point_from_original_to_edited() {
    let model = train_model(&common::photometric_pairs(60, 2000), BasisFamily::Legendre, &IceSettings::default())
        .unwrap();
    let settings = IceSettings::default();
    let trials = 40;
    let mut right = 0;
    for t in 0..trials {
        let (original, edited, _) = common::edited_pair(TransformKind::Brightness, 7000 + t);
        let s = similarity_matrix(&[original, edited], BasisFamily::Legendre, &model, &settings).unwrap();
        if s.get(0, 1) > s.get(1, 0) {
            right += 1;
        }
    }
    assert!(right as f64 >= 0.7 * trials as f64, "{right}/{trials}");
}

proptest! {
    #[test]
    fn density_is_invariant_to_sample_order(
        pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 2..12),
        q in prop::collection::vec(-3.0f64..3.0, 2),
        rot in 0usize..12,
    ) {
        let a = fit_parzen(pts.clone()).unwrap();
        let mut shuffled = pts.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let b = fit_parzen(shuffled).unwrap();
        let (la, lb) = (a.log_density(&q).unwrap(), b.log_density(&q).unwrap());
        prop_assert!((la - lb).abs() <= 1e-9 * la.abs().max(1.0));
    }

    #[test]
    fn log_ratio_is_antisymmetric(
        fwd in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 6), 2..8),
        rev in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 6), 2..8),
        q in prop::collection::vec(-4.0f64..4.0, 6),
    ) {
        let model = DensityModel::fit(BasisFamily::Legendre, fwd, rev, meta()).unwrap();
        let a = model.likelihood_ratio(&q).unwrap().ln();
        let b = model.swapped().likelihood_ratio(&q).unwrap().ln();
        prop_assert!((a + b).abs() < 1e-9 * a.abs().max(1.0));
    }
}
