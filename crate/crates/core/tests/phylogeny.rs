use phylokit::basisfit::{BasisFamily, IceSettings};
use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{synth_ipt, TransformClass, TreeShape};
use phylokit::phylogeny::{
    indicator_matrix, pairwise_params, reconstruct_from_similarity, root_candidates, span_ipt, PhylogenyTree,
    Reconstruction, SimilarityMatrix,
};
use proptest::prelude::*;

fn matrix(n: usize, flat: &[f64]) -> SimilarityMatrix {
    let values = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { flat[i * n + j] }).collect())
        .collect();
    SimilarityMatrix::new(values).unwrap()
}

/// Similarities that reward ancestry and decay with tree distance.
fn consistent_similarity(tree: &PhylogenyTree) -> SimilarityMatrix {
    let n = tree.node_count();
    let values = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if tree.is_ancestor(i, j) {
                        10.0 / (tree.depth(j) - tree.depth(i)) as f64
                    } else {
                        0.5
                    }
                })
                .collect()
        })
        .collect();
    SimilarityMatrix::new(values).unwrap()
}

fn similarity_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..8).prop_flat_map(|n| (Just(n), prop::collection::vec(0.05f64..20.0, n * n)))
}

proptest! {
    #[test]
    fn indicator_is_antisymmetric((n, flat) in similarity_strategy(), tau in 0.1f64..3.0) {
        let b = indicator_matrix(&matrix(n, &flat), tau).unwrap();
        for i in 0..n {
            prop_assert!(!b.get(i, i));
            for j in 0..n {
                prop_assert!(!(b.get(i, j) && b.get(j, i)));
            }
        }
    }

    #[test]
    fn candidates_survive_monotone_rescaling((n, flat) in similarity_strategy(), power in 0.2f64..4.0) {
        // S -> S^p keeps both the ordering and the side of tau = 1.
        let s = matrix(n, &flat);
        let t = matrix(n, &flat.iter().map(|v| v.powf(power)).collect::<Vec<_>>());
        let a = root_candidates(&indicator_matrix(&s, 1.0).unwrap(), n).unwrap();
        let b = root_candidates(&indicator_matrix(&t, 1.0).unwrap(), n).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spanning_always_yields_a_tree((n, flat) in similarity_strategy(), root in 0usize..8) {
        let s = matrix(n, &flat);
        let b = indicator_matrix(&s, 1.0).unwrap();
        let root = root % n;
        let tree = span_ipt(&b, &s, root).unwrap();
        prop_assert_eq!(tree.root(), root);
        prop_assert_eq!(tree.edges().len(), n - 1);
    }

    #[test]
    fn spanning_recovers_random_trees(n in 2usize..9, seed in 0u64..10_000) {
        let tree = TreeShape::random(n, seed).unwrap().tree().clone();
        let s = consistent_similarity(&tree);
        let rec = reconstruct_from_similarity(s, 1.0, 1).unwrap();
        prop_assert_eq!(rec.candidates[0], tree.root());
        prop_assert_eq!(rec.trees[0].edges(), tree.edges());
    }
}

#[test]
fn three_images_give_six_directed_fits() {
    let set = synth_ipt(&procedural_image(32, 32, 1), &TreeShape::preset("fig5-1").unwrap(), TransformClass::Photometric, 2)
        .unwrap();
    let images = &set.images[..3];
    let fits = pairwise_params(images, BasisFamily::Chebyshev, &IceSettings::default()).unwrap();
    assert_eq!(fits.len(), 3);
    let pairs: Vec<(usize, usize)> = fits.iter().map(|f| (f.i, f.j)).collect();
    assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
    assert_eq!(fits.iter().map(|f| [&f.ij, &f.ji].len()).sum::<usize>(), 6);
}

#[test]
fn pairwise_fits_need_two_images() {
    let one = vec![procedural_image(16, 16, 0)];
    assert!(pairwise_params(&one, BasisFamily::Legendre, &IceSettings::default()).is_err());
}

#[test]
fn similarity_rejects_non_positive_entries() {
    assert!(SimilarityMatrix::new(vec![vec![1.0, 0.0], vec![2.0, 1.0]]).is_err());
    assert!(SimilarityMatrix::new(vec![vec![1.0, f64::NAN], vec![2.0, 1.0]]).is_err());
}

#[test]
fn reconstruction_json_and_dot() {
    let tree = TreeShape::preset("fig5-4").unwrap().tree().clone();
    let rec = reconstruct_from_similarity(consistent_similarity(&tree), 1.0, 3).unwrap();
    assert_eq!(rec.candidates.len(), 3);
    assert_eq!(rec.trees.len(), 3);
    let back = Reconstruction::from_json(&rec.to_json().unwrap()).unwrap();
    assert_eq!(back.to_json().unwrap(), rec.to_json().unwrap());
    let names: Vec<String> = (0..5).map(|i| format!("img_{i}.png")).collect();
    let dot = rec.to_dot(&names).unwrap();
    assert_eq!(dot.matches("digraph").count(), 3);
    assert!(dot.contains("img_0.png"));
}

#[test]
fn candidate_count_is_bounded() {
    let tree = TreeShape::preset("fig5-2").unwrap().tree().clone();
    let b = indicator_matrix(&consistent_similarity(&tree), 1.0).unwrap();
    assert!(root_candidates(&b, 0).is_err());
    assert!(root_candidates(&b, tree.node_count() + 1).is_err());
    assert!(indicator_matrix(&consistent_similarity(&tree), 0.0).is_err());
}
