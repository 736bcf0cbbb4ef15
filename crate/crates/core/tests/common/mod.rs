#![allow(dead_code)]

use phylokit::imageops::procedural::procedural_image;
use phylokit::imageops::{apply_transform, GrayImage, TransformKind, TransformSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SIDE: usize = 64;

/// `(original, edited)` where the edit is a random instance of `kind`.
pub fn edited_pair(kind: TransformKind, seed: u64) -> (GrayImage, GrayImage, TransformSpec) {
    let original = procedural_image(SIDE, SIDE, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
    let spec = kind.sample(&mut rng);
    let edited = apply_transform(&original, &spec).unwrap();
    (original, edited, spec)
}

/// Photometric pairs cycling through the four photometric edits.
pub fn photometric_pairs(count: usize, first_seed: u64) -> Vec<(GrayImage, GrayImage)> {
    (0..count)
        .map(|i| {
            let kind = TransformKind::PHOTOMETRIC[i % 4];
            let (a, b, _) = edited_pair(kind, first_seed + i as u64);
            (a, b)
        })
        .collect()
}
