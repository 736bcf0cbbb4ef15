//! Deterministic stand-in corpus: smooth shading, blobs, edges and fine
//! texture, enough structure for every transform to leave a trace.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrayImage;

/// Procedural grayscale image spanning roughly `[16, 240]`.
pub fn procedural_image(width: usize, height: usize, seed: u64) -> GrayImage {
    procedural_image_in_range(width, height, seed, 16.0, 240.0)
}

/// Procedural image whose intensities are rescaled to exactly `[lo, hi]`.
pub fn procedural_image_in_range(width: usize, height: usize, seed: u64, lo: f64, hi: f64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (w, h) = (width as f64, height as f64);
    let mut field = vec![0.0; width * height];

    let (gx, gy) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let blobs: Vec<(f64, f64, f64, f64)> = (0..rng.gen_range(5..10))
        .map(|_| {
            (
                rng.gen_range(0.0..w),
                rng.gen_range(0.0..h),
                rng.gen_range(0.08..0.3) * w.max(h),
                rng.gen_range(-1.5..1.5),
            )
        })
        .collect();
    let waves: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let period = rng.gen_range(3.0..12.0);
            (theta.cos(), theta.sin(), period, rng.gen_range(0.05..0.25))
        })
        .collect();
    // Step edge through a random line.
    let (ex, ey, etheta, estep) = (
        rng.gen_range(0.0..w),
        rng.gen_range(0.0..h),
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.3..0.8),
    );
    let noise = value_noise(width, height, 4, &mut rng);
    let fine = value_noise(width, height, 2, &mut rng);

    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let mut v = gx * xf / w + gy * yf / h;
            for &(bx, by, r, a) in &blobs {
                let d2 = ((xf - bx).powi(2) + (yf - by).powi(2)) / (r * r);
                v += a * (-0.5 * d2).exp();
            }
            for &(c, s, period, a) in &waves {
                v += a * (std::f64::consts::TAU * (c * xf + s * yf) / period).sin();
            }
            if (xf - ex) * etheta.cos() + (yf - ey) * etheta.sin() > 0.0 {
                v += estep;
            }
            v += 0.35 * noise[y * width + x] + 0.2 * fine[y * width + x];
            field[y * width + x] = v;
        }
    }

    let min = field.iter().copied().fold(f64::INFINITY, f64::min);
    let max = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = (max - min).max(1e-12);
    GrayImage::from_fn(width, height, |x, y| lo + (hi - lo) * (field[y * width + x] - min) / span)
}

/// Bilinearly interpolated lattice noise in `[-1, 1]` with the given cell size.
fn value_noise(width: usize, height: usize, cell: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let gw = width / cell + 2;
    let gh = height / cell + 2;
    let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (x as f64 / cell as f64, y as f64 / cell as f64);
            let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
            let (tx, ty) = (fx - ix as f64, fy - iy as f64);
            let at = |i: usize, j: usize| lattice[j * gw + i];
            let top = at(ix, iy) * (1.0 - tx) + at(ix + 1, iy) * tx;
            let bottom = at(ix, iy + 1) * (1.0 - tx) + at(ix + 1, iy + 1) * tx;
            out.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let a = procedural_image_in_range(40, 30, 7, 35.0, 150.0);
        assert_eq!(a, procedural_image_in_range(40, 30, 7, 35.0, 150.0));
        let min = a.pixels().iter().copied().fold(f64::INFINITY, f64::min);
        let max = a.pixels().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!((min - 35.0).abs() < 1e-9 && (max - 150.0).abs() < 1e-9);
        assert_ne!(a, procedural_image_in_range(40, 30, 8, 35.0, 150.0));
    }
}
