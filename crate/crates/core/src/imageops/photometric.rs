use super::{GrayImage, TransformSpec};
use crate::{Error, Result};

/// Applies a photometric (intensity-only) transform. The output has the
/// input's dimensions and is clipped to `[0, 255]`.
pub fn apply_photometric(img: &GrayImage, spec: &TransformSpec) -> Result<GrayImage> {
    if !spec.kind().is_photometric() {
        return Err(Error::ParamDomain(format!("{:?} is not a photometric transform", spec.kind())));
    }
    spec.validate()?;
    if img.is_empty() {
        return Err(Error::DegenerateInput("empty image".into()));
    }
    let (w, h) = img.dims();
    let out = match *spec {
        TransformSpec::Brightness { a, b } => img.pixels().iter().map(|&p| a * p + b).collect(),
        TransformSpec::Gamma { gamma } => {
            img.pixels().iter().map(|&p| 255.0 * (p / 255.0).powf(gamma)).collect()
        }
        TransformSpec::GaussianSmooth { stddev } => gaussian_smooth(img, stddev),
        TransformSpec::Median { m, n } => median_filter(img, m as usize, n as usize),
        _ => unreachable!("checked above"),
    };
    Ok(GrayImage::from_raw_clamped(w, h, out))
}

pub(crate) fn gaussian_kernel(stddev: f64) -> Vec<f64> {
    let radius = (3.0 * stddev).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * stddev * stddev)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian blur with replicated borders.
fn gaussian_smooth(img: &GrayImage, stddev: f64) -> Vec<f64> {
    let (w, h) = img.dims();
    let kernel = gaussian_kernel(stddev);
    let r = (kernel.len() / 2) as isize;

    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * img.get_clamped(x as isize + i as isize - r, y as isize))
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let yy = (y as isize + i as isize - r).clamp(0, h as isize - 1) as usize;
                    k * tmp[yy * w + x]
                })
                .sum();
        }
    }
    out
}

/// Median over an `m x n` (rows x columns) neighbourhood with replicated
/// borders. Even window sizes extend one pixel further down / right, and an
/// even sample count takes the mean of the two middle values.
fn median_filter(img: &GrayImage, m: usize, n: usize) -> Vec<f64> {
    let (w, h) = img.dims();
    let top = ((m - 1) / 2) as isize;
    let left = ((n - 1) / 2) as isize;
    let mut window = Vec::with_capacity(m * n);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            window.clear();
            for dy in 0..m as isize {
                for dx in 0..n as isize {
                    window.push(img.get_clamped(x - left + dx, y - top + dy));
                }
            }
            window.sort_by(f64::total_cmp);
            let k = window.len();
            out.push(if k % 2 == 1 {
                window[k / 2]
            } else {
                0.5 * (window[k / 2 - 1] + window[k / 2])
            });
        }
    }
    out
}
