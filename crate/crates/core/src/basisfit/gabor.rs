use std::f64::consts::PI;

use crate::imageops::GrayImage;
use crate::{Error, Result};

/// Wavelengths (pixels) of the bank, ascending.
pub const GABOR_WAVELENGTHS: [f64; 4] = [2.0, 3.0, 4.0, 5.0];
/// Orientations (degrees) pooled into each wavelength's response.
pub const GABOR_ORIENTATIONS: [f64; 4] = [0.0, 45.0, 90.0, 135.0];
/// Envelope width relative to wavelength (one-octave bandwidth).
pub const SIGMA_PER_WAVELENGTH: f64 = 0.56;

/// Complex Gabor kernel with a zero-mean real part and a unit-mass envelope.
#[derive(Debug, Clone)]
pub struct GaborKernel {
    pub radius: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl GaborKernel {
    pub fn new(wavelength: f64, orientation_deg: f64) -> Self {
        let sigma = SIGMA_PER_WAVELENGTH * wavelength;
        let radius = (3.0 * sigma).ceil() as usize;
        let (sin, cos) = orientation_deg.to_radians().sin_cos();
        let side = 2 * radius + 1;
        let mut env = Vec::with_capacity(side * side);
        let mut phase = Vec::with_capacity(side * side);
        for j in 0..side {
            for i in 0..side {
                let x = i as f64 - radius as f64;
                let y = j as f64 - radius as f64;
                let xr = x * cos + y * sin;
                env.push((-(x * x + y * y) / (2.0 * sigma * sigma)).exp());
                phase.push(2.0 * PI * xr / wavelength);
            }
        }
        let mass: f64 = env.iter().sum();
        let mut re: Vec<f64> = env.iter().zip(&phase).map(|(e, p)| e * p.cos() / mass).collect();
        let im: Vec<f64> = env.iter().zip(&phase).map(|(e, p)| e * p.sin() / mass).collect();
        // Remove the DC response so flat regions give zero.
        let dc: f64 = re.iter().sum();
        for (r, e) in re.iter_mut().zip(&env) {
            *r -= dc * e / mass;
        }
        Self { radius, re, im }
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }
}

/// Side length of the largest kernel in the bank.
pub fn max_support() -> usize {
    GaborKernel::new(GABOR_WAVELENGTHS[3], 0.0).side()
}

/// Filters `img` with the 16-filter bank and returns four response planes,
/// one per wavelength (ascending), each the mean of the four orientation
/// magnitudes.
pub fn gabor_bank(img: &GrayImage) -> Result<Vec<Vec<f64>>> {
    let (w, h) = img.dims();
    gabor_bank_raw(img.pixels(), w, h)
}

pub(crate) fn gabor_bank_raw(data: &[f64], w: usize, h: usize) -> Result<Vec<Vec<f64>>> {
    let support = max_support();
    if w < support || h < support {
        return Err(Error::DegenerateInput(format!(
            "{w}x{h} image is smaller than the {support}x{support} Gabor support"
        )));
    }
    Ok(GABOR_WAVELENGTHS
        .iter()
        .map(|&lambda| {
            let mut combined = vec![0.0; w * h];
            for &theta in &GABOR_ORIENTATIONS {
                let k = GaborKernel::new(lambda, theta);
                for (acc, m) in combined.iter_mut().zip(magnitude_response(data, w, h, &k)) {
                    *acc += m / GABOR_ORIENTATIONS.len() as f64;
                }
            }
            combined
        })
        .collect())
}

fn magnitude_response(data: &[f64], w: usize, h: usize, k: &GaborKernel) -> Vec<f64> {
    let r = k.radius as isize;
    let side = k.side();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..side {
                let yy = (y + j as isize - r).clamp(0, h as isize - 1) as usize;
                let row = &data[yy * w..(yy + 1) * w];
                for i in 0..side {
                    let xx = (x + i as isize - r).clamp(0, w as isize - 1) as usize;
                    let v = row[xx];
                    // Correlation; the magnitude is unchanged under kernel flip.
                    re += k.re[j * side + i] * v;
                    im += k.im[j * side + i] * v;
                }
            }
            out.push((re * re + im * im).sqrt());
        }
    }
    out
}
