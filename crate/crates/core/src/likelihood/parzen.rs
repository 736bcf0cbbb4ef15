use std::f64::consts::PI;

use crate::{Error, Result};

/// Lower bound applied to every per-dimension bandwidth.
pub const BANDWIDTH_FLOOR: f64 = 1e-3;

/// Product-Gaussian Parzen window estimate over a fixed sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct ParzenDensity {
    samples: Vec<Vec<f64>>,
    bandwidth: Vec<f64>,
}

/// Silverman's rule per dimension, `1.06 σ̂ N^(-1/5)`, floored at
/// [`BANDWIDTH_FLOOR`]. `σ̂` is the unbiased sample standard deviation.
pub fn silverman_bandwidth(samples: &[Vec<f64>]) -> Vec<f64> {
    let n = samples.len() as f64;
    let dim = samples.first().map_or(0, Vec::len);
    (0..dim)
        .map(|d| {
            let mean = samples.iter().map(|s| s[d]).sum::<f64>() / n;
            let var = samples.iter().map(|s| (s[d] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (1.06 * var.sqrt() * n.powf(-0.2)).max(BANDWIDTH_FLOOR)
        })
        .collect()
}

fn check_samples(samples: &[Vec<f64>]) -> Result<usize> {
    let dim = samples.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::Input("samples must have at least one dimension".into()));
    }
    if samples.iter().any(|s| s.len() != dim) {
        return Err(Error::Input("samples have unequal dimensions".into()));
    }
    if samples.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Input("samples contain non-finite values".into()));
    }
    Ok(dim)
}

/// Stores `samples` with Silverman bandwidths.
pub fn fit_parzen(samples: Vec<Vec<f64>>) -> Result<ParzenDensity> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "Parzen estimation needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    check_samples(&samples)?;
    let bandwidth = silverman_bandwidth(&samples);
    Ok(ParzenDensity { samples, bandwidth })
}

impl ParzenDensity {
    /// Density with an explicit bandwidth; a single sample is allowed.
    pub fn with_bandwidth(samples: Vec<Vec<f64>>, bandwidth: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData("no samples".into()));
        }
        let dim = check_samples(&samples)?;
        if bandwidth.len() != dim {
            return Err(Error::Input(format!(
                "bandwidth has {} entries for {dim}-dimensional samples",
                bandwidth.len()
            )));
        }
        if bandwidth.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::Input("bandwidths must be positive and finite".into()));
        }
        Ok(Self { samples, bandwidth })
    }

    pub fn dim(&self) -> usize {
        self.bandwidth.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn bandwidth(&self) -> &[f64] {
        &self.bandwidth
    }

    /// Natural log of the density at `alpha`, computed stably in log space.
    pub fn log_density(&self, alpha: &[f64]) -> Result<f64> {
        if alpha.len() != self.dim() {
            return Err(Error::Input(format!(
                "query has {} dimensions, density has {}",
                alpha.len(),
                self.dim()
            )));
        }
        let norm: f64 = self.bandwidth.iter().map(|h| h.ln()).sum::<f64>()
            + 0.5 * self.dim() as f64 * (2.0 * PI).ln()
            + (self.samples.len() as f64).ln();
        let exponents: Vec<f64> = self
            .samples
            .iter()
            .map(|s| {
                -0.5 * s
                    .iter()
                    .zip(alpha)
                    .zip(&self.bandwidth)
                    .map(|((x, a), h)| ((a - x) / h).powi(2))
                    .sum::<f64>()
            })
            .collect();
        let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = exponents.iter().map(|e| (e - max).exp()).sum();
        Ok(max + sum.ln() - norm)
    }

    pub fn density(&self, alpha: &[f64]) -> Result<f64> {
        self.log_density(alpha).map(f64::exp)
    }
}
