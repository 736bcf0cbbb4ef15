use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::parzen::{silverman_bandwidth, ParzenDensity};
use crate::basisfit::{model_pair, BasisFamily, IceSettings};
use crate::imageops::GrayImage;
use crate::{fsutil, Error, Result};

/// `ln(1e-300)`: both densities are floored here before taking the ratio.
pub const LOG_DENSITY_FLOOR: f64 = -690.775_527_898_213_7;

/// Forward and reverse parameter densities for one basis family.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    family: BasisFamily,
    forward: ParzenDensity,
    reverse: ParzenDensity,
    meta: ModelMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelMeta {
    pub n_pairs: usize,
    pub settings: IceSettings,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    family: BasisFamily,
    m: usize,
    bandwidth: Vec<f64>,
    forward: Vec<Vec<f64>>,
    reverse: Vec<Vec<f64>>,
    meta: ModelMeta,
}

/// Outcome counts of a training run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainStats {
    pub total: usize,
    pub failed: usize,
}

impl DensityModel {
    /// Builds a model with one bandwidth shared by both sides: the per-dimension
    /// maximum of the two Silverman estimates.
    pub fn fit(
        family: BasisFamily,
        forward: Vec<Vec<f64>>,
        reverse: Vec<Vec<f64>>,
        meta: ModelMeta,
    ) -> Result<Self> {
        if forward.len() < 2 || reverse.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 forward and 2 reverse samples, got {} and {}",
                forward.len(),
                reverse.len()
            )));
        }
        check_dims(family, &forward)?;
        check_dims(family, &reverse)?;
        let bandwidth: Vec<f64> = silverman_bandwidth(&forward)
            .into_iter()
            .zip(silverman_bandwidth(&reverse))
            .map(|(f, r)| f.max(r))
            .collect();
        Self::with_bandwidth(family, forward, reverse, bandwidth, meta)
    }

    pub fn with_bandwidth(
        family: BasisFamily,
        forward: Vec<Vec<f64>>,
        reverse: Vec<Vec<f64>>,
        bandwidth: Vec<f64>,
        meta: ModelMeta,
    ) -> Result<Self> {
        check_dims(family, &forward)?;
        check_dims(family, &reverse)?;
        let forward = ParzenDensity::with_bandwidth(forward, bandwidth.clone())?;
        let reverse = ParzenDensity::with_bandwidth(reverse, bandwidth)?;
        Ok(Self { family, forward, reverse, meta })
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn forward(&self) -> &ParzenDensity {
        &self.forward
    }

    pub fn reverse(&self) -> &ParzenDensity {
        &self.reverse
    }

    pub fn bandwidth(&self) -> &[f64] {
        self.forward.bandwidth()
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    /// The same model with forward and reverse samples exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            family: self.family,
            forward: self.reverse.clone(),
            reverse: self.forward.clone(),
            meta: self.meta.clone(),
        }
    }

    /// `Λ = p_f(α) / p_b(α)`.
    pub fn likelihood_ratio(&self, alpha: &[f64]) -> Result<f64> {
        likelihood_ratio(&self.forward, &self.reverse, alpha)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            family: self.family,
            m: self.family.m(),
            bandwidth: self.bandwidth().to_vec(),
            forward: self.forward.samples().to_vec(),
            reverse: self.reverse.samples().to_vec(),
            meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::json("model", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::json("model", e))?;
        if file.m != file.family.m() {
            return Err(Error::Input(format!(
                "model declares m = {} but {} has {} coefficients",
                file.m,
                file.family,
                file.family.m()
            )));
        }
        file.meta.settings.validate()?;
        Self::with_bandwidth(file.family, file.forward, file.reverse, file.bandwidth, file.meta)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fsutil::write_atomic(path.as_ref(), text.as_bytes())
    }
}

fn check_dims(family: BasisFamily, samples: &[Vec<f64>]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("empty sample set".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.len() != family.m()) {
        return Err(Error::Input(format!(
            "{family} samples need {} coefficients, got {}",
            family.m(),
            s.len()
        )));
    }
    Ok(())
}

/// Log of the likelihood ratio with both densities floored at `1e-300`.
pub fn log_likelihood_ratio(forward: &ParzenDensity, reverse: &ParzenDensity, alpha: &[f64]) -> Result<f64> {
    let lf = forward.log_density(alpha)?.max(LOG_DENSITY_FLOOR);
    let lb = reverse.log_density(alpha)?.max(LOG_DENSITY_FLOOR);
    // Clamped symmetrically so the ratio stays finite and the swap identity holds.
    Ok((lf - lb).clamp(LOG_DENSITY_FLOOR, -LOG_DENSITY_FLOOR))
}

pub fn likelihood_ratio(forward: &ParzenDensity, reverse: &ParzenDensity, alpha: &[f64]) -> Result<f64> {
    log_likelihood_ratio(forward, reverse, alpha).map(f64::exp)
}

/// Trains from `(original, transformed)` pairs. Pairs whose fit fails are
/// skipped; more than half failing is an error.
pub fn train_model(
    pairs: &[(GrayImage, GrayImage)],
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<DensityModel> {
    train_model_with_stats(pairs, family, settings).map(|(m, _)| m)
}

pub fn train_model_with_stats(
    pairs: &[(GrayImage, GrayImage)],
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<(DensityModel, TrainStats)> {
    settings.validate()?;
    if pairs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "training needs at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    let fits: Vec<_> = pairs
        .par_iter()
        .map(|(r, s)| model_pair(r, s, family, settings))
        .collect();
    let mut forward = Vec::new();
    let mut reverse = Vec::new();
    let mut failed = 0;
    for fit in fits {
        match fit {
            Ok((rs, sr)) => {
                forward.push(rs.alpha);
                reverse.push(sr.alpha);
            }
            Err(_) => failed += 1,
        }
    }
    let stats = TrainStats { total: pairs.len(), failed };
    if 2 * failed > pairs.len() {
        return Err(Error::Training { failed, total: pairs.len() });
    }
    let meta = ModelMeta { n_pairs: forward.len(), settings: *settings };
    let model = if forward.len() >= 2 {
        DensityModel::fit(family, forward, reverse, meta)?
    } else {
        return Err(Error::InsufficientData("fewer than 2 pairs could be fitted".into()));
    };
    Ok((model, stats))
}

/// Area under the ROC curve for scores of positives vs. negatives, ties
/// counted as one half.
pub fn auc(positives: &[f64], negatives: &[f64]) -> f64 {
    if positives.is_empty() || negatives.is_empty() {
        return f64::NAN;
    }
    let mut wins = 0.0;
    for p in positives {
        for n in negatives {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (positives.len() * negatives.len()) as f64
}
