use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{apply_geometric, apply_photometric, GrayImage};
use crate::{Error, Result};

pub const BRIGHTNESS_GAIN: (f64, f64) = (0.9, 1.5);
pub const BRIGHTNESS_BIAS: (f64, f64) = (-30.0, 30.0);
pub const MEDIAN_WINDOW: (u32, u32) = (2, 6);
pub const GAUSSIAN_STDDEV: (f64, f64) = (1.0, 3.0);
pub const GAMMA: (f64, f64) = (0.5, 1.5);
pub const RESAMPLE_FACTOR: (f64, f64) = (0.90, 1.10);
pub const ROTATION_DEGREES: (f64, f64) = (-5.0, 5.0);
pub const TRANSLATION_PIXELS: (i32, i32) = (5, 20);
pub const SCALE_FACTOR: (f64, f64) = (0.90, 1.10);

/// A single image edit with its parameters.
///
/// Serializes as `{"kind": "...", "params": {...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransformSpec {
    /// `p -> a * p + b`
    Brightness { a: f64, b: f64 },
    /// Median over an `m` rows by `n` columns window.
    Median { m: u32, n: u32 },
    GaussianSmooth { stddev: f64 },
    /// `p -> 255 * (p / 255)^gamma`
    Gamma { gamma: f64 },
    /// Down/up-sampling by `factor` and back with linear interpolation.
    Resample { factor: f64 },
    Rotate { degrees: f64 },
    Translate { dx: i32, dy: i32 },
    /// Magnification about the image centre.
    Scale { factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    Brightness,
    Median,
    GaussianSmooth,
    Gamma,
    Resample,
    Rotate,
    Translate,
    Scale,
}

impl TransformKind {
    pub const PHOTOMETRIC: [TransformKind; 4] = [
        TransformKind::Brightness,
        TransformKind::Median,
        TransformKind::GaussianSmooth,
        TransformKind::Gamma,
    ];

    pub const GEOMETRIC: [TransformKind; 4] = [
        TransformKind::Resample,
        TransformKind::Rotate,
        TransformKind::Translate,
        TransformKind::Scale,
    ];

    pub fn is_photometric(self) -> bool {
        Self::PHOTOMETRIC.contains(&self)
    }

    pub fn is_geometric(self) -> bool {
        Self::GEOMETRIC.contains(&self)
    }

    /// Draws parameters uniformly from this kind's generator range.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> TransformSpec {
        let uniform = |rng: &mut R, (lo, hi): (f64, f64)| rng.gen_range(lo..=hi);
        match self {
            TransformKind::Brightness => TransformSpec::Brightness {
                a: uniform(rng, BRIGHTNESS_GAIN),
                b: uniform(rng, BRIGHTNESS_BIAS),
            },
            TransformKind::Median => TransformSpec::Median {
                m: rng.gen_range(MEDIAN_WINDOW.0..=MEDIAN_WINDOW.1),
                n: rng.gen_range(MEDIAN_WINDOW.0..=MEDIAN_WINDOW.1),
            },
            TransformKind::GaussianSmooth => {
                TransformSpec::GaussianSmooth { stddev: uniform(rng, GAUSSIAN_STDDEV) }
            }
            TransformKind::Gamma => TransformSpec::Gamma { gamma: uniform(rng, GAMMA) },
            TransformKind::Resample => {
                TransformSpec::Resample { factor: uniform(rng, RESAMPLE_FACTOR) }
            }
            TransformKind::Rotate => TransformSpec::Rotate { degrees: uniform(rng, ROTATION_DEGREES) },
            TransformKind::Translate => {
                let shift = |rng: &mut R| {
                    let d = rng.gen_range(TRANSLATION_PIXELS.0..=TRANSLATION_PIXELS.1);
                    if rng.gen_bool(0.5) {
                        -d
                    } else {
                        d
                    }
                };
                let dx = shift(rng);
                let dy = shift(rng);
                TransformSpec::Translate { dx, dy }
            }
            TransformKind::Scale => TransformSpec::Scale { factor: uniform(rng, SCALE_FACTOR) },
        }
    }
}

fn check_range(name: &str, v: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if v.is_finite() && v >= lo && v <= hi {
        Ok(())
    } else {
        Err(Error::ParamDomain(format!("{name} = {v} outside [{lo}, {hi}]")))
    }
}

impl TransformSpec {
    pub fn kind(&self) -> TransformKind {
        match self {
            TransformSpec::Brightness { .. } => TransformKind::Brightness,
            TransformSpec::Median { .. } => TransformKind::Median,
            TransformSpec::GaussianSmooth { .. } => TransformKind::GaussianSmooth,
            TransformSpec::Gamma { .. } => TransformKind::Gamma,
            TransformSpec::Resample { .. } => TransformKind::Resample,
            TransformSpec::Rotate { .. } => TransformKind::Rotate,
            TransformSpec::Translate { .. } => TransformKind::Translate,
            TransformSpec::Scale { .. } => TransformKind::Scale,
        }
    }

    /// Checks the parameters against the admissible ranges.
    ///
    /// Translations accept any shift up to the generator maximum in either
    /// direction, including zero, so the identity is expressible.
    pub fn validate(&self) -> Result<()> {
        match *self {
            TransformSpec::Brightness { a, b } => {
                check_range("brightness gain a", a, BRIGHTNESS_GAIN)?;
                check_range("brightness bias b", b, BRIGHTNESS_BIAS)
            }
            TransformSpec::Median { m, n } => {
                let (lo, hi) = MEDIAN_WINDOW;
                if (lo..=hi).contains(&m) && (lo..=hi).contains(&n) {
                    Ok(())
                } else {
                    Err(Error::ParamDomain(format!("median window {m}x{n} outside [{lo}, {hi}]")))
                }
            }
            TransformSpec::GaussianSmooth { stddev } => {
                check_range("gaussian stddev", stddev, GAUSSIAN_STDDEV)
            }
            TransformSpec::Gamma { gamma } => check_range("gamma", gamma, GAMMA),
            TransformSpec::Resample { factor } => check_range("resample factor", factor, RESAMPLE_FACTOR),
            TransformSpec::Rotate { degrees } => check_range("rotation", degrees, ROTATION_DEGREES),
            TransformSpec::Translate { dx, dy } => {
                let max = TRANSLATION_PIXELS.1;
                if dx.abs() <= max && dy.abs() <= max {
                    Ok(())
                } else {
                    Err(Error::ParamDomain(format!("translation ({dx}, {dy}) exceeds {max} px")))
                }
            }
            TransformSpec::Scale { factor } => check_range("scale factor", factor, SCALE_FACTOR),
        }
    }
}

/// Applies a transform of either class.
pub fn apply_transform(img: &GrayImage, spec: &TransformSpec) -> Result<GrayImage> {
    if spec.kind().is_photometric() {
        apply_photometric(img, spec)
    } else {
        apply_geometric(img, spec)
    }
}
