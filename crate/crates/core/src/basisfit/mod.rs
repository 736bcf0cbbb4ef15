//! Pairwise transformation models.
//!
//! A pair `(a, b)` is modelled as `a(p) ≈ Σ_h α_h B_h[b](p)`: image `a` is
//! explained by a basis expansion of image `b`. Polynomial and Gabor bases
//! are fitted with inverse-compositional iterations ([`fit_ice`]); radial
//! bases are fitted block by block with regularized least squares
//! ([`fit_blockwise`]). Every fit works on intensities mapped to `[-1, 1]`,
//! and residuals are reported in those units.

mod blockwise;
mod gabor;
mod ice;
mod poly;
mod rbf;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use blockwise::{fit_blockwise, fit_blockwise_with, kernel_matrix, solve_ridge, BLOCK_RIDGE, BLOCK_SIZE};
pub use gabor::{gabor_bank, GaborKernel, GABOR_ORIENTATIONS, GABOR_WAVELENGTHS};
pub use ice::{fit_ice, fit_ice_traced, IceTrace};
pub use poly::eval_poly;
pub use rbf::rbf_kernel;

use crate::fsutil::write_atomic;
use crate::imageops::GrayImage;
use crate::{Error, Result};

/// Polynomial degree used by both orthogonal-polynomial bases (degrees 0..=5).
pub const POLY_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisFamily {
    Legendre,
    Chebyshev,
    Gabor,
    GaussianRbf,
    BumpRbf,
}

impl BasisFamily {
    pub const ALL: [BasisFamily; 5] = [
        BasisFamily::Legendre,
        BasisFamily::Chebyshev,
        BasisFamily::Gabor,
        BasisFamily::GaussianRbf,
        BasisFamily::BumpRbf,
    ];

    /// Number of coefficients in a fitted parameter vector.
    pub fn m(self) -> usize {
        match self {
            BasisFamily::Legendre | BasisFamily::Chebyshev => POLY_DEGREE + 1,
            BasisFamily::Gabor => GABOR_WAVELENGTHS.len(),
            BasisFamily::GaussianRbf | BasisFamily::BumpRbf => BLOCK_SIZE * BLOCK_SIZE,
        }
    }

    pub fn is_polynomial(self) -> bool {
        matches!(self, BasisFamily::Legendre | BasisFamily::Chebyshev)
    }

    pub fn is_rbf(self) -> bool {
        matches!(self, BasisFamily::GaussianRbf | BasisFamily::BumpRbf)
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::Legendre => "legendre",
            BasisFamily::Chebyshev => "chebyshev",
            BasisFamily::Gabor => "gabor",
            BasisFamily::GaussianRbf => "gaussian_rbf",
            BasisFamily::BumpRbf => "bump_rbf",
        }
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::ParamDomain(format!("unknown basis family `{s}`")))
    }
}

/// Fitted coefficients of one directed pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub family: BasisFamily,
    pub alpha: Vec<f64>,
    /// Mean squared per-pixel residual of the fit (normalized units).
    pub residual_pe: f64,
}

impl ParamVector {
    pub(crate) fn new(family: BasisFamily, alpha: Vec<f64>, residual_pe: f64) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_finite()) || !residual_pe.is_finite() {
            return Err(Error::Numerical(format!("{family} fit produced non-finite values")));
        }
        Ok(Self { family, alpha, residual_pe: residual_pe.max(0.0) })
    }
}

/// Settings for the inverse-compositional iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IceSettings {
    /// L2 weight added to the approximate Hessian.
    pub lambda: f64,
    pub max_iters: usize,
    /// Stop once the increment norm falls below this.
    pub tol: f64,
}

impl Default for IceSettings {
    fn default() -> Self {
        Self { lambda: 1e-3, max_iters: 30, tol: 1e-6 }
    }
}

impl IceSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::ParamDomain(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.max_iters < 1 {
            return Err(Error::ParamDomain("max_iters must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::ParamDomain(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Fits both directions of a pair. `alpha_ab` explains `a` by a basis
/// expansion of `b`; `alpha_ba` explains `b` by `a`.
pub fn model_pair(
    a: &GrayImage,
    b: &GrayImage,
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<(ParamVector, ParamVector)> {
    a.ensure_same_dims(b)?;
    Ok((fit_direction(a, b, family, settings)?, fit_direction(b, a, family, settings)?))
}

/// Parameters explaining `explained` from a basis expansion of `basis_of`.
pub fn fit_direction(
    explained: &GrayImage,
    basis_of: &GrayImage,
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<ParamVector> {
    if family.is_rbf() {
        // The block fitter expands its first argument.
        fit_blockwise(basis_of, explained, family)
    } else {
        fit_ice(explained, basis_of, family, settings)
    }
}

/// One row of the parameter export.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRow {
    pub pair_id: String,
    pub direction: String,
    pub params: ParamVector,
}

/// Writes `pair_id,direction,family,alpha_1..alpha_m,residual_pe` rows.
pub fn write_params_csv(rows: &[ParamRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let m = rows.iter().map(|r| r.params.alpha.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut header = vec!["pair_id".to_string(), "direction".into(), "family".into()];
    header.extend((1..=m).map(|i| format!("alpha_{i}")));
    header.push("residual_pe".into());
    writeln!(out, "{}", header.join(",")).expect("writing to a Vec cannot fail");
    for row in rows {
        let mut fields = vec![row.pair_id.clone(), row.direction.clone(), row.params.family.to_string()];
        fields.extend(row.params.alpha.iter().map(|a| a.to_string()));
        fields.extend(std::iter::repeat_n(String::new(), m - row.params.alpha.len()));
        fields.push(row.params.residual_pe.to_string());
        writeln!(out, "{}", fields.join(",")).expect("writing to a Vec cannot fail");
    }
    write_atomic(path, &out)
}
