use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::gabor::gabor_bank_raw;
use super::poly::{chebyshev_all, legendre_all};
use super::{BasisFamily, IceSettings, ParamVector, POLY_DEGREE};
use crate::imageops::{normalize_unit, GrayImage, UnitImage};
use crate::{Error, Result};

/// Relative ridge on the target Gram matrix.
const GRAM_GUARD: f64 = 1e-10;

/// Diagnostics of an inverse-compositional fit.
#[derive(Debug, Clone, PartialEq)]
pub struct IceTrace {
    pub params: ParamVector,
    /// Number of increments computed.
    pub iterations: usize,
    /// True when the increment norm dropped below `tol`.
    pub converged: bool,
    /// Residual after initialization and after every accepted update.
    pub history: Vec<f64>,
}

/// Fits `src ≈ Σ_h α_h B_h[tgt]` for a polynomial or Gabor basis.
pub fn fit_ice(
    src: &GrayImage,
    tgt: &GrayImage,
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<ParamVector> {
    fit_ice_traced(src, tgt, family, settings).map(|t| t.params)
}

/// [`fit_ice`] with iteration diagnostics.
///
/// Each iteration regresses the error image `E = T[tgt | α] - src` on the
/// basis evaluated at the *source* (the fixed Jacobian `J_S`):
///
/// ```text
/// Δα = (J_S J_Sᵀ + λ Id)⁻¹ J_S E
/// ```
///
/// and composes the current model with the inverse of the increment
/// `x ↦ x + Σ Δα_h B_h(x)`. To first order that inverse subtracts the
/// increment from the modelled values; projecting the result back onto the
/// target basis gives the new coefficients. For a single gain coefficient
/// this is the classic `α ← α / (1 + Δα)` update. Each iteration takes the
/// residual-minimizing combination of the last `m` steps, falling back on
/// halving the plain step, so the residual never increases.
pub fn fit_ice_traced(
    src: &GrayImage,
    tgt: &GrayImage,
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<IceTrace> {
    if family.is_rbf() {
        return Err(Error::Input(format!("{family} is fitted blockwise, not by ICE")));
    }
    settings.validate()?;
    src.ensure_same_dims(tgt)?;
    if src.is_empty() {
        return Err(Error::DegenerateInput("empty image".into()));
    }
    let su = normalize_unit(src);
    let tu = normalize_unit(tgt);
    let a_s = basis_matrix(family, &su)?;
    let a_t = basis_matrix(family, &tu)?;
    let s = DVector::from_column_slice(&su.data);
    let t = DVector::from_column_slice(&tu.data);
    let m = a_s.ncols();
    let ridge = DMatrix::<f64>::identity(m, m) * settings.lambda;

    let hessian = checked_cholesky(a_s.transpose() * &a_s + &ridge, "regularized Hessian")?;
    // The Gram solve is a plain projection onto the target basis; its ridge
    // only guards against exact collinearity.
    let gram_raw = a_t.transpose() * &a_t;
    let guard = GRAM_GUARD * gram_raw.diagonal().iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    let gram = checked_cholesky(&gram_raw + DMatrix::<f64>::identity(m, m) * guard, "target basis Gram matrix")?;
    let cross = a_t.transpose() * &a_s;

    let n = s.len() as f64;
    let pe_of = |alpha: &DVector<f64>| (&s - &a_t * alpha).norm_squared() / n;

    // Start from the basis' best approximation of the identity map.
    let mut alpha = gram.solve(&(a_t.transpose() * &t));
    let mut pe = pe_of(&alpha);
    let mut history = vec![pe];
    let mut iterations = 0;
    let mut converged = false;
    let mut steps: Vec<DVector<f64>> = Vec::new();

    while iterations < settings.max_iters {
        iterations += 1;
        let error = &a_t * &alpha - &s;
        let delta = hessian.solve(&(a_s.transpose() * &error));
        if !delta.iter().all(|d| d.is_finite()) {
            return Err(Error::Numerical("non-finite increment".into()));
        }
        if delta.norm() < settings.tol {
            converged = true;
            break;
        }
        let step = gram.solve(&(&cross * &delta));
        steps.push(step.clone());
        if steps.len() > m {
            steps.remove(0);
        }
        // Best combination of the recent steps (exact, since the residual is
        // quadratic in α); weakly determined directions otherwise crawl.
        let dirs = DMatrix::from_fn(s.len(), steps.len(), |p, j| (&a_t.row(p) * &steps[j])[0]);
        let mut accepted = false;
        if let Ok(coef) = dirs.svd(true, true).solve(&error, 1e-12) {
            let mut candidate = alpha.clone();
            for (c, st) in coef.iter().zip(&steps) {
                candidate -= st * *c;
            }
            let cand_pe = pe_of(&candidate);
            if cand_pe.is_finite() && cand_pe <= pe {
                alpha = candidate;
                pe = cand_pe;
                accepted = true;
            }
        }
        let mut scale = 1.0;
        for _ in 0..30 {
            if accepted {
                break;
            }
            let candidate = &alpha - &step * scale;
            let cand_pe = pe_of(&candidate);
            if cand_pe <= pe {
                alpha = candidate;
                pe = cand_pe;
                accepted = true;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
        history.push(pe);
    }

    Ok(IceTrace {
        params: ParamVector::new(family, alpha.iter().copied().collect(), pe)?,
        iterations,
        converged,
        history,
    })
}

/// Cholesky factorization that also rejects numerically rank-deficient input.
fn checked_cholesky(mat: DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    let scale = mat.diagonal().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let chol = mat.cholesky().ok_or_else(|| Error::Numerical(format!("{what} is singular")))?;
    let min_pivot = chol.l_dirty().diagonal().iter().fold(f64::INFINITY, |a, &b| a.min(b * b));
    if !(min_pivot > 1e-12 * scale) {
        return Err(Error::Numerical(format!("{what} is singular")));
    }
    Ok(chol)
}

/// `N x m` matrix whose column `h` is basis function `h` evaluated on `img`.
pub(crate) fn basis_matrix(family: BasisFamily, img: &UnitImage) -> Result<DMatrix<f64>> {
    let n = img.data.len();
    match family {
        BasisFamily::Legendre | BasisFamily::Chebyshev => {
            let m = POLY_DEGREE + 1;
            let mut mat = DMatrix::zeros(n, m);
            let mut vals = vec![0.0; m];
            for (p, &x) in img.data.iter().enumerate() {
                if family == BasisFamily::Legendre {
                    legendre_all(x, &mut vals);
                } else {
                    chebyshev_all(x, &mut vals);
                }
                for (h, v) in vals.iter().enumerate() {
                    mat[(p, h)] = *v;
                }
            }
            Ok(mat)
        }
        BasisFamily::Gabor => {
            let planes = gabor_bank_raw(&img.data, img.width, img.height)?;
            Ok(DMatrix::from_fn(n, planes.len(), |p, h| planes[h][p]))
        }
        _ => Err(Error::Input(format!("{family} has no pixelwise basis"))),
    }
}
