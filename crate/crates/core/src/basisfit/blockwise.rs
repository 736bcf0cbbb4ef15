use nalgebra::{Complex, DMatrix, DVector};

use super::rbf::rbf_kernel;
use super::{BasisFamily, ParamVector};
use crate::imageops::{normalize_intensity, tessellate, GrayImage};
use crate::{Error, Result};

/// Tile side used by the radial-basis fits.
pub const BLOCK_SIZE: usize = 16;
/// Ridge weight of the per-block least squares; keeps flat blocks solvable.
pub const BLOCK_RIDGE: f64 = 1e-6;

/// Fits `tgt ≈ Σ_h α_h K[src]` block by block with [`BLOCK_SIZE`] tiles and
/// returns the average of the per-block coefficient vectors.
pub fn fit_blockwise(src: &GrayImage, tgt: &GrayImage, family: BasisFamily) -> Result<ParamVector> {
    fit_blockwise_with(src, tgt, family, BLOCK_SIZE, BLOCK_RIDGE)
}

/// [`fit_blockwise`] with explicit tile size and ridge weight.
///
/// Within a tile, source intensities are mean-centred and basis function
/// `h` is the kernel centred on the `h`-th centred source pixel, giving one
/// coefficient per tile pixel. `residual_pe` is the mean squared residual of
/// the per-tile fits over the real (unpadded) pixels.
pub fn fit_blockwise_with(
    src: &GrayImage,
    tgt: &GrayImage,
    family: BasisFamily,
    block: usize,
    ridge: f64,
) -> Result<ParamVector> {
    if !family.is_rbf() {
        return Err(Error::Input(format!("{family} is not a radial basis family")));
    }
    if !(ridge >= 0.0) {
        return Err(Error::ParamDomain(format!("ridge must be >= 0, got {ridge}")));
    }
    src.ensure_same_dims(tgt)?;
    let src_blocks = tessellate(src, block)?;
    let tgt_blocks = tessellate(tgt, block)?;
    let m = block * block;
    let mut alpha = vec![0.0; m];
    let mut sse = 0.0;
    let mut count = 0usize;
    for (sb, tb) in src_blocks.iter().zip(&tgt_blocks) {
        let s: Vec<f64> = sb.data.iter().map(|&p| normalize_intensity(p)).collect();
        let t: Vec<f64> = tb.data.iter().map(|&p| normalize_intensity(p)).collect();
        let phi = kernel_matrix(family, &s);
        let a = solve_ridge(&phi, &t, ridge)?;
        let pred = &phi * DVector::from_column_slice(&a);
        for by in 0..block {
            for bx in 0..block {
                if sb.is_valid(bx, by) {
                    let i = by * block + bx;
                    sse += (t[i] - pred[i]).powi(2);
                    count += 1;
                }
            }
        }
        for (acc, v) in alpha.iter_mut().zip(&a) {
            *acc += v;
        }
    }
    let nb = src_blocks.len() as f64;
    alpha.iter_mut().for_each(|a| *a /= nb);
    ParamVector::new(family, alpha, sse / count as f64)
}

/// Kernel matrix `Φ[p][h] = K(z_p; z_h)` over mean-centred intensities `z`.
pub fn kernel_matrix(family: BasisFamily, block: &[f64]) -> DMatrix<f64> {
    let mu = block.iter().sum::<f64>() / block.len() as f64;
    let z: Vec<f64> = block.iter().map(|v| v - mu).collect();
    let n = z.len();
    DMatrix::from_fn(n, n, |p, h| rbf_kernel(family, z[p], z[h]))
}

/// Ridge least squares `argmin ‖t − Φα‖² + ridge·‖α‖²` for a symmetric `Φ`
/// (which may be indefinite).
///
/// For symmetric `Φ` and `σ = √ridge`, `(Φ − iσ)⁻¹ = (Φ + iσ)(Φ² + σ²)⁻¹`, so
/// the real part of one complex solve is `(Φ² + ridge)⁻¹ Φ t`.
pub fn solve_ridge(phi: &DMatrix<f64>, t: &[f64], ridge: f64) -> Result<Vec<f64>> {
    let n = phi.nrows();
    if phi.ncols() != n || t.len() != n {
        return Err(Error::Input("kernel matrix and target sizes differ".into()));
    }
    if ridge == 0.0 {
        let sol = phi
            .clone()
            .svd(true, true)
            .solve(&DVector::from_column_slice(t), 1e-12)
            .map_err(|e| Error::Numerical(format!("block solve failed: {e}")))?;
        return Ok(sol.iter().copied().collect());
    }
    let sigma = ridge.sqrt();
    let shifted = DMatrix::from_fn(n, n, |r, c| {
        Complex::new(phi[(r, c)], if r == c { -sigma } else { 0.0 })
    });
    let rhs = DVector::from_iterator(n, t.iter().map(|&v| Complex::new(v, 0.0)));
    let sol = shifted
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("block system is singular".into()))?;
    let alpha: Vec<f64> = sol.iter().map(|c| c.re).collect();
    if !alpha.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("block solve produced non-finite values".into()));
    }
    Ok(alpha)
}
