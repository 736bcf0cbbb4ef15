use super::BasisFamily;

/// Radial kernel centred at `mu`.
///
/// Gaussian: `exp(-(x - mu)^2)`. Bump: `exp(-1 / (1 - z^2))` with
/// `z = x - mu`, compactly supported on `|z| < 1` and zero elsewhere.
/// Non-RBF families evaluate to zero.
pub fn rbf_kernel(family: BasisFamily, x: f64, mu: f64) -> f64 {
    let z = x - mu;
    match family {
        BasisFamily::GaussianRbf => (-z * z).exp(),
        BasisFamily::BumpRbf => {
            let z2 = z * z;
            if z2 < 1.0 {
                (-1.0 / (1.0 - z2)).exp()
            } else {
                0.0
            }
        }
        _ => 0.0,
    }
}
