use super::BasisFamily;
use crate::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-12;

/// Value of the degree-`n` Legendre or Chebyshev (first kind) polynomial at
/// `x`, by the three-term recurrence.
pub fn eval_poly(family: BasisFamily, n: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain(x));
    }
    let mut values = vec![0.0; n + 1];
    match family {
        BasisFamily::Legendre => legendre_all(x, &mut values),
        BasisFamily::Chebyshev => chebyshev_all(x, &mut values),
        other => {
            return Err(Error::Input(format!("{other} is not a polynomial family")));
        }
    }
    Ok(values[n])
}

/// Fills `out[k] = P_k(x)` for `k < out.len()`.
pub(crate) fn legendre_all(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 2..out.len() {
        let kf = k as f64;
        out[k] = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
    }
}

/// Fills `out[k] = T_k(x)` for `k < out.len()`.
pub(crate) fn chebyshev_all(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 2..out.len() {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}
