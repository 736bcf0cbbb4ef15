use crate::{Error, Result};

use super::SimilarityMatrix;

/// Default decision threshold on the likelihood ratio.
pub const DEFAULT_TAU: f64 = 1.0;

/// Coarse parent -> child relation; `bits[i][j] = 1` proposes `i` as an
/// ancestor of `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    n: usize,
    bits: Vec<Vec<u8>>,
}

impl IndicatorMatrix {
    /// Validates a raw 0/1 matrix: square, zero diagonal, no 2-cycles.
    pub fn new(bits: Vec<Vec<u8>>) -> Result<Self> {
        let n = bits.len();
        if bits.iter().any(|r| r.len() != n) {
            return Err(Error::Input("indicator matrix is not square".into()));
        }
        for i in 0..n {
            if bits[i][i] != 0 {
                return Err(Error::Input(format!("indicator has a self-loop at {i}")));
            }
            for j in 0..n {
                if bits[i][j] > 1 {
                    return Err(Error::Input(format!("indicator entry ({i}, {j}) is not 0/1")));
                }
                if bits[i][j] == 1 && bits[j][i] == 1 {
                    return Err(Error::Input(format!("indicator has both ({i}, {j}) and ({j}, {i})")));
                }
            }
        }
        Ok(Self { n, bits })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i][j] == 1
    }

    pub fn bits(&self) -> &[Vec<u8>] {
        &self.bits
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.bits[i].iter().map(|&b| b as usize).sum()
    }
}

/// `bits[i][j] = 1` iff `S_ij >= tau` and `i` dominates the pair: `S_ij > S_ji`,
/// or equal with `i < j`.
pub fn indicator_matrix(s: &SimilarityMatrix, tau: f64) -> Result<IndicatorMatrix> {
    if !(tau > 0.0) {
        return Err(Error::ParamDomain(format!("tau must be > 0, got {tau}")));
    }
    let n = s.len();
    let mut bits = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (s.get(i, j), s.get(j, i));
            if a >= tau && (a > b || (a == b && i < j)) {
                bits[i][j] = 1;
            }
        }
    }
    Ok(IndicatorMatrix { n, bits })
}

/// Top `k` nodes by descending row sum of `b`, ties by ascending id.
pub fn root_candidates(b: &IndicatorMatrix, k: usize) -> Result<Vec<usize>> {
    if k < 1 || k > b.len() {
        return Err(Error::ParamDomain(format!("k must lie in 1..={}, got {k}", b.len())));
    }
    let mut order: Vec<(usize, usize)> = (0..b.len()).map(|i| (b.row_sum(i), i)).collect();
    order.sort_unstable_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    Ok(order.into_iter().take(k).map(|(_, i)| i).collect())
}
