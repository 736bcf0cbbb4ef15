use rayon::prelude::*;

use crate::basisfit::{model_pair, BasisFamily, IceSettings, ParamVector};
use crate::imageops::GrayImage;
use crate::likelihood::DensityModel;
use crate::{Error, Result};

/// Pairwise likelihood ratios; `values[i][j]` scores `i` as the parent of `j`.
/// The diagonal holds 1 and is never read.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let n = values.len();
        if values.iter().any(|r| r.len() != n) {
            return Err(Error::Input("similarity matrix is not square".into()));
        }
        for (i, row) in values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i != j && !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Input(format!("similarity ({i}, {j}) = {v} is not positive")));
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Both directions of one unordered pair `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFit {
    pub i: usize,
    pub j: usize,
    /// `α_ij`: `i` explained by the basis expansion of `j`.
    pub ij: ParamVector,
    pub ji: ParamVector,
}

/// Fits every unordered pair once (two directed fits each), in index order.
pub fn pairwise_params(
    images: &[GrayImage],
    family: BasisFamily,
    settings: &IceSettings,
) -> Result<Vec<PairFit>> {
    settings.validate()?;
    if images.len() < 2 {
        return Err(Error::Input(format!("need at least 2 images, got {}", images.len())));
    }
    for img in &images[1..] {
        images[0].ensure_same_dims(img)?;
    }
    let n = images.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ij, ji) = model_pair(&images[i], &images[j], family, settings)?;
            Ok(PairFit { i, j, ij, ji })
        })
        .collect()
}

/// `S_ij = Λ(α_ij)` for every ordered pair; `n (n - 1)` directed fits.
pub fn similarity_matrix(
    images: &[GrayImage],
    family: BasisFamily,
    model: &DensityModel,
    settings: &IceSettings,
) -> Result<SimilarityMatrix> {
    if model.family() != family {
        return Err(Error::Input(format!(
            "model was trained for {} but {family} was requested",
            model.family()
        )));
    }
    let fits = pairwise_params(images, family, settings)?;
    let n = images.len();
    let mut values = vec![vec![1.0; n]; n];
    for f in &fits {
        values[f.i][f.j] = model.likelihood_ratio(&f.ij.alpha)?;
        values[f.j][f.i] = model.likelihood_ratio(&f.ji.alpha)?;
    }
    SimilarityMatrix::new(values)
}
