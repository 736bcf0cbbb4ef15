use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    indicator_matrix, root_candidates, similarity_matrix, span_ipt, IndicatorMatrix, PhylogenyTree,
    SimilarityMatrix, TreeJson,
};
use crate::basisfit::{BasisFamily, IceSettings};
use crate::imageops::GrayImage;
use crate::likelihood::DensityModel;
use crate::{fsutil, Error, Result};

/// Ranked root candidates with one spanned tree per candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub candidates: Vec<usize>,
    pub trees: Vec<PhylogenyTree>,
    pub similarity: SimilarityMatrix,
    pub indicator: IndicatorMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReconFile {
    candidates: Vec<usize>,
    trees: Vec<TreeJson>,
    similarity: Vec<Vec<f64>>,
    indicator: Vec<Vec<u8>>,
}

pub fn reconstruct(
    images: &[GrayImage],
    family: BasisFamily,
    model: &DensityModel,
    settings: &IceSettings,
    tau: f64,
    k: usize,
) -> Result<Reconstruction> {
    if !(tau > 0.0) {
        return Err(Error::ParamDomain(format!("tau must be > 0, got {tau}")));
    }
    if k < 1 || k > images.len() {
        return Err(Error::ParamDomain(format!("k must lie in 1..={}, got {k}", images.len())));
    }
    let s = similarity_matrix(images, family, model, settings)?;
    reconstruct_from_similarity(s, tau, k)
}

/// Threshold, rank and span from a precomputed similarity matrix.
pub fn reconstruct_from_similarity(s: SimilarityMatrix, tau: f64, k: usize) -> Result<Reconstruction> {
    let b = indicator_matrix(&s, tau)?;
    let candidates = root_candidates(&b, k)?;
    let trees = candidates.iter().map(|&r| span_ipt(&b, &s, r)).collect::<Result<Vec<_>>>()?;
    Ok(Reconstruction { candidates, trees, similarity: s, indicator: b })
}

impl Reconstruction {
    pub fn node_count(&self) -> usize {
        self.similarity.len()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ReconFile {
            candidates: self.candidates.clone(),
            trees: self.trees.iter().map(PhylogenyTree::to_json).collect(),
            similarity: self.similarity.values().to_vec(),
            indicator: self.indicator.bits().to_vec(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::json("reconstruction", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ReconFile =
            serde_json::from_str(text).map_err(|e| Error::json("reconstruction", e))?;
        let similarity = SimilarityMatrix::new(file.similarity)?;
        let indicator = IndicatorMatrix::new(file.indicator)?;
        let n = similarity.len();
        if indicator.len() != n {
            return Err(Error::Input("indicator and similarity sizes differ".into()));
        }
        if file.candidates.len() != file.trees.len() || file.candidates.is_empty() {
            return Err(Error::Input("need one tree per root candidate".into()));
        }
        let trees = file.trees.iter().map(|t| t.to_tree(n)).collect::<Result<Vec<_>>>()?;
        for (c, t) in file.candidates.iter().zip(&trees) {
            if *c != t.root() {
                return Err(Error::Input(format!("tree rooted at {} listed as candidate {c}", t.root())));
            }
        }
        Ok(Self { candidates: file.candidates, trees, similarity, indicator })
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

    /// Graphviz source with one digraph per tree.
    pub fn to_dot(&self, names: &[String]) -> Result<String> {
        if names.len() != self.node_count() {
            return Err(Error::Input(format!(
                "{} names for {} nodes",
                names.len(),
                self.node_count()
            )));
        }
        let mut out = String::new();
        for (rank, tree) in self.trees.iter().enumerate() {
            writeln!(out, "digraph ipt_{} {{", rank + 1).unwrap();
            for (i, name) in names.iter().enumerate() {
                let shape = if i == tree.root() { ", shape=doublecircle" } else { "" };
                writeln!(out, "  n{i} [label=\"{}\"{shape}];", name.replace('"', "\\\"")).unwrap();
            }
            for (u, v) in tree.edges() {
                writeln!(out, "  n{u} -> n{v} [style=solid];").unwrap();
            }
            out.push_str("}\n");
        }
        Ok(out)
    }
}
