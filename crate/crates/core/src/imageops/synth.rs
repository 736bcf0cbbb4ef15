use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{apply_transform, load_image, save_image, GrayImage, TransformKind, TransformSpec, TreeShape};
use crate::fsutil::{read_json, write_json};
use crate::phylogeny::PhylogenyTree;
use crate::{Error, Result};

/// Which family of edits a synthetic set draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformClass {
    Photometric,
    Geometric,
    /// Each edge picks photometric or geometric with equal probability.
    Mixed,
}

impl TransformClass {
    fn sample_kind<R: Rng + ?Sized>(self, rng: &mut R) -> TransformKind {
        let kinds = match self {
            TransformClass::Photometric => &TransformKind::PHOTOMETRIC,
            TransformClass::Geometric => &TransformKind::GEOMETRIC,
            TransformClass::Mixed => {
                if rng.gen_bool(0.5) {
                    &TransformKind::PHOTOMETRIC
                } else {
                    &TransformKind::GEOMETRIC
                }
            }
        };
        kinds[rng.gen_range(0..kinds.len())]
    }
}

impl FromStr for TransformClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "photometric" => Ok(Self::Photometric),
            "geometric" => Ok(Self::Geometric),
            "mixed" => Ok(Self::Mixed),
            _ => Err(Error::ParamDomain(format!("unknown transform class `{s}`"))),
        }
    }
}

/// Ground truth for a near-duplicate set.
///
/// Node ids are indices into `images`; `edge_specs` is keyed `"u-v"` and
/// holds the edits that turn image `u` into image `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub seed: u64,
    pub images: Vec<String>,
    pub root: usize,
    pub edges: Vec<[usize; 2]>,
    pub edge_specs: BTreeMap<String, Vec<TransformSpec>>,
}

pub(crate) fn edge_key(u: usize, v: usize) -> String {
    format!("{u}-{v}")
}

impl DatasetManifest {
    pub fn truth(&self) -> Result<PhylogenyTree> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        PhylogenyTree::from_edges(self.images.len(), self.root, &edges)
    }

    /// Checks the tree invariants and that every edge carries valid edits.
    pub fn validate(&self) -> Result<()> {
        if self.images.len() < 2 {
            return Err(Error::Input("manifest must list at least 2 images".into()));
        }
        self.truth()?;
        if self.edge_specs.len() != self.edges.len() {
            return Err(Error::Input("edge_specs must have exactly one entry per edge".into()));
        }
        for e in &self.edges {
            let specs = self
                .edge_specs
                .get(&edge_key(e[0], e[1]))
                .ok_or_else(|| Error::Input(format!("missing edge_specs for {}-{}", e[0], e[1])))?;
            for s in specs {
                s.validate()?;
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let m: Self = read_json(path.as_ref())?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path.as_ref(), self)
    }

    /// Loads the listed images, resolving names relative to `dir`.
    pub fn load_images(&self, dir: impl AsRef<Path>) -> Result<Vec<GrayImage>> {
        self.images.iter().map(|name| load_image(dir.as_ref().join(name))).collect()
    }
}

/// A synthesized near-duplicate set held in memory.
#[derive(Debug, Clone)]
pub struct SyntheticIpt {
    pub manifest: DatasetManifest,
    pub images: Vec<GrayImage>,
}

impl SyntheticIpt {
    pub fn truth(&self) -> PhylogenyTree {
        self.manifest.truth().expect("synthesized manifests are valid")
    }

    /// Writes every image plus `manifest.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, img) in self.manifest.images.iter().zip(&self.images) {
            save_image(img, dir.join(name))?;
        }
        self.manifest.save(dir.join("manifest.json"))
    }
}

/// Grows a near-duplicate set from `seed_img` following `shape`: every child
/// is its parent with one randomly drawn edit of `class` applied.
///
/// The seed image is quantized to 8 bits first so the root written to disk
/// is exact, and node labels are shuffled so the root's index carries no
/// information. Output is a pure function of the arguments.
pub fn synth_ipt(
    seed_img: &GrayImage,
    shape: &TreeShape,
    class: TransformClass,
    rng_seed: u64,
) -> Result<SyntheticIpt> {
    if seed_img.is_empty() {
        return Err(Error::DegenerateInput("seed image is empty".into()));
    }
    let shape_tree = shape.tree();
    let n = shape_tree.node_count();
    if n < 2 {
        return Err(Error::InvalidShape("a tree shape needs at least 2 nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut images: Vec<Option<GrayImage>> = vec![None; n];
    let mut edge_specs = BTreeMap::new();
    images[perm[shape_tree.root()]] = Some(seed_img.quantized());
    for node in shape_tree.preorder() {
        let Some(parent) = shape_tree.parent(node) else { continue };
        let (u, v) = (perm[parent], perm[node]);
        let spec = class.sample_kind(&mut rng).sample(&mut rng);
        let parent_img = images[u].as_ref().expect("preorder visits parents first");
        images[v] = Some(apply_transform(parent_img, &spec)?);
        edge_specs.insert(edge_key(u, v), vec![spec]);
    }

    let truth = shape_tree.relabel(&perm)?;
    let manifest = DatasetManifest {
        seed: rng_seed,
        images: (0..n).map(|i| format!("img_{i:02}.png")).collect(),
        root: truth.root(),
        edges: truth.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        edge_specs,
    };
    let images = images.into_iter().map(|i| i.expect("every node visited")).collect();
    Ok(SyntheticIpt { manifest, images })
}

/// Regenerates every image of a manifest from its root by replaying the
/// recorded edits in tree order.
pub fn replay_manifest(manifest: &DatasetManifest, root_img: &GrayImage) -> Result<Vec<GrayImage>> {
    manifest.validate()?;
    let truth = manifest.truth()?;
    let n = truth.node_count();
    let mut images: Vec<Option<GrayImage>> = vec![None; n];
    images[truth.root()] = Some(root_img.clone());
    for v in truth.preorder() {
        let Some(u) = truth.parent(v) else { continue };
        let mut img = images[u].clone().expect("preorder visits parents first");
        for spec in &manifest.edge_specs[&edge_key(u, v)] {
            img = apply_transform(&img, spec)?;
        }
        images[v] = Some(img);
    }
    Ok(images.into_iter().map(|i| i.expect("every node visited")).collect())
}
