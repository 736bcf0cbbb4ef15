//! Reconstruction of image phylogeny trees from sets of near-duplicate
//! grayscale images.
//!
//! The pipeline has four stages, each in its own module:
//!
//! * [`imageops`]: image representation, photometric and geometric
//!   transforms, and synthesis of near-duplicate sets with known ground truth.
//! * [`basisfit`]: pairwise transformation models built from Legendre and
//!   Chebyshev polynomials, a Gabor wavelet bank, and Gaussian / bump radial
//!   basis functions.
//! * [`likelihood`]: Parzen-window densities over fitted parameter vectors
//!   and the forward/reverse likelihood ratio used as an asymmetric
//!   similarity.
//! * [`phylogeny`]: similarity and indicator matrices, root candidate ranking
//!   and depth-first tree spanning.
//!
//! [`evalmetrics`] scores reconstructions (root rank hits, edge accuracy and
//! the degree-based von Neumann entropy of directed graphs), and [`cli`]
//! wires everything into the `phylokit` binary.

pub mod basisfit;
pub mod cli;
mod error;
mod fsutil;
pub mod evalmetrics;
pub mod imageops;
pub mod likelihood;
pub mod phylogeny;

pub use error::{Error, Result};
