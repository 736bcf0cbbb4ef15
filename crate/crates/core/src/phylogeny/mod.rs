//! Similarity and indicator matrices, root candidate ranking and tree
//! spanning.

mod graph;
mod indicator;
mod reconstruct;
mod similarity;
mod span;

pub use graph::{DiGraph, PhylogenyTree, TreeJson};
pub use indicator::{indicator_matrix, root_candidates, IndicatorMatrix, DEFAULT_TAU};
pub use reconstruct::{reconstruct, reconstruct_from_similarity, Reconstruction};
pub use similarity::{pairwise_params, similarity_matrix, PairFit, SimilarityMatrix};
pub use span::span_ipt;
