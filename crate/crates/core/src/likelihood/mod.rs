//! Parzen-window densities over fitted parameter vectors and the
//! forward/reverse likelihood ratio.

mod model;
mod parzen;

pub use model::{
    auc, likelihood_ratio, log_likelihood_ratio, train_model, train_model_with_stats, DensityModel,
    ModelMeta, TrainStats, LOG_DENSITY_FLOOR,
};
pub use parzen::{fit_parzen, silverman_bandwidth, ParzenDensity, BANDWIDTH_FLOOR};
