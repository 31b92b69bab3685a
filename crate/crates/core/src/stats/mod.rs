//! Estimators and checks over simulated samples.

mod bounds;
mod components;
mod ks;
mod regression;

pub use bounds::{paley_zygmund_check, theorem_fraction, PzCheck};
pub use components::{hole_components, ComponentStats, Connectivity, UnionFind};
pub use ks::{kolmogorov_survival, ks_normal, normal_cdf, KsResult};
pub use regression::{ols, ols_loglog, tan_point_exponent, RegressionFit};

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
