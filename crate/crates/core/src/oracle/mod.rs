//! Brute-force estimates of best constants. Maximisation problems are
//! approached from below with explicit test functions or discretised
//! eigenproblems; minimisation problems from above with feasible points.

mod beta;
mod dual;
mod eigen;
mod lower;
mod mlsi_ratio;

use serde::{Deserialize, Serialize};

use crate::measure::GridFunction;

pub use beta::{beta_oracle, BetaEstimate};
pub use dual::{dual_entropy_sup, DualEntropy};
pub use eigen::{best_hardy_ratio, best_poincare_ratio, hardy_nodes, poincare_nodes};
pub use lower::{
    alpha_tilde_power, alpha_x_estimate, inverse_power_integral, prop_min_lower_bound, tail_weights, AlphaEstimate,
    AlphaTildePower, PropMinBound,
};
pub use mlsi_ratio::{best_mlsi_ratio, MlsiFamily};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub value: f64,
    pub witness: GridFunction,
    pub grid_size: usize,
    /// Best value after each refinement step or sample.
    pub refinement_history: Vec<f64>,
    /// Name of the test function that attained `value`, for sampled families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_label: Option<String>,
}
