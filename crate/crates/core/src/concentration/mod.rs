//! Concentration bounds derived from a modified log-Sobolev inequality by
//! the Herbst argument, enlargement bounds for product measures, and a
//! Monte Carlo harness that tries to falsify them.

mod enlargement;
mod herbst;
mod monte_carlo;

pub use enlargement::{enlargement_bound, enlargement_decomposition, splitting_constant, Decomposition, EnlargementBound};
pub use herbst::{herbst_integral_check, herbst_tail, hq_conjugate, ConcentrationProfile};
pub use monte_carlo::{
    monte_carlo_tail, wilson, EmpiricalTail, QuantileTable, TailComparison, TailPoint, TailRow, TestStatistic, Z99,
};
