//! Modified log-Sobolev criteria: `B_q^±` with the two-sided bounds on the
//! best constant, Orlicz gauges and their explicit bounds, the `ε` drift
//! certificate, test-function estimates of `α̃_x`, and tail classifiers.

mod alpha_tilde;
mod classify;
mod criteria;
pub(crate) mod variational;

pub use alpha_tilde::{alpha_tilde_upper, AlphaTildeEstimate};
pub use classify::{classify, Classification, ClassifyMode, ClassifyTarget, SideEvidence, Verdict};
pub use criteria::{b_q, b_q_side, c_phi, epsilon_certificate, epsilon_formula, EpsilonCertificate};
pub use variational::{gamma, gamma_beta, gauge_upper_bound, inverse_integral, orlicz_gauge, GaugeBound, VariationalPair};
