//! Numerical plumbing shared by every module: adaptive quadrature, bracketed
//! root finding, one-dimensional maximization, grids and tridiagonal solves.

pub mod ext;
pub mod grid;
pub mod linalg;
pub mod quad;
pub mod roots;

pub use grid::{linspace, log_grid};
pub use quad::{integrate, integrate_breaks, Tolerance};
