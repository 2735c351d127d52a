//! Probability measures `e^{-V} dx / Z` on the line, plus the half-line
//! weights used by the Hardy criterion.

mod density;
mod grid_function;
mod halfline;
mod potential;
mod spec;

pub use density::Density;
pub use grid_function::{GridFunction, Monotonicity};
pub use halfline::{HalfLine, HalfLineDescriptor, WeightFamily};
pub use potential::{Potential, PotentialFamily};
pub use spec::{LaplaceEstimate, MeasureSummary, PotentialSpec};
pub(crate) use spec::psi_ratio;

use serde::{Deserialize, Serialize};

/// Which side of a point a tail refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn both() -> [Side; 2] {
        [Side::Left, Side::Right]
    }
}
