//! Numerical toolkit for modified log-Sobolev inequalities of probability
//! measures `e^{-V}/Z` on the real line.
//!
//! The crate is organised around a few shared types: [`YoungFn`] for Young
//! functions with growth envelopes, [`PotentialSpec`] for normalised
//! measures, and [`HalfLine`] for the one-sided Hardy problems. Criteria
//! produce serialisable reports and the `oracle` module computes the same
//! constants by independent brute-force means.

pub mod concentration;
pub mod error;
pub mod hardy;
pub mod measure;
pub mod mlsi;
pub mod numeric;
pub mod oracle;
pub mod suite;
pub mod young;

pub use error::{Error, Result};
pub use hardy::{CriterionKind, CriterionReport, HypothesisCheck, SideValues};
pub use measure::{GridFunction, HalfLine, HalfLineDescriptor, PotentialFamily, PotentialSpec, Side, WeightFamily};
pub use mlsi::Verdict;
pub use oracle::RatioEstimate;
pub use young::{ModifiedH, YoungFamily, YoungFn, YoungSpec};
