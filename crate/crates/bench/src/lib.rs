//! Fixtures shared by the benchmarks.

use mlsi_core::{ModifiedH, PotentialFamily, PotentialSpec, YoungFn};

/// Measures the benchmarks sweep, labelled for group ids.
pub fn measures() -> Vec<(&'static str, PotentialSpec)> {
    [
        ("gaussian", PotentialFamily::Gaussian),
        ("double_exp", PotentialFamily::DoubleExp),
        ("pl1.5", PotentialFamily::PowerLaw { p: 1.5 }),
        ("pl3", PotentialFamily::PowerLaw { p: 3.0 }),
    ]
    .into_iter()
    .map(|(name, f)| (name, PotentialSpec::new(f).expect("fixture measure is valid")))
    .collect()
}

pub fn power(q: f64) -> YoungFn {
    YoungFn::power(q).expect("fixture exponent is valid")
}

pub fn hq(q: f64) -> ModifiedH {
    ModifiedH::hq(q).expect("fixture exponent is valid")
}
