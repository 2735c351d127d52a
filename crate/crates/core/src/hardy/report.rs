use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    Hardy,
    Poincare,
    LogSobolev,
    MlsiQ,
    MlsiPhi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideValues {
    #[serde(rename = "B_plus", with = "crate::numeric::ext")]
    pub b_plus: f64,
    #[serde(rename = "B_minus", with = "crate::numeric::ext")]
    pub b_minus: f64,
}

impl SideValues {
    pub fn max(&self) -> f64 {
        self.b_plus.max(self.b_minus)
    }
}

/// One verified precondition. `location` is the grid point of the first
/// failure when the check does not hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<f64>,
}

impl HypothesisCheck {
    pub fn new(name: impl Into<String>, holds: bool, location: Option<f64>) -> Self {
        HypothesisCheck {
            name: name.into(),
            holds,
            location: if holds { None } else { location },
        }
    }
}

/// Sampled `(x, integrand)` pairs from a supremum search.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub plus: Vec<(f64, f64)>,
    pub minus: Vec<(f64, f64)>,
}

/// Shared report for every criterion. For Hardy problems only `B_plus` is
/// meaningful and `B_minus` is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub side_values: SideValues,
    #[serde(with = "crate::numeric::ext")]
    pub lower_bound: f64,
    #[serde(with = "crate::numeric::ext")]
    pub upper_bound: f64,
    #[serde(with = "crate::numeric::ext")]
    pub argmax_location: f64,
    pub finite: bool,
    /// Set when finiteness was decided from grid growth alone.
    pub grid_evidence: bool,
    pub hypotheses: Vec<HypothesisCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub curve: Curve,
}

impl CriterionReport {
    pub(crate) fn assemble(kind: CriterionKind, side_values: SideValues, lower: f64, upper: f64, argmax: f64) -> Self {
        CriterionReport {
            kind,
            side_values,
            lower_bound: lower,
            upper_bound: upper,
            argmax_location: argmax,
            finite: upper < f64::INFINITY,
            grid_evidence: false,
            hypotheses: Vec::new(),
            notes: Vec::new(),
            curve: Curve::default(),
        }
    }
}
