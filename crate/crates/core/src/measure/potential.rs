use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A user-supplied potential. Values are unnormalized; the measure divides
/// by `Z` itself. Derivatives must be exact, since the classifiers read
/// `V'` and `V''` directly.
pub trait Potential: Send + Sync + fmt::Debug {
    fn v(&self, x: f64) -> f64;
    fn dv(&self, x: f64) -> f64;
    fn d2v(&self, x: f64) -> f64;
    /// `V` is C² on `|x| >= smooth_from()`.
    fn smooth_from(&self) -> f64;
}

fn default_p() -> f64 {
    2.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialFamily {
    /// `V(x) = |x|^p`.
    PowerLaw { p: f64 },
    /// `V(x) = x²/2`.
    Gaussian,
    /// `V(x) = |x|`.
    DoubleExp,
    /// `V(x) = a|x|^p + b x² + c|x|`.
    Custom {
        #[serde(default)]
        a: f64,
        #[serde(default = "default_p")]
        p: f64,
        #[serde(default)]
        b: f64,
        #[serde(default)]
        c: f64,
    },
    #[serde(skip)]
    Handle(Arc<dyn Potential>),
}

impl PotentialFamily {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            PotentialFamily::PowerLaw { p } if !(p.is_finite() && p > 0.0) => {
                bad(format!("power_law needs p > 0, got {p}"))
            }
            PotentialFamily::Custom { a, p, b, c } => {
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    if !(v.is_finite() && v >= 0.0) {
                        return bad(format!("custom coefficient {name} must be finite and >= 0, got {v}"));
                    }
                }
                if a > 0.0 && !(p.is_finite() && p > 0.0) {
                    return bad(format!("custom exponent p must be > 0, got {p}"));
                }
                if a == 0.0 && b == 0.0 && c == 0.0 {
                    return bad("custom potential has no growing term, so e^-V is not integrable".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn v(&self, x: f64) -> f64 {
        let ax = x.abs();
        match self {
            PotentialFamily::PowerLaw { p } => ax.powf(*p),
            PotentialFamily::Gaussian => 0.5 * x * x,
            PotentialFamily::DoubleExp => ax,
            PotentialFamily::Custom { a, p, b, c } => {
                let mut v = b * x * x + c * ax;
                if *a > 0.0 {
                    v += a * ax.powf(*p);
                }
                v
            }
            PotentialFamily::Handle(h) => h.v(x),
        }
    }

    pub fn dv(&self, x: f64) -> f64 {
        let ax = x.abs();
        let s = sign(x);
        match self {
            PotentialFamily::PowerLaw { p } => s * p * ax.powf(p - 1.0),
            PotentialFamily::Gaussian => x,
            PotentialFamily::DoubleExp => s,
            PotentialFamily::Custom { a, p, b, c } => {
                let mut d = 2.0 * b * x + c * s;
                if *a > 0.0 {
                    d += s * a * p * ax.powf(p - 1.0);
                }
                d
            }
            PotentialFamily::Handle(h) => h.dv(x),
        }
    }

    pub fn d2v(&self, x: f64) -> f64 {
        let ax = x.abs();
        match self {
            PotentialFamily::PowerLaw { p } => p * (p - 1.0) * ax.powf(p - 2.0),
            PotentialFamily::Gaussian => 1.0,
            PotentialFamily::DoubleExp => 0.0,
            PotentialFamily::Custom { a, p, b, .. } => {
                let mut d = 2.0 * b;
                if *a > 0.0 {
                    d += a * p * (p - 1.0) * ax.powf(p - 2.0);
                }
                d
            }
            PotentialFamily::Handle(h) => h.d2v(x),
        }
    }

    /// Threshold beyond which `V` is C².
    pub fn smooth_from(&self) -> f64 {
        match self {
            PotentialFamily::PowerLaw { p } if *p == 2.0 => 0.0,
            PotentialFamily::Gaussian => 0.0,
            PotentialFamily::Custom { a, p, c, .. } if (*a == 0.0 || *p == 2.0) && *c == 0.0 => 0.0,
            PotentialFamily::Handle(h) => h.smooth_from(),
            _ => 1.0,
        }
    }

    /// Leading power `P` with `V(x) ≍ |x|^P` at infinity, when known in
    /// closed form. Handles return `None`; their verdicts rest on grids alone.
    pub fn tail_power(&self) -> Option<f64> {
        match self {
            PotentialFamily::PowerLaw { p } => Some(*p),
            PotentialFamily::Gaussian => Some(2.0),
            PotentialFamily::DoubleExp => Some(1.0),
            PotentialFamily::Custom { a, p, b, c } => {
                let mut best: f64 = 0.0;
                if *a > 0.0 {
                    best = best.max(*p);
                }
                if *b > 0.0 {
                    best = best.max(2.0);
                }
                if *c > 0.0 {
                    best = best.max(1.0);
                }
                Some(best)
            }
            PotentialFamily::Handle(_) => None,
        }
    }

    /// Whether `V(-x) = V(x)`; true for every closed-form family.
    pub fn is_even(&self) -> bool {
        !matches!(self, PotentialFamily::Handle(_))
    }

    pub fn label(&self) -> String {
        match self {
            PotentialFamily::PowerLaw { p } => format!("power_law(p={p})"),
            PotentialFamily::Gaussian => "gaussian".into(),
            PotentialFamily::DoubleExp => "double_exp".into(),
            PotentialFamily::Custom { a, p, b, c } => format!("custom(a={a},p={p},b={b},c={c})"),
            PotentialFamily::Handle(h) => format!("handle({h:?})"),
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let f: PotentialFamily = serde_json::from_str(r#"{"family":"power_law","p":1.5}"#).unwrap();
        assert!(matches!(f, PotentialFamily::PowerLaw { p } if p == 1.5));
        let c: PotentialFamily = serde_json::from_str(r#"{"family":"custom","a":1,"p":3,"c":0.5}"#).unwrap();
        assert!(matches!(c, PotentialFamily::Custom { b, .. } if b == 0.0));
        let s = serde_json::to_string(&PotentialFamily::DoubleExp).unwrap();
        assert_eq!(s, r#"{"family":"double_exp"}"#);
    }

    #[test]
    fn custom_derivatives_match_differences() {
        let f = PotentialFamily::Custom { a: 0.7, p: 3.5, b: 0.2, c: 1.1 };
        for &x in &[-3.0, -1.2, 0.8, 2.5] {
            let h = 1e-5;
            let dnum = (f.v(x + h) - f.v(x - h)) / (2.0 * h);
            let d2num = (f.dv(x + h) - f.dv(x - h)) / (2.0 * h);
            assert!((dnum - f.dv(x)).abs() < 1e-6 * (1.0 + dnum.abs()));
            assert!((d2num - f.d2v(x)).abs() < 1e-5 * (1.0 + d2num.abs()));
        }
    }

    #[test]
    fn rejects_non_integrable() {
        assert!(PotentialFamily::Custom { a: 0.0, p: 2.0, b: 0.0, c: 0.0 }.validate().is_err());
        assert!(PotentialFamily::PowerLaw { p: -1.0 }.validate().is_err());
    }
}
