use serde::{Deserialize, Serialize};

use super::{PotentialFamily, PotentialSpec, Side};
use crate::error::{Error, Result};

/// A measure on `[0, ∞)` used by the weighted Hardy inequality. Masses are
/// not renormalized after restriction.
#[derive(Debug, Clone)]
pub enum HalfLine {
    /// Lebesgue measure on `[0, length]`.
    Uniform { length: f64 },
    /// Density `e^{-rate x}`.
    Exponential { rate: f64 },
    /// A measure on the line restricted to `[0, ∞)`.
    Restricted(PotentialSpec),
}

/// JSON form: `{"family":"uniform","length":1}`, `{"family":"exponential",
/// "rate":1}`, or any potential family (restricted to the half-line).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HalfLineDescriptor {
    Weight(WeightFamily),
    Potential(PotentialFamily),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFamily {
    Uniform {
        #[serde(default = "one")]
        length: f64,
    },
    Exponential {
        #[serde(default = "one")]
        rate: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl HalfLineDescriptor {
    pub fn build(&self) -> Result<HalfLine> {
        match self {
            HalfLineDescriptor::Weight(WeightFamily::Uniform { length }) => HalfLine::uniform(*length),
            HalfLineDescriptor::Weight(WeightFamily::Exponential { rate }) => HalfLine::exponential(*rate),
            HalfLineDescriptor::Potential(f) => Ok(HalfLine::Restricted(PotentialSpec::new(f.clone())?)),
        }
    }
}

impl HalfLine {
    pub fn uniform(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("uniform length must be positive, got {length}")));
        }
        Ok(HalfLine::Uniform { length })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(HalfLine::Exponential { rate })
    }

    /// Right end of the support.
    pub fn end(&self) -> f64 {
        match self {
            HalfLine::Uniform { length } => *length,
            _ => f64::INFINITY,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self {
            HalfLine::Uniform { length } => {
                if x <= *length {
                    1.0
                } else {
                    0.0
                }
            }
            HalfLine::Exponential { rate } => (-rate * x).exp(),
            HalfLine::Restricted(mu) => mu.density(x),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.tail(0.0)
    }

    /// `μ([x, ∞))` for `x >= 0`.
    pub fn tail(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match self {
            HalfLine::Uniform { length } => (length - x).max(0.0),
            HalfLine::Exponential { rate } => (-rate * x).exp() / rate,
            HalfLine::Restricted(mu) => mu.tail(x, Side::Right),
        }
    }

    /// Point `x` with `μ([x, ∞)) = frac · μ([0, ∞))`.
    pub fn tail_point(&self, frac: f64) -> f64 {
        match self {
            HalfLine::Uniform { length } => length * (1.0 - frac),
            HalfLine::Exponential { rate } => -frac.ln() / rate,
            HalfLine::Restricted(mu) => {
                let m0 = mu.tail(0.0, Side::Right);
                mu.tail_quantile(frac * m0, Side::Right).max(0.0)
            }
        }
    }

    /// `log ∫_0^x n^{-s}` for `s > 0`; `+∞` once `n` vanishes on part of `[0, x]`.
    pub fn log_inner(&self, x: f64, s: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match self {
            HalfLine::Uniform { length } => {
                if x > *length {
                    f64::INFINITY
                } else {
                    x.ln()
                }
            }
            HalfLine::Exponential { rate } => {
                let k = s * rate;
                k * x + (-(-k * x).exp_m1()).ln() - k.ln()
            }
            HalfLine::Restricted(mu) => mu.log_inner_integral(0.0, x, s),
        }
    }

    pub fn label(&self) -> String {
        match self {
            HalfLine::Uniform { length } => format!("uniform[0,{length}]"),
            HalfLine::Exponential { rate } => format!("exponential(rate={rate})"),
            HalfLine::Restricted(mu) => format!("{} on [0,inf)", mu.family().label()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_parses_both_shapes() {
        let u: HalfLineDescriptor = serde_json::from_str(r#"{"family":"uniform","length":1}"#).unwrap();
        assert!(matches!(u.build().unwrap(), HalfLine::Uniform { .. }));
        let r: HalfLineDescriptor = serde_json::from_str(r#"{"family":"double_exp"}"#).unwrap();
        assert!(matches!(r.build().unwrap(), HalfLine::Restricted(_)));
    }

    #[test]
    fn exponential_inner_integral() {
        let w = HalfLine::exponential(2.0).unwrap();
        let got = w.log_inner(1.5, 0.5).exp();
        assert!((got - (1.5f64.exp() - 1.0)).abs() < 1e-12);
        assert!((w.tail_point(0.25) - 4f64.ln() / 2.0).abs() < 1e-15);
    }
}
