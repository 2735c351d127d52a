use serde::{Deserialize, Serialize};

use super::{build_phi_from_psi, YoungFamily, YoungFn};
use crate::error::Result;
use crate::measure::PotentialFamily;

/// JSON description of a Young function. Optional `alpha`/`theta` override
/// the family defaults and are verified on construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum YoungSpec {
    Power {
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    ScaledPower {
        q: f64,
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    PlusSquare {
        base: Box<YoungSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    Conjugate {
        base: Box<YoungSpec>,
    },
    /// `Φ = f* + x²` built from the potential `psi`.
    Spliced {
        psi: PotentialFamily,
        alpha: f64,
        x1: f64,
    },
}

impl YoungSpec {
    pub fn build(&self) -> Result<YoungFn> {
        let with = |phi: YoungFn, alpha: Option<f64>, theta: Option<f64>| -> Result<YoungFn> {
            if alpha.is_none() && theta.is_none() {
                return Ok(phi);
            }
            let a = alpha.unwrap_or(phi.alpha());
            let t = theta.unwrap_or(phi.theta());
            YoungFn::new(phi.family().clone(), a, t)
        };
        match self {
            YoungSpec::Power { q, alpha, theta } => with(YoungFn::power(*q)?, *alpha, *theta),
            YoungSpec::ScaledPower { q, c, alpha, theta } => with(YoungFn::scaled_power(*q, *c)?, *alpha, *theta),
            YoungSpec::PlusSquare { base, alpha, theta } => with(YoungFn::plus_square(base.build()?)?, *alpha, *theta),
            YoungSpec::Conjugate { base } => {
                let b = base.build()?;
                YoungFn::from_family(YoungFamily::Conjugate { base: Box::new(b) })
            }
            YoungSpec::Spliced { psi, alpha, x1 } => Ok(build_phi_from_psi(psi.clone(), *alpha, *x1)?.phi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested() {
        let s: YoungSpec = serde_json::from_str(r#"{"family":"plus_square","base":{"family":"power","q":3}}"#).unwrap();
        let phi = s.build().unwrap();
        assert_eq!((phi.alpha(), phi.theta()), (2.0, 3.0));
        let sp: YoungSpec =
            serde_json::from_str(r#"{"family":"spliced","psi":{"family":"power_law","p":1.5},"alpha":1.5,"x1":2}"#).unwrap();
        assert!(sp.build().is_ok());
        let bad = serde_json::from_str::<YoungSpec>(r#"{"family":"cubic"}"#).unwrap_err();
        assert!(bad.to_string().contains("power"));
    }
}
