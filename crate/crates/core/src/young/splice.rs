use std::sync::Arc;

use serde::Serialize;

use super::{dual, numeric_inverse, YoungFamily, YoungFn};
use crate::error::{Error, Result};
use crate::measure::PotentialFamily;
use crate::numeric::log_grid;

/// `f(x) = Ψ(x₁)(x/x₁)^β` below the knot `x₁` and `Ψ(x)` above, with
/// `β = x₁Ψ'(x₁)/Ψ(x₁)` so that `f` is C¹.
#[derive(Debug)]
pub struct Spliced {
    psi: PotentialFamily,
    alpha: f64,
    beta: f64,
    x1: f64,
    psi_x1: f64,
    dpsi_x1: f64,
}

impl Spliced {
    pub fn psi(&self) -> &PotentialFamily {
        &self.psi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < self.x1 {
            self.psi_x1 * (x / self.x1).powf(self.beta)
        } else {
            self.psi.v(x)
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        if x < self.x1 {
            self.dpsi_x1 * (x / self.x1).powf(self.beta - 1.0)
        } else {
            self.psi.dv(x)
        }
    }

    /// Derivative from the left of `x`; differs from `deriv` only at kinks.
    pub fn deriv_left(&self, x: f64) -> f64 {
        if x <= self.x1 {
            self.dpsi_x1 * (x / self.x1).powf(self.beta - 1.0)
        } else {
            self.psi.dv(x)
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        if x < self.x1 {
            self.dpsi_x1 * (self.beta - 1.0) / self.x1 * (x / self.x1).powf(self.beta - 2.0)
        } else {
            self.psi.d2v(x)
        }
    }

    pub fn deriv_inv(&self, lambda: f64) -> f64 {
        if lambda < self.dpsi_x1 {
            self.x1 * (lambda / self.dpsi_x1).powf(1.0 / (self.beta - 1.0))
        } else {
            numeric_inverse(|x| self.psi.dv(x), |x| self.psi.d2v(x), lambda).max(self.x1)
        }
    }
}

/// Result of the construction: `Φ = f* + x²` and the pieces that built it.
#[derive(Debug, Clone, Serialize)]
pub struct SplicedPhi {
    #[serde(skip)]
    pub phi: YoungFn,
    #[serde(skip)]
    pub f: YoungFn,
    pub beta: f64,
    pub x1: f64,
    pub alpha: f64,
    pub alpha_star: f64,
    /// `f*` switches from its power piece to `Ψ*` at `Ψ'(x₁)`.
    pub conjugate_cutoff: f64,
}

/// Builds a strictly convex Young function `Φ = f* + x²` from an even convex
/// potential `Ψ` whose growth sits between `x^α` and `x²` beyond `x₁`.
pub fn build_phi_from_psi(psi: PotentialFamily, alpha: f64, x1: f64) -> Result<SplicedPhi> {
    psi.validate()?;
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (1, 2], got {alpha}")));
    }
    if !(x1 > 0.0 && x1.is_finite()) {
        return Err(Error::InvalidParameter(format!("knot x1 must be positive, got {x1}")));
    }
    if !psi.is_even() {
        return Err(Error::hypothesis("Psi even", x1));
    }
    let psi_x1 = psi.v(x1);
    let dpsi_x1 = psi.dv(x1);
    if !(psi_x1 > 1.0) {
        return Err(Error::hypothesis("Psi(x1) > 1", x1));
    }
    if !(dpsi_x1 > 1.0) {
        return Err(Error::hypothesis("Psi'(x1) > 1", x1));
    }
    for x in log_grid(x1, 1e4 * x1.max(1.0), 128) {
        let (v, d) = (psi.v(x), psi.dv(x));
        if psi.d2v(x) < 0.0 {
            return Err(Error::hypothesis("Psi convex", x));
        }
        if x * d < alpha * v * (1.0 - 1e-9) {
            return Err(Error::hypothesis("Psi(x)/x^alpha non-decreasing", x));
        }
        if x * d > 2.0 * v * (1.0 + 1e-9) {
            return Err(Error::hypothesis("Psi(x)/x^2 non-increasing", x));
        }
    }
    let beta = x1 * dpsi_x1 / psi_x1;
    let spliced = Spliced {
        psi,
        alpha,
        beta,
        x1,
        psi_x1,
        dpsi_x1,
    };
    let f = YoungFn::new(YoungFamily::Spliced(Arc::new(spliced)), alpha, 2.0)?;
    let f_star = f.conjugate_fn();
    let phi = YoungFn::plus_square(f_star)?;
    Ok(SplicedPhi {
        phi,
        f,
        beta,
        x1,
        alpha,
        alpha_star: dual(alpha),
        conjugate_cutoff: dpsi_x1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::check_growth;

    #[test]
    fn pure_power_gives_its_exponent() {
        let built = build_phi_from_psi(PotentialFamily::PowerLaw { p: 1.5 }, 1.5, 2.0).unwrap();
        assert_eq!(built.beta, 1.5);
        assert!(check_growth(&built.phi, 2.0, 3.0).holds);
    }

    #[test]
    fn c1_at_knot() {
        let psi = PotentialFamily::Custom { a: 1.0, p: 1.5, b: 0.01, c: 0.0 };
        let built = build_phi_from_psi(psi, 1.5, 3.0).unwrap();
        let YoungFamily::Spliced(s) = built.f.family() else { panic!() };
        assert!((s.deriv(3.0) - s.deriv_left(3.0)).abs() < 1e-10);
        assert!(built.beta > 1.5 && built.beta <= 2.0);
    }

    #[test]
    fn preconditions_named() {
        let err = build_phi_from_psi(PotentialFamily::PowerLaw { p: 1.5 }, 1.5, 0.5).unwrap_err();
        assert!(err.to_string().contains("Psi(x1) > 1"));
        let err = build_phi_from_psi(PotentialFamily::PowerLaw { p: 3.0 }, 1.5, 2.0).unwrap_err();
        assert!(err.to_string().contains("x^2"));
    }
}
