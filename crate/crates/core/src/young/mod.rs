//! Young functions: evaluation, right derivatives and their left inverses,
//! conjugates, the quadratic modification, growth envelopes and
//! submultiplicativity constants.

mod growth;
mod json;
mod modified;
mod omega;
mod splice;

pub use growth::{
    check_growth, envelope_equivalence, gamma_constant, submultiplicativity_constants, GrowthCheck, GrowthViolation, Submultiplicativity,
};
pub use json::YoungSpec;
pub use modified::ModifiedH;
pub use omega::{legendre, omega, omega_conjugate};
pub use splice::{build_phi_from_psi, Spliced, SplicedPhi};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::roots::solve_increasing;

/// User-supplied Young function on `[0, ∞)`; evenness is implied.
pub trait YoungCustom: Send + Sync + fmt::Debug {
    fn value(&self, x: f64) -> f64;
    /// Right derivative.
    fn deriv(&self, x: f64) -> f64;
    fn deriv2(&self, x: f64) -> f64;
}

#[derive(Clone, Debug)]
pub enum YoungFamily {
    /// `|x|^q`.
    Power { q: f64 },
    /// `c|x|^q`.
    ScaledPower { q: f64, c: f64 },
    /// `base(x) + x²`.
    PlusSquare { base: Box<YoungFn> },
    /// The C¹ splice of a power and a convex potential.
    Spliced(Arc<Spliced>),
    /// Legendre transform of `base`.
    Conjugate { base: Box<YoungFn> },
    Custom(Arc<dyn YoungCustom>),
}

/// A nice Young function together with a declared growth envelope: `Φ(x)/x^α`
/// non-decreasing and `Φ(x)/x^θ` non-increasing on `(0, ∞)`.
#[derive(Clone, Debug)]
pub struct YoungFn {
    family: YoungFamily,
    alpha: f64,
    theta: f64,
}

const BRACKET_LIMIT: f64 = 1e300;

impl YoungFn {
    /// Builds a Young function and verifies the declared envelope on the
    /// standard log grid.
    pub fn new(family: YoungFamily, alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 1.0 && theta >= alpha && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "growth exponents need 1 < alpha <= theta < inf, got alpha={alpha}, theta={theta}"
            )));
        }
        let phi = YoungFn { family, alpha, theta };
        phi.validate_shape()?;
        let check = check_growth(&phi, alpha, theta);
        if let Some(v) = check.violation {
            return Err(Error::GrowthViolation(format!(
                "{} with alpha={alpha}, theta={theta}: {} fails at x={:e}",
                phi.label(),
                v.condition,
                v.x
            )));
        }
        Ok(phi)
    }

    /// Builds with the family's natural exponents.
    pub fn from_family(family: YoungFamily) -> Result<Self> {
        let (a, t) = default_exponents(&family)?;
        Self::new(family, a, t)
    }

    pub fn power(q: f64) -> Result<Self> {
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("power exponent must be > 1, got {q}")));
        }
        Self::from_family(YoungFamily::Power { q })
    }

    pub fn scaled_power(q: f64, c: f64) -> Result<Self> {
        if !(q > 1.0 && q.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scaled power needs q > 1 and c > 0, got q={q}, c={c}")));
        }
        Self::from_family(YoungFamily::ScaledPower { q, c })
    }

    pub fn plus_square(base: YoungFn) -> Result<Self> {
        Self::from_family(YoungFamily::PlusSquare { base: Box::new(base) })
    }

    pub fn custom(f: Arc<dyn YoungCustom>, alpha: f64, theta: f64) -> Result<Self> {
        Self::new(YoungFamily::Custom(f), alpha, theta)
    }

    /// The conjugate as a Young function in its own right, with the dual
    /// envelope `(θ*, α*)`. Closed forms are used for powers.
    pub fn conjugate_fn(&self) -> YoungFn {
        let alpha = dual(self.theta);
        let theta = dual(self.alpha);
        let family = match &self.family {
            YoungFamily::Power { q } => YoungFamily::ScaledPower {
                q: dual(*q),
                c: (q - 1.0) * q.powf(-dual(*q)),
            },
            YoungFamily::ScaledPower { q, c } => YoungFamily::ScaledPower {
                q: dual(*q),
                c: (q - 1.0) * c * (c * q).powf(-dual(*q)),
            },
            YoungFamily::Conjugate { base } => return (**base).clone(),
            _ => YoungFamily::Conjugate { base: Box::new(self.clone()) },
        };
        YoungFn { family, alpha, theta }
    }

    pub fn family(&self) -> &YoungFamily {
        &self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `Φ(x)`, even in `x`.
    pub fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        match &self.family {
            YoungFamily::Power { q } => x.powf(*q),
            YoungFamily::ScaledPower { q, c } => c * x.powf(*q),
            YoungFamily::PlusSquare { base } => base.value(x) + x * x,
            YoungFamily::Spliced(s) => s.value(x),
            YoungFamily::Conjugate { base } => {
                if x == 0.0 {
                    return 0.0;
                }
                let t = base.deriv_inv(x);
                if !t.is_finite() {
                    return f64::INFINITY;
                }
                (x * t - base.value(t)).max(0.0)
            }
            YoungFamily::Custom(c) => c.value(x),
        }
    }

    /// Right derivative `Φ'_r(x)` for `x >= 0`.
    pub fn deriv(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.family {
            YoungFamily::Power { q } => q * x.powf(q - 1.0),
            YoungFamily::ScaledPower { q, c } => c * q * x.powf(q - 1.0),
            YoungFamily::PlusSquare { base } => base.deriv(x) + 2.0 * x,
            YoungFamily::Spliced(s) => s.deriv(x),
            YoungFamily::Conjugate { base } => base.deriv_inv(x),
            YoungFamily::Custom(c) => c.deriv(x),
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.family {
            YoungFamily::Power { q } => q * (q - 1.0) * x.powf(q - 2.0),
            YoungFamily::ScaledPower { q, c } => c * q * (q - 1.0) * x.powf(q - 2.0),
            YoungFamily::PlusSquare { base } => base.deriv2(x) + 2.0,
            YoungFamily::Spliced(s) => s.deriv2(x),
            YoungFamily::Conjugate { base } => {
                let t = base.deriv_inv(x);
                1.0 / base.deriv2(t)
            }
            YoungFamily::Custom(c) => c.deriv2(x),
        }
    }

    /// `inf{x >= 0 : Φ'_r(x) >= λ}`; `+∞` if no such `x` is found.
    pub fn deriv_inv(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        match &self.family {
            YoungFamily::Power { q } => (lambda / q).powf(1.0 / (q - 1.0)),
            YoungFamily::ScaledPower { q, c } => (lambda / (c * q)).powf(1.0 / (q - 1.0)),
            YoungFamily::Conjugate { base } => base.deriv(lambda),
            YoungFamily::Spliced(s) => s.deriv_inv(lambda),
            _ => numeric_inverse(|x| self.deriv(x), |x| self.deriv2(x), lambda),
        }
    }

    /// `Φ*(y) = sup_{x>=0} {x|y| - Φ(x)}`.
    pub fn conj_value(&self, y: f64) -> f64 {
        let y = y.abs();
        if y == 0.0 {
            return 0.0;
        }
        match &self.family {
            YoungFamily::Power { .. } | YoungFamily::ScaledPower { .. } => self.conjugate_fn().value(y),
            YoungFamily::Conjugate { base } => base.value(y),
            _ => {
                let x = self.deriv_inv(y);
                if !x.is_finite() {
                    return f64::INFINITY;
                }
                (x * y - self.value(x)).max(0.0)
            }
        }
    }

    /// Conjugate with an error when the supremum diverges.
    pub fn conjugate(&self, y: f64) -> Result<f64> {
        let v = self.conj_value(y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NotSuperlinear(format!("{} has no finite conjugate at y={y}", self.label())))
        }
    }

    /// Left inverse of the right derivative, with an error when `λ` is out of range.
    pub fn right_derivative_inverse(&self, lambda: f64) -> Result<f64> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        let x = self.deriv_inv(lambda);
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::NotSuperlinear(format!("{lambda} exceeds the range of the derivative of {}", self.label())))
        }
    }

    /// `Φ^{-1}(v)` on `[0, ∞)`.
    pub fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        numeric_inverse(|x| self.value(x), |x| self.deriv(x), v)
    }

    /// `(Φ*)^{-1}(v)`.
    pub fn conj_inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        numeric_inverse(|y| self.conj_value(y), |y| self.deriv_inv(y), v)
    }

    /// Smallest `η` with `xΦ''(x) <= ηΦ'(x)` on the standard grid.
    pub fn eta(&self) -> f64 {
        match &self.family {
            YoungFamily::Power { q } | YoungFamily::ScaledPower { q, .. } => q - 1.0,
            _ => crate::numeric::log_grid(1e-6, 1e6, 64)
                .iter()
                .map(|&x| x * self.deriv2(x) / self.deriv(x))
                .filter(|r| r.is_finite())
                .fold(0.0, f64::max),
        }
    }

    /// Exponent `P` with `Φ(x) ≍ x^P` at infinity, when known symbolically.
    pub fn tail_exponent(&self) -> Option<f64> {
        match &self.family {
            YoungFamily::Power { q } | YoungFamily::ScaledPower { q, .. } => Some(*q),
            YoungFamily::PlusSquare { base } => base.tail_exponent().map(|e| e.max(2.0)),
            YoungFamily::Conjugate { base } => base.tail_exponent().map(dual),
            YoungFamily::Spliced(s) => s.psi().tail_power(),
            YoungFamily::Custom(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.family {
            YoungFamily::Power { q } => format!("power(q={q})"),
            YoungFamily::ScaledPower { q, c } => format!("scaled_power(q={q},c={c})"),
            YoungFamily::PlusSquare { base } => format!("plus_square({})", base.label()),
            YoungFamily::Spliced(s) => format!("spliced(beta={},x1={})", s.beta(), s.x1()),
            YoungFamily::Conjugate { base } => format!("conjugate({})", base.label()),
            YoungFamily::Custom(c) => format!("custom({c:?})"),
        }
    }

    fn validate_shape(&self) -> Result<()> {
        let grid = crate::numeric::log_grid(1e-6, 1e6, 16);
        if self.value(0.0) != 0.0 {
            return Err(Error::InvalidParameter(format!("{} does not vanish at 0", self.label())));
        }
        let mut prev = 0.0;
        for &x in &grid {
            let v = self.value(x);
            let d = self.deriv(x);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{} is not positive and finite at {x:e}", self.label())));
            }
            if d < prev * (1.0 - 1e-9) {
                return Err(Error::InvalidParameter(format!("{} is not convex near {x:e}", self.label())));
            }
            prev = d;
        }
        let top = *grid.last().unwrap();
        if self.value(top) / top <= self.value(1.0) {
            return Err(Error::NotSuperlinear(format!("{} does not grow superlinearly", self.label())));
        }
        Ok(())
    }
}

/// Dual exponent `a/(a-1)`.
pub fn dual(a: f64) -> f64 {
    if a == f64::INFINITY {
        1.0
    } else {
        a / (a - 1.0)
    }
}

fn default_exponents(family: &YoungFamily) -> Result<(f64, f64)> {
    Ok(match family {
        YoungFamily::Power { q } | YoungFamily::ScaledPower { q, .. } => (*q, *q),
        YoungFamily::PlusSquare { base } => (base.alpha.min(2.0), base.theta.max(2.0)),
        YoungFamily::Conjugate { base } => (dual(base.theta), dual(base.alpha)),
        YoungFamily::Spliced(s) => (s.alpha(), 2.0),
        YoungFamily::Custom(_) => {
            return Err(Error::InvalidParameter(
                "custom Young functions need explicit alpha and theta".into(),
            ))
        }
    })
}

/// Solves `f(x) = target` for non-decreasing `f` with `f(0) <= target`.
pub(crate) fn numeric_inverse<F: Fn(f64) -> f64, D: Fn(f64) -> f64>(f: F, df: D, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.5, 1.0);
    if f(hi) >= target {
        while f(lo) >= target {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return lo;
            }
        }
    } else {
        while f(hi) < target {
            lo = hi;
            hi *= 2.0;
            if hi > BRACKET_LIMIT {
                return f64::INFINITY;
            }
        }
    }
    solve_increasing(f, Some(df), target, lo, hi, 1e-15)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_closed_forms() {
        let p2 = YoungFn::power(2.0).unwrap();
        assert!((p2.conjugate(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p2.right_derivative_inverse(4.0).unwrap() - 2.0).abs() < 1e-15);
        let p3 = YoungFn::power(3.0).unwrap();
        assert!((p3.right_derivative_inverse(3.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_conjugate_matches_closed_form() {
        let base = YoungFn::power(3.0).unwrap();
        let generic = YoungFn {
            family: YoungFamily::Conjugate {
                base: Box::new(YoungFn {
                    family: YoungFamily::Conjugate { base: Box::new(base.clone()) },
                    alpha: 1.5,
                    theta: 1.5,
                }),
            },
            alpha: 3.0,
            theta: 3.0,
        };
        for &x in &[0.01, 0.5, 1.0, 7.0] {
            assert!((generic.value(x) / base.value(x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plus_square_inverse_residual() {
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        for &lambda in &[1e-4, 0.3, 5.0, 1e5] {
            let x = phi.deriv_inv(lambda);
            assert!((phi.deriv(x) - lambda).abs() <= 1e-10 * lambda.max(1.0));
        }
    }

    #[test]
    fn rejects_wrong_envelope() {
        assert!(YoungFn::new(YoungFamily::Power { q: 3.0 }, 3.5, 3.5).is_err());
        assert!(YoungFn::new(YoungFamily::Power { q: 3.0 }, 3.0, 3.0).is_ok());
    }

    #[test]
    fn inverses() {
        let phi = YoungFn::power(3.0).unwrap();
        assert!((phi.inverse(27.0) - 3.0).abs() < 1e-12);
        let c = phi.conj_value(2.0);
        assert!((phi.conj_inverse(c) - 2.0).abs() < 1e-12);
    }
}
