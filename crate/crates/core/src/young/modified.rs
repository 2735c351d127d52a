use super::{omega, omega_conjugate, YoungFamily, YoungFn};
use crate::error::{Error, Result};

/// `H_Φ(x) = x²` on `[-1, 1]` and `Φ(|x|)/Φ(1)` outside.
#[derive(Clone, Debug)]
pub struct ModifiedH {
    base: YoungFn,
    phi1: f64,
    /// `H'_r(1) = Φ'(1)/Φ(1)`; at least 2 so that the splice is convex.
    slope_at_one: f64,
}

impl ModifiedH {
    pub fn new(base: YoungFn) -> Result<Self> {
        let phi1 = base.value(1.0);
        let slope_at_one = base.deriv(1.0) / phi1;
        if slope_at_one < 2.0 * (1.0 - 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "modification of {} is not convex at 1 (Φ'(1)/Φ(1) = {slope_at_one} < 2)",
                base.label()
            )));
        }
        Ok(ModifiedH {
            base,
            phi1,
            slope_at_one: slope_at_one.max(2.0),
        })
    }

    /// `H_q(x) = max(x², |x|^q)`.
    pub fn hq(q: f64) -> Result<Self> {
        if !(q >= 2.0) {
            return Err(Error::InvalidParameter(format!("H_q needs q >= 2, got {q}")));
        }
        Self::new(YoungFn::power(q)?)
    }

    /// `Φ'(1)/Φ(1)`. `H*` is affine on `[2, knot_slope]` when this exceeds 2.
    pub fn knot_slope(&self) -> f64 {
        self.slope_at_one
    }

    pub fn base(&self) -> &YoungFn {
        &self.base
    }

    /// `Some(q)` when the base is `|x|^q`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.base.family() {
            YoungFamily::Power { q } => Some(*q),
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        if x <= 1.0 {
            x * x
        } else {
            self.base.value(x) / self.phi1
        }
    }

    /// Right derivative on `[0, ∞)`.
    pub fn deriv(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x < 1.0 {
            2.0 * x
        } else {
            self.base.deriv(x) / self.phi1
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        let x = x.abs();
        if x < 1.0 {
            2.0
        } else {
            self.base.deriv2(x) / self.phi1
        }
    }

    /// `inf{x >= 0 : H'_r(x) >= λ}`; equal to 1 on the whole jump `[2, Φ'(1)/Φ(1)]`.
    pub fn deriv_inv(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            0.0
        } else if lambda < 2.0 {
            lambda / 2.0
        } else if lambda <= self.slope_at_one {
            1.0
        } else {
            self.base.deriv_inv(lambda * self.phi1).max(1.0)
        }
    }

    /// `H*(y)`, computed from the first-order condition.
    pub fn conj_value(&self, y: f64) -> f64 {
        let y = y.abs();
        let x = self.deriv_inv(y);
        (x * y - self.value(x)).max(0.0)
    }

    /// Right derivative of `H*`, i.e. the left inverse of `H'_r` read as a
    /// right-continuous function.
    pub fn conj_deriv(&self, y: f64) -> f64 {
        let y = y.abs();
        if y < 2.0 {
            y / 2.0
        } else if y < self.slope_at_one {
            1.0
        } else {
            self.base.deriv_inv(y * self.phi1).max(1.0)
        }
    }

    /// `ω_H(t) = sup_s H(ts)/H(s)`. Closed form `max(t², t^q)` for powers.
    pub fn omega(&self, t: f64) -> f64 {
        let t = t.abs();
        match self.power_exponent() {
            Some(q) => (t * t).max(t.powf(q)),
            None => omega(|s| self.value(s), t),
        }
    }

    /// `ω_H*(r)`.
    pub fn omega_conj(&self, r: f64) -> f64 {
        omega_conjugate(|t| self.omega(t), r)
    }

    pub fn label(&self) -> String {
        match self.power_exponent() {
            Some(q) => format!("H_{q}"),
            None => format!("H[{}]", self.base.label()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_and_knot() {
        let h = ModifiedH::hq(4.0).unwrap();
        assert_eq!(h.value(0.5), 0.25);
        assert_eq!(h.value(2.0), 16.0);
        assert_eq!(h.value(1.0), 1.0);
        assert_eq!(h.value(-2.0), 16.0);
    }

    #[test]
    fn conjugate_affine_piece() {
        let h = ModifiedH::hq(3.0).unwrap();
        assert!((h.conj_value(1.0) - 0.25).abs() < 1e-15);
        assert!((h.conj_value(2.5) - 1.5).abs() < 1e-15);
        let want = 2.0 * (4.0f64 / 3.0).powf(1.5);
        assert!((h.conj_value(4.0) - want).abs() < 1e-12);
    }

    #[test]
    fn dominates_both_pieces() {
        let base = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        let h = ModifiedH::new(base.clone()).unwrap();
        for i in 0..200 {
            let x = 0.05 * i as f64;
            assert!(h.value(x) >= (x * x).max(base.value(x) / base.value(1.0)) * (1.0 - 1e-14));
        }
    }
}
