use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{integrate_breaks, Tolerance};
use crate::young::ModifiedH;

/// `H_q*`: `x²/4` up to 2, `x - 1` on `[2, q]`, `(q-1)(x/q)^{q/(q-1)}` beyond.
pub fn hq_conjugate(q: f64, x: f64) -> f64 {
    let x = x.abs();
    if x <= 2.0 {
        0.25 * x * x
    } else if x <= q {
        x - 1.0
    } else {
        (q - 1.0) * (x / q).powf(q / (q - 1.0))
    }
}

/// Everything needed to evaluate `r ↦ exp(-K ω_H*(2r/K))` with `K = aκ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationProfile {
    pub kappa: f64,
    /// Gradient budget: `Σ H(∂_i F) <= a`.
    pub a: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// Constant of the enlargement bound actually used (see
    /// [`super::enlargement_bound`]).
    pub enlargement_k: f64,
    pub h_label: String,
    #[serde(skip)]
    h: Option<ModifiedH>,
}

impl ConcentrationProfile {
    pub fn new(h: &ModifiedH, kappa: f64, a: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite() && a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("need finite kappa > 0 and a > 0 (got {kappa}, {a})")));
        }
        let enl = super::enlargement_bound(kappa, h, 0.0);
        Ok(ConcentrationProfile {
            kappa,
            a,
            k: a * kappa,
            enlargement_k: enl.k_used,
            h_label: h.label(),
            h: Some(h.clone()),
        })
    }

    pub fn h(&self) -> &ModifiedH {
        self.h.as_ref().expect("profile built without its modification")
    }

    pub fn bound(&self, r: f64) -> f64 {
        herbst_tail(self, r)
    }
}

/// `exp(-K ω_H*(2r/K))`.
pub fn herbst_tail(profile: &ConcentrationProfile, r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    let k = profile.k;
    (-k * profile.h().omega_conj(2.0 * r / k)).exp().min(1.0)
}

/// Both sides of `λ ∫_0^λ ω_H(u/2)/u² du <= ω_H(λ/2)`.
pub fn herbst_integral_check(h: &ModifiedH, lambda: f64) -> (f64, f64) {
    // ω_H(u/2)/u² -> 1/4 as u -> 0 because H(x) = x² near 0
    let f = |u: f64| if u == 0.0 { 0.25 } else { h.omega(u / 2.0) / (u * u) };
    let mut pts = vec![0.0, lambda];
    if lambda > 2.0 {
        pts.insert(1, 2.0);
    }
    let lhs = lambda * integrate_breaks(&f, &pts, Tolerance::new(1e-14, 1e-12)).value;
    (lhs, h.omega(lambda / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches() {
        assert_eq!(hq_conjugate(3.0, 1.0), 0.25);
        assert_eq!(hq_conjugate(3.0, 2.0), 1.0);
        assert!((hq_conjugate(3.0, 3.0) - 2.0).abs() < 1e-15);
        assert!(((2.0 - 1e-12) - 1.0 - hq_conjugate(3.0, 2.0 - 1e-12)).abs() < 1e-11);
    }

    #[test]
    fn quadratic_case_is_gaussian() {
        let h = ModifiedH::hq(2.0).unwrap();
        let p = ConcentrationProfile::new(&h, 3.0, 1.0).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let ratio = p.bound(2.0 * r).ln() / p.bound(r).ln();
            assert!((ratio - 4.0).abs() < 1e-9);
            assert!((p.bound(r) - (-r * r / 3.0).exp()).abs() < 1e-12);
        }
        assert_eq!(p.bound(0.0), 1.0);
    }

    #[test]
    fn herbst_inequality() {
        let h = ModifiedH::hq(3.0).unwrap();
        for lambda in [0.5, 2.0, 5.0, 20.0] {
            let (lhs, rhs) = herbst_integral_check(&h, lambda);
            assert!(lhs <= rhs * (1.0 + 1e-9), "{lambda}: {lhs} > {rhs}");
        }
    }
}
