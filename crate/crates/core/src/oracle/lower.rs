use serde::{Deserialize, Serialize};

use super::beta::beta_oracle;
use super::mlsi_ratio::{entropy_energy_profile, power_shape};
use crate::error::{Error, Result};
use crate::measure::{Density, PotentialSpec, Side};
use crate::mlsi::alpha_tilde_upper;
use crate::mlsi::variational::{integrate_on, interval};
use crate::young::{ModifiedH, YoungFn};

/// `I = ∫_m^x n^{-1/(q-1)}`.
pub fn inverse_power_integral<N: Density + ?Sized>(nu: &N, m: f64, x: f64, q: f64) -> f64 {
    let (a, b) = interval(m, x);
    integrate_on(nu, a, b, |t| (-nu.log_density(t) / (q - 1.0)).exp())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub x: f64,
    pub q: f64,
    /// Discrete minimum of `∫ |f'/f|^q f^2 dν` over monotone `f` from 1 to 2.
    pub value: f64,
    /// The exact infimum `(q/2)^q (2^{2/q} - 1)^q I^{1-q}`.
    pub closed_form: f64,
    /// `2^{q-2} I^{q-1}`.
    pub chain_bound: f64,
    /// `value · chain_bound`, at least 1.
    pub product: f64,
}

/// Estimates `α_x` for `Φ = |x|^q`. Writing `f = h^{q/2}` turns the
/// integrand into `(q/2)^q |h'|^q n` with `h` running from 1 to `2^{2/q}`,
/// so the minimisation is a `β` problem handed to [`beta_oracle`].
pub fn alpha_x_estimate<N: Density + ?Sized>(nu: &N, m: f64, x: f64, q: f64, grid: usize) -> Result<AlphaEstimate> {
    if !(q >= 2.0) {
        return Err(Error::InvalidParameter(format!("alpha_x needs q >= 2, got {q}")));
    }
    let a = 2f64.powf(2.0 / q) - 1.0;
    let k = (q / 2.0).powf(q);
    let beta = beta_oracle(&YoungFn::power(q)?, nu, m, x, a, grid)?;
    let i = inverse_power_integral(nu, m, x, q);
    let value = k * beta.value;
    let chain_bound = 2f64.powf(q - 2.0) * i.powf(q - 1.0);
    Ok(AlphaEstimate {
        x,
        q,
        value,
        closed_form: k * a.powf(q) * i.powf(1.0 - q),
        chain_bound,
        product: value * chain_bound,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaTildePower {
    pub x: f64,
    pub q: f64,
    /// `∫ H_q(f_x'/f_x) f_x^2 dν` for `f_x = (J/J(x))^{q-1}`.
    pub value: f64,
    pub integral: f64,
    /// `min(ε^{q-2}, 1)/(q-1)^{q-1} · I^{q-1}`, when `ε` is supplied.
    pub lower_reciprocal: Option<f64>,
}

/// Upper estimate of `α̃_x` for `H_q` from the power-shaped test function.
pub fn alpha_tilde_power(nu: &PotentialSpec, m: f64, x: f64, q: f64, epsilon: Option<f64>) -> Result<AlphaTildePower> {
    let h = ModifiedH::hq(q)?;
    let tf = power_shape(nu, m, x, q);
    let value = entropy_energy_profile(nu, &h, &tf);
    let integral = inverse_power_integral(nu, m, x, q);
    Ok(AlphaTildePower {
        x,
        q,
        value,
        integral,
        lower_reciprocal: epsilon
            .map(|e| e.powf(q - 2.0).min(1.0) / (q - 1.0).powf(q - 1.0) * integral.powf(q - 1.0)),
    })
}

/// `(3/4) t log(1/t)`, `t log(1 + 1/(2t))` and `t log(1/t)`.
pub fn tail_weights(t: f64) -> [f64; 3] {
    let l = -t.ln();
    [0.75 * t * l, t * (0.5 / t).ln_1p(), t * l]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropMinBound {
    pub x: f64,
    pub side: Side,
    pub tail: f64,
    /// `μ-tail · log(1 + 1/(2 μ-tail))`.
    pub weight: f64,
    /// Test-function upper estimate of `α̃_x` built from `Φ'`.
    pub alpha_tilde_young: Option<f64>,
    /// Same, from the power-shaped test function.
    pub alpha_tilde_power: Option<f64>,
    pub lower_bound: f64,
}

/// Certified lower bound `μ-tail · log(1 + 1/(2 μ-tail)) / α̃_x` on any
/// admissible constant, with `α̃_x` replaced by the smaller of the
/// available test-function values (each is at least the true infimum).
pub fn prop_min_lower_bound(mu: &PotentialSpec, nu: &PotentialSpec, h: &ModifiedH, x: f64) -> Result<PropMinBound> {
    let m = mu.median();
    if x == m {
        return Err(Error::InvalidParameter("x must differ from the median".into()));
    }
    let side = if x > m { Side::Right } else { Side::Left };
    let tail = mu.tail(x, side);
    let weight = tail * (0.5 / tail).ln_1p();
    let same = mu.family().label() == nu.family().label();
    let young = if same {
        alpha_tilde_upper(h.base(), mu, x, None).ok().map(|e| e.value)
    } else {
        None
    };
    let q = h.power_exponent().unwrap_or_else(|| h.base().theta().max(2.0));
    let tf = power_shape(nu, m, x, q);
    let power = Some(entropy_energy_profile(nu, h, &tf)).filter(|v| v.is_finite() && *v > 0.0);
    let best = [young, power].into_iter().flatten().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NoConvergence {
            what: "no finite test-function value for alpha tilde".into(),
            residual: f64::INFINITY,
        });
    }
    Ok(PropMinBound {
        x,
        side,
        tail,
        weight,
        alpha_tilde_young: young,
        alpha_tilde_power: power,
        lower_bound: weight / best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn remark_bracket() {
        for t in [0.01, 0.1, 0.4] {
            let [lo, mid, hi] = tail_weights(t);
            assert!(lo <= mid && mid <= hi);
        }
    }

    #[test]
    fn alpha_x_matches_substitution() {
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        for x in [0.5, 1.0, 2.0] {
            let e = alpha_x_estimate(&mu, 0.0, x, 3.0, 2000).unwrap();
            assert!((e.value / e.closed_form - 1.0).abs() < 1e-4, "{e:?}");
            assert!(e.product >= 1.0);
        }
    }

    #[test]
    fn slow_tail_lower_bound_diverges() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.2 }).unwrap();
        let h = ModifiedH::hq(2.0).unwrap();
        let vals: Vec<f64> = [5.0, 20.0, 80.0]
            .iter()
            .map(|&x| prop_min_lower_bound(&mu, &mu, &h, x).unwrap().lower_bound)
            .collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2], "{vals:?}");
    }
}
