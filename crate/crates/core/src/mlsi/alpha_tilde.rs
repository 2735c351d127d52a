use serde::{Deserialize, Serialize};

use super::criteria::phi_hypotheses;
use super::variational::{breakpoints, gamma};
use crate::error::{Error, Result};
use crate::hardy::HypothesisCheck;
use crate::measure::PotentialSpec;
use crate::numeric::quad::gk15;
use crate::numeric::{integrate, linspace, Tolerance};
use crate::young::{gamma_constant, ModifiedH, YoungFn};

/// Upper estimate of `α̃_x` from an explicit admissible test function, with
/// the quantities needed to compare it against `e^{-V(x)}Φ'(V'(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaTildeEstimate {
    pub x: f64,
    /// Left end of the support of the test function.
    pub x0: f64,
    /// Normalising constant: `∫_{x0}^x Φ'^{-1}(c_x e^{V}) = 1`.
    pub c_x: f64,
    /// `f_x(x)` after quadrature, `1` up to rounding.
    pub f_end: f64,
    /// `∫ H_Φ(g'/g)(g/Φ'(1))^2 dν` with `g = Φ'(f_x)`.
    pub value: f64,
    /// `e^{-V(x)}Φ'(V'(x))`.
    pub envelope: f64,
    pub ratio: f64,
    pub eta: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma: f64,
    /// `e^{-V(x)}Φ'(2e^{V'(x)})`.
    pub cx_bound_exponential: f64,
    pub cx_exponential_holds: bool,
    /// `e^{-V(x)}Φ'(2V'(x))`.
    pub cx_bound_linear: f64,
    pub cx_linear_holds: bool,
    /// Smallest grid point beyond which the drift and curvature window hold
    /// all the way to `x`; `x` itself when they fail at `x`.
    pub regular_from: f64,
    pub hypotheses: Vec<HypothesisCheck>,
}

/// Builds `f_x(t) = ∫_{x0}^t Φ'^{-1}(c_x e^{V(u)}) du` on `[x0, x]` (and `1`
/// beyond), sets `g = Φ'(f_x)`, and integrates the modified energy of
/// `g/Φ'(1)`. Any admissible function bounds `α̃_x` from above, so `value`
/// is a certified upper bound whenever the integral is finite, which the
/// finite-`Γ` check guarantees. `x0` defaults to the median.
pub fn alpha_tilde_upper(phi: &YoungFn, mu: &PotentialSpec, x: f64, x0: Option<f64>) -> Result<AlphaTildeEstimate> {
    let m = mu.median();
    let x0 = x0.unwrap_or(m);
    let s = if x >= m { 1.0 } else { -1.0 };
    if !(s * (x - x0) > 0.0 && s * (x0 - m) >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need the anchor {x0} between the median {m} and x = {x}"
        )));
    }
    let h = ModifiedH::new(phi.clone())?;
    let eta = phi.eta();
    let gamma_c = gamma_constant(phi);
    let mut hypotheses = phi_hypotheses(phi);
    hypotheses.push(HypothesisCheck::new("Phi'(x)/x^eta non-increasing (eta finite)", eta.is_finite(), None));
    hypotheses.push(HypothesisCheck::new("Gamma finite", gamma_c.is_finite(), None));
    if !gamma_c.is_finite() {
        return Err(Error::hypothesis("Gamma finite", f64::INFINITY));
    }

    let len = (x - x0).abs();
    let at = |r: f64| x0 + s * r;
    let c_x = gamma(phi, mu, x0, x, 1.0)?;
    let lc = c_x.ln();
    let fprime = |r: f64| phi.deriv_inv((lc + mu.v(at(r))).exp());

    let mut nodes = breakpoints(mu, 0.0, len);
    nodes.extend(linspace(0.0, len, 400));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut cumulative = vec![0.0; nodes.len()];
    for i in 1..nodes.len() {
        cumulative[i] = cumulative[i - 1] + gk15(&fprime, nodes[i - 1], nodes[i]).0;
    }
    let f_end = cumulative[nodes.len() - 1];
    let d1 = phi.deriv(1.0);
    let tol = Tolerance {
        abs: 1e-300,
        rel: 1e-10,
        max_intervals: 200,
    };
    let mut value = 0.0;
    for i in 1..nodes.len() {
        let (a, b, base) = (nodes[i - 1], nodes[i], cumulative[i - 1]);
        let integrand = |r: f64| {
            let f = base + gk15(&fprime, a, r).0;
            let fp = fprime(r);
            let g = phi.deriv(f);
            let log_deriv = phi.deriv2(f) * fp / g;
            let w = g / d1;
            h.value(log_deriv) * w * w * mu.density(at(r))
        };
        value += integrate(&integrand, a, b, tol).value;
    }

    let theta = phi.theta();
    let cap = 1.0 / theta.max(eta);
    let grid = linspace(x0, x, 2000);
    let regular = |t: f64| {
        let d = s * mu.dv(t);
        let psi = mu.d2v(t) / (d * d);
        d > 0.0 && psi > -1.0 && psi < cap
    };
    let mut regular_from = x;
    for &t in grid.iter().rev() {
        if !regular(t) {
            break;
        }
        regular_from = t;
    }
    hypotheses.push(HypothesisCheck::new(
        "V' > 0 and -1 < V''/V'^2 < 1/max(theta, eta) near x",
        regular(x),
        Some(x),
    ));

    let wx = mu.v(x);
    let dx = s * mu.dv(x);
    let envelope = (-wx).exp() * phi.deriv(dx);
    let cx_bound_exponential = (-wx).exp() * phi.deriv(2.0 * dx.exp());
    let cx_bound_linear = (-wx).exp() * phi.deriv(2.0 * dx);
    Ok(AlphaTildeEstimate {
        x,
        x0,
        c_x,
        f_end,
        value,
        envelope,
        ratio: value / envelope,
        eta,
        gamma: gamma_c,
        cx_bound_exponential,
        cx_exponential_holds: c_x <= cx_bound_exponential,
        cx_bound_linear,
        cx_linear_holds: c_x <= cx_bound_linear,
        regular_from,
        hypotheses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn normalised_and_bounded_ratio() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
        let phi = YoungFn::power(3.0).unwrap();
        let ests: Vec<_> = [5.0, 7.0, 10.0].iter().map(|&x| alpha_tilde_upper(&phi, &mu, x, None).unwrap()).collect();
        for e in &ests {
            assert!((e.f_end - 1.0).abs() < 1e-8, "{}", e.f_end);
            assert!(e.value > 0.0 && e.value.is_finite());
        }
        let (lo, hi) = ests.iter().fold((f64::INFINITY, 0.0f64), |(l, h), e| (l.min(e.ratio), h.max(e.ratio)));
        assert!(hi / lo < 10.0, "ratios {lo} {hi}");
    }

    #[test]
    fn infinite_gamma_rejected() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        assert!(matches!(alpha_tilde_upper(&phi, &mu, 5.0, None), Err(Error::Hypothesis { .. })));
    }
}
