use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::HypothesisCheck;
use crate::measure::{Density, PotentialSpec, Side};
use crate::numeric::roots::{bisect_predicate, solve_positive};
use crate::numeric::{integrate_breaks, linspace, Tolerance};
use crate::young::YoungFn;

const SOLVE_TOL: f64 = 1e-12;

/// Result of the constrained minimisation `β = inf{∫Φ(g)dν : g >= 0, ∫g = a}`
/// on the interval between `m` and `x`, and the multiplier `γ` solving
/// `∫ Φ'^{-1}(γ/n) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalPair {
    pub gamma: f64,
    pub beta: f64,
    pub x: f64,
    pub a: f64,
}

pub(crate) fn interval(m: f64, x: f64) -> (f64, f64) {
    if x >= m {
        (m, x)
    } else {
        (x, m)
    }
}

/// Breakpoints that resolve integrands concentrating at either end.
pub(crate) fn breakpoints<N: Density + ?Sized>(nu: &N, a: f64, b: f64) -> Vec<f64> {
    let w = b - a;
    let mut pts: Vec<f64> = vec![a, b];
    for j in 1..=40 {
        let h = w * 2f64.powi(-j);
        pts.push(a + h);
        pts.push(b - h);
    }
    pts.extend(linspace(a, b, 16));
    pts.extend(nu.kinks(a, b));
    pts.retain(|p| *p >= a && *p <= b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

pub(crate) fn integrate_on<N: Density + ?Sized, F: Fn(f64) -> f64>(nu: &N, a: f64, b: f64, f: F) -> f64 {
    if b <= a {
        return 0.0;
    }
    let tol = Tolerance {
        abs: 1e-300,
        rel: 1e-13,
        max_intervals: 6000,
    };
    integrate_breaks(&f, &breakpoints(nu, a, b), tol).value
}

fn vanishes<N: Density + ?Sized>(nu: &N, a: f64, b: f64) -> bool {
    breakpoints(nu, a, b).iter().any(|&t| nu.log_density(t) == f64::NEG_INFINITY)
}

/// `∫ Φ'^{-1}(λ/n)` between `m` and `x`.
pub fn inverse_integral<N: Density + ?Sized>(phi: &YoungFn, nu: &N, m: f64, x: f64, lambda: f64) -> f64 {
    let (a, b) = interval(m, x);
    if vanishes(nu, a, b) {
        return f64::INFINITY;
    }
    let l = lambda.ln();
    integrate_on(nu, a, b, |t| phi.deriv_inv((l - nu.log_density(t)).exp()))
}

/// `γ_{x,a}`, zero when `n` vanishes on part of the interval.
pub fn gamma<N: Density + ?Sized>(phi: &YoungFn, nu: &N, m: f64, x: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("budget a must be positive, got {a}")));
    }
    let (lo, hi) = interval(m, x);
    if hi <= lo || vanishes(nu, lo, hi) {
        return Ok(0.0);
    }
    // initial guess from the density at the far end
    let start = phi.deriv(a / (hi - lo)) * nu.density(if x >= m { hi } else { lo }).max(1e-300);
    solve_positive(|l| inverse_integral(phi, nu, m, x, l), a, start.clamp(1e-250, 1e250), SOLVE_TOL)
}

pub fn gamma_beta<N: Density + ?Sized>(phi: &YoungFn, nu: &N, m: f64, x: f64, a: f64) -> Result<VariationalPair> {
    let g = gamma(phi, nu, m, x, a)?;
    if g == 0.0 {
        return Ok(VariationalPair { gamma: 0.0, beta: 0.0, x, a });
    }
    let (lo, hi) = interval(m, x);
    let l = g.ln();
    let beta = integrate_on(nu, lo, hi, |t| {
        let ln = nu.log_density(t);
        phi.value(phi.deriv_inv((l - ln).exp())) * ln.exp()
    });
    Ok(VariationalPair { gamma: g, beta, x, a })
}

/// `‖1_{[m,x]}/n‖` for the gauge function `2Φ'^{-1}`, found by bisection in
/// `δ` on the condition `∫ 2Φ'^{-1}(1/(δn)) <= 1`. `+∞` when the condition
/// cannot be met.
pub fn orlicz_gauge<N: Density + ?Sized>(phi: &YoungFn, nu: &N, m: f64, x: f64) -> Result<f64> {
    let (lo, hi) = interval(m, x);
    if hi <= lo {
        return Ok(0.0);
    }
    if vanishes(nu, lo, hi) {
        return Ok(f64::INFINITY);
    }
    // work in u = ln δ so the bisection is scale free
    let fits = |u: f64| 2.0 * inverse_integral(phi, nu, m, x, (-u).exp()) <= 1.0;
    let mut up = 1.0;
    while !fits(up) {
        up *= 2.0;
        if up > 700.0 {
            return Ok(f64::INFINITY);
        }
    }
    let mut down = -1.0;
    while fits(down) {
        down *= 2.0;
        if down < -700.0 {
            return Ok(0.0);
        }
    }
    let u = bisect_predicate(|u| fits(u), down, up, 0.0);
    Ok(u.exp())
}

/// Outcome of the explicit gauge bound for `n = e^{-V}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeBound {
    pub bound: f64,
    /// `e^C / Φ'(1/(4K))`.
    pub window_term: f64,
    /// `e^{V(x)} / Φ'(V'(x)/(4θ(θ-1)))`, absent inside the window.
    pub tail_term: Option<f64>,
    pub window_k: f64,
    pub sup_abs_v: f64,
    pub hypotheses: Vec<HypothesisCheck>,
}

/// Explicit upper bound on `‖1_{[m,x]}/n‖_{2Φ'^{-1}}` for `n` the density of
/// `mu`, from `|V| <= C` on a window of length `K` past the median and
/// `V' > 0`, `V''/V'^2 <= 1/θ` beyond it.
pub fn gauge_upper_bound(phi: &YoungFn, mu: &PotentialSpec, x: f64, window_k: f64) -> Result<GaugeBound> {
    if !(window_k > 0.0) {
        return Err(Error::InvalidParameter(format!("window length must be positive, got {window_k}")));
    }
    let theta = phi.theta();
    let m = mu.median();
    let side = if x >= m { Side::Right } else { Side::Left };
    let s = side.sign();
    let edge = m + s * window_k;
    let sup_abs_v = linspace(m, edge, 2000).into_iter().map(|t| mu.v(t).abs()).fold(0.0, f64::max);
    let window_term = sup_abs_v.exp() / phi.deriv(1.0 / (4.0 * window_k));
    let mut hypotheses = vec![HypothesisCheck::new("theta > 1", theta > 1.0, None)];
    if s * (x - edge) <= 0.0 {
        return Ok(GaugeBound {
            bound: window_term,
            window_term,
            tail_term: None,
            window_k,
            sup_abs_v,
            hypotheses,
        });
    }
    let mut drift_fail = None;
    let mut curvature_fail = None;
    for t in linspace(edge, x, 4000) {
        let d = s * mu.dv(t);
        if !(d > 0.0) && drift_fail.is_none() {
            drift_fail = Some(t);
        }
        if mu.d2v(t) / (d * d) > 1.0 / theta && curvature_fail.is_none() {
            curvature_fail = Some(t);
        }
    }
    hypotheses.push(HypothesisCheck::new("V' > 0 beyond window", drift_fail.is_none(), drift_fail));
    hypotheses.push(HypothesisCheck::new(
        "V''/V'^2 <= 1/theta beyond window",
        curvature_fail.is_none(),
        curvature_fail,
    ));
    if let Some(t) = drift_fail {
        return Err(Error::hypothesis("V' > 0 beyond window", t));
    }
    if let Some(t) = curvature_fail {
        return Err(Error::hypothesis("V''/V'^2 <= 1/theta beyond window", t));
    }
    let tail_term = mu.v(x).exp() / phi.deriv(s * mu.dv(x) / (4.0 * theta * (theta - 1.0)));
    Ok(GaugeBound {
        bound: window_term.max(tail_term),
        window_term,
        tail_term: Some(tail_term),
        window_k,
        sup_abs_v,
        hypotheses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{HalfLine, PotentialFamily};

    #[test]
    fn power_closed_forms() {
        let u1 = HalfLine::uniform(1.0).unwrap();
        let p2 = YoungFn::power(2.0).unwrap();
        let r = gamma_beta(&p2, &u1, 0.0, 1.0, 1.0).unwrap();
        assert!((r.gamma - 2.0).abs() < 1e-10 && (r.beta - 1.0).abs() < 1e-10);
        let u2 = HalfLine::uniform(2.0).unwrap();
        let p3 = YoungFn::power(3.0).unwrap();
        let r = gamma_beta(&p3, &u2, 0.0, 2.0, 1.0).unwrap();
        assert!((r.beta - 0.25).abs() < 1e-10);
        assert!((r.beta - r.a * r.gamma / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauge_matches_inverse_gamma() {
        let u1 = HalfLine::uniform(1.0).unwrap();
        let p2 = YoungFn::power(2.0).unwrap();
        assert!((orlicz_gauge(&p2, &u1, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let mu = PotentialSpec::new(PotentialFamily::DoubleExp).unwrap();
        let p3 = YoungFn::power(3.0).unwrap();
        let g = orlicz_gauge(&p3, &mu, 0.0, 5.0).unwrap();
        let gam = gamma(&p3, &mu, 0.0, 5.0, 0.5).unwrap();
        assert!((g * gam - 1.0).abs() < 1e-9);
    }

    #[test]
    fn vanishing_density_is_degenerate() {
        let u1 = HalfLine::uniform(1.0).unwrap();
        let p2 = YoungFn::power(2.0).unwrap();
        assert_eq!(gamma_beta(&p2, &u1, 0.0, 2.0, 1.0).unwrap().beta, 0.0);
        assert_eq!(orlicz_gauge(&p2, &u1, 0.0, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn bound_dominates_gauge() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        for x in [2.0, 5.0, 10.0] {
            let b = gauge_upper_bound(&phi, &mu, x, 1.0).unwrap();
            let g = orlicz_gauge(&phi, &mu, 0.0, x).unwrap();
            assert!(g <= b.bound, "x={x} gauge={g} bound={}", b.bound);
        }
        let inside = gauge_upper_bound(&phi, &mu, 0.5, 1.0).unwrap();
        assert!(inside.tail_term.is_none());
    }
}
