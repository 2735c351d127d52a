use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::variational::gamma;
use crate::error::{Error, Result};
use crate::hardy::search::{decide, log_weight, side_sup, symbolic_divergence};
use crate::hardy::{poincare_bounds, two_sided, CriterionKind, CriterionReport, Curve, HypothesisCheck, SideValues};
use crate::measure::{PotentialSpec, Side};
use crate::numeric::linspace;
use crate::young::{check_growth, YoungFn};

/// Lower bound `ε` on `(q-1) n(x)^{-1/(q-1)} / ∫_m^x n^{-1/(q-1)}` from a
/// bounded window and a drift bound outside it, valid on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonCertificate {
    pub epsilon: f64,
    pub q: f64,
    #[serde(rename = "K")]
    pub window_k: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub delta: f64,
    /// Grid infimum of the ratio itself.
    pub epsilon_grid: f64,
}

pub fn epsilon_formula(q: f64, window_k: f64, c: f64, delta: f64) -> f64 {
    1.0 / (1.0 / delta + window_k / (q - 1.0) * (2.0 * c / (q - 1.0)).exp())
}

/// Tail masses probed on each side of the median.
pub(crate) fn probe_levels() -> Vec<f64> {
    let mut v: Vec<f64> = (1..=40).map(|k| 0.5 * (1.0 - 2f64.powi(-k))).collect();
    v.extend((1..=200).map(|k| 0.5 * 2f64.powf(-0.5 * k as f64)));
    v
}

/// Builds the certificate with `K` defaulting to the distance from the
/// median to the 0.95 quantile.
pub fn epsilon_certificate(mu: &PotentialSpec, q: f64, window_k: Option<f64>) -> Result<EpsilonCertificate> {
    if !(q > 1.0) {
        return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    let m = mu.median();
    let k = window_k.unwrap_or_else(|| mu.quantile(0.95) - m);
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("window length must be positive, got {k}")));
    }
    let c = linspace(m - k, m + k, 4000).into_iter().map(|t| mu.v(t).abs()).fold(0.0, f64::max);
    let mut delta = f64::INFINITY;
    for side in Side::both() {
        let s = side.sign();
        let far = mu.tail_quantile(1e-30, side);
        if s * (far - (m + s * k)) > 0.0 {
            for t in linspace(m + s * k, far, 4000) {
                delta = delta.min(s * mu.dv(t));
            }
        }
    }
    if matches!(mu.family().tail_power(), Some(p) if p < 1.0) {
        delta = 0.0;
    }
    if !(delta > 0.0) {
        return Err(Error::NoDriftCertificate(format!(
            "inf of sign(x) V'(x) beyond the window is {delta:e}"
        )));
    }
    let s = 1.0 / (q - 1.0);
    let epsilon_grid = Side::both()
        .into_par_iter()
        .flat_map(|side| probe_levels().into_par_iter().map(move |tau| (side, tau)))
        .map(|(side, tau)| {
            let x = mu.tail_quantile(tau, side);
            let inner = match side {
                Side::Right => mu.log_inner_integral(m, x, s),
                Side::Left => mu.log_inner_integral(x, m, s),
            };
            ((q - 1.0).ln() + s * mu.v(x) - inner).exp()
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(EpsilonCertificate {
        epsilon: epsilon_formula(q, k, c, delta),
        q,
        window_k: k,
        c,
        delta,
        epsilon_grid,
    })
}

/// `B_q^±` with the two-sided bounds on the best constant `κ_q` of
/// `Ent_μ(f^2) <= κ_q ∫ H_q(f'/f) f^2 dν`. The lower bound uses the
/// certificate when one is supplied.
pub fn b_q(mu: &PotentialSpec, nu: &PotentialSpec, q: f64, certificate: Option<&EpsilonCertificate>) -> Result<CriterionReport> {
    if !(q >= 2.0) {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    let t = two_sided(mu, nu, 1.0 / (q - 1.0), q - 1.0, true, q);
    let poincare = poincare_bounds(mu, nu)?;
    let max = t.values.max();
    let upper = 235.0 * poincare.upper_bound + 2f64.powf(q + 1.0) * max;
    let mut lower = 2.0 * poincare.lower_bound;
    if let Some(cert) = certificate {
        let factor = 3.0 * cert.epsilon.powf(q - 2.0).min(1.0) / (4.0 * (q - 1.0).powf(q - 1.0));
        lower = lower.max(factor * max);
    }
    let mut report = CriterionReport::assemble(CriterionKind::MlsiQ, t.values, lower, upper, t.argmax);
    report.grid_evidence = t.grid_evidence;
    report.curve = t.curve;
    report.hypotheses = poincare.hypotheses;
    report.hypotheses.push(HypothesisCheck::new("q >= 2", true, None));
    report.hypotheses.push(HypothesisCheck::new(
        "epsilon condition certified",
        certificate.is_some_and(|c| c.q == q),
        None,
    ));
    Ok(report)
}

/// `B_q` on one side only.
pub fn b_q_side(mu: &PotentialSpec, nu: &PotentialSpec, q: f64, side: Side) -> f64 {
    let t = two_sided(mu, nu, 1.0 / (q - 1.0), q - 1.0, true, q);
    match side {
        Side::Right => t.values.b_plus,
        Side::Left => t.values.b_minus,
    }
}

/// Checks that `Φ` is strictly convex with `Φ(x)/x^2` non-decreasing and
/// `Φ(x)/x^θ` non-increasing.
pub(crate) fn phi_hypotheses(phi: &YoungFn) -> Vec<HypothesisCheck> {
    let growth = check_growth(phi, 2.0, phi.theta());
    let convex = crate::numeric::log_grid(1e-6, 1e6, 64).into_iter().find(|&x| !(phi.deriv2(x) > 0.0));
    vec![
        HypothesisCheck::new("Phi strictly convex", convex.is_none(), convex),
        HypothesisCheck::new(
            "Phi(x)/x^2 non-decreasing and Phi(x)/x^theta non-increasing",
            growth.holds,
            growth.violation.map(|v| v.x),
        ),
    ]
}

/// `C_±(Φ) = sup τ log(1/τ) ‖1_{[m,x]}/n‖_{2Φ'^{-1}}` with the bound
/// `κ <= 235 C_P + 16 θ Φ(1) max C_±`.
pub fn c_phi(phi: &YoungFn, mu: &PotentialSpec, nu: &PotentialSpec) -> Result<CriterionReport> {
    let hypotheses = phi_hypotheses(phi);
    if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
        return Err(Error::hypothesis(h.name.clone(), h.location.unwrap_or(f64::NAN)));
    }
    let m = mu.median();
    let symbolic = match phi.tail_exponent() {
        Some(q) if mu.family().label() == nu.family().label() => symbolic_divergence(mu.family(), 1.0, q),
        _ => None,
    };
    let run = |side: Side| {
        side_sup(
            mu.log_tail(m, side),
            |lt| mu.tail_quantile(lt.exp(), side),
            |x| match gamma(phi, nu, m, x, 0.5) {
                Ok(g) => log_weight(mu.log_tail(x, side), true) - g.ln(),
                Err(_) => f64::NAN,
            },
        )
    };
    let (plus, minus) = rayon::join(|| run(Side::Right), || run(Side::Left));
    let (b_plus, ge_plus) = decide(&plus, symbolic);
    let (b_minus, ge_minus) = decide(&minus, symbolic);
    let values = SideValues { b_plus, b_minus };
    let poincare = poincare_bounds(mu, nu)?;
    let upper = 235.0 * poincare.upper_bound + 16.0 * phi.theta() * phi.value(1.0) * values.max();
    let argmax = if b_plus >= b_minus { plus.argmax } else { minus.argmax };
    let mut report = CriterionReport::assemble(CriterionKind::MlsiPhi, values, 2.0 * poincare.lower_bound, upper, argmax);
    report.grid_evidence = ge_plus || ge_minus;
    report.curve = Curve {
        plus: plus.curve,
        minus: minus.curve,
    };
    report.hypotheses = hypotheses;
    report.hypotheses.extend(poincare.hypotheses);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    fn spec(f: PotentialFamily) -> PotentialSpec {
        PotentialSpec::new(f).unwrap()
    }

    #[test]
    fn double_exp_certificate() {
        let mu = spec(PotentialFamily::DoubleExp);
        let c = epsilon_certificate(&mu, 2.0, Some(1.0)).unwrap();
        let expected = 1.0 / (1.0 + (2.0 * (1.0 + 2f64.ln())).exp());
        assert!((c.c - (1.0 + 2f64.ln())).abs() < 1e-12);
        assert!((c.delta - 1.0).abs() < 1e-12);
        assert!((c.epsilon - expected).abs() < 1e-12);
        assert!(c.epsilon_grid >= c.epsilon);
    }

    #[test]
    fn no_drift_for_slow_potential() {
        let mu = spec(PotentialFamily::PowerLaw { p: 0.8 });
        assert!(matches!(epsilon_certificate(&mu, 2.0, None), Err(Error::NoDriftCertificate(_))));
    }

    #[test]
    fn b2_equals_bobkov_gotze() {
        let mu = spec(PotentialFamily::PowerLaw { p: 2.0 });
        let a = b_q(&mu, &mu, 2.0, None).unwrap();
        let b = crate::hardy::bobkov_gotze(&mu, &mu).unwrap();
        assert!((a.side_values.b_plus - b.side_values.b_plus).abs() < 1e-12 * b.side_values.b_plus);
    }

    #[test]
    fn corollary_examples() {
        let mu = spec(PotentialFamily::PowerLaw { p: 1.5 });
        let cert = epsilon_certificate(&mu, 3.0, None).unwrap();
        let r = b_q(&mu, &mu, 3.0, Some(&cert)).unwrap();
        assert!(r.finite && r.lower_bound <= r.upper_bound);
        let slow = spec(PotentialFamily::PowerLaw { p: 1.2 });
        assert!(!b_q(&slow, &slow, 2.0, None).unwrap().finite);
    }

    #[test]
    fn c_phi_finite_for_matching_tail() {
        let mu = spec(PotentialFamily::PowerLaw { p: 1.5 });
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        let r = c_phi(&phi, &mu, &mu).unwrap();
        assert!(r.finite, "{:?}", r.side_values);
        assert!(r.side_values.b_plus > 0.0);
    }
}
