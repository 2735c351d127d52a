//! Classical criteria: Muckenhoupt's constant for weighted Hardy
//! inequalities on a half-line, and the median-anchored quantities that
//! bracket the Poincaré and log-Sobolev constants.

mod report;
pub(crate) mod search;

pub use report::{CriterionKind, CriterionReport, Curve, HypothesisCheck, SideValues};

use search::{decide, log_weight, side_sup, symbolic_divergence, SideSup};

use crate::error::{Error, Result};
use crate::measure::{HalfLine, PotentialSpec, Side};

/// Multiplier from `B` to the upper end of the Hardy bracket.
pub fn hardy_factor(p: f64) -> f64 {
    p.powf(p) / (p - 1.0).powf(p - 1.0)
}

/// Integrand of the median-anchored criterion at `x`:
/// `w(τ) (∫ n^{-s})^{power}` with `τ` the `μ`-tail beyond `x` on `side`,
/// `w(τ) = τ` or `τ log(1/τ)`, and the integral of `ν`'s density between
/// the median and `x`.
pub fn integrand(mu: &PotentialSpec, nu: &PotentialSpec, x: f64, side: Side, s: f64, power: f64, with_log: bool) -> f64 {
    log_integrand(mu, nu, mu.median(), x, side, s, power, with_log).exp()
}

#[allow(clippy::too_many_arguments)]
fn log_integrand(mu: &PotentialSpec, nu: &PotentialSpec, m: f64, x: f64, side: Side, s: f64, power: f64, with_log: bool) -> f64 {
    let inner = match side {
        Side::Right => nu.log_inner_integral(m, x, s),
        Side::Left => nu.log_inner_integral(x, m, s),
    };
    log_weight(mu.log_tail(x, side), with_log) + power * inner
}

/// Both sides of a median-anchored supremum.
#[derive(Debug, Clone)]
pub(crate) struct TwoSided {
    pub values: SideValues,
    pub argmax: f64,
    pub grid_evidence: bool,
    pub curve: Curve,
}

/// `sup w(τ)(∫ n^{-s})^{power}` on each side of the median. `q` selects the
/// symbolic divergence rule `x^{ℓp - q(p-1)}`.
pub(crate) fn two_sided(mu: &PotentialSpec, nu: &PotentialSpec, s: f64, power: f64, with_log: bool, q: f64) -> TwoSided {
    let m = mu.median();
    let symbolic = if mu.family().label() == nu.family().label() {
        symbolic_divergence(mu.family(), if with_log { 1.0 } else { 0.0 }, q)
    } else {
        None
    };
    let run = |side: Side| -> SideSup {
        side_sup(
            mu.log_tail(m, side),
            |lt| mu.tail_quantile(lt.exp(), side),
            |x| log_integrand(mu, nu, m, x, side, s, power, with_log),
        )
    };
    let (plus, minus) = rayon::join(|| run(Side::Right), || run(Side::Left));
    let (b_plus, ge_plus) = decide(&plus, symbolic);
    let (b_minus, ge_minus) = decide(&minus, symbolic);
    let argmax = if b_plus >= b_minus { plus.argmax } else { minus.argmax };
    TwoSided {
        values: SideValues { b_plus, b_minus },
        argmax,
        grid_evidence: ge_plus || ge_minus,
        curve: Curve {
            plus: plus.curve,
            minus: minus.curve,
        },
    }
}

fn median_check(mu: &PotentialSpec) -> HypothesisCheck {
    let m = mu.median();
    HypothesisCheck::new("median normalised", (mu.cdf(m) - 0.5).abs() <= 1e-8, Some(m))
}

/// Muckenhoupt's `B = sup_{x>0} μ([x,∞)) (∫_0^x n^{-1/(p-1)})^{p-1}` for a
/// Hardy inequality on `[0, ∞)` with the pinned condition `f(0) = 0`. The
/// report brackets the best Hardy constant by `[B, p^p/(p-1)^{p-1} B]`.
pub fn muckenhoupt(mu: &HalfLine, nu: &HalfLine, p: f64) -> Result<CriterionReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("Hardy exponent p must exceed 1, got {p}")));
    }
    let s = 1.0 / (p - 1.0);
    let total = mu.total_mass();
    let sup = side_sup(
        total.ln(),
        |lt| mu.tail_point((lt.exp() / total).min(1.0)),
        |x| mu.tail(x).ln() + (p - 1.0) * nu.log_inner(x, s),
    );
    let symbolic = match (mu, nu) {
        (HalfLine::Uniform { .. }, HalfLine::Uniform { .. }) => Some(false),
        (HalfLine::Exponential { rate: a }, HalfLine::Exponential { rate: b }) => Some(a < b),
        (HalfLine::Restricted(a), HalfLine::Restricted(b)) if a.family().label() == b.family().label() => {
            symbolic_divergence(a.family(), 0.0, p)
        }
        _ => None,
    };
    let (b, grid_evidence) = decide(&sup, symbolic);
    let mut report = CriterionReport::assemble(
        crate::hardy::CriterionKind::Hardy,
        SideValues { b_plus: b, b_minus: 0.0 },
        b,
        hardy_factor(p) * b,
        sup.argmax,
    );
    report.grid_evidence = grid_evidence;
    report.curve.plus = sup.curve;
    report.hypotheses.push(HypothesisCheck::new("p > 1", true, None));
    Ok(report)
}

/// Brackets the Poincaré constant `C_P` of `Var_μ(f) <= C_P ∫ f'^2 dν` by
/// `[max B_±, 4 max B_±]`.
pub fn poincare_bounds(mu: &PotentialSpec, nu: &PotentialSpec) -> Result<CriterionReport> {
    let t = two_sided(mu, nu, 1.0, 1.0, false, 2.0);
    let max = t.values.max();
    let mut report = CriterionReport::assemble(CriterionKind::Poincare, t.values, max, 4.0 * max, t.argmax);
    report.grid_evidence = t.grid_evidence;
    report.curve = t.curve;
    report.hypotheses.push(median_check(mu));
    Ok(report)
}

/// The Bobkov–Götze quantity `sup μ([x,∞)) log(1/μ([x,∞))) ∫_m^x 1/n` on
/// both sides. The bracket for the log-Sobolev constant of
/// `Ent_μ(f^2) <= C ∫ f'^2 dν` is `[2 C_P^-, 235 C_P^+ + 8 max B_±]`, where
/// `C_P^∓` are the Poincaré bracket ends.
pub fn bobkov_gotze(mu: &PotentialSpec, nu: &PotentialSpec) -> Result<CriterionReport> {
    let t = two_sided(mu, nu, 1.0, 1.0, true, 2.0);
    let poincare = poincare_bounds(mu, nu)?;
    let lower = 2.0 * poincare.lower_bound;
    let upper = 235.0 * poincare.upper_bound + 8.0 * t.values.max();
    let mut report = CriterionReport::assemble(CriterionKind::LogSobolev, t.values, lower, upper, t.argmax);
    report.grid_evidence = t.grid_evidence;
    report.curve = t.curve;
    report.hypotheses.push(median_check(mu));
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
    fn uniform_hardy() {
        let u = HalfLine::uniform(1.0).unwrap();
        let r = muckenhoupt(&u, &u, 2.0).unwrap();
        assert!((r.side_values.b_plus - 0.25).abs() < 1e-12);
        assert!((r.argmax_location - 0.5).abs() < 1e-6);
        assert!((r.upper_bound - 1.0).abs() < 1e-11);
    }

    #[test]
    fn exponential_hardy() {
        let e = HalfLine::exponential(1.0).unwrap();
        let r = muckenhoupt(&e, &e, 2.0).unwrap();
        assert!(r.finite);
        assert!((r.side_values.b_plus - 1.0).abs() < 1e-9);
    }

    #[test]
    fn double_exp_poincare() {
        let mu = spec(PotentialFamily::DoubleExp);
        let r = poincare_bounds(&mu, &mu).unwrap();
        assert!((r.side_values.b_plus - 1.0).abs() < 1e-9, "{:?}", r.side_values);
        assert!((r.side_values.b_minus - 1.0).abs() < 1e-9);
        assert!((r.upper_bound - 4.0).abs() < 4e-9);
    }

    #[test]
    fn gaussian_poincare_peak() {
        let mu = spec(PotentialFamily::Gaussian);
        let r = poincare_bounds(&mu, &mu).unwrap();
        assert!((r.side_values.b_plus - 0.48).abs() < 0.02, "{:?}", r.side_values);
        assert!((r.argmax_location.abs() - 0.9).abs() < 0.1, "{}", r.argmax_location);
    }

    #[test]
    fn slow_potential_has_no_gap() {
        let mu = spec(PotentialFamily::PowerLaw { p: 0.8 });
        let r = poincare_bounds(&mu, &mu).unwrap();
        assert!(!r.finite);
        assert_eq!(r.side_values.b_plus, f64::INFINITY);
    }

    #[test]
    fn log_sobolev_verdicts() {
        for (f, finite) in [
            (PotentialFamily::Gaussian, true),
            (PotentialFamily::DoubleExp, false),
            (PotentialFamily::PowerLaw { p: 4.0 }, true),
        ] {
            let mu = spec(f.clone());
            let r = bobkov_gotze(&mu, &mu).unwrap();
            assert_eq!(r.finite, finite, "{f:?}");
            assert!(r.lower_bound <= r.upper_bound);
        }
    }

    #[test]
    fn log_weight_factor_pointwise() {
        let mu = spec(PotentialFamily::PowerLaw { p: 1.5 });
        for x in [0.3, 1.0, 4.0] {
            let a = integrand(&mu, &mu, x, Side::Right, 1.0, 1.0, false);
            let b = integrand(&mu, &mu, x, Side::Right, 1.0, 1.0, true);
            let t = mu.tail(x, Side::Right);
            assert!((b / a - (1.0 / t).ln()).abs() < 1e-10);
            assert!(b >= a * 2f64.ln());
        }
    }
}
