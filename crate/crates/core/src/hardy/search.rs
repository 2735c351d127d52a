//! Supremum of a tail-anchored criterion integrand.
//!
//! The integrand is parametrised by the tail mass `τ` of the evaluation
//! point. Levels are `τ₀(1 - 2^{-k})` close to the anchor and `τ₀ 2^{-k/2}`
//! into the tail; the best level is then refined by golden section in
//! `log τ`.

use rayon::prelude::*;

use crate::measure::PotentialFamily;
use crate::numeric::roots::golden_max;

const NEAR_LEVELS: i32 = 40;
const TAIL_LEVELS: i32 = 200;
/// Levels down to `τ₀ 2^{-50}` form the shallow pass.
const SHALLOW_DEPTH: f64 = 50.0 * std::f64::consts::LN_2;
const GROWTH: f64 = 1.01;

#[derive(Debug, Clone)]
pub(crate) struct SideSup {
    pub value: f64,
    pub argmax: f64,
    pub grows: bool,
    pub curve: Vec<(f64, f64)>,
}

pub(crate) fn side_sup<P, L>(log_tau0: f64, point_at: P, log_value: L) -> SideSup
where
    P: Fn(f64) -> f64 + Sync,
    L: Fn(f64) -> f64 + Sync,
{
    let mut levels: Vec<f64> = (1..=NEAR_LEVELS)
        .map(|k| log_tau0 + (-(2f64.powi(-k))).ln_1p())
        .chain((2..=TAIL_LEVELS).map(|k| log_tau0 - k as f64 * 0.5 * std::f64::consts::LN_2))
        .collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let eval = |lt: f64| {
        let x = point_at(lt);
        let v = log_value(x);
        (x, if v.is_nan() { f64::NEG_INFINITY } else { v })
    };
    let samples: Vec<(f64, f64)> = levels.par_iter().map(|&lt| eval(lt)).collect();

    let mut best = 0;
    let mut shallow = f64::NEG_INFINITY;
    for (i, (&lt, s)) in levels.iter().zip(&samples).enumerate() {
        if s.1 > samples[best].1 {
            best = i;
        }
        if lt >= log_tau0 - SHALLOW_DEPTH {
            shallow = shallow.max(s.1);
        }
    }
    let deep = samples[best].1;
    let curve = samples.iter().map(|&(x, v)| (x, v.exp())).collect();
    let grows = deep == f64::INFINITY || deep - shallow > GROWTH.ln();

    let (mut value, mut argmax) = (deep, samples[best].0);
    if best > 0 && best + 1 < levels.len() && deep.is_finite() {
        let (lt, v) = golden_max(|lt| eval(lt).1, levels[best + 1], levels[best - 1], 1e-12);
        if v > value {
            value = v;
            argmax = point_at(lt);
        }
    }
    SideSup {
        value: value.exp(),
        argmax,
        grows,
        curve,
    }
}

/// `log(t)` or `log(t log(1/t))`, with the log weight vanishing at `t >= 1`.
pub(crate) fn log_weight(log_t: f64, with_log: bool) -> f64 {
    if !with_log {
        return log_t;
    }
    if log_t == f64::NEG_INFINITY || log_t >= 0.0 {
        return f64::NEG_INFINITY;
    }
    log_t + (-log_t).ln()
}

/// Asymptotic behaviour of `t log(1/t)^ℓ (∫ n^{-1/(q-1)})^{q-1}` for a
/// potential of leading power `p`: it grows like `x^{ℓp - q(p-1)}`.
/// `None` when the family has no symbolic tail power.
pub(crate) fn symbolic_divergence(family: &PotentialFamily, ell: f64, q: f64) -> Option<bool> {
    if matches!(family, PotentialFamily::Custom { .. }) {
        return None;
    }
    let p = family.tail_power()?;
    Some(ell * p - q * (p - 1.0) > 1e-12)
}

/// Decides finiteness from grid growth and the symbolic rule. Returns the
/// value to report and whether the grid alone decided.
pub(crate) fn decide(sup: &SideSup, symbolic: Option<bool>) -> (f64, bool) {
    match symbolic {
        _ if sup.value == f64::INFINITY => (f64::INFINITY, false),
        Some(div) => (if div && sup.grows { f64::INFINITY } else { sup.value }, false),
        None => (if sup.grows { f64::INFINITY } else { sup.value }, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_weight_edges() {
        assert_eq!(log_weight(0.0, true), f64::NEG_INFINITY);
        assert!((log_weight(0.5f64.ln(), true) - (0.5 * 2f64.ln()).ln()).abs() < 1e-15);
        assert_eq!(log_weight(-3.0, false), -3.0);
    }

    #[test]
    fn finds_interior_peak() {
        // integrand t(1 - t) with x = 1 - t on the unit interval
        let s = side_sup(0.0, |lt| 1.0 - lt.exp(), |x| ((1.0 - x) * x).ln());
        assert!((s.value - 0.25).abs() < 1e-14);
        assert!((s.argmax - 0.5).abs() < 1e-6);
        assert!(!s.grows);
    }

    #[test]
    fn detects_growth() {
        let s = side_sup(0.0, |lt| -lt, |x| 0.3 * x.ln());
        assert!(s.grows);
        assert_eq!(symbolic_divergence(&PotentialFamily::DoubleExp, 1.0, 2.0), Some(true));
        assert_eq!(symbolic_divergence(&PotentialFamily::Gaussian, 1.0, 2.0), Some(false));
    }
}
