use serde::{Serialize, Serializer};

use super::criteria::phi_hypotheses;
use crate::error::{Error, Result};
use crate::hardy::HypothesisCheck;
use crate::measure::{PotentialSpec, Side};
use crate::numeric::log_grid;
use crate::young::{gamma_constant, YoungFn};

const PER_DECADE: usize = 64;
const TREND: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifyMode {
    /// Power modification `H_q`: finite limsup of `V/|V'|^q` iff the
    /// inequality holds.
    Critq,
    /// Finite limsup of `V/Φ(|V'|)` suffices.
    CritphiSufficient,
    /// Finite limsup of `V/Φ(|V'|)` is necessary.
    CritphiNecessary,
}

#[derive(Debug, Clone)]
pub enum ClassifyTarget {
    Q(f64),
    Phi(YoungFn),
}

/// Whether the modified log-Sobolev inequality holds, as far as the chosen
/// theorem can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    Inapplicable,
}

impl Verdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            _ => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Holds => s.serialize_bool(true),
            Verdict::Fails => s.serialize_bool(false),
            Verdict::Inconclusive => s.serialize_str("inconclusive"),
            Verdict::Inapplicable => s.serialize_str("inapplicable"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SideEvidence {
    pub side: Side,
    /// Max of the ratio over the last decade of the grid.
    pub last_decade_max: f64,
    pub previous_decade_max: f64,
    pub limsup_finite: bool,
    #[serde(skip)]
    pub curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub mode: ClassifyMode,
    pub verdict: Verdict,
    pub limsup_finite: bool,
    /// The limsup test is a finite-grid trend heuristic.
    pub heuristic: bool,
    pub evidence: Vec<SideEvidence>,
    pub hypotheses: Vec<HypothesisCheck>,
}

struct Scan {
    evidence: SideEvidence,
    drift_ok: bool,
    psi_last: (f64, f64),
    psi_abs_last: f64,
    psi_abs_prev: f64,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn scan<R: Fn(f64) -> f64>(mu: &PotentialSpec, side: Side, ratio: R) -> Scan {
    let m = mu.median();
    let s = side.sign();
    let r0 = (mu.tail_quantile(1e-3, side) - m).abs().max(1.0);
    let r1 = 1e4 * (mu.tail_quantile(1e-15, side) - m).abs().max(r0);
    let grid: Vec<f64> = log_grid(r0, r1, PER_DECADE).into_iter().map(|r| m + s * r).collect();
    let n = grid.len();
    let split_last = n - PER_DECADE - 1;
    let split_prev = split_last - PER_DECADE;
    let vals: Vec<f64> = grid.iter().map(|&x| ratio(x)).collect();
    let drift: Vec<f64> = grid.iter().map(|&x| s * mu.dv(x)).collect();
    let psi: Vec<f64> = grid
        .iter()
        .zip(&drift)
        .map(|(&x, &d)| mu.d2v(x) / (d * d))
        .collect();
    let last = &vals[split_last..];
    let prev = &vals[split_prev..split_last];
    let (last_max, prev_max) = (max_of(last), max_of(prev));
    let limsup_finite = last_max.is_finite() && last_max <= TREND * prev_max.max(0.0) + f64::MIN_POSITIVE;
    let drift_last = min_of(&drift[split_last..]);
    let drift_prev = min_of(&drift[split_prev..split_last]);
    let slow_tail = matches!(mu.family().tail_power(), Some(p) if p < 1.0);
    let abs = |v: &[f64]| v.iter().map(|p| p.abs()).fold(0.0, f64::max);
    Scan {
        evidence: SideEvidence {
            side,
            last_decade_max: last_max,
            previous_decade_max: prev_max,
            limsup_finite,
            curve: grid.iter().copied().zip(vals.iter().copied()).collect(),
        },
        drift_ok: !slow_tail && drift_last > 0.0 && drift_last >= 0.9 * drift_prev,
        psi_last: (min_of(&psi[split_prev..]), max_of(&psi[split_prev..])),
        psi_abs_last: abs(&psi[split_last..]),
        psi_abs_prev: abs(&psi[split_prev..split_last]),
    }
}

/// Decides the modified log-Sobolev inequality for `μ` from the tail
/// behaviour of `V/|V'|^q` or `V/Φ(|V'|)`. The limsup is estimated on a
/// geometric grid reaching `10^4` times the `10^{-15}` quantile: growth of
/// more than 1% from the second-to-last to the last decade counts as
/// divergence. Hypotheses of the underlying theorem are checked on the
/// same grid and a failure yields [`Verdict::Inapplicable`].
pub fn classify(mu: &PotentialSpec, target: &ClassifyTarget, mode: ClassifyMode) -> Result<Classification> {
    let phi = match (target, mode) {
        (ClassifyTarget::Q(q), ClassifyMode::Critq) => {
            if !(*q >= 2.0) {
                return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
            }
            None
        }
        (ClassifyTarget::Q(q), _) => Some(YoungFn::power(*q)?),
        (ClassifyTarget::Phi(p), ClassifyMode::Critq) => match p.tail_exponent() {
            Some(q) if p.alpha() == p.theta() => {
                return classify(mu, &ClassifyTarget::Q(q), mode);
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "critq mode needs an exponent q or a pure power Young function".into(),
                ))
            }
        },
        (ClassifyTarget::Phi(p), _) => Some(p.clone()),
    };
    let ratio = |x: f64| {
        let d = mu.dv(x).abs();
        match (&phi, target) {
            (Some(p), _) => mu.v(x) / p.value(d),
            (None, ClassifyTarget::Q(q)) => mu.v(x) / d.powf(*q),
            _ => unreachable!(),
        }
    };
    let scans: Vec<Scan> = Side::both().into_iter().map(|side| scan(mu, side, ratio)).collect();
    let drift_ok = scans.iter().all(|s| s.drift_ok);
    let mut hypotheses = vec![HypothesisCheck::new("liminf sign(x) V'(x) > 0", drift_ok, None)];
    match &phi {
        None => {
            let vanishing = scans
                .iter()
                .all(|s| s.psi_abs_last < 0.05 && s.psi_abs_last <= TREND * s.psi_abs_prev + 1e-12);
            hypotheses.push(HypothesisCheck::new("V''/V'^2 -> 0", vanishing, None));
        }
        Some(p) => {
            hypotheses.extend(phi_hypotheses(p));
            hypotheses.push(HypothesisCheck::new("theta > 2", p.theta() > 2.0, None));
            let cap = if mode == ClassifyMode::CritphiNecessary {
                let eta = p.eta();
                let gamma = gamma_constant(p);
                hypotheses.push(HypothesisCheck::new("Phi'(x)/x^eta non-increasing (eta finite)", eta.is_finite(), None));
                hypotheses.push(HypothesisCheck::new("Gamma finite", gamma.is_finite(), None));
                1.0 / p.theta().max(eta)
            } else {
                1.0 / p.theta()
            };
            let window = scans.iter().all(|s| s.psi_last.0 > -1.0 && s.psi_last.1 < cap);
            hypotheses.push(HypothesisCheck::new("-1 < V''/V'^2 < cap in the tails", window, None));
        }
    }
    let limsup_finite = scans.iter().all(|s| s.evidence.limsup_finite);
    let verdict = if hypotheses.iter().any(|h| !h.holds) {
        Verdict::Inapplicable
    } else {
        match (mode, limsup_finite) {
            (ClassifyMode::Critq, true) | (ClassifyMode::CritphiSufficient, true) => Verdict::Holds,
            (ClassifyMode::Critq, false) | (ClassifyMode::CritphiNecessary, false) => Verdict::Fails,
            _ => Verdict::Inconclusive,
        }
    };
    Ok(Classification {
        mode,
        verdict,
        limsup_finite,
        heuristic: true,
        evidence: scans.into_iter().map(|s| s.evidence).collect(),
        hypotheses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    fn run(p: f64, q: f64) -> Verdict {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p }).unwrap();
        classify(&mu, &ClassifyTarget::Q(q), ClassifyMode::Critq).unwrap().verdict
    }

    #[test]
    fn corollary_cases() {
        assert_eq!(run(1.5, 3.0), Verdict::Holds);
        assert_eq!(run(1.2, 2.0), Verdict::Fails);
        assert_eq!(run(2.0, 2.0), Verdict::Holds);
    }

    #[test]
    fn slow_tail_inapplicable() {
        assert_eq!(run(0.8, 2.0), Verdict::Inapplicable);
    }

    #[test]
    fn phi_modes() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        let c = classify(&mu, &ClassifyTarget::Phi(phi), ClassifyMode::CritphiSufficient).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        let p3 = YoungFn::power(3.0).unwrap();
        let slow = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.2 }).unwrap();
        let c = classify(&slow, &ClassifyTarget::Phi(p3), ClassifyMode::CritphiNecessary).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(serde_json::to_value(Verdict::Fails).unwrap(), serde_json::json!(false));
    }
}
