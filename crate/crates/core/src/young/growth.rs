use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dual, YoungFn};
use crate::numeric::log_grid;
use crate::numeric::roots::golden_max;

const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthViolation {
    pub x: f64,
    pub condition: String,
}

/// Outcome of checking `αΦ(x) <= xΦ'_r(x) <= θΦ(x)` on the standard grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub alpha: f64,
    pub theta: f64,
    pub holds: bool,
    /// First failing grid point, scanning upward.
    pub violation: Option<GrowthViolation>,
    /// Observed range of `xΦ'(x)/Φ(x)`.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Differential form of the growth envelope, checked on a log grid over
/// `[1e-6, 1e6]` with 512 points per decade. This is a semi-decision: it
/// can only refute an envelope, never prove it beyond the grid.
pub fn check_growth(phi: &YoungFn, alpha: f64, theta: f64) -> GrowthCheck {
    let grid = log_grid(1e-6, 1e6, 512);
    let ratios: Vec<f64> = grid.par_iter().map(|&x| x * phi.deriv(x) / phi.value(x)).collect();
    let mut violation = None;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for (&x, &r) in grid.iter().zip(&ratios) {
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
        if violation.is_none() {
            if !(r >= alpha * (1.0 - REL_TOL)) {
                violation = Some(GrowthViolation {
                    x,
                    condition: "alpha*Phi(x) <= x*Phi'(x)".into(),
                });
            } else if !(r <= theta * (1.0 + REL_TOL)) {
                violation = Some(GrowthViolation {
                    x,
                    condition: "x*Phi'(x) <= theta*Phi(x)".into(),
                });
            }
        }
    }
    GrowthCheck {
        alpha,
        theta,
        holds: violation.is_none(),
        violation,
        min_ratio,
        max_ratio,
    }
}

/// The three equivalent readings of "`Φ(x)/x^α` is non-decreasing":
/// monotone quotient, `xΦ' >= αΦ`, and `x(Φ*)' <= α*Φ*`, each on the grid.
pub fn envelope_equivalence(phi: &YoungFn, alpha: f64) -> [bool; 3] {
    let grid = log_grid(1e-6, 1e6, 512);
    let quotient: Vec<f64> = grid.iter().map(|&x| phi.value(x) / x.powf(alpha)).collect();
    let monotone = quotient.windows(2).all(|w| w[1] >= w[0] * (1.0 - REL_TOL));
    let differential = grid
        .iter()
        .all(|&x| x * phi.deriv(x) >= alpha * phi.value(x) * (1.0 - REL_TOL));
    let a_star = dual(alpha);
    let dual_form = grid
        .iter()
        .all(|&y| y * phi.deriv_inv(y) <= a_star * phi.conj_value(y) * (1.0 + REL_TOL));
    [monotone, differential, dual_form]
}

/// Submultiplicativity constants. `gamma*` are the constructive bounds
/// derived from `Γ`; `*_grid` are direct grid suprema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Submultiplicativity {
    #[serde(with = "crate::numeric::ext")]
    pub gamma: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma1: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma2: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma3: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma1_grid: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma2_grid: f64,
    #[serde(with = "crate::numeric::ext")]
    pub gamma3_grid: f64,
}

const PER_DECADE: usize = 64;

/// Values of a one-variable function on the extended grid `[1e-12, 1e12]`, so
/// that products of two points of the `[1e-6, 1e6]` grid are grid points too.
struct Table {
    vals: Vec<f64>,
}

impl Table {
    fn new<F: Fn(f64) -> f64 + Sync>(f: F) -> Self {
        Table {
            vals: log_grid(1e-12, 1e12, PER_DECADE).par_iter().map(|&x| f(x)).collect(),
        }
    }
}

/// `sup f(x)f(y)/f(xy)` (or its reciprocal form when `invert`) over the
/// 2-D grid, `+∞` when it grows across two successive box enlargements.
fn sup_ratio<F: Fn(f64) -> f64 + Sync>(f: F, invert: bool) -> f64 {
    let table = Table::new(&f);
    let offset = 6 * PER_DECADE;
    let n = 12 * PER_DECADE + 1;
    let ratio_at = |i: usize, j: usize| {
        let a = table.vals[i + offset];
        let b = table.vals[j + offset];
        let ab = table.vals[i + j];
        let r = if invert { ab / (a * b) } else { a * b / ab };
        if r.is_nan() {
            f64::NEG_INFINITY
        } else {
            r
        }
    };
    // box radius in decades around (1, 1)
    let boxes = [3.0, 4.5, 6.0];
    let per_box: Vec<(f64, usize, usize)> = boxes
        .iter()
        .map(|&rad| {
            let lo = ((6.0 - rad) * PER_DECADE as f64).round() as usize;
            let hi = n - 1 - lo;
            (lo..=hi)
                .into_par_iter()
                .map(|i| {
                    (lo..=hi).fold((f64::NEG_INFINITY, 0, 0), |acc, j| {
                        let r = ratio_at(i, j);
                        if r > acc.0 {
                            (r, i, j)
                        } else {
                            acc
                        }
                    })
                })
                .reduce(|| (f64::NEG_INFINITY, 0, 0), |a, b| if b.0 > a.0 { b } else { a })
        })
        .collect();
    let (s1, s2, (s3, bi, bj)) = (per_box[0].0, per_box[1].0, per_box[2]);
    if s3 == f64::INFINITY || (s3 > 1.01 * s2 && s2 > 1.01 * s1) {
        return f64::INFINITY;
    }
    // local refinement: coordinate-wise golden search in log space
    let grid = log_grid(1e-6, 1e6, PER_DECADE);
    let direct = |lx: f64, ly: f64| {
        let (x, y) = (lx.exp(), ly.exp());
        let r = if invert { f(x * y) / (f(x) * f(y)) } else { f(x) * f(y) / f(x * y) };
        if r.is_nan() {
            f64::NEG_INFINITY
        } else {
            r
        }
    };
    let span = |k: usize| (grid[k.saturating_sub(1)].ln(), grid[(k + 1).min(grid.len() - 1)].ln());
    let (mut lx, mut ly) = (grid[bi].ln(), grid[bj].ln());
    let mut best = s3;
    for _ in 0..3 {
        let (a, b) = span(bi);
        let (x, v) = golden_max(|u| direct(u, ly), a, b, 1e-10);
        if v > best {
            best = v;
            lx = x;
        }
        let (a, b) = span(bj);
        let (y, v) = golden_max(|u| direct(lx, u), a, b, 1e-10);
        if v > best {
            best = v;
            ly = y;
        }
    }
    best
}

/// `Γ = sup Φ(x)Φ(y)/Φ(xy)` alone.
pub fn gamma_constant(phi: &YoungFn) -> f64 {
    sup_ratio(|x| phi.value(x), false)
}

pub fn submultiplicativity_constants(phi: &YoungFn) -> Submultiplicativity {
    let gamma = gamma_constant(phi);
    let gamma1_grid = sup_ratio(|x| phi.deriv(x), false);
    let gamma2_grid = sup_ratio(|x| phi.deriv_inv(x), true);
    let gamma3_grid = sup_ratio(|x| phi.conj_value(x), true);
    let (a, t) = (phi.alpha(), phi.theta());
    let (a_star, t_star) = (dual(a), dual(t));
    let gamma1 = t * t * gamma / a;
    let gamma2 = if gamma1.is_finite() {
        (a_star / t_star) * gamma1.powf(a_star - 1.0).max(gamma1.powf(t_star - 1.0))
    } else {
        f64::INFINITY
    };
    let gamma3 = a_star * a_star * gamma2 / t_star;
    Submultiplicativity {
        gamma,
        gamma1,
        gamma2,
        gamma3,
        gamma1_grid,
        gamma2_grid,
        gamma3_grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_of_powers() {
        let p3 = YoungFn::power(3.0).unwrap();
        assert!(check_growth(&p3, 3.0, 3.0).holds);
        let bad = check_growth(&p3, 3.5, 3.0);
        assert!(!bad.holds);
        assert_eq!(bad.violation.unwrap().x, 1e-6);
    }

    #[test]
    fn power_is_multiplicative() {
        let s = submultiplicativity_constants(&YoungFn::power(3.0).unwrap());
        assert!((s.gamma - 1.0).abs() < 1e-12);
        assert!((s.gamma1_grid - 3.0).abs() < 1e-9);
        assert!((s.gamma1 - 3.0).abs() < 1e-12);
        assert!(s.gamma2_grid <= s.gamma2 * (1.0 + 1e-9));
        assert!(s.gamma3_grid <= s.gamma3 * (1.0 + 1e-9));
    }

    #[test]
    fn plus_square_power_is_not_submultiplicative() {
        let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
        let s = submultiplicativity_constants(&phi);
        assert_eq!(s.gamma, f64::INFINITY);
    }
}
