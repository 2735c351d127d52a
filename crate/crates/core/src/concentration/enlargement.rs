use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::log_grid;
use crate::numeric::roots::bisect_predicate;
use crate::young::{omega, ModifiedH, YoungFn};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnlargementBound {
    /// `e^{-K r}` with the constant in `k_used`.
    pub probability_bound: f64,
    /// `ω_H(2) κ ω_H*(1/(ω_H(2) κ))`.
    #[serde(rename = "K_enl")]
    pub k_enl: f64,
    /// Whether `H*` is strictly convex, so that `K_enl` applies as is.
    pub strictly_convex: bool,
    /// Where `H*` is affine, when it is not strictly convex.
    pub affine_interval: Option<(f64, f64)>,
    /// The same formula with `ω_H(2)` replaced by `ω_H(2)²`.
    pub k_surrogate: f64,
    pub k_used: f64,
}

fn k_formula(h: &ModifiedH, w: f64, kappa: f64) -> f64 {
    let s = w * kappa;
    s * h.omega_conj(1.0 / s)
}

/// Bound on `1 - μⁿ(A + {Σ H*(x_i) < r})` for `μⁿ(A) >= 1/2`. When `H*` has
/// an affine piece the argument runs with a strictly convex `I >= H*` whose
/// right derivative is at most `2 H*'`; the gradient estimate then costs a
/// second factor `ω_H(2)`, and that is the constant reported as used.
pub fn enlargement_bound(kappa: f64, h: &ModifiedH, r: f64) -> EnlargementBound {
    let w = h.omega(2.0);
    let k_enl = k_formula(h, w, kappa);
    let slope = h.knot_slope();
    let strictly_convex = slope <= 2.0 * (1.0 + 1e-12);
    let k_surrogate = k_formula(h, w * w, kappa);
    let k_used = if strictly_convex { k_enl } else { k_surrogate };
    EnlargementBound {
        probability_bound: (-k_used * r.max(0.0)).exp(),
        k_enl,
        strictly_convex,
        affine_interval: (!strictly_convex).then_some((2.0, slope)),
        k_surrogate,
        k_used,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    /// `c r`: squared radius of the Euclidean part.
    pub ball_radius_sq: f64,
    /// `1/ω_{Φ*}^{-1}(1/r)`.
    pub orlicz_radius: f64,
    pub c: f64,
    /// Coordinates below `x0` in absolute value go to the Euclidean part.
    pub x0: f64,
}

/// Splitting constant `c` with `{Σ H_Φ*(x_i) < r} ⊆ √(cr) B₂ + {Σ Φ*(x_i) < cr}`
/// via a per-coordinate threshold `x0`: small coordinates satisfy
/// `x² <= c H*(x)` and large ones `Φ*(x) <= c H*(x)`. The threshold is the
/// grid point minimising `c`.
pub fn splitting_constant(phi: &YoungFn) -> Result<(f64, f64)> {
    let h = ModifiedH::new(phi.clone())?;
    let grid = log_grid(1e-6, 1e6, 64);
    let small: Vec<f64> = grid.iter().map(|&x| x * x / h.conj_value(x)).collect();
    let large: Vec<f64> = grid.iter().map(|&x| phi.conj_value(x) / h.conj_value(x)).collect();
    let mut prefix = Vec::with_capacity(grid.len());
    let mut run = 0.0f64;
    for v in &small {
        run = run.max(*v);
        prefix.push(run);
    }
    let mut suffix = vec![0.0f64; grid.len() + 1];
    for i in (0..grid.len()).rev() {
        suffix[i] = suffix[i + 1].max(large[i]);
    }
    let (mut best, mut x0) = (f64::INFINITY, grid[0]);
    for i in 0..grid.len() {
        let c = prefix[i].max(suffix[i + 1]);
        if c < best {
            best = c;
            x0 = grid[i];
        }
    }
    if !best.is_finite() {
        return Err(Error::GrowthViolation("no finite splitting constant on the grid".into()));
    }
    Ok((best, x0))
}

pub fn enlargement_decomposition(phi: &YoungFn, r: f64) -> Result<Decomposition> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be non-negative, got {r}")));
    }
    let (c, x0) = splitting_constant(phi)?;
    let orlicz_radius = if r == 0.0 {
        0.0
    } else {
        let w = |t: f64| omega(|s| phi.conj_value(s), t);
        let target = 1.0 / r;
        let mut hi = 1.0;
        while w(hi) < target {
            hi *= 2.0;
        }
        let mut lo = 1.0;
        while w(lo) > target && lo > 1e-300 {
            lo /= 2.0;
        }
        1.0 / bisect_predicate(|t| w(t) >= target, lo, hi, 1e-13)
    };
    Ok(Decomposition {
        ball_radius_sq: c * r,
        orlicz_radius,
        c,
        x0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_enl_positive_and_monotone() {
        let h = ModifiedH::hq(3.0).unwrap();
        let ks: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|&k| enlargement_bound(k, &h, 1.0).k_enl).collect();
        assert!(ks.iter().all(|k| *k > 0.0));
        assert!(ks[0] > ks[1] && ks[1] > ks[2]);
        let b = enlargement_bound(1.0, &h, 0.0);
        assert_eq!(b.probability_bound, 1.0);
        assert!(!b.strictly_convex && b.k_used <= b.k_enl);
    }

    #[test]
    fn power_decomposition_scales() {
        let phi = YoungFn::power(3.0).unwrap();
        let d1 = enlargement_decomposition(&phi, 1.0).unwrap();
        let d2 = enlargement_decomposition(&phi, 8.0).unwrap();
        // q* = 3/2, so the Orlicz radius scales like r^{2/3}
        assert!((d2.orlicz_radius / d1.orlicz_radius - 4.0).abs() < 1e-6);
        let d0 = enlargement_decomposition(&phi, 0.0).unwrap();
        assert_eq!((d0.ball_radius_sq, d0.orlicz_radius), (0.0, 0.0));
    }
}
