use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::log_grid;
use crate::numeric::roots::golden_max;

/// `ω_H(t) = sup_{s>0} H(ts)/H(s)` over a log grid on `[1e-6, 1e6]`, refined
/// around the best point. Returns `+∞` when the supremum keeps growing as the
/// grid widens (failure of the Δ₂ condition).
pub fn omega<H: Fn(f64) -> f64 + Sync>(h: H, t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 0.0;
    }
    let grid = log_grid(1e-6, 1e6, 512);
    let ratio = |s: f64| {
        let r = h(t * s) / h(s);
        if r.is_nan() {
            f64::NEG_INFINITY
        } else {
            r
        }
    };
    let vals: Vec<f64> = grid.par_iter().map(|&s| ratio(s)).collect();
    let band = |lo: f64, hi: f64| {
        grid.iter()
            .zip(&vals)
            .filter(|(s, _)| **s >= lo && **s <= hi)
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let s1 = band(1e-3, 1e3);
    let s2 = band(10f64.powf(-4.5), 10f64.powf(4.5));
    let (imax, s3) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if s3 == f64::INFINITY || (s3 > 1.01 * s2 && s2 > 1.01 * s1) {
        return f64::INFINITY;
    }
    // a supremum at the grid edge is usually a limit; follow it outward
    let edge = if imax == 0 {
        Some(0.1)
    } else if imax + 1 == grid.len() {
        Some(10.0)
    } else {
        None
    };
    if let Some(step) = edge {
        let mut s = grid[imax];
        let mut best = s3;
        for _ in 0..290 {
            s *= step;
            let r = ratio(s);
            if !(r.is_finite() && r > best) {
                break;
            }
            best = r;
        }
        return best;
    }
    let a = grid[imax.saturating_sub(1)].ln();
    let b = grid[(imax + 1).min(grid.len() - 1)].ln();
    let (_, refined) = golden_max(|u| ratio(u.exp()), a, b, 1e-12);
    s3.max(refined)
}

/// Legendre transform `sup_{t>=0} {r t - f(t)}` of a convex `f` with
/// `f(0) = 0`, by golden-section search on a bracket found by doubling.
pub fn legendre<F: Fn(f64) -> f64>(f: F, r: f64) -> Result<f64> {
    let r = r.abs();
    if r == 0.0 {
        return Ok(0.0);
    }
    let obj = |t: f64| r * t - f(t);
    let mut hi = 1.0;
    while obj(hi) > obj(hi / 2.0) {
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::NotSuperlinear(format!("Legendre transform diverges at slope {r}")));
        }
    }
    let (_, v) = golden_max(obj, 0.0, hi, 1e-16);
    Ok(v.max(0.0))
}

/// `ω*(r)`, the conjugate of a growth envelope; `+∞` if it diverges.
pub fn omega_conjugate<W: Fn(f64) -> f64>(w: W, r: f64) -> f64 {
    legendre(w, r).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_of_hq() {
        let hq = |q: f64| move |x: f64| (x * x).max(x.abs().powf(q));
        assert!((omega(hq(3.0), 2.0) - 8.0).abs() < 1e-9);
        assert_eq!(omega(hq(3.0), 0.0), 0.0);
        assert!((omega(hq(2.0), 0.5) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn omega_detects_delta2_failure() {
        let h = |x: f64| (x * x).exp() - 1.0;
        assert_eq!(omega(h, 2.0), f64::INFINITY);
    }

    #[test]
    fn conjugate_of_square() {
        assert!((omega_conjugate(|t| t * t, 2.0) - 1.0).abs() < 1e-12);
        assert!(legendre(|t| t, 2.0).is_err());
    }
}
