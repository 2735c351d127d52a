use crate::error::{Error, Result};

const MAX_BISECT: usize = 200;

/// Smallest `x` in `[lo, hi]` with `pred(x)` true, assuming `pred` is
/// monotone (false then true) and `pred(hi)` holds. Stops when the bracket is
/// below `rel_tol * |x|` or cannot shrink further.
pub fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    for _ in 0..MAX_BISECT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Doubles `hi` (starting from `start > 0`) until `pred(hi)` holds.
pub fn expand_upper<P: Fn(f64) -> bool>(pred: P, start: f64, limit: f64) -> Result<f64> {
    let mut hi = start.max(f64::MIN_POSITIVE);
    while !pred(hi) {
        hi *= 2.0;
        if hi > limit || !hi.is_finite() {
            return Err(Error::Bracket(format!("no upper bracket below {limit:e}")));
        }
    }
    Ok(hi)
}

/// Solves `f(x) = target` for non-decreasing `f` on a bracket `[lo, hi]` with
/// `f(lo) <= target <= f(hi)`. Newton steps (when `df` is supplied) are kept
/// inside the bracket; otherwise the step falls back to bisection.
pub fn solve_increasing<F, D>(f: F, df: Option<D>, target: f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECT {
        let r = f(x) - target;
        if r == 0.0 {
            return x;
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= rel_tol * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mut next = 0.5 * (lo + hi);
        if let Some(df) = df.as_ref() {
            let d = df(x);
            if d > 0.0 && d.is_finite() {
                let newton = x - r / d;
                if newton > lo && newton < hi {
                    if (newton - x).abs() <= rel_tol * x.abs() {
                        return newton;
                    }
                    next = newton;
                }
            }
        }
        if next <= lo || next >= hi {
            break;
        }
        x = next;
    }
    0.5 * (lo + hi)
}

/// Solves `f(λ) = target` for a positive increasing `f` on `(0, ∞)` by
/// Illinois regula falsi in log-log coordinates, which is exact in one step
/// for power laws. `start` seeds the bracket search.
pub fn solve_positive<F: Fn(f64) -> f64>(f: F, target: f64, start: f64, rel_tol: f64) -> Result<f64> {
    let log_target = target.ln();
    let g = |l: f64| f(l.exp()).ln() - log_target;
    let (mut lo, mut hi) = (start.ln(), start.ln());
    let (mut glo, mut ghi) = (g(lo), g(hi));
    let mut step = std::f64::consts::LN_2;
    while glo > 0.0 {
        hi = lo;
        ghi = glo;
        lo -= step;
        step *= 2.0;
        if lo < -690.0 {
            return Err(Error::Bracket(format!("solution below 1e-300 for target {target:e}")));
        }
        glo = g(lo);
    }
    step = std::f64::consts::LN_2;
    while !(ghi >= 0.0) {
        lo = hi;
        glo = ghi;
        hi += step;
        step *= 2.0;
        if hi > 690.0 {
            return Err(Error::Bracket(format!("solution above 1e300 for target {target:e}")));
        }
        ghi = g(hi);
    }
    if glo == 0.0 {
        return Ok(lo.exp());
    }
    let mut side = 0;
    let mut prev = f64::NAN;
    for _ in 0..MAX_BISECT {
        let l = if glo.is_finite() && ghi.is_finite() && ghi > glo {
            (lo * ghi - hi * glo) / (ghi - glo)
        } else {
            0.5 * (lo + hi)
        };
        let gl = g(l);
        if gl == 0.0 || (l - prev).abs() <= rel_tol || hi - lo <= rel_tol {
            return Ok(l.exp());
        }
        prev = l;
        if gl > 0.0 {
            hi = l;
            ghi = gl;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        } else {
            lo = l;
            glo = gl;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::NoConvergence {
        what: "log-log regula falsi".into(),
        residual: hi - lo,
    })
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_BISECT {
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_cubic() {
        let x = solve_increasing(|x| x * x * x, Some(|x: f64| 3.0 * x * x), 27.0, 0.0, 10.0, 1e-14);
        assert!((x - 3.0).abs() < 1e-12);
        let y = solve_increasing(|x| x * x * x, None::<fn(f64) -> f64>, 27.0, 0.0, 10.0, 1e-14);
        assert!((y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn predicate_bisection_finds_kink() {
        // right derivative of max(x^2, x^3) jumps over 2.5 at x = 1
        let deriv = |x: f64| if x < 1.0 { 2.0 * x } else { 3.0 * x * x };
        let x = bisect_predicate(|x| deriv(x) >= 2.5, 0.0, 10.0, 1e-15);
        assert!((x - 1.0).abs() < 1e-14);
    }

    #[test]
    fn positive_solver_power_and_exp() {
        let x = solve_positive(|l| 3.0 * l.powf(0.5), 6.0, 1.0, 1e-14).unwrap();
        assert!((x - 4.0).abs() < 1e-12);
        let y = solve_positive(|l| l.exp_m1(), 1e-8, 1e3, 1e-14).unwrap();
        let want = 1e-8f64.ln_1p();
        assert!((y - want).abs() < 1e-12 * want, "{y:e} vs {want:e}");
    }

    #[test]
    fn golden_finds_smooth_and_kinked_maxima() {
        let (x, _) = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        let (x, fx) = golden_max(|t| 2.0 - (t - 1.0).abs() - 0.5 * (t - 1.0).max(0.0), 0.0, 5.0, 1e-15);
        assert!((x - 1.0).abs() < 1e-12 && (fx - 2.0).abs() < 1e-12);
    }
}
