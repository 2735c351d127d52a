use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GridFunction, PotentialFamily, Side};
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, integrate_breaks, Tolerance};
use crate::numeric::roots::solve_increasing;

/// Log-mass drop at which integrals over ℝ are truncated. `e^{-60}` is far
/// below every tolerance used downstream.
const TRUNCATE_AT: f64 = 60.0;
/// Same idea for tails measured from a point.
const TAIL_DEPTH: f64 = 50.0;

fn tail_tol() -> Tolerance {
    Tolerance {
        abs: 1e-300,
        rel: 1e-13,
        max_intervals: 4000,
    }
}

fn cell_tol() -> Tolerance {
    Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_intervals: 200,
    }
}

/// The measure `dμ = e^{-V(x)} dx / Z`. Construction computes `Z`, the mode
/// and the median once; every query afterwards is pure.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    family: PotentialFamily,
    log_z: f64,
    mode: f64,
    median: f64,
    lo: f64,
    hi: f64,
    knots: Vec<f64>,
}

/// Serializable description of a constructed measure.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeasureSummary {
    pub family: String,
    pub z: f64,
    pub log_z: f64,
    pub median: f64,
}

/// The Laplace-type tail approximation and its two-sided bracket.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LaplaceEstimate {
    pub x: f64,
    /// `e^{-V(x)} / |V'(x)|` with the normalized potential.
    pub asymptotic: f64,
    pub lower: f64,
    pub upper: f64,
    /// `1 + inf V''/V'^2` beyond `x`.
    pub epsilon: f64,
    /// `max(sup V''/V'^2, 0)` beyond `x`.
    pub a: f64,
}

impl PotentialSpec {
    pub fn new(family: PotentialFamily) -> Result<Self> {
        family.validate()?;
        let v = |x: f64| family.v(x);

        // Widen a symmetric window until V has climbed TRUNCATE_AT above its
        // minimum on both ends.
        let mut half = 1.0f64;
        let (xs, vmin) = loop {
            let xs: Vec<f64> = (0..=800).map(|i| -half + 2.0 * half * i as f64 / 800.0).collect();
            let vmin = xs.iter().map(|&x| v(x)).fold(f64::INFINITY, f64::min);
            if !vmin.is_finite() {
                return Err(Error::NonIntegrable(format!("{} is not finite on [-{half}, {half}]", family.label())));
            }
            if v(half) - vmin >= TRUNCATE_AT && v(-half) - vmin >= TRUNCATE_AT {
                break (xs, vmin);
            }
            half *= 2.0;
            if half > 1e9 {
                return Err(Error::NonIntegrable(format!("{} does not grow fast enough", family.label())));
            }
        };
        if family.dv(half) <= 0.0 || family.dv(-half) >= 0.0 {
            return Err(Error::NonIntegrable(format!(
                "{} is not increasing away from the origin at ±{half}",
                family.label()
            )));
        }
        let imin = xs
            .iter()
            .enumerate()
            .min_by(|a, b| v(*a.1).total_cmp(&v(*b.1)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let a = xs[imin.saturating_sub(1)];
        let b = xs[(imin + 1).min(xs.len() - 1)];
        let (mode, _) = crate::numeric::roots::golden_max(|x| -v(x), a, b, 1e-14);
        let vmin = vmin.min(v(mode));

        let mut knots = vec![mode, -half, half];
        for k in 0..=30 {
            let d = half * 0.5f64.powi(k);
            knots.push(mode + d);
            knots.push(mode - d);
        }
        knots.retain(|k| (-half..=half).contains(k));
        knots.sort_by(f64::total_cmp);
        knots.dedup();

        let body = integrate_breaks(&|t: f64| (-(v(t) - vmin)).exp(), &knots, tail_tol()).value;
        let outer = (-(v(half) - vmin)).exp() / family.dv(half) + (-(v(-half) - vmin)).exp() / (-family.dv(-half));
        let mass = body + outer;
        let log_z = -vmin + mass.ln();

        let mut inner = Inner {
            family,
            log_z,
            mode,
            median: mode,
            lo: -half,
            hi: half,
            knots,
        };
        inner.median = quantile_impl(&inner, 0.5);
        Ok(PotentialSpec { inner: Arc::new(inner) })
    }

    pub fn family(&self) -> &PotentialFamily {
        &self.inner.family
    }

    pub fn z(&self) -> f64 {
        self.inner.log_z.exp()
    }

    pub fn log_z(&self) -> f64 {
        self.inner.log_z
    }

    pub fn median(&self) -> f64 {
        self.inner.median
    }

    pub fn mode(&self) -> f64 {
        self.inner.mode
    }

    /// Truncation window outside of which the mass is below `e^{-60}`.
    pub fn support(&self) -> (f64, f64) {
        (self.inner.lo, self.inner.hi)
    }

    pub fn knots(&self) -> &[f64] {
        &self.inner.knots
    }

    pub fn summary(&self) -> MeasureSummary {
        MeasureSummary {
            family: self.inner.family.label(),
            z: self.z(),
            log_z: self.log_z(),
            median: self.median(),
        }
    }

    /// Normalized potential `W = V + log Z`, so that the density is `e^{-W}`.
    pub fn v(&self, x: f64) -> f64 {
        self.inner.w(x)
    }

    pub fn dv(&self, x: f64) -> f64 {
        self.inner.family.dv(x)
    }

    pub fn d2v(&self, x: f64) -> f64 {
        self.inner.family.d2v(x)
    }

    pub fn density(&self, x: f64) -> f64 {
        (-self.inner.w(x)).exp()
    }

    pub fn smooth_from(&self) -> f64 {
        self.inner.family.smooth_from()
    }

    pub fn log_tail(&self, x: f64, side: Side) -> f64 {
        log_tail_impl(&self.inner, x, side)
    }

    /// `μ([x, ∞))` for `Right`, `μ((-∞, x])` for `Left`.
    pub fn tail(&self, x: f64, side: Side) -> f64 {
        self.log_tail(x, side).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.tail(x, Side::Left)
    }

    /// Inverse of the distribution function.
    pub fn quantile(&self, u: f64) -> f64 {
        quantile_impl(&self.inner, u)
    }

    /// The point whose tail on `side` has mass `tau`.
    pub fn tail_quantile(&self, tau: f64, side: Side) -> f64 {
        match side {
            Side::Left => self.quantile(tau),
            Side::Right => quantile_upper(&self.inner, tau),
        }
    }

    /// `log ∫_a^b e^{s W(t)} dt` for `s > 0`, with `W` the normalized
    /// potential. This is `log ∫ n^{-s}` in density terms.
    pub fn log_inner_integral(&self, a: f64, b: f64, s: f64) -> f64 {
        if b <= a {
            return f64::NEG_INFINITY;
        }
        let inner = &self.inner;
        let w = |t: f64| inner.w(t);
        let mut reference = s * w(a).max(w(b));
        let mut points = vec![a, b];
        for &k in &inner.knots {
            if k > a && k < b {
                points.push(k);
                reference = reference.max(s * w(k));
            }
        }
        for (end, dir) in [(a, 1.0), (b, -1.0)] {
            let slope = (s * inner.family.dv(end)).abs();
            if slope > 0.0 && slope.is_finite() {
                for j in 0..14 {
                    let p = end + dir * 2f64.powi(j) / slope;
                    if p > a && p < b {
                        points.push(p);
                    }
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let r = integrate_breaks(&|t: f64| (s * w(t) - reference).exp(), &points, tail_tol());
        reference + r.value.ln()
    }

    /// `∫ f dμ` for a closure, over the truncation window.
    pub fn expect<F: Fn(f64) -> f64 + Sync>(&self, f: F) -> f64 {
        let inner = &self.inner;
        integrate_breaks(
            &|t: f64| f(t) * (-inner.w(t)).exp(),
            &inner.knots,
            Tolerance {
                abs: 1e-15,
                rel: 1e-13,
                max_intervals: 8000,
            },
        )
        .value
    }

    /// `∫ h(g(x)) dμ(x)` for a piecewise-linear `g` extended by constants
    /// outside its nodes.
    pub fn integrate_grid<H: Fn(f64) -> f64 + Sync>(&self, g: &GridFunction, h: H) -> f64 {
        let nodes = g.nodes();
        let vals = g.values();
        let n = nodes.len();
        let cells: Vec<f64> = (0..n - 1)
            .into_par_iter()
            .map(|i| {
                let (x0, x1) = (nodes[i], nodes[i + 1]);
                let (y0, y1) = (vals[i], vals[i + 1]);
                let f = |t: f64| {
                    let y = y0 + (y1 - y0) * (t - x0) / (x1 - x0);
                    h(y) * self.density(t)
                };
                integrate(&f, x0, x1, cell_tol()).value
            })
            .collect();
        let mut total = h(vals[0]) * self.tail(nodes[0], Side::Left) + h(vals[n - 1]) * self.tail(nodes[n - 1], Side::Right);
        for c in cells {
            total += c;
        }
        total
    }

    pub fn mean(&self, f: &GridFunction) -> f64 {
        self.integrate_grid(f, |y| y)
    }

    pub fn variance(&self, f: &GridFunction) -> f64 {
        let m = self.mean(f);
        self.integrate_grid(f, |y| (y - m) * (y - m)).max(0.0)
    }

    /// `Ent_μ(g)` for a non-negative `g` (typically `f²`), via the pointwise
    /// non-negative representation `∫ Ψ_t(g) dμ` with `t = ∫ g dμ`.
    pub fn entropy(&self, g: &GridFunction) -> f64 {
        let t = self.mean(g);
        if t <= 0.0 {
            return 0.0;
        }
        self.integrate_grid(g, |y| t * psi_ratio(y.max(0.0) / t)).max(0.0)
    }

    /// `∫ g log g dμ - t log t`, the textbook form of the entropy.
    pub fn entropy_direct(&self, g: &GridFunction) -> f64 {
        let t = self.mean(g);
        if t <= 0.0 {
            return 0.0;
        }
        let glogg = self.integrate_grid(g, |y| if y > 0.0 { y * y.ln() } else { 0.0 });
        glogg - t * t.ln()
    }

    /// Laplace-type tail approximation at `x`, on the side given by the
    /// sign of `x - mode`.
    pub fn laplace_tail_estimate(&self, x: f64) -> Result<LaplaceEstimate> {
        let inner = &self.inner;
        if x.abs() < inner.family.smooth_from() {
            return Err(Error::hypothesis("|x| >= smoothness threshold", x));
        }
        let s = if x >= inner.mode { 1.0 } else { -1.0 };
        let y = s * x;
        let w = |t: f64| inner.w(s * t);
        let dw = |t: f64| s * inner.family.dv(s * t);
        let d2w = |t: f64| inner.family.d2v(s * t);
        let slope = dw(y);
        if slope <= 0.0 {
            return Err(Error::hypothesis("sign(x) V'(x) > 0", x));
        }
        let mut end = y;
        let mut step = 4.0 / slope;
        for _ in 0..200 {
            if w(end) - w(y) >= TAIL_DEPTH {
                break;
            }
            end += step;
            step *= 2.0;
        }
        let mut grid: Vec<f64> = (0..=4000).map(|i| y + (end - y) * i as f64 / 4000.0).collect();
        grid.extend((1..=60).map(|i| end * 10f64.powf(i as f64 / 20.0)));
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &t in &grid {
            let d = dw(t);
            if d <= 0.0 {
                return Err(Error::hypothesis("V' > 0 beyond x", s * t));
            }
            let psi = d2w(t) / (d * d);
            lo = lo.min(psi);
            hi = hi.max(psi);
        }
        let epsilon = 1.0 + lo;
        if epsilon <= 0.0 {
            return Err(Error::hypothesis("V''/V'^2 > -1 beyond x", x));
        }
        let a = hi.max(0.0);
        let asymptotic = (-w(y)).exp() / slope;
        Ok(LaplaceEstimate {
            x,
            asymptotic,
            lower: asymptotic / (1.0 + a),
            upper: asymptotic / epsilon,
            epsilon,
            a,
        })
    }

    /// Quantile-spaced nodes between the `eps` and `1 - eps` quantiles.
    pub fn quantile_nodes(&self, n: usize, eps: f64) -> Vec<f64> {
        let lo = eps.ln() - (1.0 - eps).ln();
        let hi = -lo;
        let mut out: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let z = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                // logistic spacing so both tails get nodes
                let u = 1.0 / (1.0 + (-z).exp());
                if u < 0.5 {
                    self.quantile(u)
                } else {
                    quantile_upper(&self.inner, 1.0 / (1.0 + z.exp()))
                }
            })
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

impl Inner {
    fn w(&self, x: f64) -> f64 {
        self.family.v(x) + self.log_z
    }
}

/// `r log r - r + 1`, accurate near `r = 1`.
pub(crate) fn psi_ratio(r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    let d = r - 1.0;
    if d.abs() < 0.1 {
        // (1+d)log(1+d) - d = Σ_{k≥2} (-1)^k d^k / (k(k-1))
        let mut sum = 0.0;
        let mut pow = d * d;
        for k in 2..24 {
            let term = pow / (k * (k - 1)) as f64;
            sum += if k % 2 == 0 { term } else { -term };
            pow *= d;
        }
        sum
    } else {
        r * r.ln() - d
    }
}

fn log_tail_impl(inner: &Inner, x: f64, side: Side) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    match side {
        Side::Right if x == f64::INFINITY => f64::NEG_INFINITY,
        Side::Left if x == f64::NEG_INFINITY => f64::NEG_INFINITY,
        Side::Right if x == f64::NEG_INFINITY => 0.0,
        Side::Left if x == f64::INFINITY => 0.0,
        Side::Right => log_upper(inner, x, 1.0),
        Side::Left => log_upper(inner, -x, -1.0),
    }
}

/// `log ∫_x^∞ e^{-W(s t)} dt` for `s = ±1`.
fn log_upper(inner: &Inner, x: f64, s: f64) -> f64 {
    let w = |t: f64| inner.w(s * t);
    let dw = |t: f64| s * inner.family.dv(s * t);
    let mut knots: Vec<f64> = inner.knots.iter().map(|k| s * k).filter(|&k| k > x).collect();
    knots.sort_by(f64::total_cmp);
    let mut w_ref = w(x);
    for &k in &knots {
        w_ref = w_ref.min(w(k));
    }
    let far = knots.last().copied().unwrap_or(x).max(x);
    let slope = dw(x);
    let mut end = far;
    let mut step = if slope > 0.0 && slope.is_finite() { 8.0 / slope } else { 1.0 };
    for _ in 0..400 {
        if end > x && w(end) - w_ref >= TAIL_DEPTH {
            break;
        }
        end += step;
        step *= 2.0;
    }
    let mut points = vec![x, end];
    points.extend(knots.iter().copied().filter(|&k| k < end));
    if slope > 0.0 && slope.is_finite() {
        for j in 0..12 {
            let p = x + 2f64.powi(j) / slope;
            if p < end {
                points.push(p);
            }
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let r = integrate_breaks(&|t: f64| (-(w(t) - w_ref)).exp(), &points, tail_tol());
    (-w_ref + r.value.ln()).min(0.0)
}

fn quantile_impl(inner: &Inner, u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    if u > 0.5 {
        return quantile_upper(inner, 1.0 - u);
    }
    let target = u.ln();
    let f = |x: f64| log_tail_impl(inner, x, Side::Left);
    let df = |x: f64| (-inner.w(x) - log_tail_impl(inner, x, Side::Left)).exp();
    let (a, b) = bracket(f, target, inner.median);
    solve_increasing(f, Some(df), target, a, b, 1e-15)
}

/// Point `x` with `μ([x, ∞)) = tau`.
fn quantile_upper(inner: &Inner, tau: f64) -> f64 {
    if tau <= 0.0 {
        return f64::INFINITY;
    }
    if tau >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let target = -tau.ln();
    // -log tail_right is increasing in x
    let f = |x: f64| -log_tail_impl(inner, x, Side::Right);
    let df = |x: f64| (-inner.w(x) - log_tail_impl(inner, x, Side::Right)).exp();
    let (a, b) = bracket(f, target, inner.median);
    solve_increasing(f, Some(df), target, a, b, 1e-15)
}

fn bracket<F: Fn(f64) -> f64>(f: F, target: f64, anchor: f64) -> (f64, f64) {
    let mut b = anchor;
    let mut step = 1.0;
    while f(b) < target {
        b += step;
        step *= 2.0;
    }
    let mut a = b - 1.0;
    let mut step = 1.0;
    while f(a) > target {
        a -= step;
        step *= 2.0;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn de() -> PotentialSpec {
        PotentialSpec::new(PotentialFamily::DoubleExp).unwrap()
    }

    #[test]
    fn double_exp_basics() {
        let mu = de();
        assert!((mu.z() - 2.0).abs() < 1e-12);
        assert!(mu.median().abs() < 1e-10);
        assert!((mu.tail(0.0, Side::Right) - 0.5).abs() < 1e-12);
        let t1 = mu.tail(1.0, Side::Right);
        assert!((t1 - (-1.0f64).exp() / 2.0).abs() < 1e-13);
        // deep tail keeps relative accuracy
        let t40 = mu.tail(40.0, Side::Right);
        assert!((t40 / ((-40.0f64).exp() / 2.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quantiles_invert_tails() {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
        for &u in &[1e-15, 1e-6, 0.1, 0.5, 0.8, 1.0 - 1e-9] {
            let x = mu.quantile(u);
            let back = mu.cdf(x);
            assert!((back - u).abs() <= 1e-9 * u.min(1.0 - u).max(1e-300) + 1e-15, "u={u} back={back}");
        }
        let x = mu.tail_quantile(1e-20, Side::Right);
        assert!((mu.tail(x, Side::Right) / 1e-20 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inner_integral_closed_form() {
        let mu = de();
        // ∫_0^x e^{|t| + ln 2} dt = 2(e^x - 1)
        let got = mu.log_inner_integral(0.0, 30.0, 1.0).exp();
        let want = 2.0 * (30f64.exp() - 1.0);
        assert!((got / want - 1.0).abs() < 1e-11);
    }

    #[test]
    fn psi_ratio_branches_agree() {
        for &r in &[0.9, 0.95, 1.05, 1.1] {
            let plain = r * f64::ln(r) - r + 1.0;
            assert!((psi_ratio(r) - plain).abs() < 1e-15);
        }
        assert_eq!(psi_ratio(1.0), 0.0);
        assert_eq!(psi_ratio(0.0), 1.0);
    }

    #[test]
    fn laplace_exact_for_exponential() {
        let mu = de();
        let est = mu.laplace_tail_estimate(5.0).unwrap();
        let exact = (-5.0f64).exp() / 2.0;
        assert!((est.asymptotic / exact - 1.0).abs() < 1e-12);
        assert!((est.lower - est.upper).abs() < 1e-18);
        assert!(mu.laplace_tail_estimate(0.5).is_err());
    }
}
