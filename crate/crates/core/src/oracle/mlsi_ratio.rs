use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::{best_poincare_ratio, poincare_nodes};
use super::RatioEstimate;
use crate::error::{Error, Result};
use crate::measure::{psi_ratio, Density, GridFunction, PotentialSpec, Side};
use crate::mlsi::gamma;
use crate::mlsi::variational::breakpoints;
use crate::numeric::grid::locate;
use crate::numeric::quad::gk15;
use crate::numeric::{integrate_breaks, linspace, Tolerance};
use crate::young::ModifiedH;

/// Families of test functions for [`best_mlsi_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MlsiFamily {
    /// `exp` of random sums of `tanh` bumps and soft ramps.
    RandomSmooth,
    /// The extremal shapes used to bound `α̃_x`, glued to `0` and `1`.
    PaperTestFunctions,
    /// `ε + (1-ε)·ramp`, smoothed indicators of half-lines.
    IndicatorRamps,
    /// `1 + t g` with `g` the Poincaré witness and `t = 10^{-3}`.
    Perturbative,
}

impl MlsiFamily {
    pub const ALL: [MlsiFamily; 4] = [
        MlsiFamily::RandomSmooth,
        MlsiFamily::PaperTestFunctions,
        MlsiFamily::IndicatorRamps,
        MlsiFamily::Perturbative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MlsiFamily::RandomSmooth => "random_smooth",
            MlsiFamily::PaperTestFunctions => "paper_test_functions",
            MlsiFamily::IndicatorRamps => "indicator_ramps",
            MlsiFamily::Perturbative => "perturbative",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|f| f.name()).collect();
            Error::InvalidParameter(format!("unknown test family `{s}`; supported: {}", names.join(", ")))
        })
    }
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A locally Lipschitz test function, constant outside `[lo, hi]`.
#[derive(Clone)]
pub(crate) struct TestFunction {
    pub(crate) label: String,
    f: Scalar,
    df: Scalar,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
}

impl TestFunction {
    fn value(&self, t: f64) -> f64 {
        (self.f)(t.clamp(self.lo, self.hi))
    }
}

/// `(Ent_μ(f^2), ∫ H(f'/f) f^2 dν)`, with `H(f'/f) f^2 = 0` wherever `f`
/// vanishes together with `f'`.
pub(crate) fn entropy_energy(mu: &PotentialSpec, nu: &PotentialSpec, h: &ModifiedH, tf: &TestFunction) -> (f64, f64) {
    let (lo, hi) = (tf.lo, tf.hi);
    let mut pts = tf.breaks.clone();
    pts.extend(linspace(lo, hi, 64));
    pts.extend(mu.knots().iter().copied());
    pts.retain(|p| *p >= lo && *p <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tol = Tolerance {
        abs: 1e-18,
        rel: 1e-10,
        max_intervals: 4000,
    };
    let (fl, fh) = ((tf.f)(lo), (tf.f)(hi));
    let (ml, mh) = (mu.tail(lo, Side::Left), mu.tail(hi, Side::Right));
    let f = &tf.f;
    let mass = integrate_breaks(&|t: f64| f(t).powi(2) * mu.density(t), &pts, tol).value + fl * fl * ml + fh * fh * mh;
    if !(mass > 0.0) {
        return (0.0, 0.0);
    }
    let psi = |v: f64| mass * psi_ratio(v * v / mass);
    let ent = integrate_breaks(&|t: f64| psi(f(t)) * mu.density(t), &pts, tol).value + psi(fl) * ml + psi(fh) * mh;
    let energy = energy_on(nu, h, tf, &pts, tol);
    (ent.max(0.0), energy)
}

fn energy_on(nu: &PotentialSpec, h: &ModifiedH, tf: &TestFunction, pts: &[f64], tol: Tolerance) -> f64 {
    integrate_breaks(
        &|t: f64| {
            let v = (tf.f)(t);
            if v == 0.0 {
                0.0
            } else {
                h.value((tf.df)(t) / v) * v * v * nu.density(t)
            }
        },
        pts,
        tol,
    )
    .value
}

/// `∫ H(f'/f) f^2 dν` alone, for functions glued from a profile.
pub(crate) fn entropy_energy_profile(nu: &PotentialSpec, h: &ModifiedH, tf: &TestFunction) -> f64 {
    let mut pts = tf.breaks.clone();
    pts.extend(linspace(tf.lo, tf.hi, 64));
    pts.retain(|p| *p >= tf.lo && *p <= tf.hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tol = Tolerance {
        abs: 1e-300,
        rel: 1e-10,
        max_intervals: 4000,
    };
    energy_on(nu, h, tf, &pts, tol)
}

/// `∫_0^r g(at(ρ)) dρ` tabulated on a grid and completed by one
/// Gauss–Kronrod panel inside the last cell.
struct Cumulative {
    nodes: Vec<f64>,
    cum: Vec<f64>,
    g: Scalar,
}

impl Cumulative {
    fn new(nodes: Vec<f64>, g: Scalar) -> Self {
        let mut cum = vec![0.0; nodes.len()];
        for i in 1..nodes.len() {
            cum[i] = cum[i - 1] + gk15(&*g, nodes[i - 1], nodes[i]).0;
        }
        Cumulative { nodes, cum, g }
    }

    fn eval(&self, r: f64) -> f64 {
        let i = locate(&self.nodes, r);
        self.cum[i] + gk15(&*self.g, self.nodes[i], r).0
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }
}

fn reflected_nodes(nu: &PotentialSpec, m: f64, x: f64) -> Vec<f64> {
    let len = (x - m).abs();
    let mut nodes = breakpoints(nu, 0.0, len);
    nodes.extend(linspace(0.0, len, 200));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// Glues a profile `F(r)` on `[0, len]` (with `F(0) = 0`, `F(len) = 1`)
/// into a function of `t = m + s r`.
fn glue(label: String, m: f64, x: f64, f: Scalar, df: Scalar) -> TestFunction {
    let s = if x >= m { 1.0 } else { -1.0 };
    let (lo, hi) = if s > 0.0 { (m, x) } else { (x, m) };
    let len = (x - m).abs();
    let (f1, df1) = (f.clone(), df.clone());
    let mut breaks: Vec<f64> = (1..=40).flat_map(|j| [m + s * len * 2f64.powi(-j), x - s * len * 2f64.powi(-j)]).collect();
    breaks.extend([lo, hi]);
    TestFunction {
        label,
        f: Arc::new(move |t| f1(s * (t - m))),
        df: Arc::new(move |t| s * df1(s * (t - m))),
        lo,
        hi,
        breaks,
    }
}

/// `(J(r)/J(len))^{q-1}` with `J(r) = ∫_0^r n^{-1/(q-1)}`.
pub(crate) fn power_shape(nu: &PotentialSpec, m: f64, x: f64, q: f64) -> TestFunction {
    let s = if x >= m { 1.0 } else { -1.0 };
    let nu1 = nu.clone();
    let j: Scalar = Arc::new(move |r| (-nu1.log_density(m + s * r) / (q - 1.0)).exp());
    let cum = Arc::new(Cumulative::new(reflected_nodes(nu, m, x), j.clone()));
    let jx = cum.total();
    let c1 = cum.clone();
    let f: Scalar = Arc::new(move |r| (c1.eval(r) / jx).powf(q - 1.0));
    let df: Scalar = Arc::new(move |r| (q - 1.0) * (cum.eval(r) / jx).powf(q - 2.0) * j(r) / jx);
    glue(format!("power_shape(q={q}, x={x:.6})"), m, x, f, df)
}

/// `Φ'(f_x)/Φ'(1)` with `f_x(r) = ∫_0^r Φ'^{-1}(c_x/n)` and `f_x(len) = 1`.
fn young_profile(nu: &PotentialSpec, h: &ModifiedH, m: f64, x: f64) -> Option<TestFunction> {
    let phi = h.base().clone();
    let c_x = gamma(&phi, nu, m, x, 1.0).ok().filter(|c| *c > 0.0 && c.is_finite())?;
    let s = if x >= m { 1.0 } else { -1.0 };
    let (nu1, phi1) = (nu.clone(), phi.clone());
    let lc = c_x.ln();
    let g: Scalar = Arc::new(move |r| phi1.deriv_inv((lc - nu1.log_density(m + s * r)).exp()));
    let cum = Arc::new(Cumulative::new(reflected_nodes(nu, m, x), g.clone()));
    let d1 = phi.deriv(1.0);
    let (c1, p1) = (cum.clone(), phi.clone());
    let f: Scalar = Arc::new(move |r| p1.deriv(c1.eval(r)) / d1);
    let df: Scalar = Arc::new(move |r| phi.deriv2(cum.eval(r)) * g(r) / d1);
    Some(glue(format!("young_shape(x={x:.6})"), m, x, f, df))
}

fn logistic_point(mu: &PotentialSpec, z: f64) -> f64 {
    if z < 0.0 {
        mu.tail_quantile(1.0 / (1.0 + (-z).exp()), Side::Left)
    } else {
        mu.tail_quantile(1.0 / (1.0 + z.exp()), Side::Right)
    }
}

fn window(mu: &PotentialSpec) -> (f64, f64) {
    (mu.tail_quantile(1e-14, Side::Left), mu.tail_quantile(1e-14, Side::Right))
}

fn spread(mu: &PotentialSpec) -> f64 {
    (mu.quantile(0.75) - mu.quantile(0.25)).max(1e-6)
}

fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Clone, Copy)]
enum Term {
    Bump { a: f64, c: f64, w: f64 },
    Ramp { b: f64, c: f64, w: f64 },
}

impl Term {
    fn value(&self, x: f64) -> f64 {
        match *self {
            Term::Bump { a, c, w } => a * ((x - c) / w).tanh(),
            Term::Ramp { b, c, w } => b * w * softplus((x - c) / w),
        }
    }

    fn deriv(&self, x: f64) -> f64 {
        match *self {
            Term::Bump { a, c, w } => {
                let ch = ((x - c) / w).cosh();
                a / (w * ch * ch)
            }
            Term::Ramp { b, c, w } => b * sigmoid((x - c) / w),
        }
    }
}

fn random_smooth(mu: &PotentialSpec, rng: &mut ChaCha8Rng, k: usize) -> TestFunction {
    let (lo, hi) = window(mu);
    let sp = spread(mu);
    let n_terms = rng.random_range(1..=6);
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let c = logistic_point(mu, rng.random_range(-10.0..10.0));
        let w = sp * 10f64.powf(rng.random_range(-1.0..0.5));
        if rng.random_bool(0.6) {
            terms.push(Term::Bump {
                a: rng.random_range(-1.5..1.5),
                c,
                w,
            });
        } else {
            // keep the log of the function within ±20 on the window
            let reach = (hi - c).max(c - lo).max(w);
            let b = rng.random_range(-1.0..1.0) / sp;
            let b = b.signum() * b.abs().min(20.0 / reach);
            terms.push(Term::Ramp { b, c, w });
        }
    }
    let t1 = terms.clone();
    let breaks = vec![lo, hi];
    TestFunction {
        label: format!("random_smooth#{k}"),
        f: Arc::new(move |x| t1.iter().map(|t| t.value(x)).sum::<f64>().exp()),
        df: Arc::new(move |x| {
            let l: f64 = terms.iter().map(|t| t.value(x)).sum();
            let dl: f64 = terms.iter().map(|t| t.deriv(x)).sum();
            dl * l.exp()
        }),
        lo,
        hi,
        breaks,
    }
}

fn indicator_ramp(mu: &PotentialSpec, rng: &mut ChaCha8Rng, k: usize) -> TestFunction {
    let mut z = [rng.random_range(-14.0..14.0), rng.random_range(-14.0..14.0)];
    z.sort_by(f64::total_cmp);
    let (a, mut b) = (logistic_point(mu, z[0]), logistic_point(mu, z[1]));
    if !(b > a) {
        b = a + 1e-3 * spread(mu);
    }
    let eps = 10f64.powf(rng.random_range(-6.0..-0.5));
    let up = rng.random_bool(0.5);
    let slope = (1.0 - eps) / (b - a);
    let f: Scalar = if up {
        Arc::new(move |x| eps + (1.0 - eps) * ((x - a) / (b - a)).clamp(0.0, 1.0))
    } else {
        Arc::new(move |x| eps + (1.0 - eps) * ((b - x) / (b - a)).clamp(0.0, 1.0))
    };
    let sign = if up { 1.0 } else { -1.0 };
    TestFunction {
        label: format!("indicator_ramp#{k}"),
        f,
        df: Arc::new(move |_| sign * slope),
        lo: a,
        hi: b,
        breaks: vec![a, b],
    }
}

fn extremal_candidates(mu: &PotentialSpec, nu: &PotentialSpec, h: &ModifiedH) -> Vec<TestFunction> {
    let m = mu.median();
    let q = h.power_exponent().unwrap_or_else(|| h.base().theta().max(2.0));
    let mut out = Vec::new();
    for side in Side::both() {
        for k in 2..=24 {
            let tau = 10f64.powf(-0.5 * k as f64);
            let x = mu.tail_quantile(tau, side);
            if (x - m).abs() < 1e-9 {
                continue;
            }
            out.push(power_shape(nu, m, x, q));
            if h.power_exponent().is_none() {
                out.extend(young_profile(nu, h, m, x));
            }
        }
    }
    out
}

fn perturbative(mu: &PotentialSpec, nu: &PotentialSpec) -> Result<Vec<TestFunction>> {
    let est = best_poincare_ratio(mu, nu, &poincare_nodes(mu, 400), 5000)?;
    let g = Arc::new(est.witness);
    let gmax = g.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mean = mu.mean(&g);
    let t = 1e-3 / gmax.max(1e-300);
    let nodes = g.nodes().to_vec();
    let (lo, hi) = (nodes[0], *nodes.last().unwrap());
    let g1 = g.clone();
    Ok(vec![TestFunction {
        label: "perturbative(t=1e-3)".into(),
        f: Arc::new(move |x| 1.0 + t * (g1.eval(x) - mean)),
        df: Arc::new(move |x| t * g.derivative(x)),
        lo,
        hi,
        breaks: nodes,
    }])
}

fn witness(mu: &PotentialSpec, tf: &TestFunction) -> Result<GridFunction> {
    let mut nodes = mu.quantile_nodes(256, 1e-12);
    nodes.extend(tf.breaks.iter().copied().filter(|b| b.is_finite()));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| *a <= *b);
    GridFunction::from_fn(nodes, |x| tf.value(x))
}

fn family_functions(
    mu: &PotentialSpec,
    nu: &PotentialSpec,
    h: &ModifiedH,
    family: MlsiFamily,
    samples: usize,
    seed: u64,
) -> Result<Vec<TestFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match family {
        MlsiFamily::RandomSmooth => (0..samples).map(|k| random_smooth(mu, &mut rng, k)).collect(),
        MlsiFamily::IndicatorRamps => (0..samples).map(|k| indicator_ramp(mu, &mut rng, k)).collect(),
        MlsiFamily::PaperTestFunctions => extremal_candidates(mu, nu, h),
        MlsiFamily::Perturbative => perturbative(mu, nu)?,
    })
}

/// Largest `Ent_μ(f^2)/∫ H(f'/f) f^2 dν` found over a family of test
/// functions. Every ratio is a lower bound on the best constant. A function
/// with positive entropy and zero energy yields `+∞`. `samples` applies to
/// the random families; the others are fixed sweeps.
pub fn best_mlsi_ratio(
    mu: &PotentialSpec,
    nu: &PotentialSpec,
    h: &ModifiedH,
    family: MlsiFamily,
    samples: usize,
    seed: u64,
) -> Result<RatioEstimate> {
    let fns = family_functions(mu, nu, h, family, samples, seed)?;
    if fns.is_empty() {
        return Err(Error::InvalidParameter("test family is empty".into()));
    }
    let ratios: Vec<f64> = fns
        .par_iter()
        .map(|tf| {
            let (ent, energy) = entropy_energy(mu, nu, h, tf);
            if energy > 0.0 {
                ent / energy
            } else if ent > 1e-300 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    let mut best = 0;
    let mut history = Vec::with_capacity(ratios.len());
    for (i, &r) in ratios.iter().enumerate() {
        if r > ratios[best] {
            best = i;
        }
        history.push(ratios[best]);
    }
    let w = witness(mu, &fns[best])?;
    Ok(RatioEstimate {
        value: ratios[best],
        grid_size: w.len(),
        witness: w,
        refinement_history: history,
        witness_label: Some(fns[best].label.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn perturbation_sees_twice_the_poincare_constant() {
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        let h = ModifiedH::hq(3.0).unwrap();
        let est = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::Perturbative, 1, 0).unwrap();
        assert!((est.value - 2.0).abs() < 0.02, "{}", est.value);
    }

    #[test]
    fn exponential_function_has_known_ratio() {
        // f = e^{x/2} on the Gaussian: Ent(f^2)/∫(f'/f)^2 f^2 = (1/2)e^{1/2}/((1/4)e^{1/2}) = 2
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        let h = ModifiedH::hq(2.0).unwrap();
        let tf = TestFunction {
            label: "exp".into(),
            f: Arc::new(|x| (0.5 * x).exp()),
            df: Arc::new(|x| 0.5 * (0.5 * x).exp()),
            lo: -40.0,
            hi: 40.0,
            breaks: vec![],
        };
        let (ent, energy) = entropy_energy(&mu, &mu, &h, &tf);
        assert!((energy - 0.25 * 0.5f64.exp()).abs() < 1e-9, "{energy}");
        assert!((ent / energy - 2.0).abs() < 1e-8);
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let mu = PotentialSpec::new(PotentialFamily::DoubleExp).unwrap();
        let h = ModifiedH::hq(3.0).unwrap();
        let a = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::RandomSmooth, 24, 7).unwrap();
        let b = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::RandomSmooth, 24, 7).unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.refinement_history.windows(2).all(|w| w[1] >= w[0]));
    }
}
