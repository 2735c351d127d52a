//! The fixed acceptance matrix. Each check compares a criterion against a
//! closed form or against an oracle, and reports a single pass/fail row.
//! Tolerances are pinned here so the test target and the command-line
//! benchmark runner agree on what counts as a pass.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::concentration::{hq_conjugate, monte_carlo_tail, ConcentrationProfile, TailComparison, TestStatistic};
use crate::error::{Error, Result};
use crate::hardy::{bobkov_gotze, hardy_factor, muckenhoupt, poincare_bounds};
use crate::measure::{HalfLine, PotentialFamily, PotentialSpec, Side};
use crate::mlsi::{
    b_q, c_phi, classify, gamma, gamma_beta, gauge_upper_bound, orlicz_gauge, ClassifyMode, ClassifyTarget, Verdict,
};
use crate::numeric::{linspace, log_grid};
use crate::oracle::{
    best_hardy_ratio, best_mlsi_ratio, best_poincare_ratio, beta_oracle, hardy_nodes, poincare_nodes,
    prop_min_lower_bound, MlsiFamily,
};
use crate::young::{
    build_phi_from_psi, check_growth, envelope_equivalence, legendre, submultiplicativity_constants, ModifiedH, YoungFn,
};

/// Number of acceptance checks.
pub const CRITERIA: u8 = 10;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Monte Carlo draws for the concentration check.
    pub mc_samples: usize,
    /// Random test functions per benchmark in the sandwich check.
    pub mlsi_samples: usize,
    pub poincare_nodes: usize,
    pub hardy_nodes: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 20240917,
            mc_samples: 1_000_000,
            mlsi_samples: 500,
            poincare_nodes: 2000,
            hardy_nodes: 2000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
    /// Extra observations that do not affect `pass`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<String>,
}

impl SuiteRow {
    /// `[PASS] 3 classifier exactness (1.2s): ...`
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.1}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            detail,
            info: Vec::new(),
        }
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "poincare sandwich",
        2 => "muckenhoupt sandwich",
        3 => "classifier exactness",
        4 => "gamma/beta closed forms",
        5 => "gauge duality and bound",
        6 => "mlsi sandwich consistency",
        7 => "H_q conjugate formula",
        8 => "herbst domination",
        9 => "young function lemma suite",
        10 => "laplace asymptotics",
        _ => "unknown",
    }
}

/// Runs one check. Errors inside a check become a failing row.
pub fn run_criterion(id: u8, opts: &SuiteOptions) -> SuiteRow {
    let start = Instant::now();
    let result = match id {
        1 => poincare_sandwich(opts),
        2 => muckenhoupt_sandwich(opts),
        3 => classifier_grid(),
        4 => gamma_beta_closed_forms(),
        5 => gauge_duality(opts),
        6 => mlsi_sandwich(opts),
        7 => hq_conjugate_formula(),
        8 => herbst_domination(opts),
        9 => young_lemmas(),
        10 => laplace_asymptotics(),
        _ => Err(Error::InvalidParameter(format!("no acceptance check numbered {id}"))),
    };
    let outcome = result.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    SuiteRow {
        id,
        name: criterion_name(id),
        pass: outcome.pass,
        seconds: start.elapsed().as_secs_f64(),
        detail: outcome.detail,
        info: outcome.info,
    }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<SuiteRow> {
    (1..=CRITERIA).map(|id| run_criterion(id, opts)).collect()
}

fn spec(f: PotentialFamily) -> Result<PotentialSpec> {
    PotentialSpec::new(f)
}

fn benchmark_measures() -> Vec<PotentialFamily> {
    vec![
        PotentialFamily::DoubleExp,
        PotentialFamily::Gaussian,
        PotentialFamily::PowerLaw { p: 1.5 },
        PotentialFamily::PowerLaw { p: 3.0 },
    ]
}

const CONTAIN_SLACK: f64 = 1e-6;

fn within(v: f64, lo: f64, hi: f64) -> bool {
    v >= lo * (1.0 - CONTAIN_SLACK) && v <= hi * (1.0 + CONTAIN_SLACK)
}

fn poincare_sandwich(opts: &SuiteOptions) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in benchmark_measures() {
        let mu = spec(fam)?;
        let report = poincare_bounds(&mu, &mu)?;
        let est = best_poincare_ratio(&mu, &mu, &poincare_nodes(&mu, opts.poincare_nodes), 20_000)?;
        let mut ok = within(est.value, report.lower_bound, report.upper_bound);
        if matches!(mu.family(), PotentialFamily::Gaussian) {
            ok &= (est.value - 1.0).abs() <= 0.02;
        }
        pass &= ok;
        parts.push(format!(
            "{} {:.4} in [{:.4}, {:.4}]{}",
            mu.family().label(),
            est.value,
            report.lower_bound,
            report.upper_bound,
            if ok { "" } else { " !" }
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn muckenhoupt_sandwich(opts: &SuiteOptions) -> Result<Outcome> {
    let u = HalfLine::uniform(1.0)?;
    let e = HalfLine::exponential(1.0)?;
    let mut parts = Vec::new();

    let r2 = muckenhoupt(&u, &u, 2.0)?;
    let b_exact = (r2.side_values.b_plus - 0.25).abs() <= 1e-9;
    let est = best_hardy_ratio(&u, &u, 2.0, &hardy_nodes(&u, opts.hardy_nodes), 20_000)?;
    let target = 4.0 / std::f64::consts::PI.powi(2);
    let close = (est.value / target - 1.0).abs() <= 0.01;
    let mut pass = b_exact && close && within(est.value, r2.lower_bound, r2.upper_bound);
    parts.push(format!(
        "uniform p=2 B={:.6} oracle={:.5} (4/pi^2={target:.5})",
        r2.side_values.b_plus, est.value
    ));

    for (w, name) in [(&u, "uniform"), (&e, "exponential")] {
        for p in [1.5, 2.0, 3.0] {
            let r = muckenhoupt(w, w, p)?;
            let est = best_hardy_ratio(w, w, p, &hardy_nodes(w, opts.hardy_nodes), 20_000)?;
            let b = r.side_values.b_plus;
            let ok = within(est.value, b, hardy_factor(p) * b);
            pass &= ok;
            parts.push(format!(
                "{name} p={p} {:.4} in [{b:.4}, {:.4}]{}",
                est.value,
                hardy_factor(p) * b,
                if ok { "" } else { " !" }
            ));
        }
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn classifier_grid() -> Result<Outcome> {
    let mut wrong = Vec::new();
    let mut cells = 0;
    for k in 11..=20 {
        let p = k as f64 / 10.0;
        let mu = spec(PotentialFamily::PowerLaw { p })?;
        for q in [2.0, 2.5, 3.0, 4.0] {
            cells += 1;
            let expected = p >= q / (q - 1.0);
            let c = classify(&mu, &ClassifyTarget::Q(q), ClassifyMode::Critq)?;
            if c.verdict.as_bool() != Some(expected) {
                wrong.push(format!("(p={p}, q={q}) gave {:?}", c.verdict));
            }
        }
    }
    let detail = if wrong.is_empty() {
        format!("{cells}/{cells} cells agree with p >= q/(q-1)")
    } else {
        format!("{} of {cells} cells disagree: {}", wrong.len(), wrong.join(", "))
    };
    Ok(Outcome::new(wrong.is_empty(), detail))
}

/// `∫ n^{-1/(q-1)}` between 0 and `x` for `n = e^{-|t|}/2`.
fn double_exp_inverse_integral(q: f64, x: f64) -> f64 {
    let s = 1.0 / (q - 1.0);
    2f64.powf(s) * (q - 1.0) * (s * x.abs()).exp_m1()
}

fn gamma_beta_closed_forms() -> Result<Outcome> {
    let nu = spec(PotentialFamily::DoubleExp)?;
    let m = nu.median();
    let mut worst_gamma: f64 = 0.0;
    let mut worst_beta: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for q in [2.0, 3.0, 4.0] {
        let phi = YoungFn::power(q)?;
        for x in [-1.5, 0.5, 2.0, 4.0] {
            for a in [0.5, 1.0, 3.0] {
                let i = double_exp_inverse_integral(q, x);
                let gamma_cf = q * (a / i).powf(q - 1.0);
                let beta_cf = a.powf(q) * i.powf(1.0 - q);
                let pair = gamma_beta(&phi, &nu, m, x, a)?;
                worst_gamma = worst_gamma.max((pair.gamma / gamma_cf - 1.0).abs());
                worst_beta = worst_beta.max((pair.beta / beta_cf - 1.0).abs());
                worst_identity = worst_identity.max((pair.beta / (a * pair.gamma / q) - 1.0).abs());
                let oracle = beta_oracle(&phi, &nu, m, x, a, 400)?;
                worst_oracle = worst_oracle.max((oracle.value / beta_cf - 1.0).abs());
            }
        }
    }
    let pass = worst_gamma <= 1e-6 && worst_beta <= 1e-6 && worst_identity <= 1e-8 && worst_oracle <= 1e-3;
    Ok(Outcome::new(
        pass,
        format!(
            "max rel err gamma {worst_gamma:.1e}, beta {worst_beta:.1e}, beta=a*gamma/q {worst_identity:.1e}, oracle {worst_oracle:.1e}"
        ),
    ))
}

fn gauge_duality(opts: &SuiteOptions) -> Result<Outcome> {
    let measures = [
        PotentialFamily::Gaussian,
        PotentialFamily::DoubleExp,
        PotentialFamily::PowerLaw { p: 1.5 },
        PotentialFamily::PowerLaw { p: 3.0 },
        PotentialFamily::PowerLaw { p: 2.5 },
    ];
    let phis = [
        YoungFn::power(2.0)?,
        YoungFn::power(3.0)?,
        YoungFn::power(4.0)?,
        YoungFn::plus_square(YoungFn::power(3.0)?)?,
        YoungFn::scaled_power(2.5, 0.7)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    let mut bounded = 0;
    let mut violations = Vec::new();
    for _ in 0..10 {
        let mu = spec(measures[rng.random_range(0..measures.len())].clone())?;
        let phi = &phis[rng.random_range(0..phis.len())];
        let m = mu.median();
        let window = mu.quantile(0.95) - m;
        let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let x = m + side * window * rng.random_range(0.3..3.0);
        let g = orlicz_gauge(phi, &mu, m, x)?;
        let dual = gamma(phi, &mu, m, x, 0.5)?;
        worst = worst.max((g * dual - 1.0).abs());
        let bound = match gauge_upper_bound(phi, &mu, x, window) {
            Ok(b) => b,
            Err(Error::Hypothesis { .. }) => continue,
            Err(e) => return Err(e),
        };
        if bound.hypotheses.iter().all(|h| h.holds) {
            bounded += 1;
            if g > bound.bound * (1.0 + CONTAIN_SLACK) {
                violations.push(format!("{} {} x={x:.3}: {g:.4e} > {:.4e}", mu.family().label(), phi.label(), bound.bound));
            }
        }
    }
    let pass = worst <= 1e-6 && violations.is_empty();
    let mut detail = format!("max |gauge*gamma - 1| = {worst:.1e}; bound verified at {bounded}/10 triples");
    if !violations.is_empty() {
        detail.push_str(&format!("; violations: {}", violations.join(", ")));
    }
    Ok(Outcome::new(pass, detail))
}

struct Benchmark {
    family: PotentialFamily,
    target: ClassifyTarget,
}

fn sandwich_benchmarks() -> Result<Vec<Benchmark>> {
    let q = |family, q| Benchmark {
        family,
        target: ClassifyTarget::Q(q),
    };
    Ok(vec![
        q(PotentialFamily::Gaussian, 2.0),
        q(PotentialFamily::PowerLaw { p: 1.5 }, 3.0),
        q(PotentialFamily::PowerLaw { p: 3.0 }, 2.0),
        q(PotentialFamily::PowerLaw { p: 2.0 }, 4.0),
        Benchmark {
            family: PotentialFamily::PowerLaw { p: 1.5 },
            target: ClassifyTarget::Phi(YoungFn::plus_square(YoungFn::power(3.0)?)?),
        },
    ])
}

fn mlsi_sandwich(opts: &SuiteOptions) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut info = Vec::new();
    for b in sandwich_benchmarks()? {
        let mu = spec(b.family.clone())?;
        let (h, upper, verdict) = match &b.target {
            ClassifyTarget::Q(q) => {
                let h = ModifiedH::hq(*q)?;
                let upper = b_q(&mu, &mu, *q, None)?.upper_bound;
                (h, upper, classify(&mu, &b.target, ClassifyMode::Critq)?.verdict)
            }
            ClassifyTarget::Phi(phi) => {
                let h = ModifiedH::new(phi.clone())?;
                let upper = c_phi(phi, &mu, &mu)?.upper_bound;
                (h, upper, classify(&mu, &b.target, ClassifyMode::CritphiSufficient)?.verdict)
            }
        };
        let name = format!("{}/{}", mu.family().label(), h.label());
        if verdict != Verdict::Holds || !upper.is_finite() {
            pass = false;
            parts.push(format!("{name}: expected a finite verdict, got {verdict:?} with upper {upper:e}"));
            continue;
        }
        let perturbative = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::Perturbative, 1, opts.seed)?.value;
        let random = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::RandomSmooth, opts.mlsi_samples, opts.seed)?.value;
        let sweep = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::PaperTestFunctions, 0, opts.seed)?.value;
        let mut prop: f64 = 0.0;
        for side in Side::both() {
            for tau in [1e-2, 1e-3, 1e-4, 1e-6] {
                let x = mu.tail_quantile(tau, side);
                if let Ok(p) = prop_min_lower_bound(&mu, &mu, &h, x) {
                    prop = prop.max(p.lower_bound);
                }
            }
        }
        let lower = perturbative.max(random).max(sweep).max(prop);
        let ok = lower <= upper;
        pass &= ok;
        parts.push(format!("{name}: lower {lower:.3} <= upper {upper:.3e}{}", if ok { "" } else { " !" }));
        info.push(format!(
            "{name}: perturbative {perturbative:.4}, random {random:.4}, sweep {sweep:.4}, prop_min {prop:.4}"
        ));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
        info,
    })
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn hq_conjugate_formula() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    let mut jump: f64 = 0.0;
    for q in [2.5, 3.0, 5.0] {
        let h = ModifiedH::hq(q)?;
        for y in linspace(0.05, 3.0 * q, 99) {
            let numeric = legendre(|t| h.value(t), y)?;
            let formula = hq_conjugate(q, y);
            worst = worst.max((numeric - formula).abs());
            worst_closed = worst_closed.max((h.conj_value(y) - formula).abs());
        }
        for knot in [2.0, q] {
            jump = jump.max((hq_conjugate(q, next_up(knot)) - hq_conjugate(q, knot)).abs());
        }
    }
    let pass = worst < 1e-8 && worst_closed < 1e-8 && jump <= 1e-12;
    Ok(Outcome::new(
        pass,
        format!("max abs err: golden-section Legendre {worst:.1e}, first-order {worst_closed:.1e}; jump at knots {jump:.1e}"),
    ))
}

const MC_DIM: usize = 20;

fn tail_check(mu: &PotentialSpec, h: &ModifiedH, kappa: f64, opts: &SuiteOptions) -> Result<Option<TailComparison>> {
    if !kappa.is_finite() {
        return Ok(None);
    }
    let stat = TestStatistic::linear_normalized(MC_DIM);
    let r_grid = linspace(0.25, 5.0, 19);
    let tail = monte_carlo_tail(mu, MC_DIM, &stat, h, 1.0, &r_grid, opts.mc_samples, opts.seed)?;
    let profile = ConcentrationProfile::new(h, kappa, 1.0)?;
    Ok(Some(TailComparison::new(&tail, &profile)))
}

fn herbst_domination(opts: &SuiteOptions) -> Result<Outcome> {
    let h = ModifiedH::hq(3.0)?;
    let mut info = Vec::new();
    let mut parts = Vec::new();
    let mut pass = true;
    for family in [PotentialFamily::DoubleExp, PotentialFamily::PowerLaw { p: 1.5 }] {
        let mu = spec(family)?;
        let kappa = b_q(&mu, &mu, 3.0, None)?.upper_bound;
        match tail_check(&mu, &h, kappa, opts)? {
            // an infinite constant leaves the trivial bound 1
            None => parts.push(format!("{}: kappa upper = inf, bound is 1 (vacuous)", mu.family().label())),
            Some(cmp) => {
                pass &= cmp.pass;
                let tightest = cmp
                    .rows
                    .iter()
                    .map(|r| r.ci_high / r.bound)
                    .fold(0.0, f64::max);
                parts.push(format!(
                    "{}: kappa={kappa:.3e}, max UCL/bound = {tightest:.3} over {} r",
                    mu.family().label(),
                    cmp.rows.len()
                ));
            }
        }
        // a sharper constant from below, for context only
        let lower = best_mlsi_ratio(&mu, &mu, &h, MlsiFamily::Perturbative, 1, opts.seed)?.value;
        if let Some(cmp) = tail_check(&mu, &h, lower, opts)? {
            info.push(format!(
                "{} with kappa={lower:.3} (oracle lower estimate): UCL <= bound at {}/{} r",
                mu.family().label(),
                cmp.rows.iter().filter(|r| r.ci_high <= r.bound).count(),
                cmp.rows.len()
            ));
        }
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
        info,
    })
}

fn appendix_functions() -> Result<Vec<YoungFn>> {
    let cubic_plus_square = YoungFn::plus_square(YoungFn::power(3.0)?)?;
    let mut v = vec![
        YoungFn::power(1.5)?,
        YoungFn::power(2.0)?,
        YoungFn::power(3.0)?,
        YoungFn::power(4.0)?,
        YoungFn::scaled_power(2.5, 0.7)?,
        YoungFn::plus_square(YoungFn::power(1.5)?)?,
        cubic_plus_square.conjugate_fn(),
        cubic_plus_square,
    ];
    for (psi, alpha, x1) in [
        (PotentialFamily::PowerLaw { p: 1.5 }, 1.5, 2.0),
        (
            PotentialFamily::Custom {
                a: 1.0,
                p: 1.5,
                b: 0.0,
                c: 1.0,
            },
            1.2,
            2.0,
        ),
    ] {
        let s = build_phi_from_psi(psi, alpha, x1)?;
        v.push(s.f);
        v.push(s.phi);
    }
    Ok(v)
}

/// First failing check for one Young function, if any.
fn lemma_failures(phi: &YoungFn) -> Vec<String> {
    let (alpha, theta) = (phi.alpha(), phi.theta());
    let mut fails = Vec::new();
    let tol = 1e-9;

    if !check_growth(phi, alpha, theta).holds {
        fails.push("growth envelope".into());
    }
    let eq = envelope_equivalence(phi, alpha);
    if eq != [true; 3] {
        fails.push(format!("envelope equivalence {eq:?}"));
    }

    let xs = log_grid(1e-4, 1e4, 4);
    let ts = log_grid(1.0, 1e3, 4);
    'scaling: for &x in &xs {
        for &t in &ts {
            let (base, scaled) = (phi.value(x), phi.value(t * x));
            if scaled < t.powf(alpha) * base * (1.0 - tol) || scaled > t.powf(theta) * base * (1.0 + tol) {
                fails.push(format!("scaling bounds at x={x:e}, t={t:e}"));
                break 'scaling;
            }
        }
    }

    let s = submultiplicativity_constants(phi);
    if s.gamma.is_finite() {
        for (name, grid, bound) in [
            ("gamma1", s.gamma1_grid, s.gamma1),
            ("gamma2", s.gamma2_grid, s.gamma2),
            ("gamma3", s.gamma3_grid, s.gamma3),
        ] {
            if grid > bound * (1.0 + 1e-6) {
                fails.push(format!("{name} grid {grid:.4} exceeds constructive {bound:.4}"));
            }
        }
    }

    for v in log_grid(1e-3, 1e3, 16) {
        let p = phi.inverse(v) * phi.conj_inverse(v);
        if p < v * (1.0 - tol) || p > 2.0 * v * (1.0 + tol) {
            fails.push(format!("pairing at {v:e}: {p:e}"));
            break;
        }
    }

    'young: for &x in &log_grid(1e-3, 1e3, 4) {
        for &y in &log_grid(1e-3, 1e3, 4) {
            let rhs = phi.value(x) + phi.conj_value(y);
            if x * y > rhs * (1.0 + tol) {
                fails.push(format!("young inequality at ({x:e}, {y:e})"));
                break 'young;
            }
        }
        let y = phi.deriv(x);
        let gap = phi.value(x) + phi.conj_value(y) - x * y;
        if gap.abs() > 1e-8 * (x * y).max(1e-300) {
            fails.push(format!("young equality at x={x:e}: gap {gap:e}"));
            break;
        }
    }
    fails
}

fn young_lemmas() -> Result<Outcome> {
    let fns = appendix_functions()?;
    let mut failed = Vec::new();
    let mut vacuous = 0;
    for phi in &fns {
        let f = lemma_failures(phi);
        if crate::young::gamma_constant(phi).is_infinite() {
            vacuous += 1;
        }
        if !f.is_empty() {
            failed.push(format!("{}: {}", phi.label(), f.join(", ")));
        }
    }
    let mut detail = format!(
        "{}/{} functions pass every check ({vacuous} with infinite gamma skip the constructive bounds)",
        fns.len() - failed.len(),
        fns.len()
    );
    if !failed.is_empty() {
        detail.push_str(&format!("; {}", failed.join("; ")));
    }
    Ok(Outcome::new(failed.is_empty(), detail))
}

fn laplace_asymptotics() -> Result<Outcome> {
    let gauss = spec(PotentialFamily::Gaussian)?;
    let mut parts = Vec::new();
    let mut pass = true;
    for (x, tol) in [(5.0, 0.05), (10.0, 0.01)] {
        let est = gauss.laplace_tail_estimate(x)?;
        let exact = gauss.tail(x, Side::Right);
        let err = (est.asymptotic / exact - 1.0).abs();
        pass &= err < tol;
        parts.push(format!("gaussian x={x}: |ratio-1| = {err:.4}"));
    }
    let pl = spec(PotentialFamily::PowerLaw { p: 1.5 })?;
    let est = pl.laplace_tail_estimate(10.0)?;
    let exact = pl.tail(10.0, Side::Right);
    let inside = est.lower <= exact && exact <= est.upper;
    pass &= inside;
    parts.push(format!(
        "power_law(1.5) x=10: {:.4e} <= {exact:.4e} <= {:.4e}",
        est.lower, est.upper
    ));
    Ok(Outcome::new(pass, parts.join("; ")))
}

/// One line of the benchmark summary table.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub measure: String,
    pub inequality: String,
    pub verdict: Verdict,
    pub lower: f64,
    pub upper: f64,
}

/// Verdicts and brackets for the built-in measures against the Poincaré,
/// log-Sobolev and `H_q` inequalities.
pub fn summary_table() -> Result<Vec<SummaryRow>> {
    let measures = [
        PotentialFamily::Gaussian,
        PotentialFamily::DoubleExp,
        PotentialFamily::PowerLaw { p: 1.2 },
        PotentialFamily::PowerLaw { p: 1.5 },
        PotentialFamily::PowerLaw { p: 3.0 },
    ];
    let finite = |f: bool| if f { Verdict::Holds } else { Verdict::Fails };
    let mut rows = Vec::new();
    for fam in measures {
        let mu = spec(fam)?;
        let label = mu.family().label();
        let p = poincare_bounds(&mu, &mu)?;
        rows.push(SummaryRow {
            measure: label.clone(),
            inequality: "poincare".into(),
            verdict: finite(p.finite),
            lower: p.lower_bound,
            upper: p.upper_bound,
        });
        let l = bobkov_gotze(&mu, &mu)?;
        rows.push(SummaryRow {
            measure: label.clone(),
            inequality: "log_sobolev".into(),
            verdict: finite(l.finite),
            lower: l.lower_bound,
            upper: l.upper_bound,
        });
        for q in [2.0, 3.0, 4.0] {
            let r = b_q(&mu, &mu, q, None)?;
            let c = classify(&mu, &ClassifyTarget::Q(q), ClassifyMode::Critq)?;
            rows.push(SummaryRow {
                measure: label.clone(),
                inequality: format!("H_{q}"),
                verdict: c.verdict,
                lower: r.lower_bound,
                upper: r.upper_bound,
            });
        }
    }
    Ok(rows)
}
