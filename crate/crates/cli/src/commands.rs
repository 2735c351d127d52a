use std::fs;
use std::path::Path;

use mlsi_core::concentration::{
    enlargement_bound, monte_carlo_tail, ConcentrationProfile, TailComparison, TestStatistic,
};
use mlsi_core::hardy::{bobkov_gotze, muckenhoupt, poincare_bounds, Curve};
use mlsi_core::measure::{PotentialSpec, Side};
use mlsi_core::mlsi::{
    b_q, c_phi, epsilon_certificate, gamma, gamma_beta, gauge_upper_bound, orlicz_gauge, ClassifyMode, ClassifyTarget,
    Verdict,
};
use mlsi_core::numeric::linspace;
use mlsi_core::oracle::{best_hardy_ratio, best_mlsi_ratio, best_poincare_ratio, beta_oracle, hardy_nodes, poincare_nodes, MlsiFamily};
use mlsi_core::suite::{run_criterion, summary_table, SuiteOptions, CRITERIA};
use mlsi_core::{CriterionReport, HypothesisCheck, ModifiedH};
use serde_json::json;

use crate::error::CliError;
use crate::input;
use crate::output::{self, num, Outcome, Table};
use crate::Globals;

pub enum Target {
    Q(f64),
    Phi(String),
}

impl Target {
    fn modification(&self) -> Result<ModifiedH, CliError> {
        Ok(match self {
            Target::Q(q) => ModifiedH::hq(*q)?,
            Target::Phi(s) => ModifiedH::new(input::young(s)?)?,
        })
    }

    fn config(&self) -> serde_json::Value {
        match self {
            Target::Q(q) => json!({ "q": q }),
            Target::Phi(s) => json!({ "phi": s }),
        }
    }
}

fn curve_table(curve: &Curve) -> Table {
    let mut t = Table::new(vec!["side", "x", "value"]);
    for (side, pts) in [("right", &curve.plus), ("left", &curve.minus)] {
        for &(x, v) in pts {
            t.push([side.to_string(), num(x), num(v)]);
        }
    }
    t
}

fn bracket_summary(r: &CriterionReport) -> String {
    format!(
        "{:?}: B+ = {}, B- = {}, bracket [{}, {}]",
        r.kind,
        num(r.side_values.b_plus),
        num(r.side_values.b_minus),
        num(r.lower_bound),
        num(r.upper_bound)
    )
}

fn criterion_outcome(kind: &'static str, config: serde_json::Value, r: &CriterionReport) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(kind, config, r, bracket_summary(r))?;
    out.hypotheses = r.hypotheses.clone();
    out.table = Some(curve_table(&r.curve));
    Ok(out)
}

pub fn hardy(mu_arg: &str, nu_arg: Option<&str>, p: f64) -> Result<Outcome, CliError> {
    let mu = input::half_line(mu_arg)?;
    let nu = match nu_arg {
        Some(a) => input::half_line(a)?,
        None => mu.clone(),
    };
    let r = muckenhoupt(&mu, &nu, p)?;
    let mut out = criterion_outcome("hardy", json!({ "mu": mu_arg, "nu": nu_arg, "p": p }), &r)?;
    out.table = Some({
        let mut t = Table::new(vec!["x", "value"]);
        for &(x, v) in &r.curve.plus {
            t.push([num(x), num(v)]);
        }
        t
    });
    Ok(out)
}

pub fn poincare(measure: &str, nu: Option<&str>) -> Result<Outcome, CliError> {
    let (mu, nu_spec) = input::measure_pair(measure, nu)?;
    let r = poincare_bounds(&mu, &nu_spec)?;
    criterion_outcome("poincare", json!({ "measure": measure, "nu": nu }), &r)
}

pub fn logsobolev(measure: &str, nu: Option<&str>) -> Result<Outcome, CliError> {
    let (mu, nu_spec) = input::measure_pair(measure, nu)?;
    let r = bobkov_gotze(&mu, &nu_spec)?;
    criterion_outcome("log_sobolev", json!({ "measure": measure, "nu": nu }), &r)
}

pub fn mlsi_bounds(measure: &str, nu: Option<&str>, target: &Target, window: Option<f64>) -> Result<Outcome, CliError> {
    let (mu, nu_spec) = input::measure_pair(measure, nu)?;
    let mut config = json!({ "measure": measure, "nu": nu, "window": window });
    config["target"] = target.config();
    match target {
        Target::Q(q) => {
            // the drift certificate is a statement about μ = ν only
            let cert = if nu.is_none() {
                epsilon_certificate(&mu, *q, window).ok()
            } else {
                None
            };
            let r = b_q(&mu, &nu_spec, *q, cert.as_ref())?;
            let report = json!({ "criterion": output::to_value(&r)?, "certificate": output::to_value(&cert)? });
            let mut out = Outcome::new("mlsi_q", config, &report, bracket_summary(&r))?;
            // an absent certificate only weakens the lower bound
            out.hypotheses = r.hypotheses.iter().filter(|h| h.name != "epsilon condition certified").cloned().collect();
            out.table = Some(curve_table(&r.curve));
            Ok(out)
        }
        Target::Phi(s) => {
            let phi = input::young(s)?;
            let r = c_phi(&phi, &mu, &nu_spec)?;
            criterion_outcome("mlsi_phi", config, &r)
        }
    }
}

pub fn classify(measure: &str, target: &Target, mode: Option<ClassifyMode>) -> Result<Outcome, CliError> {
    let mu = input::measure(measure)?;
    let (t, default_mode) = match target {
        Target::Q(q) => (ClassifyTarget::Q(*q), ClassifyMode::Critq),
        Target::Phi(s) => (ClassifyTarget::Phi(input::young(s)?), ClassifyMode::CritphiSufficient),
    };
    let c = mlsi_core::mlsi::classify(&mu, &t, mode.unwrap_or(default_mode))?;
    let mut config = json!({ "measure": measure, "mode": c.mode });
    config["target"] = target.config();
    let summary = format!("verdict: {}", output::to_value(&c.verdict)?);
    let mut out = Outcome::new("classify", config, &c, summary)?;
    out.hypotheses = c.hypotheses.clone();
    out.inapplicable = c.verdict == Verdict::Inapplicable;
    let mut table = Table::new(vec!["side", "x", "ratio"]);
    for e in &c.evidence {
        for &(x, v) in &e.curve {
            table.push([format!("{:?}", e.side).to_lowercase(), num(x), num(v)]);
        }
    }
    out.table = Some(table);
    Ok(out)
}

pub fn gauge_curve(g: &Globals, measure: &str, phi_arg: &str, window: Option<f64>) -> Result<Outcome, CliError> {
    let mu = input::measure(measure)?;
    let phi = input::young(phi_arg)?;
    let m = mu.median();
    let k = window.unwrap_or_else(|| mu.quantile(0.95) - m);
    let points = g.grid_size.unwrap_or(40).max(2);
    let mut table = Table::new(vec!["side", "tail", "x", "gauge", "gamma_half", "bound"]);
    let mut rows = Vec::new();
    let mut last_checks: Vec<HypothesisCheck> = Vec::new();
    for side in Side::both() {
        let label = format!("{side:?}").to_lowercase();
        let mut side_checks = Vec::new();
        for i in 0..points {
            // tail masses from 1/4 down to 1e-12, log-spaced
            let tau = 0.25 * (4e-12f64).powf(i as f64 / (points - 1) as f64);
            let x = mu.tail_quantile(tau, side);
            let gauge = orlicz_gauge(&phi, &mu, m, x)?;
            let gamma_half = gamma(&phi, &mu, m, x, 0.5)?;
            let bound = match gauge_upper_bound(&phi, &mu, x, k) {
                Ok(b) => {
                    side_checks = b.hypotheses.clone();
                    Some(b.bound)
                }
                Err(mlsi_core::Error::Hypothesis { condition, location }) => {
                    side_checks = vec![HypothesisCheck::new(condition, false, Some(location))];
                    None
                }
                Err(e) => return Err(e.into()),
            };
            table.push([label.clone(), num(tau), num(x), num(gauge), num(gamma_half), bound.map(num).unwrap_or_default()]);
            rows.push(json!({ "side": label, "tail": tau, "x": x, "gauge": gauge, "gamma_half": gamma_half, "bound": bound }));
        }
        last_checks.extend(side_checks.into_iter().map(|mut h| {
            h.name = format!("{label}: {}", h.name);
            h
        }));
    }
    let report = json!({ "phi": phi.label(), "window": k, "points": rows, "bound_checks_at_far_tail": last_checks });
    let config = json!({ "measure": measure, "phi": phi_arg, "window": window, "points": points });
    let mut out = Outcome::new("gauge_curve", config, &report, format!("{} points per side", points))?;
    out.table = Some(table);
    Ok(out)
}

fn in_bracket(v: f64, lo: f64, hi: f64, tol: f64) -> bool {
    v >= lo * (1.0 - tol) && v <= hi * (1.0 + tol)
}

fn witness_table(est: &mlsi_core::RatioEstimate) -> Table {
    let mut t = Table::new(vec!["x", "f"]);
    for (x, f) in est.witness.nodes().iter().zip(est.witness.values()) {
        t.push([num(*x), num(*f)]);
    }
    t
}

pub fn oracle_poincare(g: &Globals, measure: &str, nu: Option<&str>, max_iter: usize) -> Result<Outcome, CliError> {
    let (mu, nu_spec) = input::measure_pair(measure, nu)?;
    let n = g.grid_size.unwrap_or(2000);
    let est = best_poincare_ratio(&mu, &nu_spec, &poincare_nodes(&mu, n), max_iter)?;
    let r = poincare_bounds(&mu, &nu_spec)?;
    let inside = in_bracket(est.value, r.lower_bound, r.upper_bound, g.tol);
    let report = json!({
        "estimate": output::to_value(&est)?,
        "bracket": [r.lower_bound, r.upper_bound],
        "in_bracket": inside,
    });
    let config = json!({ "measure": measure, "nu": nu, "nodes": n, "max_iter": max_iter, "tol": g.tol });
    let summary = format!("oracle {} in [{}, {}]: {inside}", num(est.value), num(r.lower_bound), num(r.upper_bound));
    let mut out = Outcome::new("oracle_poincare", config, &report, summary)?;
    out.hypotheses = r.hypotheses;
    out.table = Some(witness_table(&est));
    Ok(out)
}

pub fn oracle_hardy(g: &Globals, mu_arg: &str, nu_arg: Option<&str>, p: f64, max_iter: usize) -> Result<Outcome, CliError> {
    let mu = input::half_line(mu_arg)?;
    let nu = match nu_arg {
        Some(a) => input::half_line(a)?,
        None => mu.clone(),
    };
    let n = g.grid_size.unwrap_or(2000);
    let est = best_hardy_ratio(&mu, &nu, p, &hardy_nodes(&mu, n), max_iter)?;
    let r = muckenhoupt(&mu, &nu, p)?;
    let inside = in_bracket(est.value, r.lower_bound, r.upper_bound, g.tol);
    let report = json!({
        "estimate": output::to_value(&est)?,
        "bracket": [r.lower_bound, r.upper_bound],
        "in_bracket": inside,
    });
    let config = json!({ "mu": mu_arg, "nu": nu_arg, "p": p, "nodes": n, "max_iter": max_iter, "tol": g.tol });
    let summary = format!("oracle {} in [{}, {}]: {inside}", num(est.value), num(r.lower_bound), num(r.upper_bound));
    let mut out = Outcome::new("oracle_hardy", config, &report, summary)?;
    out.hypotheses = r.hypotheses;
    out.table = Some(witness_table(&est));
    Ok(out)
}

pub fn oracle_mlsi(
    g: &Globals,
    measure: &str,
    nu: Option<&str>,
    target: &Target,
    family: &str,
    samples: usize,
) -> Result<Outcome, CliError> {
    let (mu, nu_spec) = input::measure_pair(measure, nu)?;
    let h = target.modification()?;
    let fam = MlsiFamily::parse(family)?;
    let est = best_mlsi_ratio(&mu, &nu_spec, &h, fam, samples, g.seed)?;
    let mut config = json!({ "measure": measure, "nu": nu, "family": fam.name(), "samples": samples, "seed": g.seed });
    config["target"] = target.config();
    let summary = format!("best ratio {} ({})", num(est.value), est.witness_label.as_deref().unwrap_or("-"));
    let mut out = Outcome::new("oracle_mlsi", config, &est, summary)?;
    let mut t = Table::new(vec!["step", "best"]);
    for (i, v) in est.refinement_history.iter().enumerate() {
        t.push([i.to_string(), num(*v)]);
    }
    out.table = Some(t);
    Ok(out)
}

pub fn oracle_beta(g: &Globals, measure: &str, phi_arg: &str, x: f64, a: f64) -> Result<Outcome, CliError> {
    let mu = input::measure(measure)?;
    let phi = input::young(phi_arg)?;
    let m = mu.median();
    let grid = g.grid_size.unwrap_or(400);
    let est = beta_oracle(&phi, &mu, m, x, a, grid)?;
    let pair = gamma_beta(&phi, &mu, m, x, a)?;
    let agree = (est.value - pair.beta).abs() <= 1e-3 * pair.beta.abs().max(f64::MIN_POSITIVE);
    let report = json!({ "oracle": output::to_value(&est)?, "variational": output::to_value(&pair)?, "agree_1e-3": agree });
    let config = json!({ "measure": measure, "phi": phi_arg, "x": x, "a": a, "grid": grid });
    let summary = format!("beta oracle {} vs variational {}", num(est.value), num(pair.beta));
    Outcome::new("oracle_beta", config, &report, summary)
}

pub fn concentration_bound(g: &Globals, target: &Target, kappa: f64, a: f64, r_max: f64) -> Result<Outcome, CliError> {
    let h = target.modification()?;
    let profile = ConcentrationProfile::new(&h, kappa, a)?;
    let enl = enlargement_bound(kappa, &h, r_max);
    let points = g.grid_size.unwrap_or(50).max(1);
    let mut table = Table::new(vec!["r", "bound"]);
    let mut curve = Vec::new();
    for r in linspace(0.0, r_max, points) {
        let b = profile.bound(r);
        table.push([num(r), num(b)]);
        curve.push([r, b]);
    }
    let report = json!({ "profile": output::to_value(&profile)?, "enlargement": output::to_value(&enl)?, "curve": curve });
    let mut config = json!({ "kappa": kappa, "a": a, "r_max": r_max, "points": points });
    config["target"] = target.config();
    let summary = format!("K = {}, K_enl used = {}", num(profile.k), num(enl.k_used));
    let mut out = Outcome::new("concentration_bound", config, &report, summary)?;
    out.table = Some(table);
    Ok(out)
}

fn certified_kappa(mu: &PotentialSpec, target: &Target) -> Result<f64, CliError> {
    Ok(match target {
        Target::Q(q) => b_q(mu, mu, *q, None)?.upper_bound,
        Target::Phi(s) => c_phi(&input::young(s)?, mu, mu)?.upper_bound,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn concentration_simulate(
    g: &Globals,
    measure: &str,
    target: &Target,
    n: usize,
    kappa: Option<f64>,
    samples: usize,
    r_max: f64,
    statistic: &str,
) -> Result<Outcome, CliError> {
    let mu = input::measure(measure)?;
    let h = target.modification()?;
    let stat = match statistic {
        "linear" => TestStatistic::linear_normalized(n),
        "softmax" => TestStatistic::SoftMax { scale: 1.0, beta: 1.0 },
        other => return Err(CliError::Usage(format!("unknown statistic `{other}`; use linear or softmax"))),
    };
    let a = stat.budget(&h);
    let kappa = match kappa {
        Some(k) => k,
        None => certified_kappa(&mu, target)?,
    };
    if !kappa.is_finite() {
        return Err(mlsi_core::Error::Hypothesis {
            condition: "finite modified log-Sobolev constant".into(),
            location: f64::INFINITY,
        }
        .into());
    }
    let points = g.grid_size.unwrap_or(20).max(2);
    let r_grid = linspace(r_max / points as f64, r_max, points - 1);
    let tail = monte_carlo_tail(&mu, n, &stat, &h, a, &r_grid, samples, g.seed)?;
    let profile = ConcentrationProfile::new(&h, kappa, a)?;
    let cmp = TailComparison::new(&tail, &profile);
    let mut table = Table::new(vec!["r", "bound", "empirical", "ci_low", "ci_high"]);
    for row in &cmp.rows {
        table.push([num(row.r), num(row.bound), num(row.empirical), num(row.ci_low), num(row.ci_high)]);
    }
    let report = json!({ "tail": output::to_value(&tail)?, "comparison": output::to_value(&cmp)? });
    let mut config = json!({
        "measure": measure, "n": n, "kappa": kappa, "samples": samples,
        "r_max": r_max, "statistic": statistic, "seed": g.seed,
    });
    config["target"] = target.config();
    let summary = format!("99% upper limits below the bound at every r: {}", cmp.pass);
    let mut out = Outcome::new("concentration_simulate", config, &report, summary)?;
    out.hypotheses.push(HypothesisCheck::new("gradient budget", tail.budget <= a * (1.0 + 1e-12), None));
    out.table = Some(table);
    Ok(out)
}

pub fn bench(g: &Globals, out_dir: &Path, quick: bool, only: &[u8]) -> Result<i32, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::Write {
        path: out_dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut opts = SuiteOptions::default();
    if g.seed != 0 {
        opts.seed = g.seed;
    }
    if quick {
        opts.mc_samples = 100_000;
        opts.mlsi_samples = 100;
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=CRITERIA).collect() } else { only.to_vec() };
    let mut rows = Vec::new();
    for &id in &ids {
        let row = run_criterion(id, &opts);
        output::say(&row.line());
        rows.push(row);
    }
    let summary = summary_table()?;
    let mut table = Table::new(vec!["measure", "inequality", "verdict", "lower", "upper"]);
    for s in &summary {
        table.push([
            s.measure.clone(),
            s.inequality.clone(),
            output::to_value(&s.verdict)?.to_string().trim_matches('"').to_string(),
            num(s.lower),
            num(s.upper),
        ]);
    }
    table.write(&out_dir.join("summary.csv"))?;
    let failed: Vec<&mlsi_core::suite::SuiteRow> = rows.iter().filter(|r| !r.pass).collect();
    let report = json!({ "checks": output::to_value(&rows)?, "summary": output::to_value(&summary)? });
    let config = json!({ "options": output::to_value(&opts)?, "only": ids });
    let out = Outcome::new("bench", config, &report, String::new())?;
    let path = out_dir.join("report.json");
    fs::write(&path, output::envelope_json(&out)? + "\n").map_err(|e| CliError::Write {
        path: path.clone(),
        message: e.to_string(),
    })?;
    output::say(&format!("wrote {} and {}", path.display(), out_dir.join("summary.csv").display()));
    for r in &failed {
        eprintln!("failing check {}: {} ({})", r.id, r.name, r.detail);
    }
    Ok(if failed.is_empty() { 0 } else { 1 })
}
