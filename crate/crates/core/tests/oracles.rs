//! Cross-checks against values computed independently of the crate, mostly
//! through special functions from `statrs`.

use mlsi_core::hardy::{muckenhoupt, poincare_bounds};
use mlsi_core::measure::{HalfLine, PotentialFamily, PotentialSpec, Side};
use mlsi_core::mlsi::{classify, ClassifyMode, ClassifyTarget, Verdict};
use mlsi_core::oracle::{best_hardy_ratio, dual_entropy_sup, hardy_nodes, tail_weights};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::{gamma, gamma_ur};

fn spec(f: PotentialFamily) -> PotentialSpec {
    PotentialSpec::new(f).unwrap()
}

#[test]
fn normalising_constants() {
    for p in [0.8, 1.5, 3.0] {
        let mu = spec(PotentialFamily::PowerLaw { p });
        let z = 2.0 * gamma(1.0 + 1.0 / p);
        assert!((mu.z() / z - 1.0).abs() < 1e-10, "p={p}");
    }
    let g = spec(PotentialFamily::Gaussian);
    assert!((g.z() - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
}

#[test]
fn tails_match_special_functions() {
    let g = spec(PotentialFamily::Gaussian);
    let n = Normal::standard();
    for x in [0.5, 2.0, 5.0, 9.0] {
        let exact = n.sf(x);
        assert!((g.tail(x, Side::Right) / exact - 1.0).abs() < 1e-9, "x={x}");
        assert!((g.tail(-x, Side::Left) / exact - 1.0).abs() < 1e-9, "x={x}");
    }
    // ∫_x^∞ e^{-t^p} dt = Γ(1/p, x^p)/p
    let p = 1.5;
    let mu = spec(PotentialFamily::PowerLaw { p });
    for x in [0.5f64, 3.0, 10.0] {
        let upper = gamma_ur(1.0 / p, x.powf(p)) * gamma(1.0 / p) / p;
        let exact = upper / mu.z();
        assert!((mu.tail(x, Side::Right) / exact - 1.0).abs() < 1e-8, "x={x}");
    }
}

#[test]
fn double_exp_poincare_sides_are_one() {
    let mu = spec(PotentialFamily::DoubleExp);
    let r = poincare_bounds(&mu, &mu).unwrap();
    assert!((r.side_values.b_plus - 1.0).abs() < 1e-9);
    assert!((r.upper_bound - 4.0).abs() < 1e-8);
}

#[test]
fn exponential_hardy_closed_form() {
    // with μ = ν = e^{-x} on [0, ∞) and p = 2 the best constant is 4
    let e = HalfLine::exponential(1.0).unwrap();
    let r = muckenhoupt(&e, &e, 2.0).unwrap();
    let est = best_hardy_ratio(&e, &e, 2.0, &hardy_nodes(&e, 2000), 20_000).unwrap();
    assert!(est.value <= 4.0 * (1.0 + 1e-9) && est.value >= 3.8, "{}", est.value);
    assert!(est.value >= r.lower_bound && est.value <= r.upper_bound);
}

#[test]
fn hardy_history_is_monotone() {
    let u = HalfLine::uniform(1.0).unwrap();
    let est = best_hardy_ratio(&u, &u, 3.0, &hardy_nodes(&u, 500), 5000).unwrap();
    let h = &est.refinement_history;
    assert!(h.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
}

#[test]
fn tail_weight_bracket() {
    for t in [0.01, 0.1, 0.4] {
        let [lo, mid, hi] = tail_weights(t);
        assert!(lo <= mid && mid <= hi, "t={t}");
    }
}

#[test]
fn dual_entropy_never_beats_closed_form() {
    let d = dual_entropy_sup(1.0, 0.3, 2.0, 2000, 5).unwrap();
    assert!(d.dominated);
    assert!(d.sampled_max <= d.closed_form * (1.0 + 1e-9));
    assert!(d.sampled_max >= 0.9 * d.closed_form);
}

#[test]
fn classifier_examples() {
    let holds = classify(&spec(PotentialFamily::PowerLaw { p: 1.5 }), &ClassifyTarget::Q(3.0), ClassifyMode::Critq).unwrap();
    assert_eq!(holds.verdict, Verdict::Holds);
    let fails = classify(&spec(PotentialFamily::PowerLaw { p: 1.2 }), &ClassifyTarget::Q(2.0), ClassifyMode::Critq).unwrap();
    assert_eq!(fails.verdict, Verdict::Fails);
    assert_eq!(serde_json::to_value(fails.verdict).unwrap(), serde_json::json!(false));
}
