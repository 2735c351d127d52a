use mlsi_core::concentration::{enlargement_decomposition, herbst_integral_check, hq_conjugate};
use mlsi_core::measure::{GridFunction, PotentialFamily, PotentialSpec};
use mlsi_core::oracle::{best_poincare_ratio, poincare_nodes};
use mlsi_core::young::{legendre, omega};
use mlsi_core::{ModifiedH, YoungFn};
use proptest::prelude::*;

fn young_fn(kind: u8, q: f64) -> YoungFn {
    match kind {
        0 => YoungFn::power(q).unwrap(),
        1 => YoungFn::scaled_power(q, 0.5 + q / 4.0).unwrap(),
        _ => YoungFn::plus_square(YoungFn::power(q.max(2.0)).unwrap()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fenchel_young_and_biconjugate(kind in 0u8..3, q in 1.3f64..5.0, x in 1e-3f64..50.0) {
        let phi = young_fn(kind, q);
        let y = phi.deriv(x);
        let lhs = phi.value(x) + phi.conj_value(y);
        prop_assert!((lhs - x * y).abs() <= 1e-8 * (x * y));
        // Φ** = Φ through a transform computed from scratch
        let bi = legendre(|t| phi.conj_value(t), x).unwrap();
        prop_assert!((bi - phi.value(x)).abs() <= 1e-7 * phi.value(x).max(1e-12), "{bi} vs {}", phi.value(x));
    }

    #[test]
    fn omega_is_submultiplicative(q in 2.0f64..5.0, a in 0.05f64..20.0, b in 0.05f64..20.0) {
        let h = ModifiedH::hq(q).unwrap();
        prop_assert!(h.omega(a * b) <= h.omega(a) * h.omega(b) * (1.0 + 1e-12));
    }

    #[test]
    fn hq_conjugate_convex(q in 2.0f64..8.0, x in 0.0f64..30.0, d1 in 1e-3f64..3.0, d2 in 1e-3f64..3.0) {
        let (a, b) = (hq_conjugate(q, x), hq_conjugate(q, x + d1));
        let c = hq_conjugate(q, x + d1 + d2);
        // slopes of consecutive chords do not decrease
        prop_assert!((b - a) / d1 <= (c - b) / d2 * (1.0 + 1e-12) + 1e-12);
    }
}

#[test]
fn numeric_omega_matches_closed_form_and_submultiplies() {
    let phi = YoungFn::plus_square(YoungFn::power(3.0).unwrap()).unwrap();
    let h = ModifiedH::new(phi).unwrap();
    let pts = [0.1, 0.5, 1.5, 3.0];
    for &a in &pts {
        for &b in &pts {
            assert!(h.omega(a * b) <= h.omega(a) * h.omega(b) * (1.0 + 1e-9), "a={a}, b={b}");
        }
    }
    let hq = ModifiedH::hq(3.0).unwrap();
    for t in [0.3, 1.0, 2.0, 7.0] {
        let numeric = omega(|s| hq.value(s), t);
        assert!((numeric / hq.omega(t) - 1.0).abs() < 1e-9, "t={t}");
    }
}

#[test]
fn omega_over_square_nondecreasing() {
    let h = ModifiedH::new(YoungFn::plus_square(YoungFn::power(4.0).unwrap()).unwrap()).unwrap();
    let ts: Vec<f64> = (0..40).map(|i| 0.05 * 1.2f64.powi(i)).collect();
    let ratios: Vec<f64> = ts.iter().map(|&t| h.omega(t) / (t * t)).collect();
    assert!(ratios.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)), "{ratios:?}");
}

#[test]
fn herbst_integral_inequality() {
    for h in [ModifiedH::hq(2.5).unwrap(), ModifiedH::hq(4.0).unwrap()] {
        for lambda in [0.1, 1.0, 3.0, 10.0, 40.0] {
            let (lhs, rhs) = herbst_integral_check(&h, lambda);
            assert!(lhs <= rhs * (1.0 + 1e-9), "{} at {lambda}: {lhs} > {rhs}", h.label());
        }
    }
}

#[test]
fn hq_conjugate_right_derivative_nondecreasing() {
    for q in [2.5, 3.0, 5.0] {
        let xs: Vec<f64> = (0..600).map(|i| i as f64 * 0.025).collect();
        let h = 1e-7;
        let d: Vec<f64> = xs.iter().map(|&x| (hq_conjugate(q, x + h) - hq_conjugate(q, x)) / h).collect();
        assert!(d.windows(2).all(|w| w[1] >= w[0] - 1e-6), "q={q}");
    }
}

/// Nested quantile grids: `2n - 1` logistic nodes contain the `n` ones.
#[test]
fn poincare_refinement_is_monotone() {
    for fam in [PotentialFamily::Gaussian, PotentialFamily::PowerLaw { p: 1.5 }] {
        let mu = PotentialSpec::new(fam).unwrap();
        let mut prev = 0.0;
        for n in [101, 201, 401, 801] {
            let est = best_poincare_ratio(&mu, &mu, &poincare_nodes(&mu, n), 20_000).unwrap();
            assert!(est.value >= prev * (1.0 - 1e-6), "{n}: {} < {prev}", est.value);
            prev = est.value;
        }
    }
}

#[test]
fn one_dimensional_split_contains_level_set() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for phi in [YoungFn::power(3.0).unwrap(), YoungFn::power(4.0).unwrap()] {
        let h = ModifiedH::new(phi.clone()).unwrap();
        for r in [0.5, 4.0, 50.0] {
            let d = enlargement_decomposition(&phi, r).unwrap();
            let mut tested = 0;
            while tested < 1000 {
                let x: f64 = rng.random_range(-60.0..60.0);
                if h.conj_value(x) >= r {
                    continue;
                }
                tested += 1;
                let (u, v) = if x.abs() <= d.x0 { (x, 0.0) } else { (0.0, x) };
                assert!(u * u <= d.ball_radius_sq * (1.0 + 1e-3), "x={x}, r={r}");
                assert!(phi.conj_value(v) <= d.ball_radius_sq * (1.0 + 1e-3), "x={x}, r={r}");
            }
        }
    }
}

#[test]
fn grid_function_round_trip() {
    let g = GridFunction::from_fn(vec![0.0, 1.0, 3.0], |x| x * x).unwrap();
    assert_eq!(g.eval(1.0), 1.0);
    assert!((g.eval(2.0) - 5.0).abs() < 1e-15);
}
