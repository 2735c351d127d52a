use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Density;
use crate::mlsi::variational::interval;
use crate::numeric::linspace;
use crate::numeric::roots::solve_positive;
use crate::young::YoungFn;

const MAX_UPDATES: usize = 200;
const DESCENT_TRIALS: usize = 20_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub value: f64,
    /// Lagrange multiplier of the mass constraint.
    pub multiplier: f64,
    pub constraint_residual: f64,
    /// Accepted moves of the verification pass; zero at a discrete optimum.
    pub descent_moves: usize,
    pub grid_size: usize,
}

/// `inf{∫_m^x Φ(g) dν : g >= 0, ∫_m^x g = a}` on a uniform grid with
/// trapezoid weights. Stationarity gives `g_j = Φ'^{-1}(λ/n_j)`; `λ` is
/// updated multiplicatively until the constraint holds, then random
/// mass-preserving transfers between node pairs check that no descent
/// direction is left.
pub fn beta_oracle<N: Density + ?Sized>(phi: &YoungFn, nu: &N, m: f64, x: f64, a: f64, grid: usize) -> Result<BetaEstimate> {
    if !(a > 0.0 && a.is_finite()) || grid < 2 || x == m {
        return Err(Error::InvalidParameter(format!("beta oracle needs a > 0, x != m and grid >= 2 (a = {a})")));
    }
    let (lo, hi) = interval(m, x);
    let t = linspace(lo, hi, grid);
    let h = (hi - lo) / grid as f64;
    let tau: Vec<f64> = (0..=grid).map(|j| if j == 0 || j == grid { h / 2.0 } else { h }).collect();
    let n: Vec<f64> = t.iter().map(|&s| nu.density(s)).collect();
    if n.iter().any(|&d| d == 0.0) {
        // mass can be parked where the weight vanishes at no cost
        return Ok(BetaEstimate {
            value: 0.0,
            multiplier: 0.0,
            constraint_residual: 0.0,
            descent_moves: 0,
            grid_size: grid + 1,
        });
    }
    let g_of = |lambda: f64| -> Vec<f64> { n.iter().map(|&d| phi.deriv_inv(lambda / d)).collect() };
    let mass = |g: &[f64]| g.iter().zip(&tau).map(|(g, w)| g * w).sum::<f64>();
    let objective = |g: &[f64]| g.iter().zip(&tau).zip(&n).map(|((g, w), d)| w * d * phi.value(*g)).sum::<f64>();

    // Φ' grows like a power between θ-1 and α-1, so λ ∝ mass^{θ-1} is a
    // good multiplicative step.
    let expo = (phi.theta() - 1.0).max(1.0);
    let mut lambda = phi.deriv(a / (hi - lo)) * n.iter().sum::<f64>() / n.len() as f64;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_UPDATES {
        let s = mass(&g_of(lambda));
        residual = (s / a - 1.0).abs();
        if residual < 1e-13 || !(s > 0.0) {
            break;
        }
        lambda *= (a / s).powf(expo);
    }
    if !(residual < 1e-13) {
        lambda = solve_positive(|l| mass(&g_of(l)), a, lambda.max(1e-300), 1e-15)?;
        residual = (mass(&g_of(lambda)) / a - 1.0).abs();
    }
    if !(residual < 1e-9) {
        return Err(Error::NoConvergence {
            what: "beta oracle multiplier".into(),
            residual,
        });
    }
    let mut g = g_of(lambda);
    let mut best = objective(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6265_7461);
    let mut moves = 0;
    for _ in 0..DESCENT_TRIALS {
        let i = rng.random_range(0..g.len());
        let j = rng.random_range(0..g.len());
        if i == j || g[i] <= 0.0 {
            continue;
        }
        let delta = 1e-4 * g[i] * tau[i];
        let (gi, gj) = (g[i], g[j]);
        g[i] -= delta / tau[i];
        g[j] += delta / tau[j];
        let trial = objective(&g);
        if trial < best * (1.0 - 1e-12) {
            best = trial;
            moves += 1;
        } else {
            g[i] = gi;
            g[j] = gj;
        }
    }
    Ok(BetaEstimate {
        value: best,
        multiplier: lambda,
        constraint_residual: residual,
        descent_moves: moves,
        grid_size: grid + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::HalfLine;

    #[test]
    fn closed_forms_on_lebesgue() {
        let leb = HalfLine::uniform(10.0).unwrap();
        let p2 = YoungFn::power(2.0).unwrap();
        let b = beta_oracle(&p2, &leb, 0.0, 1.0, 1.0, 200).unwrap();
        assert!((b.value - 1.0).abs() < 1e-4 && b.descent_moves == 0);
        let p3 = YoungFn::power(3.0).unwrap();
        let b1 = beta_oracle(&p3, &leb, 0.0, 2.0, 1.0, 200).unwrap();
        assert!((b1.value - 0.25).abs() < 1e-3);
        let b2 = beta_oracle(&p3, &leb, 0.0, 2.0, 2.0, 200).unwrap();
        assert!((b2.value / b1.value / 8.0 - 1.0).abs() < 1e-3);
    }
}
