use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::roots::bisect_predicate;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualEntropy {
    /// `Q(A) log(1 + (K - Q(X))/Q(A))`.
    pub closed_form: f64,
    /// Best objective among the sampled feasible step functions.
    pub sampled_max: f64,
    pub samples: usize,
    pub dominated: bool,
}

/// `sup{∫_A h dQ : h >= 0, ∫ e^h dQ <= K}` in closed form, checked against
/// random non-negative step functions. `A` and its complement are split into
/// random cells; each sampled profile is scaled up until the budget binds.
pub fn dual_entropy_sup(q_x: f64, q_a: f64, k: f64, samples: usize, seed: u64) -> Result<DualEntropy> {
    if !(q_a > 0.0 && q_a <= q_x && k > q_x && k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < Q(A) <= Q(X) < K (got Q(X) = {q_x}, Q(A) = {q_a}, K = {k})"
        )));
    }
    let closed_form = q_a * ((k - q_x) / q_a).ln_1p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled_max: f64 = 0.0;
    for _ in 0..samples {
        let cells_a = rng.random_range(1..=8);
        let cells_c = if q_a < q_x { rng.random_range(1..=8) } else { 0 };
        let split = |rng: &mut ChaCha8Rng, total: f64, n: usize| -> Vec<f64> {
            let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| total * x / s).collect()
        };
        let mut masses = split(&mut rng, q_a, cells_a);
        masses.extend(split(&mut rng, q_x - q_a, cells_c));
        let profile: Vec<f64> = (0..masses.len())
            .map(|i| {
                let r: f64 = rng.random();
                // mostly mass on A, sometimes spill over
                if i < cells_a {
                    r
                } else {
                    0.1 * r * r
                }
            })
            .collect();
        let budget = |s: f64| masses.iter().zip(&profile).map(|(q, r)| q * (s * r).exp()).sum::<f64>();
        let mut hi = 1.0;
        while budget(hi) < k {
            hi *= 2.0;
        }
        let mut s = bisect_predicate(|s| budget(s) > k, 0.0, hi, 1e-15);
        while budget(s) > k {
            s *= 1.0 - 1e-13;
        }
        let value: f64 = masses[..cells_a].iter().zip(&profile).map(|(q, r)| q * s * r).sum();
        sampled_max = sampled_max.max(value);
    }
    Ok(DualEntropy {
        closed_form,
        sampled_max,
        samples,
        dominated: sampled_max <= closed_form + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_and_domination() {
        let d = dual_entropy_sup(1.0, 0.25, 1.5, 10_000, 3).unwrap();
        assert!((d.closed_form - 0.25 * 3f64.ln()).abs() < 1e-15);
        assert!(d.dominated && d.sampled_max > 0.9 * d.closed_form);
        let tight = dual_entropy_sup(1.0, 0.5, 1.0 + 1e-12, 10, 0).unwrap();
        assert!(tight.closed_form < 1e-11);
        assert!(dual_entropy_sup(1.0, 0.5, 0.9, 10, 0).is_err());
    }
}
