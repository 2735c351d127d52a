use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::herbst::{herbst_tail, ConcentrationProfile};
use crate::error::{Error, Result};
use crate::measure::{PotentialSpec, Side};
use crate::young::ModifiedH;

const KNOTS: usize = 4096;
const LOGIT_RANGE: f64 = 27.631_021_115_928_547; // logit(1 - 1e-12)
const BATCH: usize = 1 << 16;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_900_4;

/// Functions `F: ℝⁿ → ℝ` with an analytic gradient budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestStatistic {
    /// `Σ w_i x_i`; budget `Σ H(w_i)`.
    Linear { weights: Vec<f64> },
    /// `(s/β) log Σ e^{β x_i}`; the gradient is `s` times a probability
    /// vector, so by convexity the budget is `H(s)`.
    SoftMax { scale: f64, beta: f64 },
}

impl TestStatistic {
    pub fn linear_normalized(n: usize) -> Self {
        TestStatistic::Linear {
            weights: vec![1.0 / (n as f64).sqrt(); n],
        }
    }

    pub fn budget(&self, h: &ModifiedH) -> f64 {
        match self {
            TestStatistic::Linear { weights } => weights.iter().map(|w| h.value(*w)).sum(),
            TestStatistic::SoftMax { scale, .. } => h.value(*scale),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestStatistic::Linear { weights } => weights.iter().zip(x).map(|(w, v)| w * v).sum(),
            TestStatistic::SoftMax { scale, beta } => {
                let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = x.iter().map(|v| (beta * (v - m)).exp()).sum();
                scale * (m + s.ln() / beta)
            }
        }
    }
}

/// Inverse CDF tabulated at logit-spaced levels and interpolated with a
/// monotone cubic (Fritsch–Carlson) in the logit variable; linear
/// extrapolation in the logit beyond the table.
pub struct QuantileTable {
    z: Vec<f64>,
    x: Vec<f64>,
    slope: Vec<f64>,
}

impl QuantileTable {
    pub fn new(mu: &PotentialSpec) -> Self {
        let z: Vec<f64> = (0..KNOTS)
            .map(|i| -LOGIT_RANGE + 2.0 * LOGIT_RANGE * i as f64 / (KNOTS - 1) as f64)
            .collect();
        let x: Vec<f64> = z
            .par_iter()
            .map(|&z| {
                if z < 0.0 {
                    mu.tail_quantile(1.0 / (1.0 + (-z).exp()), Side::Left)
                } else {
                    mu.tail_quantile(1.0 / (1.0 + z.exp()), Side::Right)
                }
            })
            .collect();
        let n = z.len();
        let secant: Vec<f64> = (0..n - 1).map(|i| (x[i + 1] - x[i]) / (z[i + 1] - z[i])).collect();
        let mut slope = vec![0.0; n];
        slope[0] = secant[0];
        slope[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            let (a, b) = (secant[i - 1], secant[i]);
            slope[i] = if a * b <= 0.0 { 0.0 } else { 2.0 / (1.0 / a + 1.0 / b) };
        }
        QuantileTable { z, x, slope }
    }

    pub fn sample(&self, u: f64) -> f64 {
        let zu = (u / (1.0 - u)).ln();
        let n = self.z.len();
        if zu <= self.z[0] {
            return self.x[0] + self.slope[0] * (zu - self.z[0]);
        }
        if zu >= self.z[n - 1] {
            return self.x[n - 1] + self.slope[n - 1] * (zu - self.z[n - 1]);
        }
        let i = crate::numeric::grid::locate(&self.z, zu);
        let h = self.z[i + 1] - self.z[i];
        let t = (zu - self.z[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.x[i]
            + (t3 - 2.0 * t2 + t) * h * self.slope[i]
            + (-2.0 * t3 + 3.0 * t2) * self.x[i + 1]
            + (t3 - t2) * h * self.slope[i + 1]
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailPoint {
    pub r: f64,
    pub empirical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalTail {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub budget: f64,
    pub points: Vec<TailPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailRow {
    pub r: f64,
    pub bound: f64,
    pub empirical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailComparison {
    pub kappa: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub rows: Vec<TailRow>,
    /// Upper confidence limit below the bound at every `r`.
    pub pass: bool,
}

impl TailComparison {
    pub fn new(tail: &EmpiricalTail, profile: &ConcentrationProfile) -> Self {
        let rows: Vec<TailRow> = tail
            .points
            .iter()
            .map(|p| TailRow {
                r: p.r,
                bound: herbst_tail(profile, p.r),
                empirical: p.empirical,
                ci_low: p.ci_low,
                ci_high: p.ci_high,
            })
            .collect();
        TailComparison {
            kappa: profile.kappa,
            k: profile.k,
            pass: rows.iter().all(|r| r.ci_high <= r.bound),
            rows,
        }
    }
}

/// Empirical `P(F - E F >= r)` under `μⁿ` with 99% Wilson intervals.
/// Coordinates are drawn by inverse CDF. Batch `b` of `2^16` samples uses
/// ChaCha8 seeded with `seed` on stream `b`, so results do not depend on
/// the thread count. For linear statistics `E F` is exact; otherwise it is
/// the sample mean.
pub fn monte_carlo_tail(
    mu: &PotentialSpec,
    n: usize,
    stat: &TestStatistic,
    h: &ModifiedH,
    a: f64,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<EmpiricalTail> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and samples >= 1".into()));
    }
    if let TestStatistic::Linear { weights } = stat {
        if weights.len() != n {
            return Err(Error::InvalidParameter(format!("{} weights for dimension {n}", weights.len())));
        }
    }
    let budget = stat.budget(h);
    if budget > a * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "gradient budget violated: sum H(grad F) = {budget} > a = {a}"
        )));
    }
    let table = QuantileTable::new(mu);
    let batches = samples.div_ceil(BATCH);
    let values: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BATCH.min(samples - b * BATCH);
            let mut x = vec![0.0; n];
            (0..count)
                .map(|_| {
                    for xi in x.iter_mut() {
                        let u: f64 = rng.random();
                        *xi = table.sample(u.max(f64::MIN_POSITIVE));
                    }
                    stat.eval(&x)
                })
                .collect()
        })
        .collect();
    let mean = match stat {
        TestStatistic::Linear { weights } => weights.iter().sum::<f64>() * mu.expect(|t| t),
        _ => values.iter().map(|v| v.iter().sum::<f64>()).sum::<f64>() / samples as f64,
    };
    let points = r_grid
        .iter()
        .map(|&r| {
            let k: u64 = values.iter().map(|v| v.iter().filter(|&&f| f - mean >= r).count() as u64).sum();
            let (lo, hi) = wilson(k, samples as u64, Z99);
            TailPoint {
                r,
                empirical: k as f64 / samples as f64,
                ci_low: lo,
                ci_high: hi,
            }
        })
        .collect();
    Ok(EmpiricalTail {
        n,
        samples,
        seed,
        mean,
        budget,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn table_inverts_cdf() {
        let mu = PotentialSpec::new(PotentialFamily::DoubleExp).unwrap();
        let t = QuantileTable::new(&mu);
        for u in [1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-10] {
            let x = t.sample(u);
            let want = if u < 0.5 { (2.0 * u).ln() } else { -(2.0 * (1.0 - u)).ln() };
            assert!((x - want).abs() < 1e-6, "{u}: {x} vs {want}");
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson(30, 1000, Z99);
        assert!(lo < 0.03 && hi > 0.03);
        let (lo0, hi0) = wilson(0, 1000, Z99);
        assert_eq!(lo0, 0.0);
        assert!(hi0 > 0.0 && hi0 < 0.01);
    }

    #[test]
    fn budget_checked_before_sampling() {
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        let h = ModifiedH::hq(3.0).unwrap();
        let stat = TestStatistic::Linear { weights: vec![1.0; 4] };
        assert!(monte_carlo_tail(&mu, 4, &stat, &h, 1.0, &[1.0], 10, 0).is_err());
    }

    #[test]
    fn gaussian_single_coordinate() {
        // κ = 2 is the Gaussian log-Sobolev constant; the bound is e^{-r²/2}
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        let h = ModifiedH::hq(2.0).unwrap();
        let profile = ConcentrationProfile::new(&h, 2.0, 1.0).unwrap();
        let stat = TestStatistic::Linear { weights: vec![1.0] };
        for i in 0..=10 {
            let r = 0.5 * i as f64;
            assert!(mu.tail(r, Side::Right) <= herbst_tail(&profile, r));
        }
        // beyond r = 3 a zero count's upper limit exceeds the bound itself
        let r: Vec<f64> = (0..=6).map(|i| 0.5 * i as f64).collect();
        let tail = monte_carlo_tail(&mu, 1, &stat, &h, 1.0, &r, 200_000, 11).unwrap();
        assert!(TailComparison::new(&tail, &profile).pass);
    }
}
