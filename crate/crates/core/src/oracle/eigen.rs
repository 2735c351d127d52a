use super::RatioEstimate;
use crate::error::{Error, Result};
use crate::measure::{Density, GridFunction, HalfLine, PotentialSpec, Side};
use crate::numeric::quad::gk15;

const RQ_TOL: f64 = 1e-10;
const STABLE_STEPS: usize = 5;

// 3-point Gauss-Legendre on [0, 1].
const GL_S: [f64; 3] = [0.112_701_665_379_258_3, 0.5, 0.887_298_334_620_741_7];
const GL_W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Piecewise-linear functions with `f(nodes[0]) = 0`, parametrised by their
/// increments `d_i = f(nodes[i+1]) - f(nodes[i])`. The left-hand functional
/// is sampled at weighted points, each sitting in a cell at a fraction `s`.
struct Discretization {
    nodes: Vec<f64>,
    /// `ν(cell_i)`.
    cell_mass: Vec<f64>,
    cells: Vec<usize>,
    fracs: Vec<f64>,
    weights: Vec<f64>,
}

impl Discretization {
    fn new<M: Density + ?Sized, N: Density + ?Sized>(
        nodes: Vec<f64>,
        mu: &M,
        nu: &N,
        left_tail: f64,
        right_tail: f64,
    ) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::GridTooCoarse(format!("{} nodes", nodes.len())));
        }
        let nc = nodes.len() - 1;
        let mut cell_mass = Vec::with_capacity(nc);
        let (mut cells, mut fracs, mut weights) = (vec![0], vec![0.0], vec![left_tail]);
        for i in 0..nc {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let m = gk15(&|t: f64| nu.density(t), a, b).0;
            if !(m > 0.0) {
                return Err(Error::GridTooCoarse(format!(
                    "energy weight vanishes on [{a}, {b}]; the constant-only kernel cannot be deflated"
                )));
            }
            cell_mass.push(m);
            for k in 0..3 {
                cells.push(i);
                fracs.push(GL_S[k]);
                weights.push(GL_W[k] * (b - a) * mu.density(a + GL_S[k] * (b - a)));
            }
        }
        cells.push(nc - 1);
        fracs.push(1.0);
        weights.push(right_tail);
        Ok(Discretization {
            nodes,
            cell_mass,
            cells,
            fracs,
            weights,
        })
    }

    fn width(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Values at the sample points.
    fn apply(&self, d: &[f64]) -> Vec<f64> {
        let mut prefix = Vec::with_capacity(d.len() + 1);
        prefix.push(0.0);
        for &x in d {
            prefix.push(prefix.last().unwrap() + x);
        }
        self.cells
            .iter()
            .zip(&self.fracs)
            .map(|(&c, &s)| prefix[c] + s * d[c])
            .collect()
    }

    fn apply_transpose(&self, z: &[f64]) -> Vec<f64> {
        let nc = self.cell_mass.len();
        let mut whole = vec![0.0; nc];
        let mut part = vec![0.0; nc];
        for ((&c, &s), &v) in self.cells.iter().zip(&self.fracs).zip(z) {
            whole[c] += v;
            part[c] += s * v;
        }
        let mut out = vec![0.0; nc];
        let mut suffix = 0.0;
        for i in (0..nc).rev() {
            out[i] = suffix + part[i];
            suffix += whole[i];
        }
        out
    }

    fn witness(&self, d: &[f64]) -> Result<GridFunction> {
        let mut values = Vec::with_capacity(self.nodes.len());
        values.push(0.0);
        for &x in d {
            values.push(values.last().unwrap() + x);
        }
        GridFunction::new(self.nodes.clone(), values)
    }
}

fn norm(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn converged(history: &[f64]) -> bool {
    let n = history.len();
    n > STABLE_STEPS
        && (n - STABLE_STEPS..n).all(|i| (history[i] - history[i - 1]).abs() <= RQ_TOL * history[i].abs())
}

/// Records the iterates at 1, 2, 4, ... and the final one.
fn thin(history: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k < history.len() {
        out.push(history[k - 1]);
        k *= 2;
    }
    if let Some(last) = history.last() {
        out.push(*last);
    }
    out
}

/// `sup Var_μ(f) / ∫ f'^2 dν` over piecewise-linear `f` on `nodes`, which
/// should span the `[1e-9, 1 - 1e-9]` quantiles of `μ`. Both forms are
/// quadratic. In the increment basis the energy is diagonal and the
/// constants are already removed, so inverse iteration reduces to
/// repeated application of an `O(n)` operator; the Rayleigh quotient is
/// non-decreasing along the iterates. Starts from `f(x) = x`.
pub fn best_poincare_ratio(mu: &PotentialSpec, nu: &PotentialSpec, nodes: &[f64], max_iter: usize) -> Result<RatioEstimate> {
    let nodes = nodes.to_vec();
    let left = mu.tail(nodes[0], Side::Left);
    let right = mu.tail(*nodes.last().unwrap_or(&0.0), Side::Right);
    let disc = Discretization::new(nodes, mu, nu, left, right)?;
    let nc = disc.cell_mass.len();
    let scale: Vec<f64> = (0..nc).map(|i| disc.cell_mass[i].sqrt() / disc.width(i)).collect();
    let total: f64 = disc.weights.iter().sum();
    let mut u: Vec<f64> = (0..nc).map(|i| disc.width(i) * scale[i]).collect();
    let mut history = Vec::new();
    let mut d = vec![0.0; nc];
    for _ in 0..max_iter.max(1) {
        let un = norm(&u);
        for i in 0..nc {
            u[i] /= un;
            d[i] = u[i] / scale[i];
        }
        let f = disc.apply(&d);
        let mean = f.iter().zip(&disc.weights).map(|(a, w)| a * w).sum::<f64>() / total;
        let z: Vec<f64> = f.iter().zip(&disc.weights).map(|(a, w)| w * (a - mean)).collect();
        let var: f64 = z.iter().zip(&f).map(|(zi, a)| zi * (a - mean)).sum();
        history.push(var);
        if converged(&history) {
            break;
        }
        let g = disc.apply_transpose(&z);
        for i in 0..nc {
            u[i] = g[i] / scale[i];
        }
    }
    let value = *history.last().unwrap();
    Ok(RatioEstimate {
        value,
        witness: disc.witness(&d)?,
        grid_size: disc.nodes.len(),
        refinement_history: thin(&history),
        witness_label: None,
    })
}

/// Quantile-spaced nodes for [`best_poincare_ratio`].
pub fn poincare_nodes(mu: &PotentialSpec, n: usize) -> Vec<f64> {
    mu.quantile_nodes(n, 1e-9)
}

/// Nodes on `[0, end)` spaced by `μ`-mass, dense at both ends.
pub fn hardy_nodes(mu: &HalfLine, n: usize) -> Vec<f64> {
    let eps: f64 = 1e-12;
    let lo = eps.ln() - (1.0 - eps).ln();
    let mut nodes: Vec<f64> = (0..n)
        .map(|i| {
            let z = lo - 2.0 * lo * i as f64 / (n - 1) as f64;
            // fraction of mass beyond the node, from ~1 down to eps
            mu.tail_point(1.0 / (1.0 + z.exp()))
        })
        .collect();
    nodes.push(0.0);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// `sup ∫|f|^p dμ / ∫|f'|^p dν` over piecewise-linear `f` with `f(0) = 0`.
/// Optimal `f` may be taken non-decreasing, which turns the problem into the
/// `p → p` norm of a non-negative operator; the nonlinear power method for
/// such operators increases the ratio at every step.
pub fn best_hardy_ratio(mu: &HalfLine, nu: &HalfLine, p: f64, nodes: &[f64], max_iter: usize) -> Result<RatioEstimate> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("Hardy exponent p must exceed 1, got {p}")));
    }
    if nodes.first() != Some(&0.0) {
        return Err(Error::InvalidParameter("Hardy nodes must start at the pinned point 0".into()));
    }
    let nodes = nodes.to_vec();
    let right = mu.tail(*nodes.last().unwrap());
    let disc = Discretization::new(nodes, mu, nu, 0.0, right)?;
    let nc = disc.cell_mass.len();
    // d_i = u_i h_i ν_i^{-1/p} makes the energy ||u||_p^p
    let scale: Vec<f64> = (0..nc).map(|i| disc.width(i) * disc.cell_mass[i].powf(-1.0 / p)).collect();
    let wroot: Vec<f64> = disc.weights.iter().map(|w| w.powf(1.0 / p)).collect();
    let pnorm = |u: &[f64]| u.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let mut u: Vec<f64> = (0..nc).map(|i| disc.width(i) / scale[i]).collect();
    let mut d = vec![0.0; nc];
    let mut history = Vec::new();
    for _ in 0..max_iter.max(1) {
        let un = pnorm(&u);
        for i in 0..nc {
            u[i] /= un;
            d[i] = u[i] * scale[i];
        }
        let y: Vec<f64> = disc.apply(&d).iter().zip(&wroot).map(|(f, w)| w * f).collect();
        history.push(y.iter().map(|v| v.abs().powf(p)).sum::<f64>());
        if converged(&history) {
            break;
        }
        let t: Vec<f64> = y.iter().zip(&wroot).map(|(v, w)| w * v.abs().powf(p - 1.0)).collect();
        let s = disc.apply_transpose(&t);
        for i in 0..nc {
            u[i] = (s[i] * scale[i]).max(0.0).powf(1.0 / (p - 1.0));
        }
    }
    Ok(RatioEstimate {
        value: *history.last().unwrap(),
        witness: disc.witness(&d)?,
        grid_size: disc.nodes.len(),
        refinement_history: thin(&history),
        witness_label: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn gaussian_gap() {
        let mu = PotentialSpec::new(PotentialFamily::Gaussian).unwrap();
        let est = best_poincare_ratio(&mu, &mu, &poincare_nodes(&mu, 2000), 20_000).unwrap();
        assert!(est.value > 0.98 && est.value < 1.0 + 1e-6, "{}", est.value);
        assert!(est.refinement_history.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
    }

    #[test]
    fn pinned_uniform() {
        let mu = HalfLine::uniform(1.0).unwrap();
        let est = best_hardy_ratio(&mu, &mu, 2.0, &hardy_nodes(&mu, 2000), 20_000).unwrap();
        let want = 4.0 / std::f64::consts::PI.powi(2);
        assert!((est.value / want - 1.0).abs() < 1e-3, "{}", est.value);
    }

    #[test]
    fn linear_operator_transpose() {
        let mu = HalfLine::uniform(1.0).unwrap();
        let disc = Discretization::new(crate::numeric::linspace(0.0, 1.0, 7), &mu, &mu, 0.0, 0.0).unwrap();
        let d: Vec<f64> = (0..7).map(|i| (i as f64 * 0.7).sin()).collect();
        let z: Vec<f64> = (0..disc.weights.len()).map(|j| (j as f64 * 0.3).cos()).collect();
        let lhs: f64 = disc.apply(&d).iter().zip(&z).map(|(a, b)| a * b).sum();
        let rhs: f64 = disc.apply_transpose(&z).iter().zip(&d).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
