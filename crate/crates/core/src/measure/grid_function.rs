use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::grid::locate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
}

/// A piecewise-linear function on strictly increasing nodes, extended by
/// constants outside `[nodes[0], nodes[last]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid function needs >= 2 nodes and matching values ({} nodes, {} values)",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("grid nodes must be finite and strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        Ok(GridFunction { nodes, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(nodes: Vec<f64>, f: F) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn constant(nodes: Vec<f64>, c: f64) -> Result<Self> {
        Self::from_fn(nodes, |_| c)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return self.values[0];
        }
        if x >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        let i = locate(&self.nodes, x);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        self.values[i] + (self.values[i + 1] - self.values[i]) * (x - x0) / (x1 - x0)
    }

    /// Slope on cell `i`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.nodes[i + 1] - self.nodes[i])
    }

    /// Derivative away from nodes; zero outside the grid.
    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x < self.nodes[0] || x > self.nodes[n - 1] {
            return 0.0;
        }
        self.slope(locate(&self.nodes, x))
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        GridFunction {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_monotone(&self, dir: Monotonicity) -> bool {
        self.values.windows(2).all(|w| match dir {
            Monotonicity::NonDecreasing => w[1] >= w[0],
            Monotonicity::NonIncreasing => w[1] <= w[0],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_clamps() {
        let g = GridFunction::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(2.0), 1.0);
        assert_eq!(g.eval(-4.0), 0.0);
        assert_eq!(g.eval(9.0), 0.0);
        assert_eq!(g.derivative(2.0), -1.0);
        assert_eq!(g.derivative(5.0), 0.0);
        assert!(!g.is_monotone(Monotonicity::NonDecreasing));
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::new(vec![0.0], vec![1.0]).is_err());
    }
}
