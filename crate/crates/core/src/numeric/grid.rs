/// Logarithmically spaced points covering `[lo, hi]` with `per_decade`
/// points per factor of ten; both endpoints included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo, "log_grid needs 0 < lo < hi");
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let step = decades / n as f64;
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo * 10f64.powf(step * i as f64)
            }
        })
        .collect()
}

/// `n + 1` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Index `i` with `nodes[i] <= x < nodes[i + 1]`, clamped to a valid cell.
pub fn locate(nodes: &[f64], x: f64) -> usize {
    let i = nodes.partition_point(|&n| n <= x);
    i.saturating_sub(1).min(nodes.len().saturating_sub(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_density() {
        let g = log_grid(1e-6, 1e6, 512);
        assert_eq!(g.len(), 512 * 12 + 1);
        assert_eq!(g[0], 1e-6);
        assert_eq!(*g.last().unwrap(), 1e6);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn locate_clamps() {
        let n = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(locate(&n, -5.0), 0);
        assert_eq!(locate(&n, 1.5), 1);
        assert_eq!(locate(&n, 3.0), 2);
    }
}
