use super::{HalfLine, PotentialSpec};

/// A reference density `n` on the line, as used on the right-hand side of
/// the criteria. `log_density` is `-∞` where `n` vanishes.
pub trait Density: Send + Sync {
    fn log_density(&self, t: f64) -> f64;

    fn density(&self, t: f64) -> f64 {
        self.log_density(t).exp()
    }

    /// Points in `(a, b)` where `n` is not smooth.
    fn kinks(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }
}

impl Density for PotentialSpec {
    fn log_density(&self, t: f64) -> f64 {
        -self.v(t)
    }

    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        let m = self.mode();
        if m > a && m < b {
            vec![m]
        } else {
            Vec::new()
        }
    }
}

impl Density for HalfLine {
    fn log_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return f64::NEG_INFINITY;
        }
        match self {
            HalfLine::Uniform { length } => {
                if t <= *length {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            HalfLine::Exponential { rate } => -rate * t,
            HalfLine::Restricted(mu) => -mu.v(t),
        }
    }

    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            HalfLine::Uniform { length } if *length > a && *length < b => vec![*length],
            HalfLine::Restricted(mu) => mu.kinks(a, b),
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PotentialFamily;

    #[test]
    fn densities_agree() {
        let mu = PotentialSpec::new(PotentialFamily::DoubleExp).unwrap();
        assert!((Density::density(&mu, 1.0) - (-1.0f64).exp() / 2.0).abs() < 1e-14);
        let u = HalfLine::uniform(2.0).unwrap();
        assert_eq!(Density::density(&u, 3.0), 0.0);
        assert_eq!(u.kinks(0.0, 3.0), vec![2.0]);
    }
}
