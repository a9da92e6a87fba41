use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid annulus: need 0 <= inner < outer, got [{inner}, {outer}]")]
pub struct InvalidAnnulus {
    pub inner: f64,
    pub outer: f64,
}

/// The closed shell {x ∈ ℝ^dim : inner ≤ ‖x‖ ≤ outer}; `inner = 0` gives a
/// ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    inner: f64,
    outer: f64,
    dim: usize,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64, dim: usize) -> Result<Self, InvalidAnnulus> {
        if !(inner >= 0.0 && outer > inner && outer.is_finite()) {
            return Err(InvalidAnnulus { inner, outer });
        }
        Ok(Annulus { inner, outer, dim })
    }

    pub fn ball(radius: f64, dim: usize) -> Result<Self, InvalidAnnulus> {
        Annulus::new(0.0, radius, dim)
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same shell with both radii divided by `s`.
    pub fn rescaled(&self, s: f64) -> Annulus {
        Annulus {
            inner: self.inner / s,
            outer: self.outer / s,
            dim: self.dim,
        }
    }

    /// Membership with a relative slack on both radii.
    pub fn contains(&self, x: &[f64], rel_slack: f64) -> bool {
        let n = norm(x);
        n >= self.inner * (1.0 - rel_slack) && n <= self.outer * (1.0 + rel_slack)
    }

    /// Radial projection into the shell. The origin is sent to the first
    /// axis when the inner radius is positive.
    pub fn clamp(&self, x: &mut [f64]) {
        let n = norm(x);
        if n > self.outer {
            let s = self.outer / n;
            x.iter_mut().for_each(|v| *v *= s);
        } else if n < self.inner {
            if n == 0.0 {
                x[0] = self.inner;
            } else {
                let s = self.inner / n;
                x.iter_mut().for_each(|v| *v *= s);
            }
        }
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Annulus::new(0.1, 0.1, 2).is_err());
        assert!(Annulus::new(-1.0, 0.1, 2).is_err());
        assert!(Annulus::new(0.0, f64::INFINITY, 2).is_err());
        assert!(Annulus::ball(1.0, 3).is_ok());
    }

    #[test]
    fn clamp_projects_radially() {
        let a = Annulus::new(0.5, 1.0, 2).unwrap();
        let mut x = [3.0, 4.0];
        a.clamp(&mut x);
        assert!((norm(&x) - 1.0).abs() < 1e-15);
        assert!((x[0] / x[1] - 0.75).abs() < 1e-15);
        let mut y = [0.0, 0.1];
        a.clamp(&mut y);
        assert_eq!(y, [0.0, 0.5]);
        let mut o = [0.0, 0.0];
        a.clamp(&mut o);
        assert_eq!(o, [0.5, 0.0]);
        let mut inside = [0.6, 0.0];
        a.clamp(&mut inside);
        assert_eq!(inside, [0.6, 0.0]);
    }
}
