//! Green function of `-Δ` on the unit ball with the pole reflected through the
//! sphere so that it vanishes on the boundary:
//!
//! ```text
//! G(x, y) = κ (|x − y|^{2−n} − (|x|²|y|² + 1 − 2x·y)^{−(n−2)/2}),   κ = 1/((2−n)|S^{n−1}|)
//! ```
//!
//! `G < 0` inside the ball with this sign convention.

use crate::bubble::sphere_measure;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenBall {
    pub n: u32,
    pub kappa: f64,
}

impl GreenBall {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(GreenBall {
            n,
            kappa: 1.0 / ((2.0 - n as f64) * sphere_measure(n)),
        })
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::OutOfDomain("points of different dimension".into()));
        }
        let nf = self.n as f64;
        let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist2 == 0.0 {
            return Err(Error::SingularPoint);
        }
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let yy: f64 = y.iter().map(|a| a * a).sum();
        // |x|²|y|² + 1 − 2x·y = |x − y|² + (1 − |x|²)(1 − |y|²)
        let reflected = dist2 + (1.0 - xx) * (1.0 - yy);
        let e = -(nf - 2.0) / 2.0;
        Ok(self.kappa * (dist2.powf(e) - reflected.powf(e)))
    }

    /// `G(x, 0)` at `|x| = r`.
    pub fn at_center(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.kappa * (r.powf(2.0 - self.n as f64) - 1.0))
    }

    /// `∂_r G(x, 0)` at `|x| = r`.
    pub fn gradient_at_center(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let nf = self.n as f64;
        Ok(self.kappa * (2.0 - nf) * r.powf(1.0 - nf))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("radius {r} not in (0, 1)")))
    }
}

pub fn green_at_center(n: u32, r: f64) -> Result<f64> {
    GreenBall::new(n)?.at_center(r)
}

pub fn green_gradient_at_center(n: u32, r: f64) -> Result<f64> {
    GreenBall::new(n)?.gradient_at_center(r)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;

    #[test]
    fn center_values_n7() {
        let omega = 16.0 * PI.powi(3) / 15.0;
        let g = green_at_center(7, 0.5).unwrap();
        assert!((g - 31.0 / (-5.0 * omega)).abs() < 1e-14);
        assert!((g + 0.187_46).abs() < 1e-5);
        let dg = green_gradient_at_center(7, 0.5).unwrap();
        assert!((dg - 320.0 / (5.0 * omega)).abs() < 1e-12);
        assert!(green_at_center(7, 1.0 - 1e-12).unwrap().abs() < 1e-10);
        assert!(green_at_center(7, 0.0).is_err());
        assert!(green_at_center(7, 1.0).is_err());
    }

    #[test]
    fn gradient_positive() {
        for i in 1..100 {
            assert!(green_gradient_at_center(9, i as f64 / 100.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let g = GreenBall::new(7).unwrap();
        let r = 0.4;
        let fd = |h: f64| (g.at_center(r + h).unwrap() - g.at_center(r - h).unwrap()) / (2.0 * h);
        let exact = g.gradient_at_center(r).unwrap();
        let (e1, e2) = ((fd(1e-4) - exact).abs(), (fd(1e-5) - exact).abs());
        assert!(e1 < 1e-6 * exact.abs());
        // second order: error shrinks ~100x per decade of h
        assert!(e2 < e1 / 50.0);
        let richardson = (4.0 * fd(0.5e-4) - fd(1e-4)) / 3.0;
        assert!((richardson - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn full_kernel_reduces_to_center_form() {
        let g = GreenBall::new(7).unwrap();
        let x = [0.3, -0.2, 0.1, 0.0, 0.0, 0.2, 0.0];
        let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let v = g.eval(&x, &[0.0; 7]).unwrap();
        assert!((v - g.at_center(r).unwrap()).abs() < 1e-12 * v.abs());
    }

    fn point(n: usize, max_norm: f64) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("nonzero", move |v| {
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| v.iter().map(|a| a / norm * max_norm.min(norm)).collect())
        })
    }

    proptest! {
        #[test]
        fn symmetric(x in point(7, 0.95), y in point(7, 0.95)) {
            let g = GreenBall::new(7).unwrap();
            let dist: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            prop_assume!(dist > 1e-3);
            let (a, b) = (g.eval(&x, &y).unwrap(), g.eval(&y, &x).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs());
        }

        #[test]
        fn vanishes_on_boundary(x in point(7, 1.0), y in point(7, 0.9)) {
            let g = GreenBall::new(7).unwrap();
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let x: Vec<f64> = x.iter().map(|a| a / norm).collect();
            prop_assert!(g.eval(&x, &y).unwrap().abs() < 1e-12);
        }
    }
}
