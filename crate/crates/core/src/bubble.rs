//! Standard bubbles `δ_{0,μ}` and the dimensional constants built from them.
//!
//! The bubble
//!
//! ```text
//! δ_{0,μ}(s) = [n(n-2)μ²]^{(n-2)/4} / (μ² + s²)^{(n-2)/2}
//! ```
//!
//! solves `-Δδ = δ^{2*-1}` in `R^n`. With `μ = √(n(n-2))` it is normalised to
//! `δ(0) = 1`, which is the limit profile of every rescaling in this crate.
//! The constants below are computed by quadrature; the closed forms in the tests
//! are oracles only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::derive_exponents;
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::special::first_dirichlet_eigenvalue;

/// `δ_{0,μ}` in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bubble {
    pub n: u32,
    pub mu: f64,
}

impl Bubble {
    /// The bubble with `δ(0) = 1`.
    pub fn unit(n: u32) -> Self {
        Bubble {
            n,
            mu: standard_mu(n),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        bubble_eval(self.n, self.mu, s)
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let nf = self.n as f64;
        let mu2 = self.mu * self.mu;
        -(nf - 2.0) * s / (mu2 + s * s) * self.eval(s)
    }
}

/// `√(n(n-2))`.
pub fn standard_mu(n: u32) -> f64 {
    let nf = n as f64;
    (nf * (nf - 2.0)).sqrt()
}

pub fn bubble_eval(n: u32, mu: f64, s: f64) -> f64 {
    let nf = n as f64;
    let mu2 = mu * mu;
    (nf * (nf - 2.0) * mu2).powf((nf - 2.0) / 4.0) * (mu2 + s * s).powf(-(nf - 2.0) / 2.0)
}

/// Measure of the unit sphere `S^{n-1}`, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_measure(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// `∫_0^∞ f(s)^power s^{n-1} ds`.
///
/// The range is split at `10·split_scale`; the tail is compactified by
/// `s = R/t`. Before integrating, the power-law decay of the integrand is
/// estimated far out and the integral is refused if it is not summable.
pub fn improper_radial_integral<F: Fn(f64) -> f64>(
    f: F,
    n: u32,
    power: f64,
    split_scale: f64,
) -> Result<f64> {
    let nf = n as f64;
    let g = |s: f64| {
        if s == 0.0 {
            if n == 1 {
                f(0.0).powf(power)
            } else {
                0.0
            }
        } else {
            f(s).powf(power) * s.powf(nf - 1.0)
        }
    };
    let r0 = 10.0 * split_scale;
    // decay exponent of the integrand far in the tail
    let (s1, s2) = (1e6 * r0, 1e7 * r0);
    let (g1, g2) = (g(s1).abs(), g(s2).abs());
    if g1 > 0.0 && g2 > 0.0 {
        let exponent = (g2 / g1).log10();
        if exponent > -1.0 - 1e-3 {
            return Err(Error::NonconvergentIntegral { exponent });
        }
    }
    let res = integrate_to_infinity(
        g,
        0.0,
        r0,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_intervals: 4000,
        },
    )
    .map_err(|e| match e {
        Error::QuadratureFailed { .. } => Error::NonconvergentIntegral { exponent: f64::NAN },
        other => other,
    })?;
    Ok(res.value)
}

/// The constants entering the blow-up rates and the outer limit profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalConstants {
    pub n: u32,
    /// `∫_0^∞ δ^{2*-1} s^{n-1} ds`
    pub c1: f64,
    /// `2∫_0^∞ δ² s^{n-1} ds`
    pub c2: f64,
    /// `c1²/c2`
    pub c3: f64,
    /// `ω_n c2^{(n-2)/(2n-8)} / c1^{4/(2n-8)}`
    pub c_tilde: f64,
    /// `S^{n/2} = ∫_{R^n} δ^{2*}`
    pub s_pow: f64,
    pub omega_n: f64,
    /// First Dirichlet eigenvalue of the unit ball.
    pub lambda1: f64,
}

pub fn constants(n: u32) -> Result<DimensionalConstants> {
    if n < 5 {
        derive_exponents(n)?;
        return Err(Error::UndefinedConstants(n));
    }
    let e = derive_exponents(n)?;
    let nf = n as f64;
    let b = Bubble::unit(n);
    let mu = b.mu;
    let delta = |s: f64| b.eval(s);
    let c1 = improper_radial_integral(delta, n, e.two_star - 1.0, mu)?;
    let c2 = 2.0 * improper_radial_integral(delta, n, 2.0, mu)?;
    let omega_n = sphere_measure(n);
    let s_pow = omega_n * improper_radial_integral(delta, n, e.two_star, mu)?;
    let c3 = c1 * c1 / c2;
    let c_tilde = omega_n * c2.powf(e.green_exp()?) / c1.powf(4.0 / (2.0 * nf - 8.0));
    Ok(DimensionalConstants {
        n,
        c1,
        c2,
        c3,
        c_tilde,
        s_pow,
        omega_n,
        lambda1: first_dirichlet_eigenvalue(n)?,
    })
}
