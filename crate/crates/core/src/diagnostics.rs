//! Integral identities that certify a computed profile: Nehari, Pohozaev,
//! energy, and monotonicity of the energy density along the radius.
//!
//! Volume integrals are taken in polar form, `ω_n ∫ g(r) r^{n-1} dr`.

use serde::{Deserialize, Serialize};

use crate::bubble::sphere_measure;
use crate::error::{Error, Result};
use crate::ode::RadialProfile;
use crate::quadrature::{integrate_with_breakpoints, QuadOptions};

/// Anything radial that can be evaluated together with its derivative.
pub trait RadialFunction {
    fn eval_pair(&self, r: f64) -> (f64, f64);

    /// Initial partition of `[lo, hi]` for quadrature.
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        vec![lo, hi]
    }
}

impl RadialFunction for RadialProfile {
    fn eval_pair(&self, r: f64) -> (f64, f64) {
        self.eval(r)
    }

    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        if self.r_start() > lo && self.r_start() < hi {
            pts.push(self.r_start());
        }
        pts.extend(self.knots().iter().copied().filter(|&k| k > lo && k < hi));
        pts.push(hi);
        pts
    }
}

/// A radial function given by a closure `r ↦ (u(r), u'(r))`.
pub struct FnRadial<F>(pub F);

impl<F: Fn(f64) -> (f64, f64)> RadialFunction for FnRadial<F> {
    fn eval_pair(&self, r: f64) -> (f64, f64) {
        (self.0)(r)
    }
}

/// `(‖u‖², |u|₂², |u|_{2*}^{2*})` over a radial subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RadialNorms {
    pub gradient: f64,
    pub l2: f64,
    pub critical: f64,
}

impl std::ops::Add for RadialNorms {
    type Output = RadialNorms;

    fn add(self, o: RadialNorms) -> RadialNorms {
        RadialNorms {
            gradient: self.gradient + o.gradient,
            l2: self.l2 + o.l2,
            critical: self.critical + o.critical,
        }
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 200_000,
    }
}

/// `ω_n ∫_lo^hi g(r) r^{n-1} dr` with `g` built from `(u, u')`.
pub fn polar_integral<R, G>(f: &R, n: u32, (lo, hi): (f64, f64), g: G) -> Result<f64>
where
    R: RadialFunction + ?Sized,
    G: Fn(f64, f64) -> f64,
{
    if !(hi > lo) {
        return Err(Error::EmptyDomain);
    }
    if lo < 0.0 {
        return Err(Error::OutOfDomain(format!("radius {lo}")));
    }
    let m = n as i32 - 1;
    let pts = f.breakpoints(lo, hi);
    let res = integrate_with_breakpoints(
        |r: f64| {
            let (u, du) = f.eval_pair(r);
            g(u, du) * r.powi(m)
        },
        &pts,
        quad_opts(),
    )?;
    Ok(sphere_measure(n) * res.value)
}

pub fn radial_norms_of<R: RadialFunction + ?Sized>(
    f: &R,
    n: u32,
    domain: (f64, f64),
) -> Result<RadialNorms> {
    let two_star = 2.0 * n as f64 / (n as f64 - 2.0);
    Ok(RadialNorms {
        gradient: polar_integral(f, n, domain, |_, du| du * du)?,
        l2: polar_integral(f, n, domain, |u, _| u * u)?,
        critical: polar_integral(f, n, domain, |u, _| u.abs().powf(two_star))?,
    })
}

/// Norms of a computed profile over `[lo, hi] ⊆ [0, r_end]`.
pub fn radial_norms(profile: &RadialProfile, lo: f64, hi: f64) -> Result<RadialNorms> {
    if hi > profile.r_end() * (1.0 + 1e-15) {
        return Err(Error::OutOfDomain(format!(
            "radius {hi} beyond profile end {}",
            profile.r_end()
        )));
    }
    radial_norms_of(profile, profile.params().n, (lo, hi.min(profile.r_end())))
}

/// `(‖u‖² − λ|u|₂² − |u|_{2*}^{2*}) / ‖u‖²` over `[0, 1]`.
pub fn nehari_residual(profile: &RadialProfile) -> Result<f64> {
    let nm = radial_norms(profile, 0.0, 1.0)?;
    if nm.gradient == 0.0 {
        return Err(Error::UndefinedResidual);
    }
    let lambda = profile.params().lambda;
    Ok((nm.gradient - lambda * nm.l2 - nm.critical) / nm.gradient)
}

fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        (lhs - rhs) / lhs
    }
}

/// Pohozaev identities on the inner ball `B_{r_node}` and on the annulus
/// `r_node < |x| < 1`, relative to their mass sides:
///
/// ```text
/// λ∫_{B_r} u² = (ω_n/2) r^n u'(r)²
/// λ∫_A u²    = (ω_n/2) (u'(1)² − u'(r)² r^n)
/// ```
///
/// Without a node the ball identity is taken on the whole unit ball and the
/// annulus residual is zero.
pub fn pohozaev_residuals(profile: &RadialProfile, node: Option<f64>) -> Result<(f64, f64)> {
    let p = profile.params();
    let nf = p.nf();
    let half_omega = 0.5 * sphere_measure(p.n);
    let l2 = |lo: f64, hi: f64| polar_integral(profile, p.n, (lo, hi), |u, _| u * u);
    let du1 = profile.deriv(1.0);
    match node {
        None => {
            let lhs = p.lambda * l2(0.0, 1.0)?;
            Ok((relative_gap(lhs, half_omega * du1 * du1), 0.0))
        }
        Some(r) => {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::OutOfDomain(format!("node {r}")));
            }
            let dr = profile.deriv(r);
            let flux = dr * dr * r.powf(nf);
            let ball = relative_gap(p.lambda * l2(0.0, r)?, half_omega * flux);
            let annulus = relative_gap(p.lambda * l2(r, 1.0)?, half_omega * (du1 * du1 - flux));
            Ok((ball, annulus))
        }
    }
}

/// `I_λ(u) = ½(‖u‖² − λ|u|₂²) − |u|_{2*}^{2*}/2*` over `[0, 1]`.
pub fn energy(profile: &RadialProfile) -> Result<f64> {
    let nm = radial_norms(profile, 0.0, 1.0)?;
    let p = profile.params();
    Ok(0.5 * (nm.gradient - p.lambda * nm.l2) - nm.critical / p.two_star())
}

/// `E(r) = u'²/2 + λu²/2 + |u|^{2*}/2*`.
pub fn energy_density(profile: &RadialProfile, u: f64, du: f64) -> f64 {
    let p = profile.params();
    0.5 * du * du + 0.5 * p.lambda * u * u + u.abs().powf(p.two_star()) / p.two_star()
}

/// Largest increase of `E` between consecutive knots, clipped at zero.
pub fn energy_density_check(profile: &RadialProfile) -> f64 {
    let e: Vec<f64> = profile
        .values()
        .iter()
        .zip(profile.derivs())
        .map(|(&u, &du)| energy_density(profile, u, du))
        .collect();
    e.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub nehari: f64,
    pub pohozaev_ball: f64,
    pub pohozaev_annulus: f64,
    pub energy: f64,
    /// Largest knot-to-knot increase of `E(r)`, relative to `E(r₀)`.
    pub e_monotone_violation: f64,
    /// `|u(1)| / |u(0)|`.
    pub boundary: f64,
}

impl Residuals {
    pub fn compute(profile: &RadialProfile, node: Option<f64>) -> Result<Self> {
        let (pohozaev_ball, pohozaev_annulus) = pohozaev_residuals(profile, node)?;
        let e0 = energy_density(profile, profile.values()[0], profile.derivs()[0]);
        let rise = energy_density_check(profile);
        Ok(Residuals {
            nehari: nehari_residual(profile)?,
            pohozaev_ball,
            pohozaev_annulus,
            energy: energy(profile)?,
            e_monotone_violation: if rise == 0.0 { 0.0 } else { rise / e0 },
            boundary: (profile.value(1.0) / profile.amplitude()).abs(),
        })
    }

    /// Name of the first identity that fails, if any.
    pub fn first_failure(
        &self,
        identity_tol: f64,
        monotone_tol: f64,
        boundary_tol: f64,
    ) -> Option<String> {
        let checks = [
            ("nehari", self.nehari.abs(), identity_tol),
            ("pohozaev-ball", self.pohozaev_ball.abs(), identity_tol),
            (
                "pohozaev-annulus",
                self.pohozaev_annulus.abs(),
                identity_tol,
            ),
            (
                "energy-monotonicity",
                self.e_monotone_violation,
                monotone_tol,
            ),
            ("boundary-value", self.boundary, boundary_tol),
        ];
        checks
            .iter()
            .find(|(_, v, tol)| !(v <= tol))
            .map(|(name, v, tol)| format!("{name} residual {v:e} exceeds {tol:e}"))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::bubble::{constants, Bubble};
    use crate::model::Params;
    use crate::ode::{integrate, EventSpec, IntegratorOptions};

    fn linear_fixture(n: u32) -> RadialProfile {
        let p = Params::new(n, 1.0).unwrap();
        let r: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let u = r.iter().map(|r| 1.0 - r).collect();
        let du = vec![-1.0; r.len()];
        RadialProfile::from_samples(p, 1.0, r, u, du).unwrap()
    }

    #[test]
    fn linear_fixture_norms() {
        let nm = radial_norms(&linear_fixture(3), 0.0, 1.0).unwrap();
        assert!((nm.gradient - 4.0 * PI / 3.0).abs() < 1e-13);
        // ∫ (1-r)² r² dr = 1/30
        assert!((nm.l2 - 4.0 * PI / 30.0).abs() < 1e-13);
    }

    #[test]
    fn zero_profile() {
        let p = Params::new(7, 1.0).unwrap();
        let z = integrate(
            &p,
            0.0,
            1.0,
            EventSpec::default(),
            IntegratorOptions::default(),
        )
        .unwrap();
        assert_eq!(radial_norms(&z, 0.0, 1.0).unwrap(), RadialNorms::default());
        assert_eq!(
            nehari_residual(&z).unwrap_err().code(),
            "undefined-residual"
        );
        assert_eq!(pohozaev_residuals(&z, None).unwrap(), (0.0, 0.0));
        assert_eq!(pohozaev_residuals(&z, Some(0.5)).unwrap(), (0.0, 0.0));
        assert_eq!(energy(&z).unwrap(), 0.0);
        assert_eq!(energy_density_check(&z), 0.0);
    }

    #[test]
    fn non_solution_is_flagged() {
        let f = linear_fixture(7);
        assert!(nehari_residual(&f).unwrap().abs() > 1e-3);
        let (b, a) = pohozaev_residuals(&f, Some(0.5)).unwrap();
        assert!(b.abs() > 1e-3 && a.abs() > 1e-3);
    }

    #[test]
    fn norms_are_additive() {
        let p = Params::new(7, 2.0).unwrap();
        let prof = integrate(
            &p,
            30.0,
            1.0,
            EventSpec::default(),
            IntegratorOptions::default(),
        )
        .unwrap();
        let whole = radial_norms(&prof, 0.0, 1.0).unwrap();
        let parts = radial_norms(&prof, 0.0, 0.3).unwrap() + radial_norms(&prof, 0.3, 1.0).unwrap();
        assert!((whole.gradient - parts.gradient).abs() < 1e-12 * whole.gradient);
        assert!((whole.l2 - parts.l2).abs() < 1e-12 * whole.l2);
        assert!((whole.critical - parts.critical).abs() < 1e-12 * whole.critical);
        assert!(radial_norms(&prof, 0.4, 0.4).is_err());
    }

    #[test]
    fn bubble_critical_norm_matches_sobolev_constant() {
        let p0 = Params::limiting(7).unwrap();
        let prof = integrate(
            &p0,
            1.0,
            10.0,
            EventSpec::default(),
            IntegratorOptions::direct(),
        )
        .unwrap();
        let nm = radial_norms(&prof, 0.0, 10.0).unwrap();
        let c = constants(7).unwrap();
        let b = Bubble::unit(7);
        let tail = sphere_measure(7)
            * crate::quadrature::integrate_to_infinity(
                |s| b.eval(s).powf(2.8) * s.powi(6),
                10.0,
                100.0,
                QuadOptions::default(),
            )
            .unwrap()
            .value;
        let rel = (nm.critical + tail - c.s_pow).abs() / c.s_pow;
        assert!(rel < 1e-8, "{rel:e}");
    }

    #[test]
    fn noisy_profile_violates_monotonicity() {
        let p = Params::new(7, 1.0).unwrap();
        let r: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let mut u: Vec<f64> = r.iter().map(|r| 1.0 - r * r).collect();
        u[7] += 0.05;
        let du = r.iter().map(|r| -2.0 * r).collect();
        let prof = RadialProfile::from_samples(p, 1.0, r, u, du).unwrap();
        assert!(energy_density_check(&prof) > 0.0);
    }
}
