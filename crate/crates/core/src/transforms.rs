//! Changes of variables on radial functions.
//!
//! * inner rescaling: `y = M^β r`, `ũ(y) = u(y/M^β)/M`
//! * λ-absorption: `ρ = √λ r`, `w(ρ) = λ^{-(n-2)/4} u(ρ/√λ)`, which turns
//!   `−Δu = λu + |u|^{2*-2}u` into `−Δw = w + |w|^{2*-2}w`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{radial_norms_of, FnRadial, RadialFunction};
use crate::error::{Error, Result};
use crate::model::derive_exponents;
use crate::quadrature::{integrate_with_breakpoints, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingKind {
    /// Rescaling around `M_{λ,+}`.
    InnerPlus,
    /// Rescaling around `M_{λ,−}`.
    InnerMinus,
    LambdaAbsorb,
}

/// `(r, u) ↦ (s·r, v·u)` with `s`, `v` set by the kind and its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingMap {
    pub kind: ScalingKind,
    pub n: u32,
    /// `M` for the inner maps, `λ` for λ-absorption.
    pub param: f64,
    radius_factor: f64,
    value_factor: f64,
}

impl ScalingMap {
    pub fn new(kind: ScalingKind, n: u32, param: f64) -> Result<Self> {
        let e = derive_exponents(n)?;
        if !(param > 0.0) || !param.is_finite() {
            return Err(Error::OutOfDomain(format!("scaling parameter {param}")));
        }
        let (radius_factor, value_factor) = match kind {
            ScalingKind::InnerPlus | ScalingKind::InnerMinus => (param.powf(e.beta), 1.0 / param),
            ScalingKind::LambdaAbsorb => (param.sqrt(), param.powf(-(n as f64 - 2.0) / 4.0)),
        };
        Ok(ScalingMap {
            kind,
            n,
            param,
            radius_factor,
            value_factor,
        })
    }

    pub fn inner(n: u32, m: f64) -> Result<Self> {
        Self::new(ScalingKind::InnerPlus, n, m)
    }

    pub fn lambda_absorb(n: u32, lambda: f64) -> Result<Self> {
        Self::new(ScalingKind::LambdaAbsorb, n, lambda)
    }

    pub fn forward_radius(&self, r: f64) -> f64 {
        r * self.radius_factor
    }

    pub fn inverse_radius(&self, y: f64) -> f64 {
        y / self.radius_factor
    }

    pub fn forward_value(&self, u: f64) -> f64 {
        u * self.value_factor
    }

    pub fn inverse_value(&self, w: f64) -> f64 {
        w / self.value_factor
    }

    /// Transformed function and derivative at the image radius `y`.
    pub fn apply<R: RadialFunction + ?Sized>(&self, f: &R, y: f64) -> (f64, f64) {
        let (u, du) = f.eval_pair(self.inverse_radius(y));
        (
            self.forward_value(u),
            self.forward_value(du) / self.radius_factor,
        )
    }
}

/// Samples of `w(ρ) = λ^{-(n-2)/4} u(ρ/√λ)` and `w'(ρ)` at the given image radii.
pub fn lambda_absorb<R: RadialFunction + ?Sized>(
    f: &R,
    n: u32,
    lambda: f64,
    rho: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let map = ScalingMap::lambda_absorb(n, lambda)?;
    Ok(rho
        .iter()
        .map(|&x| {
            let (w, dw) = map.apply(f, x);
            (x, w, dw)
        })
        .collect())
}

/// Residual of the λ-free radial equation for `w` in flux form,
///
/// ```text
/// ρ₂^{n-1}w'(ρ₂) − ρ₁^{n-1}w'(ρ₁) + ∫_{ρ₁}^{ρ₂} (w + |w|^{2*-2}w) ρ^{n-1} dρ = 0,
/// ```
///
/// over consecutive image radii. Each term is scaled by the sum of the magnitudes
/// involved; the largest scaled residual is returned.
pub fn absorbed_residual<R: RadialFunction + ?Sized>(
    f: &R,
    n: u32,
    lambda: f64,
    rho: &[f64],
) -> Result<f64> {
    if rho.len() < 2 {
        return Err(Error::EmptyDomain);
    }
    let map = ScalingMap::lambda_absorb(n, lambda)?;
    let e = derive_exponents(n)?;
    let m = n as i32 - 1;
    let source = |w: f64| w + w.abs().powf(e.two_star - 2.0) * w;
    let mut worst: f64 = 0.0;
    for pair in rho.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mut pts: Vec<f64> = f
            .breakpoints(map.inverse_radius(a), map.inverse_radius(b))
            .into_iter()
            .map(|r| map.forward_radius(r))
            .collect();
        pts[0] = a;
        *pts.last_mut().expect("nonempty") = b;
        let integrand = |x: f64| source(map.apply(f, x).0) * x.powi(m);
        let opts = QuadOptions {
            rel_tol: 1e-13,
            max_intervals: 100_000,
            ..Default::default()
        };
        let int = integrate_with_breakpoints(integrand, &pts, opts)?.value;
        let abs_int = integrate_with_breakpoints(|x| integrand(x).abs(), &pts, opts)?.value;
        let fa = a.powi(m) * map.apply(f, a).1;
        let fb = b.powi(m) * map.apply(f, b).1;
        let scale = fa.abs() + fb.abs() + abs_int;
        if scale > 0.0 {
            worst = worst.max((fb - fa + int).abs() / scale);
        }
    }
    Ok(worst)
}

/// Relative gaps in the three scaling identities of the inner rescaling
/// `ũ(y) = u(y/M^β)/M` on `[0, R]` and its image `[0, M^β R]`:
/// `‖∇ũ‖₂ = ‖∇u‖₂`, `|ũ|_{2*} = |u|_{2*}` and `|u|₂² = M^{-(2*-2)}|ũ|₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGaps {
    pub gradient: f64,
    pub critical: f64,
    pub l2_scaling: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn norm_invariance_check<R: RadialFunction + ?Sized>(
    f: &R,
    n: u32,
    radius: f64,
    m: f64,
) -> Result<NormGaps> {
    let e = derive_exponents(n)?;
    let map = ScalingMap::inner(n, m)?;
    let original = radial_norms_of(f, n, (0.0, radius))?;
    let scaled = FnRadial(|y: f64| map.apply(f, y));
    let image = radial_norms_of(&scaled, n, (0.0, map.forward_radius(radius)))?;
    Ok(NormGaps {
        gradient: rel(original.gradient, image.gradient),
        critical: rel(original.critical, image.critical),
        l2_scaling: rel(original.l2, m.powf(-(e.two_star - 2.0)) * image.l2),
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::model::Params;
    use crate::ode::{integrate, EventSpec, IntegratorOptions};

    fn poly(c: Vec<f64>) -> FnRadial<impl Fn(f64) -> (f64, f64)> {
        FnRadial(move |r: f64| {
            let mut u = 0.0;
            let mut du = 0.0;
            for &ci in c.iter().rev() {
                du = du * r + u;
                u = u * r + ci;
            }
            (u, du)
        })
    }

    #[test]
    fn horner_derivative() {
        let p = poly(vec![1.0, -2.0, 3.0]);
        let (u, du) = p.eval_pair(0.5);
        assert!((u - 0.75).abs() < 1e-15);
        assert!((du - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_fixture_invariance() {
        let g = norm_invariance_check(&poly(vec![1.0, -1.0]), 7, 1.0, 2.0).unwrap();
        assert!(
            g.gradient < 1e-10 && g.critical < 1e-10 && g.l2_scaling < 1e-10,
            "{g:?}"
        );
        let id = norm_invariance_check(&poly(vec![1.0, -1.0]), 7, 1.0, 1.0).unwrap();
        assert!(id.gradient < 1e-15 && id.critical < 1e-15 && id.l2_scaling < 1e-15);
        let z = norm_invariance_check(&poly(vec![0.0]), 7, 1.0, 3.0).unwrap();
        assert_eq!((z.gradient, z.critical, z.l2_scaling), (0.0, 0.0, 0.0));
    }

    #[test]
    fn round_trip() {
        for kind in [
            ScalingKind::InnerPlus,
            ScalingKind::InnerMinus,
            ScalingKind::LambdaAbsorb,
        ] {
            let m = ScalingMap::new(kind, 7, 37.5).unwrap();
            for &r in &[1e-9, 0.3, 1.0, 17.0] {
                let back = m.inverse_radius(m.forward_radius(r));
                assert!((back - r).abs() <= 1e-14 * r);
                let v = m.inverse_value(m.forward_value(-r));
                assert!((v + r).abs() <= 1e-14 * r);
            }
        }
        assert!(ScalingMap::lambda_absorb(7, 0.0).is_err());
    }

    #[test]
    fn zero_absorbs_to_zero() {
        let z = poly(vec![0.0]);
        let w = lambda_absorb(&z, 7, 2.0, &[0.1, 0.5]).unwrap();
        assert!(w.iter().all(|&(_, w, dw)| w == 0.0 && dw == 0.0));
        assert_eq!(absorbed_residual(&z, 7, 2.0, &[0.1, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn absorbed_solution_solves_lambda_free_equation() {
        let p = Params::new(7, 3.0).unwrap();
        let prof = integrate(
            &p,
            40.0,
            1.0,
            EventSpec::default(),
            IntegratorOptions::default(),
        )
        .unwrap();
        let rho: Vec<f64> = (1..=20).map(|i| 3f64.sqrt() * i as f64 / 20.0).collect();
        let res = absorbed_residual(&prof, 7, 3.0, &rho).unwrap();
        assert!(res < 1e-8, "{res:e}");
        // a polynomial is not a solution
        let bad = absorbed_residual(&poly(vec![1.0, 0.0, -1.0]), 7, 3.0, &rho).unwrap();
        assert!(bad > 1e-3);
    }

    proptest! {
        #[test]
        fn scalings_hold_for_polynomials(
            c in prop::collection::vec(-2.0f64..2.0, 1..5),
            log_m in -2.0f64..4.0,
        ) {
            prop_assume!(c.iter().any(|x| x.abs() > 1e-3));
            let f = poly(c);
            let g = norm_invariance_check(&f, 7, 1.0, 10f64.powf(log_m)).unwrap();
            prop_assert!(g.gradient < 1e-10, "{:?}", g);
            prop_assert!(g.critical < 1e-10, "{:?}", g);
            prop_assert!(g.l2_scaling < 1e-10, "{:?}", g);
        }
    }
}
