//! Node-targeted shooting: find `a = u(0)` such that the radial solution has
//! exactly `k` nodal regions in the unit ball and vanishes at `r = 1`.
//!
//! The number of zeros in `(0, 1)` is nondecreasing in `a`, so the amplitude at
//! which the `k`-th zero reaches the boundary is located by bracketing followed
//! by bisection in `log a`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::Residuals;
use crate::error::{Error, Result};
use crate::model::Params;
use crate::ode::{integrate, EventSpec, IntegratorOptions, RadialProfile};
use crate::special::first_dirichlet_eigenvalue;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalFeatures {
    pub r_lambda: f64,
    pub s_lambda: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub du_node: f64,
    pub du_boundary: f64,
    pub sigma: f64,
    pub rho: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroLandscape {
    pub interior_zeros: usize,
    pub u_at_1: f64,
    pub kth_zero: Option<f64>,
}

/// Largest amplitude tried by default: keeps `a^{2*-1}` below `1e250`.
pub fn default_a_max(params: &Params) -> f64 {
    10f64.powf(250.0 / (1.0 + 2.0 * params.beta()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub a_min: f64,
    /// `None` selects [`default_a_max`].
    pub a_max: Option<f64>,
    /// Growth factor of the bracket search.
    pub bracket_factor: f64,
    /// Bisection stops when `hi/lo - 1` falls below this.
    pub rel_width: f64,
    pub max_bisections: usize,
    pub integrator: IntegratorOptions,
    pub warm_start: Option<f64>,
    pub identity_tol: f64,
    pub monotone_tol: f64,
    pub boundary_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            a_min: 1e-3,
            a_max: None,
            bracket_factor: 10.0,
            rel_width: 1e-13,
            max_bisections: 200,
            integrator: IntegratorOptions::default(),
            warm_start: None,
            identity_tol: 1e-6,
            monotone_tol: 1e-9,
            boundary_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignChangingSolution {
    pub params: Params,
    pub k: usize,
    pub a_star: f64,
    pub profile: RadialProfile,
    /// Present for `k ≥ 2`.
    pub features: Option<NodalFeatures>,
    pub residuals: Residuals,
}

impl SignChangingSolution {
    pub fn energy(&self) -> f64 {
        self.residuals.energy
    }
}

/// Zero structure of the solution with `u(0) = a` on `[0, 1]`.
pub fn zero_landscape(
    params: &Params,
    a: f64,
    k: usize,
    opts: IntegratorOptions,
) -> Result<ZeroLandscape> {
    if a == 0.0 {
        return Err(Error::DegenerateAmplitude);
    }
    let spec = EventSpec {
        derivative_zeros: false,
        ..Default::default()
    };
    let prof = integrate(params, a, 1.0, spec, opts)?;
    let zeros: Vec<f64> = prof.zero_crossings().map(|e| e.radius).collect();
    Ok(ZeroLandscape {
        interior_zeros: zeros.len(),
        u_at_1: prof.value(1.0),
        kth_zero: k.checked_sub(1).and_then(|i| zeros.get(i).copied()),
    })
}

// whether the k-th zero lies in (0, 1)
fn reaches(params: &Params, a: f64, k: usize, opts: IntegratorOptions) -> Result<bool> {
    let spec = EventSpec {
        zero_crossings: true,
        derivative_zeros: false,
        stop_after_zeros: Some(k),
    };
    let prof = integrate(params, a, 1.0, spec, opts)?;
    Ok(prof.zero_crossings().count() >= k)
}

/// Smallest amplitude whose solution has exactly `k` nodal regions in `B_1`
/// and vanishes on the boundary, certified by [`Residuals`].
pub fn solve_nodal(params: &Params, k: usize, opts: &SolveOptions) -> Result<SignChangingSolution> {
    if k == 0 {
        return Err(Error::OutOfDomain("k must be at least 1".into()));
    }
    let a_min = opts.a_min;
    let a_max = opts.a_max.unwrap_or_else(|| default_a_max(params));
    let no_bracket = Error::NoBracketFound { k, a_min, a_max };
    let io = opts.integrator;
    let step = opts.bracket_factor.max(1.0 + 1e-3);
    let start = opts.warm_start.unwrap_or(1.0).clamp(a_min, a_max);

    let (mut lo, mut hi);
    if reaches(params, start, k, io)? {
        hi = start;
        loop {
            if hi <= a_min {
                return Err(no_bracket);
            }
            lo = (hi / step).max(a_min);
            if !reaches(params, lo, k, io)? {
                break;
            }
            hi = lo;
        }
    } else {
        lo = start;
        loop {
            if lo >= a_max {
                return Err(no_bracket);
            }
            hi = (lo * step).min(a_max);
            if reaches(params, hi, k, io)? {
                break;
            }
            lo = hi;
        }
    }

    let mut iterations = 0;
    while hi / lo - 1.0 >= opts.rel_width {
        iterations += 1;
        if iterations > opts.max_bisections {
            return Err(Error::NonconvergentBisection { iterations });
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if reaches(params, mid, k, io)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    certify(params, k, lo, opts)
}

/// Integrates at `a`, checks the nodal structure and the integral identities.
pub fn certify(
    params: &Params,
    k: usize,
    a: f64,
    opts: &SolveOptions,
) -> Result<SignChangingSolution> {
    let profile = integrate(params, a, 1.0, EventSpec::default(), opts.integrator)?;
    let zeros: Vec<f64> = profile.zero_crossings().map(|e| e.radius).collect();
    if zeros.len() != k - 1 {
        return Err(Error::RejectedSolution(format!(
            "expected {} interior zeros, found {}",
            k - 1,
            zeros.len()
        )));
    }
    let features = if k >= 2 {
        Some(extract_features(&profile)?)
    } else {
        None
    };
    let residuals = Residuals::compute(&profile, zeros.first().copied())?;
    if let Some(msg) =
        residuals.first_failure(opts.identity_tol, opts.monotone_tol, opts.boundary_tol)
    {
        return Err(Error::RejectedSolution(msg));
    }
    Ok(SignChangingSolution {
        params: *params,
        k,
        a_star: a,
        profile,
        features,
        residuals,
    })
}

/// Node, minimum point, heights and slopes of a two-signed profile on `[0, 1]`.
pub fn extract_features(profile: &RadialProfile) -> Result<NodalFeatures> {
    let node = profile
        .zero_crossings()
        .next()
        .ok_or(Error::MissingInteriorZero { found: 0 })?;
    let r_lambda = node.radius;
    let min = profile
        .derivative_zeros()
        .find(|e| e.radius > r_lambda && e.radius < 1.0)
        .ok_or(Error::MissingMinimum)?;
    let s_lambda = min.radius;
    let beta = profile.params().beta();
    let m_plus = profile.amplitude();
    let m_minus = profile.value(s_lambda).abs();
    Ok(NodalFeatures {
        r_lambda,
        s_lambda,
        m_plus,
        m_minus,
        du_node: profile.deriv(r_lambda),
        du_boundary: profile.deriv(1.0_f64.min(profile.r_end())),
        sigma: m_plus.powf(beta) * r_lambda,
        rho: m_minus.powf(beta) * r_lambda,
        gamma: m_minus.powf(beta) * s_lambda,
    })
}

/// Number of critical points of `u` inside each nodal region.
pub fn critical_points_per_region(profile: &RadialProfile) -> Vec<usize> {
    let mut bounds: Vec<f64> = profile.zero_crossings().map(|e| e.radius).collect();
    bounds.push(f64::INFINITY);
    let mut counts = vec![0; bounds.len()];
    for e in profile.derivative_zeros() {
        let i = bounds
            .iter()
            .position(|&b| e.radius < b)
            .unwrap_or(bounds.len() - 1);
        counts[i] += 1;
    }
    counts
}

/// Solves along a strictly decreasing `λ` grid. Failures are reported per
/// point and do not stop the sweep.
///
/// Sequentially, each point starts its bracket search from the amplitude
/// predicted by log-linear extrapolation of the previous two. With `parallel`
/// the points are independent and solved on the rayon pool.
pub fn continuation_sweep(
    n: u32,
    grid: &[f64],
    k: usize,
    opts: &SolveOptions,
    parallel: bool,
) -> Result<Vec<Result<SignChangingSolution>>> {
    if grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Config(
            "lambda grid must be strictly decreasing".into(),
        ));
    }
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let lambda1 = first_dirichlet_eigenvalue(n)?;
    let one = |lambda: f64, warm: Option<f64>| -> Result<SignChangingSolution> {
        let params = Params::new(n, lambda)?;
        if lambda >= lambda1 {
            return Err(Error::InvalidLambda { lambda, lambda1 });
        }
        let o = SolveOptions {
            warm_start: warm.or(opts.warm_start),
            ..*opts
        };
        solve_nodal(&params, k, &o)
    };
    if parallel {
        return Ok(grid.par_iter().map(|&l| one(l, None)).collect());
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut history: Vec<(f64, f64)> = Vec::new();
    for &lambda in grid {
        let warm = match history.as_slice() {
            [.., (l0, a0), (l1, a1)] => {
                let slope = (a1 / a0).ln() / (l1 / l0).ln();
                Some(a1 * (slope * (lambda / l1).ln()).exp())
            }
            [(_, a1)] => Some(*a1),
            [] => None,
        };
        let res = one(lambda, warm);
        if let Ok(s) = &res {
            history.push((lambda, s.a_star));
        }
        out.push(res);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landscape_small_amplitude_is_positive() {
        let p = Params::new(7, 1.0).unwrap();
        let l = zero_landscape(&p, 1e-3, 2, IntegratorOptions::default()).unwrap();
        assert_eq!(l.interior_zeros, 0);
        assert!(l.u_at_1 > 0.0);
        assert!(l.kth_zero.is_none());
        assert_eq!(
            zero_landscape(&p, 0.0, 2, IntegratorOptions::default()).unwrap_err(),
            Error::DegenerateAmplitude
        );
    }

    #[test]
    fn landscape_of_bubble() {
        let p0 = Params::limiting(7).unwrap();
        let l = zero_landscape(&p0, 1.0, 1, IntegratorOptions::direct()).unwrap();
        assert_eq!(l.interior_zeros, 0);
        let b = crate::bubble::Bubble::unit(7);
        assert!((l.u_at_1 - b.eval(1.0)).abs() < 1e-9);
    }

    #[test]
    fn polynomial_fixture_features() {
        let p = Params::new(7, 1.0).unwrap();
        let r: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let u = r.iter().map(|&r| (1.0 - 2.0 * r) * (1.0 - r)).collect();
        let du = r.iter().map(|&r| 4.0 * r - 3.0).collect();
        let prof = RadialProfile::from_samples(p, 1.0, r, u, du).unwrap();
        let f = extract_features(&prof).unwrap();
        assert!((f.r_lambda - 0.5).abs() < 1e-14);
        assert!((f.s_lambda - 0.75).abs() < 1e-14);
        assert_eq!(f.m_plus, 1.0);
        assert!((f.m_minus - 0.125).abs() < 1e-14);
        assert!((f.du_node + 1.0).abs() < 1e-14);
        assert!((f.du_boundary - 1.0).abs() < 1e-14);
        assert_eq!(critical_points_per_region(&prof), vec![0, 1]);
    }

    #[test]
    fn positive_profile_has_no_node() {
        let p0 = Params::limiting(7).unwrap();
        let prof = integrate(
            &p0,
            1.0,
            1.0,
            EventSpec::default(),
            IntegratorOptions::direct(),
        )
        .unwrap();
        assert_eq!(
            extract_features(&prof).unwrap_err().code(),
            "missing-interior-zero"
        );
    }

    #[test]
    fn positive_solution_lies_on_nehari_manifold() {
        let p = Params::new(7, 2.0).unwrap();
        let s = solve_nodal(&p, 1, &SolveOptions::default()).unwrap();
        assert!(s.a_star > 0.0);
        assert!(s.residuals.nehari.abs() < 1e-6);
        assert!(s.residuals.pohozaev_ball.abs() < 1e-6);
        assert_eq!(s.profile.zero_crossings().count(), 0);
    }

    #[test]
    fn two_nodal_solution_structure() {
        let p = Params::new(7, 2.0).unwrap();
        let s = solve_nodal(&p, 2, &SolveOptions::default()).unwrap();
        let f = s.features.unwrap();
        assert!(0.0 < f.r_lambda && f.r_lambda < f.s_lambda && f.s_lambda < 1.0);
        assert!(f.m_plus > f.m_minus && f.m_minus > 0.0);
        assert!(f.du_node < 0.0 && f.du_boundary > 0.0);
        assert!((f.sigma - f.m_plus.powf(0.4) * f.r_lambda).abs() < 1e-12 * f.sigma);
        assert_eq!(critical_points_per_region(&s.profile), vec![0, 1]);
    }

    #[test]
    fn halving_tolerances_barely_moves_amplitude() {
        let o = SolveOptions::default();
        let half = SolveOptions {
            integrator: o.integrator.scaled(0.5),
            ..o
        };
        for lambda in [4.0, 0.25] {
            let p = Params::new(7, lambda).unwrap();
            let a = solve_nodal(&p, 2, &o).unwrap().a_star;
            let b = solve_nodal(&p, 2, &half).unwrap().a_star;
            assert!(
                (a / b - 1.0).abs() < 1e-9,
                "lambda {lambda}: {a:e} vs {b:e}"
            );
        }
    }

    #[test]
    fn sweep_trends() {
        let grid = [4.0, 2.0, 1.0, 0.5, 0.25];
        let sols: Vec<_> = continuation_sweep(7, &grid, 2, &SolveOptions::default(), false)
            .unwrap()
            .into_iter()
            .map(|s| s.unwrap())
            .collect();
        let f: Vec<NodalFeatures> = sols.iter().map(|s| s.features.unwrap()).collect();
        assert!(f.windows(2).all(|w| w[1].m_plus > w[0].m_plus));
        assert!(f.windows(2).all(|w| w[1].r_lambda < w[0].r_lambda));
        for s in &sols {
            assert_eq!(s.profile.zero_crossings().count(), 1);
            let r = s.features.unwrap().r_lambda;
            assert_eq!(
                s.profile
                    .derivative_zeros()
                    .filter(|e| e.radius > r && e.radius < 1.0)
                    .count(),
                1
            );
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let o = SolveOptions::default();
        assert!(continuation_sweep(7, &[], 2, &o, false).unwrap().is_empty());
        assert_eq!(
            continuation_sweep(7, &[1.0, 2.0], 2, &o, false)
                .unwrap_err()
                .code(),
            "config-parse-error"
        );
        let r = continuation_sweep(7, &[40.0], 2, &o, false).unwrap();
        assert_eq!(r[0].as_ref().unwrap_err().code(), "invalid-lambda");
    }
}
