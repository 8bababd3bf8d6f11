//! Rescalings of computed two-signed solutions, their comparison with the unit
//! bubble, the rate quantities along a sweep in `λ`, and the pointwise envelopes.
//!
//! Notation: `M₊ = u(0)`, `M₋ = |u(s_λ)|`, `r_λ` the node, `s_λ` the minimum
//! point, `K = n(n-2)`, `β = 2/(n-2)`.

use serde::{Deserialize, Serialize};

use crate::bubble::{Bubble, DimensionalConstants};
use crate::error::{Error, Result};
use crate::green::GreenBall;
use crate::model::derive_exponents;
use crate::ode::RadialProfile;
use crate::shooting::{NodalFeatures, SignChangingSolution};

/// One row of a sweep. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub r_lambda: f64,
    pub s_lambda: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub du_node: f64,
    pub du_boundary: f64,
    pub sigma: f64,
    pub rho: f64,
    pub gamma: f64,
    /// `M₊^{2-2β} r_λ^{n-2} λ`
    pub q1: f64,
    /// `M₋^{2-2β} λ`
    pub q2: f64,
    /// `M₋^{2-2β} / (M₊^{2-2β} r_λ^{n-2})`
    pub q3: f64,
    /// `M₊ |u'(r_λ)| r_λ^{n-1}`
    pub p1: f64,
    /// `λ^{-1} M₊^{2β} r_λ^n u'(r_λ)²`
    pub p2: f64,
    /// `M₋ |u'(1)|`
    pub p3: f64,
    /// `λ^{-1} M₋^{2β} (u'(1)² − u'(r_λ)² r_λ^n)`
    pub p4: f64,
    pub bubble_dev_plus: f64,
    pub bubble_dev_minus: f64,
    pub green_dev: f64,
    pub green_grad_dev: f64,
    pub energy: f64,
    pub nehari: f64,
    pub pohozaev_ball: f64,
    pub pohozaev_annulus: f64,
}

pub const CSV_COLUMNS: [&str; 25] = [
    "lambda",
    "r_lambda",
    "s_lambda",
    "m_plus",
    "m_minus",
    "du_node",
    "du_boundary",
    "sigma",
    "rho",
    "gamma",
    "q1",
    "q2",
    "q3",
    "p1",
    "p2",
    "p3",
    "p4",
    "bubble_dev_plus",
    "bubble_dev_minus",
    "green_dev",
    "green_grad_dev",
    "energy",
    "nehari",
    "pohozaev_ball",
    "pohozaev_annulus",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordOptions {
    pub annulus: (f64, f64),
    pub green_points: usize,
    pub bubble_points: usize,
}

impl Default for RecordOptions {
    fn default() -> Self {
        RecordOptions {
            annulus: (0.2, 0.8),
            green_points: 601,
            bubble_points: 2001,
        }
    }
}

/// The rate quantities `(q1, q2, q3, p1, p2, p3, p4)`.
pub fn rate_quantities(n: u32, lambda: f64, f: &NodalFeatures) -> Result<[f64; 7]> {
    let e = derive_exponents(n)?;
    let nf = n as f64;
    let (mp, mm, r) = (f.m_plus, f.m_minus, f.r_lambda);
    let rate = e.rate_exp;
    let mp_rate_r = mp.powf(rate) * r.powf(nf - 2.0);
    let mm_rate = mm.powf(rate);
    let flux = f.du_node * f.du_node * r.powf(nf);
    Ok([
        mp_rate_r * lambda,
        mm_rate * lambda,
        mm_rate / mp_rate_r,
        mp * f.du_node.abs() * r.powf(nf - 1.0),
        mp.powf(2.0 * e.beta) * flux / lambda,
        mm * f.du_boundary.abs(),
        mm.powf(2.0 * e.beta) * (f.du_boundary * f.du_boundary - flux) / lambda,
    ])
}

impl SweepRecord {
    pub fn from_solution(
        sol: &SignChangingSolution,
        consts: &DimensionalConstants,
        opts: &RecordOptions,
    ) -> Result<Self> {
        let f = sol
            .features
            .ok_or(Error::MissingInteriorZero { found: 0 })?;
        let n = sol.params.n;
        let lambda = sol.params.lambda;
        let [q1, q2, q3, p1, p2, p3, p4] = rate_quantities(n, lambda, &f)?;
        let e = derive_exponents(n)?;

        let plus_hi = f.sigma.min(10.0);
        let ys = linspace(0.0, plus_hi, opts.bubble_points);
        let bubble_dev_plus = plus_deviation(&sol.profile, &f, &ys)?
            .iter()
            .fold(0.0_f64, |m, &(_, d)| m.max(d.abs()));

        let minus_window = minus_window(&f, e.beta);
        let ys = linspace(minus_window.0, minus_window.1, opts.bubble_points);
        let minus = rescale_minus(&sol.profile, &f, &ys)?;
        let bubble_dev_minus = bubble_deviation(&minus, n, minus_window)?;

        let grid = linspace(opts.annulus.0, opts.annulus.1, opts.green_points);
        let (green_dev, green_grad_dev) =
            green_comparison(&sol.profile, consts, opts.annulus, &grid)?;
        let r = &sol.residuals;
        Ok(SweepRecord {
            lambda,
            r_lambda: f.r_lambda,
            s_lambda: f.s_lambda,
            m_plus: f.m_plus,
            m_minus: f.m_minus,
            du_node: f.du_node,
            du_boundary: f.du_boundary,
            sigma: f.sigma,
            rho: f.rho,
            gamma: f.gamma,
            q1,
            q2,
            q3,
            p1,
            p2,
            p3,
            p4,
            bubble_dev_plus,
            bubble_dev_minus,
            green_dev,
            green_grad_dev,
            energy: r.energy,
            nehari: r.nehari,
            pohozaev_ball: r.pohozaev_ball,
            pohozaev_annulus: r.pohozaev_annulus,
        })
    }

    pub fn features(&self) -> NodalFeatures {
        NodalFeatures {
            r_lambda: self.r_lambda,
            s_lambda: self.s_lambda,
            m_plus: self.m_plus,
            m_minus: self.m_minus,
            du_node: self.du_node,
            du_boundary: self.du_boundary,
            sigma: self.sigma,
            rho: self.rho,
            gamma: self.gamma,
        }
    }

    /// `λ^{-1} M₋^{2β} u'(r_λ)² r_λ^n`, the part of `p4` that vanishes in the limit.
    pub fn annulus_small_term(&self, n: u32) -> f64 {
        let beta = 2.0 / (n as f64 - 2.0);
        self.m_minus.powf(2.0 * beta) * self.du_node * self.du_node * self.r_lambda.powi(n as i32)
            / self.lambda
    }
}

/// Window `[max(2γ, 1/2), 10]` on which the negative part is compared with the bubble.
pub fn minus_window(f: &NodalFeatures, beta: f64) -> (f64, f64) {
    let hi = f.m_minus.powf(beta).min(10.0);
    ((2.0 * f.gamma).max(0.5).min(hi), hi)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn unit_bubble(n: u32, y: f64) -> f64 {
    let nf = n as f64;
    (1.0 + y * y / (nf * (nf - 2.0))).powf(-(nf - 2.0) / 2.0)
}

/// `ũ⁺(y) = u⁺(y/M₊^β)/M₊` on `[0, σ_λ]`, as `(y, ũ⁺(y))` pairs.
///
/// On profiles integrated in deviation form the value is assembled as
/// `δ(y) + φ(r)/M₊`, which keeps the difference from the bubble exact to
/// working precision.
pub fn rescale_plus(
    profile: &RadialProfile,
    f: &NodalFeatures,
    ys: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let n = profile.params().n;
    let beta = profile.params().beta();
    let scale = f.m_plus.powf(beta);
    ys.iter()
        .map(|&y| {
            if !(0.0..=f.sigma).contains(&y) {
                return Err(Error::OutOfDomain(format!(
                    "y = {y} outside [0, {}]",
                    f.sigma
                )));
            }
            if y == f.sigma {
                return Ok((y, 0.0));
            }
            let r = y / scale;
            let v = match profile.deviation(r) {
                Some(phi) if profile.amplitude() == f.m_plus => unit_bubble(n, y) + phi / f.m_plus,
                _ => profile.value(r) / f.m_plus,
            };
            Ok((y, v.max(0.0)))
        })
        .collect()
}

/// `ũ⁺(y) − δ(y)` on `[0, σ_λ]`.
///
/// Near blow-up this difference is far below the resolution of `ũ⁺` itself;
/// on deviation-form profiles it is read off as `φ(r)/M₊` wherever `u > 0`.
pub fn plus_deviation(
    profile: &RadialProfile,
    f: &NodalFeatures,
    ys: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let n = profile.params().n;
    let scale = f.m_plus.powf(profile.params().beta());
    let exact = profile.deviation(0.0).is_some() && profile.amplitude() == f.m_plus;
    rescale_plus(profile, f, ys)?
        .into_iter()
        .map(|(y, v)| {
            let r = y / scale;
            let d = match profile.deviation(r) {
                Some(phi) if exact && v > 0.0 => phi / f.m_plus,
                _ => v - unit_bubble(n, y),
            };
            Ok((y, d))
        })
        .collect()
}

/// `ũ⁻(y) = u⁻(y/M₋^β)/M₋` on `[ρ_λ, M₋^β]`.
pub fn rescale_minus(
    profile: &RadialProfile,
    f: &NodalFeatures,
    ys: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let beta = profile.params().beta();
    let scale = f.m_minus.powf(beta);
    ys.iter()
        .map(|&y| {
            if !(y >= f.rho && y <= scale) {
                return Err(Error::OutOfDomain(format!(
                    "y = {y} outside [{}, {scale}]",
                    f.rho
                )));
            }
            let v = if y == f.gamma {
                1.0
            } else if y == f.rho || y == scale {
                0.0
            } else {
                (-profile.value(y / scale)).max(0.0) / f.m_minus
            };
            Ok((y, v))
        })
        .collect()
}

/// `sup |v − δ(y)|` over the samples with `y` in the window.
pub fn bubble_deviation(samples: &[(f64, f64)], n: u32, window: (f64, f64)) -> Result<f64> {
    let b = Bubble::unit(n);
    let mut any = false;
    let mut sup: f64 = 0.0;
    for &(y, v) in samples {
        if y >= window.0 && y <= window.1 {
            any = true;
            sup = sup.max((v - b.eval(y)).abs());
        }
    }
    if any {
        Ok(sup)
    } else {
        Err(Error::EmptyDomain)
    }
}

/// Largest `u⁺(r) − M₊{1 + (λ + M₊^{4/(n-2)}) r²/K}^{-(n-2)/2}` over `r = 0` and
/// the knots in `[0, r_λ]`.
pub fn check_inner_envelope(profile: &RadialProfile, f: &NodalFeatures) -> f64 {
    let p = profile.params();
    let nf = p.nf();
    let k = nf * (nf - 2.0);
    let mp = f.m_plus;
    let coef = (p.lambda + mp.powf(4.0 / (nf - 2.0))) / k;
    let env = |r: f64| mp * (1.0 + coef * r * r).powf(-(nf - 2.0) / 2.0);
    let at0 = profile.value(0.0).max(0.0) - mp;
    profile
        .knots()
        .iter()
        .zip(profile.values())
        .filter(|(&r, _)| r <= f.r_lambda)
        .map(|(&r, &u)| u.max(0.0) - env(r))
        .fold(at0, f64::max)
}

/// Largest `ũ⁺(y) − δ(y)` over `y = 0` and the images of the knots in `[0, r_λ]`.
pub fn check_rescaled_envelope(profile: &RadialProfile, f: &NodalFeatures) -> Result<f64> {
    let beta = profile.params().beta();
    let scale = f.m_plus.powf(beta);
    let n = profile.params().n;
    let ys: Vec<f64> = std::iter::once(0.0)
        .chain(
            profile
                .knots()
                .iter()
                .filter(|&&r| r < f.r_lambda)
                .map(|&r| (r * scale).min(f.sigma)),
        )
        .collect();
    let samples = rescale_plus(profile, f, &ys)?;
    Ok(samples
        .iter()
        .map(|&(y, v)| v - unit_bubble(n, y))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Root of `g(s) = 1/(k-2) + s − ((k-1)/(k-2)) s^{(k-2)/(k-1)} = ε`, `k = 2(n-1)/(n-2)`.
///
/// `g` decreases from `(n-2)/2` at `s = 0` to `0` at `s = 1`.
pub fn delta_of_epsilon(n: u32, epsilon: f64) -> Result<f64> {
    derive_exponents(n)?;
    let nf = n as f64;
    let top = (nf - 2.0) / 2.0;
    if !(epsilon > 0.0 && epsilon < top) {
        return Err(Error::OutOfDomain(format!(
            "epsilon {epsilon} not in (0, {top})"
        )));
    }
    let k = 2.0 * (nf - 1.0) / (nf - 2.0);
    let g = |s: f64| 1.0 / (k - 2.0) + s - (k - 1.0) / (k - 2.0) * s.powf((k - 2.0) / (k - 1.0));
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusBound {
    pub delta: f64,
    /// Inner radius `δ^{-1/n} s_λ` of the region.
    pub inner: f64,
    /// Largest `u⁻ − envelope` on the region.
    pub violation: f64,
    /// Largest `ũ⁻ − U_h` on the rescaled region.
    pub rescaled_violation: f64,
    /// Largest `ũ⁻ − 1` over the whole negative region.
    pub plateau_violation: f64,
}

/// Envelope of the negative part on `δ(ε)^{-1/n} s_λ < r < 1`:
///
/// ```text
/// u⁻(r) ≤ M₋ {1 + M₋^{-1} f(M₋) c(ε) r²/K}^{-(n-2)/2},   c(ε) = 2ε/(n-2),
/// ```
///
/// with `f(y) = λy + y^{(n+2)/(n-2)}`, and its rescaled form `ũ⁻ ≤ U_h` with
/// `h = δ^{-1/n} γ_λ`.
pub fn check_annulus_envelope(
    profile: &RadialProfile,
    f: &NodalFeatures,
    epsilon: f64,
) -> Result<AnnulusBound> {
    let p = profile.params();
    let nf = p.nf();
    let k = nf * (nf - 2.0);
    let delta = delta_of_epsilon(p.n, epsilon)?;
    let stretch = delta.powf(-1.0 / nf);
    let inner = stretch * f.s_lambda;
    if inner >= 1.0 {
        return Err(Error::RegionEmpty { inner });
    }
    let c = 2.0 * epsilon / (nf - 2.0);
    let mm = f.m_minus;
    let ratio = p.lambda + mm.powf(2.0 * p.beta());
    let expo = -(nf - 2.0) / 2.0;
    let scale = mm.powf(p.beta());
    let h = stretch * f.gamma;
    let mut violation = f64::NEG_INFINITY;
    let mut rescaled_violation = f64::NEG_INFINITY;
    let mut plateau_violation = f64::NEG_INFINITY;
    for (&r, &u) in profile.knots().iter().zip(profile.values()) {
        if r < f.r_lambda {
            continue;
        }
        let um = (-u).max(0.0);
        plateau_violation = plateau_violation.max(um / mm - 1.0);
        if r > inner && r < 1.0 {
            let env = mm * (1.0 + ratio * c * r * r / k).powf(expo);
            violation = violation.max(um - env);
            let y = scale * r;
            let uh = if y <= h {
                1.0
            } else {
                (1.0 + c * y * y / k).powf(expo)
            };
            rescaled_violation = rescaled_violation.max(um / mm - uh);
        }
    }
    Ok(AnnulusBound {
        delta,
        inner,
        violation,
        rescaled_violation,
        plateau_violation,
    })
}

/// `|u'(r_λ)| r_λ^{n-1} / r_λ^{(n-2)/2}`.
pub fn node_slope_ratio(n: u32, f: &NodalFeatures) -> f64 {
    let nf = n as f64;
    if f.du_node == 0.0 {
        return 0.0;
    }
    f.du_node.abs() * f.r_lambda.powf(nf - 1.0) / f.r_lambda.powf((nf - 2.0) / 2.0)
}

/// Sup over `grid` of `|λ^{-(n-2)/(2n-8)} u − c̃ G(·, 0)|` and of the same gap for
/// the radial derivatives.
pub fn green_comparison(
    profile: &RadialProfile,
    consts: &DimensionalConstants,
    annulus: (f64, f64),
    grid: &[f64],
) -> Result<(f64, f64)> {
    let (r_in, r_out) = annulus;
    if !(r_in > 0.0 && r_in < r_out && r_out < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "annulus [{r_in}, {r_out}] must lie inside (0, 1)"
        )));
    }
    let p = profile.params();
    let scale = p.lambda.powf(-p.exponents.green_exp()?);
    let g = GreenBall::new(p.n)?;
    let mut gaps = (0.0_f64, 0.0_f64);
    for &r in grid {
        if r < r_in || r > r_out {
            return Err(Error::OutOfDomain(format!("radius {r} outside annulus")));
        }
        let (u, du) = profile.eval(r);
        gaps.0 = gaps
            .0
            .max((scale * u - consts.c_tilde * g.at_center(r)?).abs());
        gaps.1 = gaps
            .1
            .max((scale * du - consts.c_tilde * g.gradient_at_center(r)?).abs());
    }
    Ok(gaps)
}

/// Aitken's Δ² extrapolation of three successive terms; falls back to the last
/// term when the second difference vanishes.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let (d1, d2) = (x1 - x0, x2 - x1);
    let den = d2 - d1;
    if den == 0.0 || !den.is_finite() {
        return x2;
    }
    let v = x2 - d2 * d2 / den;
    if v.is_finite() {
        v
    } else {
        x2
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientRecords {
            needed: 2,
            got: xs.len().min(ys.len()),
        });
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

pub fn fmt_seq(xs: &[f64], digits: usize) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.digits$e}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

pub fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitVerdict {
    pub name: String,
    pub limit: f64,
    pub values: Vec<f64>,
    /// `|value/limit − 1|`
    pub gaps: Vec<f64>,
    pub tail_decreasing: bool,
    pub extrapolated: f64,
    pub extrapolation_error: f64,
    pub pass: bool,
}

impl LimitVerdict {
    pub fn new(name: &str, limit: f64, values: Vec<f64>, tolerance: f64) -> Result<Self> {
        let m = values.len();
        if m < 3 {
            return Err(Error::InsufficientRecords { needed: 3, got: m });
        }
        let gaps: Vec<f64> = values.iter().map(|v| (v / limit - 1.0).abs()).collect();
        let tail_decreasing = strictly_decreasing(&gaps[m - 3..]);
        let extrapolated = aitken(values[m - 3], values[m - 2], values[m - 1]);
        let extrapolation_error = (extrapolated / limit - 1.0).abs();
        Ok(LimitVerdict {
            name: name.to_string(),
            limit,
            values,
            gaps,
            tail_decreasing,
            extrapolated,
            extrapolation_error,
            pass: tail_decreasing && extrapolation_error <= tolerance,
        })
    }
}

/// Limits of `q1, q2, q3` (`c₃, c₃, 1`) and `p1..p4` (`c₁, c₂, c₁, c₂`) along a
/// sweep ordered by decreasing `λ`.
pub fn limit_report(
    records: &[SweepRecord],
    consts: &DimensionalConstants,
    tolerance: f64,
) -> Result<Vec<LimitVerdict>> {
    if records.len() < 3 {
        return Err(Error::InsufficientRecords {
            needed: 3,
            got: records.len(),
        });
    }
    let col = |g: fn(&SweepRecord) -> f64| records.iter().map(g).collect::<Vec<f64>>();
    let specs: [(&str, f64, Vec<f64>); 7] = [
        ("q1", consts.c3, col(|r| r.q1)),
        ("q2", consts.c3, col(|r| r.q2)),
        ("q3", 1.0, col(|r| r.q3)),
        ("p1", consts.c1, col(|r| r.p1)),
        ("p2", consts.c2, col(|r| r.p2)),
        ("p3", consts.c1, col(|r| r.p3)),
        ("p4", consts.c2, col(|r| r.p4)),
    ];
    specs
        .into_iter()
        .map(|(name, limit, values)| LimitVerdict::new(name, limit, values, tolerance))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: u32,
    pub limits: Vec<LimitVerdict>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<6} {:>14} {:>14} {:>10} {:>10}  {}\n",
            "qty", "limit", "extrapolated", "rel.err", "tail", "verdict"
        );
        for v in &self.limits {
            s += &format!(
                "{:<6} {:>14.6e} {:>14.6e} {:>10.2e} {:>10}  {}\n",
                v.name,
                v.limit,
                v.extrapolated,
                v.extrapolation_error,
                if v.tail_decreasing {
                    "decr"
                } else {
                    "not decr"
                },
                if v.pass { "PASS" } else { "FAIL" }
            );
        }
        for c in &self.checks {
            s += &format!(
                "{:<28} {}  {}\n",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        s += &format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub k: usize,
    pub extrapolation_tol: f64,
    pub slope_tol: f64,
    pub final_dev_plus: f64,
    /// Quantities whose limit verdicts enter the overall verdict.
    pub required: &'static [&'static str],
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k: 2,
            extrapolation_tol: 0.10,
            slope_tol: 0.1,
            final_dev_plus: 5e-2,
            required: &["q2", "q3", "p1", "p3"],
        }
    }
}

/// Trend and limit checks over a sweep ordered by decreasing `λ`.
pub fn verify_records(
    records: &[SweepRecord],
    consts: &DimensionalConstants,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let n = consts.n;
    let limits = limit_report(records, consts, opts.extrapolation_tol)?;
    let col = |g: &dyn Fn(&SweepRecord) -> f64| records.iter().map(g).collect::<Vec<f64>>();
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            pass,
            detail,
        })
    };

    let lambdas = col(&|r| r.lambda);
    push(
        "grid-decreasing",
        strictly_decreasing(&lambdas),
        format!("{lambdas:?}"),
    );
    let identity = records
        .iter()
        .map(|r| (r.q3 * r.q1 / r.q2 - 1.0).abs())
        .fold(0.0, f64::max);
    push(
        "identity-q3q1-q2",
        identity < 1e-12,
        format!("max rel gap {identity:.2e}"),
    );
    let m = records.len();
    let tail = &records[m - 3..];
    let slope = log_slope(
        &tail.iter().map(|r| r.lambda).collect::<Vec<_>>(),
        &tail.iter().map(|r| r.m_minus).collect::<Vec<_>>(),
    )?;
    let target = -derive_exponents(n)?.green_exp()?;
    push(
        "m-minus-rate",
        (slope - target).abs() <= opts.slope_tol,
        format!("slope {slope:.4} vs {target:.4}"),
    );
    let dp = col(&|r| r.bubble_dev_plus);
    let last_dp = *dp.last().expect("nonempty");
    push(
        "bubble-dev-plus",
        strictly_decreasing(&dp) && last_dp < opts.final_dev_plus,
        fmt_seq(&dp, 3),
    );
    let dm = col(&|r| r.bubble_dev_minus);
    push(
        "bubble-dev-minus",
        strictly_decreasing(&dm),
        fmt_seq(&dm, 3),
    );
    let gd = col(&|r| r.green_dev);
    let gg = col(&|r| r.green_grad_dev);
    push("green-value", strictly_decreasing(&gd), fmt_seq(&gd, 4));
    push("green-gradient", strictly_decreasing(&gg), fmt_seq(&gg, 4));
    let level = opts.k as f64 / n as f64;
    let eg = col(&|r| (r.energy - level * consts.s_pow).abs() / consts.s_pow);
    push("energy-level", strictly_decreasing(&eg), fmt_seq(&eg, 3));
    let sep = col(&|r| r.m_plus / r.m_minus);
    push(
        "speed-separation",
        strictly_increasing(&sep),
        fmt_seq(&sep, 3),
    );
    let small = col(&|r| r.annulus_small_term(n));
    push(
        "annulus-small-term",
        strictly_decreasing(&small),
        fmt_seq(&small, 3),
    );
    let sig = col(&|r| r.sigma);
    let gam = col(&|r| r.gamma);
    push(
        "sigma-gamma-trend",
        strictly_increasing(&sig) && strictly_decreasing(&gam),
        format!("sigma {} gamma {}", fmt_seq(&sig, 3), fmt_seq(&gam, 3)),
    );

    let pass = checks.iter().all(|c| c.pass)
        && limits
            .iter()
            .filter(|v| opts.required.contains(&v.name.as_str()))
            .all(|v| v.pass);
    Ok(VerifyReport {
        n,
        limits,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Params;

    fn fixture_features() -> NodalFeatures {
        NodalFeatures {
            r_lambda: 0.5,
            s_lambda: 0.75,
            m_plus: 1.0,
            m_minus: 0.125,
            du_node: -1.0,
            du_boundary: 1.0,
            sigma: 0.5,
            rho: 0.125f64.powf(0.4) * 0.5,
            gamma: 0.125f64.powf(0.4) * 0.75,
        }
    }

    #[test]
    fn aitken_recovers_geometric_limit() {
        let seq: Vec<f64> = (0..3).map(|i| 2.0 + 0.7 * 0.4f64.powi(i)).collect();
        assert!((aitken(seq[0], seq[1], seq[2]) - 2.0).abs() < 1e-14);
        assert_eq!(aitken(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn delta_of_epsilon_limits() {
        let top = 2.5;
        let near_top = delta_of_epsilon(7, top - 1e-9).unwrap();
        let near_zero = delta_of_epsilon(7, 1e-9).unwrap();
        assert!(near_top < 1e-6);
        assert!(near_zero > 0.999);
        let d = delta_of_epsilon(7, 1.25).unwrap();
        let k = 2.4;
        let g = 1.0 / (k - 2.0) + d - (k - 1.0) / (k - 2.0) * d.powf((k - 2.0) / (k - 1.0));
        assert!((g - 1.25).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 1..50 {
            let d = delta_of_epsilon(7, top * (1.0 - i as f64 / 50.0)).unwrap();
            assert!(d > prev);
            prev = d;
        }
        assert!(delta_of_epsilon(7, 0.0).is_err());
        assert!(delta_of_epsilon(7, top).is_err());
    }

    #[test]
    fn bubble_against_itself() {
        let ys = linspace(0.0, 10.0, 101);
        let b = Bubble::unit(7);
        let s: Vec<(f64, f64)> = ys.iter().map(|&y| (y, b.eval(y))).collect();
        assert_eq!(bubble_deviation(&s, 7, (0.0, 10.0)).unwrap(), 0.0);
        assert_eq!(
            bubble_deviation(&s, 7, (20.0, 30.0)).unwrap_err(),
            Error::EmptyDomain
        );
    }

    #[test]
    fn node_slope_ratio_vanishes_with_slope() {
        let mut f = fixture_features();
        assert!(node_slope_ratio(7, &f) > 0.0);
        f.du_node = 0.0;
        assert_eq!(node_slope_ratio(7, &f), 0.0);
    }

    #[test]
    fn synthetic_profile_above_envelope() {
        let p = Params::new(7, 1.0).unwrap();
        let f = fixture_features();
        // flat top: exceeds any decaying envelope away from r = 0
        let r: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let u: Vec<f64> = r.iter().map(|&r| if r < 0.5 { 1.0 } else { 0.0 }).collect();
        let du = vec![0.0; r.len()];
        let prof = RadialProfile::from_samples(p, 1.0, r, u, du).unwrap();
        assert!(check_inner_envelope(&prof, &f) > 0.0);
        assert!(check_rescaled_envelope(&prof, &f).unwrap() > 0.0);
    }

    #[test]
    fn green_comparison_on_zero_profile() {
        let p = Params::new(7, 1.0).unwrap();
        let prof = RadialProfile::from_samples(p, 0.0, vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2])
            .unwrap();
        let c = crate::bubble::constants(7).unwrap();
        let grid = linspace(0.2, 0.8, 61);
        let (v, d) = green_comparison(&prof, &c, (0.2, 0.8), &grid).unwrap();
        let g = GreenBall::new(7).unwrap();
        // |G| and |∂G| are largest at the inner radius
        assert!((v - c.c_tilde * g.at_center(0.2).unwrap().abs()).abs() < 1e-12 * v);
        assert!((d - c.c_tilde * g.gradient_at_center(0.2).unwrap().abs()).abs() < 1e-12 * d);
        assert!(green_comparison(&prof, &c, (0.2, 1.0), &grid).is_err());
        assert!(green_comparison(&prof, &c, (0.0, 0.8), &grid).is_err());
    }

    #[test]
    fn too_few_records() {
        let c = crate::bubble::constants(7).unwrap();
        assert_eq!(
            limit_report(&[], &c, 0.1).unwrap_err().code(),
            "insufficient-records"
        );
    }
}
