//! Radial integration of `u'' + ((n-1)/r) u' + λu + |u|^{2*-2}u = 0`, `u(0) = a`,
//! `u'(0) = 0`.
//!
//! The integrator is Dormand–Prince 5(4) with its fourth-order continuous
//! extension. Sign changes of `u` and `u'` are located on the continuous
//! extension by bisection and recorded as [`Event`]s.
//!
//! Two formulations are available:
//!
//! * [`Formulation::Direct`] advances `(u, u')` itself.
//! * [`Formulation::BubbleDeviation`] writes `u = U + φ`, where `U(r) = a δ(|a|^β r)`
//!   is the exact solution of the `λ = 0` equation with the same height, and
//!   advances `(φ, φ')`. Near blow-up the interesting structure of `u` (its
//!   negative lobe) is many orders of magnitude below `a`; the deviation keeps
//!   that structure at full relative precision, which the direct state cannot.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    ZeroCrossing,
    DerivativeZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub radius: f64,
    pub u: f64,
    pub du: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventSpec {
    pub zero_crossings: bool,
    pub derivative_zeros: bool,
    /// Stop as soon as this many zero crossings have been located.
    pub stop_after_zeros: Option<usize>,
}

impl Default for EventSpec {
    fn default() -> Self {
        EventSpec {
            zero_crossings: true,
            derivative_zeros: true,
            stop_after_zeros: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    Direct,
    BubbleDeviation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    /// Absolute tolerance in natural units of the state (see [`integrate`]).
    pub atol: f64,
    pub formulation: Formulation,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-13,
            atol: 1e-15,
            formulation: Formulation::BubbleDeviation,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorOptions {
    pub fn direct() -> Self {
        IntegratorOptions {
            formulation: Formulation::Direct,
            ..Default::default()
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        IntegratorOptions {
            rtol: self.rtol * factor,
            atol: self.atol * factor,
            ..self
        }
    }
}

/// Right-hand side of the first-order system in `(u, v = u')`.
pub fn rhs(params: &Params, r: f64, state: (f64, f64)) -> Result<(f64, f64)> {
    if r <= 0.0 {
        return Err(Error::SingularPoint);
    }
    let (u, v) = state;
    Ok((
        v,
        -(params.nf() - 1.0) / r * v - params.lambda * u - params.nonlinearity(u),
    ))
}

/// Series radius used to leave the origin: `1e-6 · min(1, |a|^-β)`.
pub fn default_start_radius(params: &Params, a: f64) -> f64 {
    1e-6 * inner_scale(params, a).min(1.0)
}

fn inner_scale(params: &Params, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else {
        a.abs().powf(-params.beta())
    }
}

/// Second-order series start at `r0`, from `n·u''(0) = -f(a)`.
pub fn taylor_start(params: &Params, a: f64, r0: f64) -> Result<(f64, f64)> {
    let limit = 1e-4 * inner_scale(params, a).min(1.0);
    if !(r0 > 0.0) || r0 > limit {
        return Err(Error::StartStepTooCoarse { r0, limit });
    }
    let f = params.source(a);
    let nf = params.nf();
    Ok((a - f * r0 * r0 / (2.0 * nf), -f * r0 / nf))
}

/// `U(r) = a (1 + |a|^{2β} r²/(n(n-2)))^{-(n-2)/2}`: the λ = 0 solution with `U(0) = a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BubbleBase {
    a: f64,
    scale: f64,
    expo: f64,
}

impl BubbleBase {
    fn new(params: &Params, a: f64) -> Self {
        let nf = params.nf();
        BubbleBase {
            a,
            scale: a.abs().powf(2.0 * params.beta()) / (nf * (nf - 2.0)),
            expo: (nf - 2.0) / 2.0,
        }
    }

    fn value(&self, r: f64) -> f64 {
        self.a * (1.0 + self.scale * r * r).powf(-self.expo)
    }

    fn deriv(&self, r: f64) -> f64 {
        let t = 1.0 + self.scale * r * r;
        -2.0 * self.expo * self.a * self.scale * r * t.powf(-self.expo - 1.0)
    }
}

/// `|U+φ|^{p-1}(U+φ) - |U|^{p-1}U` without cancellation when `|φ| ≪ |U|`.
fn nonlinear_increment(p: f64, base: f64, phi: f64) -> f64 {
    if base != 0.0 && phi.abs() < 0.5 * base.abs() {
        base.signum() * base.abs().powf(p) * (p * (phi / base).ln_1p()).exp_m1()
    } else {
        let w = base + phi;
        w.signum() * w.abs().powf(p) - base.signum() * base.abs().powf(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct DenseSegment {
    r: f64,
    h: f64,
    rcont: [[f64; 5]; 2],
}

impl DenseSegment {
    fn eval(&self, r: f64) -> [f64; 2] {
        let theta = (r - self.r) / self.h;
        let theta1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for (o, c) in out.iter_mut().zip(&self.rcont) {
            *o = c[0] + theta * (c[1] + theta1 * (c[2] + theta * (c[3] + theta1 * c[4])));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Dense {
    Rk {
        base: Option<BubbleBase>,
        segments: Vec<DenseSegment>,
    },
    Hermite,
}

/// A radial solution sampled on `[r0, r_end]` with a continuous extension.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    params: Params,
    a: f64,
    knots: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    events: Vec<Event>,
    dense: Dense,
}

impl RadialProfile {
    /// Profile described only by samples `(r_i, u_i, u'_i)`, interpolated by cubic
    /// Hermite polynomials. Events are located on the interpolant.
    pub fn from_samples(
        params: Params,
        a: f64,
        knots: Vec<f64>,
        values: Vec<f64>,
        derivs: Vec<f64>,
    ) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() || knots.len() != derivs.len() {
            return Err(Error::EmptyDomain);
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots[0] < 0.0 {
            return Err(Error::OutOfDomain(
                "knots must be increasing and nonnegative".into(),
            ));
        }
        let mut p = RadialProfile {
            params,
            a,
            knots,
            values,
            derivs,
            events: Vec::new(),
            dense: Dense::Hermite,
        };
        p.events = p.scan_events(EventSpec::default());
        Ok(p)
    }

    /// Profile with pre-computed events (used when reading files).
    pub fn from_parts(
        params: Params,
        a: f64,
        knots: Vec<f64>,
        values: Vec<f64>,
        derivs: Vec<f64>,
        events: Vec<Event>,
    ) -> Result<Self> {
        let mut p = Self::from_samples(params, a, knots, values, derivs)?;
        p.events = events;
        Ok(p)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `u(0)`.
    pub fn amplitude(&self) -> f64 {
        self.a
    }

    pub fn r_start(&self) -> f64 {
        self.knots[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.knots.last().expect("nonempty")
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn zero_crossings(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::ZeroCrossing)
    }

    pub fn derivative_zeros(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::DerivativeZero)
    }

    pub fn formulation(&self) -> Option<Formulation> {
        match &self.dense {
            Dense::Rk { base: Some(_), .. } => Some(Formulation::BubbleDeviation),
            Dense::Rk { base: None, .. } => Some(Formulation::Direct),
            Dense::Hermite => None,
        }
    }

    fn segment_index(&self, r: f64) -> usize {
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&r).unwrap_or(Ordering::Less))
        {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.knots.len() - 2),
        }
    }

    /// `(u(r), u'(r))` for `0 ≤ r ≤ r_end`; below the first knot the series
    /// expansion at the origin is used.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        if r < self.r_start() {
            let f = self.params.source(self.a);
            let nf = self.params.nf();
            return (self.a - f * r * r / (2.0 * nf), -f * r / nf);
        }
        let i = self.segment_index(r);
        match &self.dense {
            Dense::Rk { base, segments } => {
                let [x, y] = segments[i].eval(r);
                match base {
                    Some(b) => (b.value(r) + x, b.deriv(r) + y),
                    None => (x, y),
                }
            }
            Dense::Hermite => {
                let (r0, r1) = (self.knots[i], self.knots[i + 1]);
                let h = r1 - r0;
                let t = (r - r0) / h;
                let (u0, u1) = (self.values[i], self.values[i + 1]);
                let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                let u = (2.0 * t3 - 3.0 * t2 + 1.0) * u0
                    + (t3 - 2.0 * t2 + t) * d0
                    + (-2.0 * t3 + 3.0 * t2) * u1
                    + (t3 - t2) * d1;
                let du = ((6.0 * t2 - 6.0 * t) * u0
                    + (3.0 * t2 - 4.0 * t + 1.0) * d0
                    + (-6.0 * t2 + 6.0 * t) * u1
                    + (3.0 * t2 - 2.0 * t) * d1)
                    / h;
                (u, du)
            }
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn deriv(&self, r: f64) -> f64 {
        self.eval(r).1
    }

    /// `u(r) - a δ(|a|^β r)` when the profile was integrated in bubble-deviation
    /// form; this difference is available at full relative precision.
    pub fn deviation(&self, r: f64) -> Option<f64> {
        match &self.dense {
            Dense::Rk {
                base: Some(_),
                segments,
            } => {
                if r < self.r_start() {
                    let nf = self.params.nf();
                    Some(-self.params.lambda * self.a * r * r / (2.0 * nf))
                } else {
                    Some(segments[self.segment_index(r)].eval(r)[0])
                }
            }
            _ => None,
        }
    }

    fn locate(&self, lo: f64, hi: f64, derivative: bool) -> f64 {
        let g = |r: f64| {
            let (u, du) = self.eval(r);
            if derivative {
                du
            } else {
                u
            }
        };
        bisect_sign_change(g, lo, hi)
    }

    fn scan_events(&self, spec: EventSpec) -> Vec<Event> {
        let mut events = Vec::new();
        for i in 1..self.knots.len() {
            let (lo, hi) = (self.knots[i - 1], self.knots[i]);
            let last = i + 1 == self.knots.len();
            push_events(
                self,
                &mut events,
                spec,
                (lo, hi, last),
                (self.values[i - 1], self.values[i]),
                (self.derivs[i - 1], self.derivs[i]),
            );
        }
        events
    }
}

// An exact zero on an interior knot is attributed to the interval ending there;
// on the final knot it is a boundary value, not a crossing.
fn sign_change(a: f64, b: f64, last: bool) -> bool {
    if last && b == 0.0 {
        return false;
    }
    (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)
}

fn push_events(
    p: &RadialProfile,
    events: &mut Vec<Event>,
    spec: EventSpec,
    (lo, hi, last): (f64, f64, bool),
    u: (f64, f64),
    du: (f64, f64),
) {
    let mut found = Vec::new();
    if spec.zero_crossings && sign_change(u.0, u.1, last) {
        let r = p.locate(lo, hi, false);
        let (uu, dd) = p.eval(r);
        found.push(Event {
            kind: EventKind::ZeroCrossing,
            radius: r,
            u: uu,
            du: dd,
        });
    }
    if spec.derivative_zeros && sign_change(du.0, du.1, last) {
        let r = p.locate(lo, hi, true);
        let (uu, dd) = p.eval(r);
        found.push(Event {
            kind: EventKind::DerivativeZero,
            radius: r,
            u: uu,
            du: dd,
        });
    }
    found.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    events.extend(found);
}

/// Bisection to adjacent floating-point numbers on a sign change of `g` in `[lo, hi]`.
pub(crate) fn bisect_sign_change<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type State = [f64; 2];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates from the origin to `r_stop`.
///
/// Error control is mixed relative/absolute. The absolute floor `τ` of the value
/// is `atol·|a|` for the direct form and `atol·λ|a|^{1-2β}` (the size of the
/// deviation on the inner scale) for the bubble-deviation form; the floor of the
/// derivative is `τ·min(|a|^β, 1/r)`.
pub fn integrate(
    params: &Params,
    a: f64,
    r_stop: f64,
    spec: EventSpec,
    opts: IntegratorOptions,
) -> Result<RadialProfile> {
    if !a.is_finite() {
        return Err(Error::OutOfDomain(format!("amplitude {a}")));
    }
    if !(r_stop > 0.0) || !r_stop.is_finite() {
        return Err(Error::OutOfDomain(format!("r_stop {r_stop}")));
    }
    let r0 = default_start_radius(params, a);
    if a == 0.0 {
        return RadialProfile::from_samples(
            *params,
            0.0,
            vec![r0, r_stop.max(2.0 * r0)],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        );
    }
    let nf = params.nf();
    let beta = params.beta();
    let p = params.two_star() - 1.0;
    let lambda = params.lambda;
    let base = match opts.formulation {
        Formulation::Direct => None,
        Formulation::BubbleDeviation => Some(BubbleBase::new(params, a)),
    };

    let f = |r: f64, y: &State| -> State {
        match &base {
            None => {
                let (u, v) = (y[0], y[1]);
                [
                    v,
                    -(nf - 1.0) / r * v - lambda * u - u.signum() * u.abs().powf(p),
                ]
            }
            Some(b) => {
                let big_u = b.value(r);
                let (phi, dphi) = (y[0], y[1]);
                [
                    dphi,
                    -(nf - 1.0) / r * dphi
                        - lambda * (big_u + phi)
                        - nonlinear_increment(p, big_u, phi),
                ]
            }
        }
    };
    let full = |r: f64, y: &State| -> (f64, f64) {
        match &base {
            None => (y[0], y[1]),
            Some(b) => (b.value(r) + y[0], b.deriv(r) + y[1]),
        }
    };

    let mut y: State = match base {
        None => {
            let (u, v) = taylor_start(params, a, r0)?;
            [u, v]
        }
        Some(_) => [-lambda * a * r0 * r0 / (2.0 * nf), -lambda * a * r0 / nf],
    };
    // derivative floor: value floor over the local length scale min(|a|^{-β}, r)
    let atol_u = match base {
        None => opts.atol * a.abs(),
        Some(_) => (opts.atol * lambda * a.abs().powf(1.0 - 2.0 * beta)).max(f64::MIN_POSITIVE),
    };
    let inner_scale = a.abs().powf(beta);
    let atol = |r: f64| -> State {
        [
            atol_u,
            (atol_u * inner_scale.min(1.0 / r)).max(f64::MIN_POSITIVE),
        ]
    };

    let mut profile = RadialProfile {
        params: *params,
        a,
        knots: Vec::new(),
        values: Vec::new(),
        derivs: Vec::new(),
        events: Vec::new(),
        dense: Dense::Hermite,
    };
    let mut segments: Vec<DenseSegment> = Vec::new();
    let (u0, du0) = full(r0, &y);
    profile.knots.push(r0);
    profile.values.push(u0);
    profile.derivs.push(du0);

    let blow_up = 1e12 * a.abs();
    let mut r = r0;
    let mut h = 0.5 * r0;
    let mut k1 = f(r, &y);
    let mut steps = 0usize;
    let mut zeros_found = 0usize;
    let mut events = Vec::new();

    while r < r_stop {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::IntegrationFailed { radius: r });
        }
        let last = r + h >= r_stop;
        if last {
            h = r_stop - r;
        }
        let k2 = f(r + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(r + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            r + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            r + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            r + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let r_new = if last { r_stop } else { r + h };
        let k7 = f(r_new, &y_new);

        let atol = atol(r_new);
        let mut err = 0.0;
        for i in 0..2 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = atol[i] + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / 2.0).sqrt();
        if !err.is_finite() || !y_new[0].is_finite() || !y_new[1].is_finite() {
            h *= 0.25;
            if h < 1e-15 * r {
                return Err(Error::IntegrationFailed { radius: r });
            }
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            if h < 1e-15 * r {
                return Err(Error::IntegrationFailed { radius: r });
            }
            continue;
        }

        // accepted
        let mut rcont = [[0.0; 5]; 2];
        for i in 0..2 {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            rcont[i] = [
                y[i],
                ydiff,
                bspl,
                ydiff - h * k7[i] - bspl,
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]),
            ];
        }
        segments.push(DenseSegment { r, h, rcont });
        let (u_new, du_new) = full(r_new, &y_new);
        if u_new.abs() > blow_up {
            return Err(Error::BlowUpDetected { radius: r_new });
        }
        let (u_old, du_old) = (
            *profile.values.last().expect("nonempty"),
            *profile.derivs.last().expect("nonempty"),
        );
        profile.knots.push(r_new);
        profile.values.push(u_new);
        profile.derivs.push(du_new);
        profile.dense = Dense::Rk {
            base,
            segments: std::mem::take(&mut segments),
        };
        let before = events.len();
        push_events(
            &profile,
            &mut events,
            spec,
            (r, r_new, last),
            (u_old, u_new),
            (du_old, du_new),
        );
        if let Dense::Rk { segments: s, .. } = &mut profile.dense {
            segments = std::mem::take(s);
        }
        zeros_found += events[before..]
            .iter()
            .filter(|e| e.kind == EventKind::ZeroCrossing)
            .count();

        r = r_new;
        y = y_new;
        k1 = k7;
        h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);

        if let Some(limit) = spec.stop_after_zeros {
            if zeros_found >= limit {
                break;
            }
        }
    }

    profile.dense = Dense::Rk { base, segments };
    profile.events = events;
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubble::Bubble;

    #[test]
    fn rhs_examples() {
        let p = Params::new(7, 1.0).unwrap();
        assert_eq!(rhs(&p, 1.0, (0.0, 1.0)).unwrap(), (1.0, -6.0));
        let p0 = Params::limiting(7).unwrap();
        assert_eq!(rhs(&p0, 1.0, (1.0, 0.0)).unwrap(), (0.0, -1.0));
        let p2 = Params::new(7, 2.0).unwrap();
        assert_eq!(rhs(&p2, 0.5, (-1.0, 0.0)).unwrap(), (0.0, 3.0));
        assert_eq!(rhs(&p, 0.0, (1.0, 0.0)), Err(Error::SingularPoint));
    }

    #[test]
    fn taylor_examples() {
        let p0 = Params::limiting(7).unwrap();
        assert_eq!(taylor_start(&p0, 0.0, 1e-6).unwrap(), (0.0, 0.0));
        let (u, v) = taylor_start(&p0, 1.0, 1e-6).unwrap();
        assert_eq!(u, 1.0 - 1e-12 / 14.0);
        assert!((v + 1e-6 / 7.0).abs() < 1e-22);
        let p1 = Params::new(7, 1.0).unwrap();
        let (u, v) = taylor_start(&p1, -1.0, 1e-6).unwrap();
        assert_eq!(u, -1.0 + 2e-12 / 14.0);
        assert!((v - 2e-6 / 7.0).abs() < 1e-22);
        assert_eq!(
            taylor_start(&p1, 1.0, 1e-2).unwrap_err().code(),
            "start-step-too-coarse"
        );
    }

    #[test]
    fn taylor_start_agrees_with_bubble_series() {
        // λ = 0, a = 1: u is the unit bubble, u(r) = 1 - r²/14 + O(r^4) for n = 7.
        let p0 = Params::limiting(7).unwrap();
        let b = Bubble::unit(7);
        let r0 = 1e-5;
        let (u, v) = taylor_start(&p0, 1.0, r0).unwrap();
        assert!((u - b.eval(r0)).abs() < 4e-16);
        assert!((v - b.deriv(r0)).abs() < 1e-14);
    }

    #[test]
    fn zero_amplitude_gives_zero_profile() {
        let p = Params::new(7, 1.0).unwrap();
        for form in [IntegratorOptions::default(), IntegratorOptions::direct()] {
            let prof = integrate(&p, 0.0, 1.0, EventSpec::default(), form).unwrap();
            assert!(prof.events().is_empty());
            assert!(prof.values().iter().all(|&u| u == 0.0));
            assert_eq!(prof.value(0.5), 0.0);
        }
    }

    #[test]
    fn direct_bubble_oracle() {
        let p0 = Params::limiting(7).unwrap();
        let prof = integrate(
            &p0,
            1.0,
            10.0,
            EventSpec::default(),
            IntegratorOptions::direct(),
        )
        .unwrap();
        let b = Bubble::unit(7);
        let sup = (0..=2000)
            .map(|i| {
                let r = 10.0 * i as f64 / 2000.0;
                (prof.value(r) - b.eval(r)).abs()
            })
            .fold(0.0, f64::max);
        assert!(sup < 1e-8, "sup {sup}");
        assert!(prof.zero_crossings().next().is_none());
    }

    #[test]
    fn formulations_agree_at_moderate_amplitude() {
        let p = Params::new(7, 2.0).unwrap();
        let a = 20.0;
        let d = integrate(
            &p,
            a,
            1.0,
            EventSpec::default(),
            IntegratorOptions::direct(),
        )
        .unwrap();
        let b = integrate(
            &p,
            a,
            1.0,
            EventSpec::default(),
            IntegratorOptions::default(),
        )
        .unwrap();
        for i in 0..=100 {
            let r = i as f64 / 100.0;
            assert!((d.value(r) - b.value(r)).abs() < 1e-7 * a, "r={r}");
        }
        let zd: Vec<f64> = d.zero_crossings().map(|e| e.radius).collect();
        let zb: Vec<f64> = b.zero_crossings().map(|e| e.radius).collect();
        assert_eq!(zd.len(), zb.len());
        for (x, y) in zd.iter().zip(&zb) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_density_nonincreasing() {
        let p = Params::new(7, 1.0).unwrap();
        let prof = integrate(
            &p,
            1e6,
            1.0,
            EventSpec::default(),
            IntegratorOptions::default(),
        )
        .unwrap();
        let e =
            |u: f64, v: f64| 0.5 * v * v + 0.5 * u * u + u.abs().powf(p.two_star()) / p.two_star();
        let e0 = e(prof.values()[0], prof.derivs()[0]);
        let mut prev = e0;
        for (&u, &v) in prof.values().iter().zip(prof.derivs()) {
            let cur = e(u, v);
            assert!(cur - prev <= 1e-9 * e0);
            prev = cur;
        }
    }

    #[test]
    fn halving_tolerances_barely_moves_events() {
        let p = Params::new(7, 0.5).unwrap();
        for a in [1e8, 3e25] {
            let x = integrate(
                &p,
                a,
                1.0,
                EventSpec::default(),
                IntegratorOptions::default(),
            )
            .unwrap();
            let y = integrate(
                &p,
                a,
                1.0,
                EventSpec::default(),
                IntegratorOptions::default().scaled(0.5),
            )
            .unwrap();
            let zx: Vec<f64> = x.zero_crossings().map(|e| e.radius).collect();
            let zy: Vec<f64> = y.zero_crossings().map(|e| e.radius).collect();
            assert!(!zx.is_empty());
            assert_eq!(zx.len(), zy.len());
            for (r, s) in zx.iter().zip(&zy) {
                assert!((r - s).abs() < 1e-9, "a={a:e}: {r} vs {s}");
            }
        }
    }

    #[test]
    fn hermite_fixture_events() {
        let p = Params::new(7, 1.0).unwrap();
        let r: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let u: Vec<f64> = r.iter().map(|&r| (1.0 - 2.0 * r) * (1.0 - r)).collect();
        let du: Vec<f64> = r.iter().map(|&r| 4.0 * r - 3.0).collect();
        let prof = RadialProfile::from_samples(p, 1.0, r, u, du).unwrap();
        let z: Vec<_> = prof.zero_crossings().collect();
        // the boundary zero sits on the last knot and is not a sign change
        assert_eq!(z.len(), 1);
        assert!((z[0].radius - 0.5).abs() < 1e-14);
        let m: Vec<_> = prof.derivative_zeros().collect();
        assert_eq!(m.len(), 1);
        assert!((m[0].radius - 0.75).abs() < 1e-14);
    }
}
