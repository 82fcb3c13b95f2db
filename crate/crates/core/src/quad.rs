//! Adaptive Gauss–Kronrod quadrature and the variable changes needed for
//! endpoint singularities and semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::real::Real;

/// Tolerances and limits for numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Starting upper limit when an infinite range is truncated; it is
    /// doubled until the analytic tail bound is small enough.
    pub truncation_point: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-8),
            max_subdivisions: 2000,
            truncation_point: T::lit(32.0),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    /// Tighter settings used inside special functions and family formulas, so
    /// that outer checks see errors well below their own tolerance.
    pub fn fine() -> Self {
        Self {
            abs_tol: T::lit(1e-14),
            rel_tol: T::lit(1e-12),
            max_subdivisions: 4000,
            truncation_point: T::lit(32.0),
        }
    }

    pub fn with_tolerances(abs_tol: T, rel_tol: T) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= T::zero()) || !(self.rel_tol >= T::zero()) {
            return Err(Error::Parameter("quadrature tolerances must be non-negative".into()));
        }
        if self.abs_tol == T::zero() && self.rel_tol == T::zero() {
            return Err(Error::Parameter("at least one quadrature tolerance must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Parameter("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

/// Value of an integral with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208067223930,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    roundoff: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.f64().total_cmp(&other.error.f64())
    }
}

fn finite<T: Real>(v: T, x: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical { what: format!("integrand not finite at {x}"), partial: f64::NAN })
    }
}

/// 21-point Kronrod rule with the error heuristic of QUADPACK.
fn gk21<T: Real, F: FnMut(T) -> Result<T>>(f: &mut F, a: T, b: T) -> Result<Panel<T>> {
    let c = (a + b) * T::half();
    let h = (b - a) * T::half();
    let fc = finite(f(c)?, c)?;
    let mut resg = T::zero();
    let mut resk = fc * T::lit(WGK[10]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = h * T::lit(XGK[j]);
        let (x1, x2) = (c - dx, c + dx);
        let f1 = finite(f(x1)?, x1)?;
        let f2 = finite(f(x2)?, x2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        resk += w * (f1 + f2);
        resabs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * T::half();
    let mut resasc = T::lit(WGK[10]) * (fc - reskh).abs();
    for j in 0..10 {
        resasc += T::lit(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let hab = h.abs();
    let value = resk * h;
    resabs *= hab;
    resasc *= hab;
    let mut err = ((resk - resg) * h).abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * if scale < T::one() { scale } else { T::one() };
    }
    let roundoff = T::lit(50.0 * f64::EPSILON) * resabs;
    if err < roundoff {
        err = roundoff;
    }
    Ok(Panel { a, b, value, error: err, roundoff })
}

/// Adaptive integration over `[points[0], points[last]]` with the interior
/// points used as initial breakpoints.
pub fn integrate_breaks<T, F>(mut f: F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if points.len() < 2 {
        return Err(Error::Parameter("integration needs at least two points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = T::zero();
    let mut frozen_err = T::zero();
    let mut frozen_value = T::zero();
    let mut evaluations = 0;
    // accumulated rounding floor: asking for less than this cannot succeed
    let mut floor = T::zero();
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let p = gk21(&mut f, w[0], w[1])?;
        evaluations += 21;
        total += p.value;
        total_err += p.error;
        floor += p.roundoff;
        heap.push(p);
    }
    let tol = |total: T| {
        let r = cfg.rel_tol * total.abs();
        if r > cfg.abs_tol { r } else { cfg.abs_tol }
    };
    let mut splits = heap.len();
    while total_err + frozen_err > tol(total) && total_err + frozen_err > T::two() * floor {
        let Some(worst) = heap.pop() else { break };
        let mid = (worst.a + worst.b) * T::half();
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a).abs() <= T::lit(1e3 * f64::EPSILON) * mid.abs()
        {
            // interval can no longer be split meaningfully
            total_err -= worst.error;
            frozen_err += worst.error;
            frozen_value += worst.value;
            continue;
        }
        if splits >= cfg.max_subdivisions {
            heap.push(worst);
            return Err(Error::Numerical {
                what: format!(
                    "quadrature did not converge: error estimate {:e} above tolerance {:e}",
                    (total_err + frozen_err).f64(),
                    tol(total).f64()
                ),
                partial: total.f64(),
            });
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        splits += 1;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        floor += left.roundoff + right.roundoff - worst.roundoff;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to remove drift from incremental updates
    let value = heap.iter().fold(frozen_value, |s, p| s + p.value);
    Ok(Integral { value, error: total_err + frozen_err, evaluations })
}

pub fn integrate<T, F>(f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    integrate_breaks(f, &[a, b], cfg)
}

/// `∫_0^b x^(p-1) g(x) dx` via `u = x^p`, which removes the endpoint power
/// singularity when `g` is smooth.
pub fn integrate_power<T, F>(mut g: F, p: T, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(p > T::zero()) {
        return Err(Error::Parameter("power substitution needs p > 0".into()));
    }
    let inv = p.recip();
    let r = integrate(|u: T| g(u.powf(inv)), T::zero(), b.powf(p), cfg)?;
    Ok(Integral { value: r.value * inv, error: r.error * inv, evaluations: r.evaluations })
}

/// `∫_a^b x^(p-1) g(x) dx` for `0 <= a < b`, through the same substitution.
pub fn integrate_power_range<T, F>(mut g: F, p: T, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(p > T::zero()) {
        return Err(Error::Parameter("power substitution needs p > 0".into()));
    }
    let inv = p.recip();
    let r = integrate(|u: T| g(u.powf(inv)), a.powf(p), b.powf(p), cfg)?;
    Ok(Integral { value: r.value * inv, error: r.error * inv, evaluations: r.evaluations })
}

/// `∫_0^b f` for integrands with an integrable singularity of unknown shape
/// at zero: geometric breakpoints `b 2^-k` isolate the bad end.
pub fn integrate_from_zero<T, F>(f: F, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    const LEVELS: i32 = 48;
    let mut pts: Vec<T> = (0..=LEVELS).rev().map(|k| b * T::two().powi(-k)).collect();
    pts.insert(0, T::zero());
    integrate_breaks(f, &pts, cfg)
}

/// `∫_a^∞ f` through `x = a + s t/(1-t)`.
pub fn integrate_to_infinity<T, F>(mut f: F, a: T, scale: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let g = |t: T| {
        let one_m = T::one() - t;
        let x = a + scale * t / one_m;
        let v = f(x)?;
        if v == T::zero() {
            return Ok(T::zero());
        }
        Ok(v * scale / (one_m * one_m))
    };
    let breaks: Vec<T> = [0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 0.99, 0.997, 0.999, 1.0]
        .iter()
        .map(|&t| T::lit(t))
        .collect();
    integrate_breaks(g, &breaks, cfg)
}

/// `∫_0^∞ f` for integrands that may be singular at the origin.
pub fn integrate_half_line<T, F>(mut f: F, cfg: &QuadratureConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let head = integrate_from_zero(&mut f, T::one(), cfg)?;
    let tail = integrate_to_infinity(&mut f, T::one(), T::one(), cfg)?;
    Ok(Integral {
        value: head.value + tail.value,
        error: head.error + tail.error,
        evaluations: head.evaluations + tail.evaluations,
    })
}
