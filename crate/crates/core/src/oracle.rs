//! Independent numerical checks of scale functions: Gaver–Stehfest
//! inversion of `1/ψ`, forward Laplace quadrature, and the convolution
//! identity `W ∗ W*(dx) = dx`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{Float, FloatConst};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::Func;
use crate::catalog::ScaleFamily;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, integrate_from_zero, QuadratureConfig};
use crate::real::Real;
use crate::specfun::{breaks_to, choose_truncation, Truncated};

/// Number of Gaver–Stehfest terms used by default.
pub const DEFAULT_TERMS: usize = 14;
/// Terms used when inverting in double-double arithmetic.
pub const WIDE_TERMS: usize = 20;

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::of(k))
}

/// Gaver–Stehfest weights `V_1..V_N`.
fn stehfest_weights<T: Real>(terms: usize) -> Vec<T> {
    let half = terms / 2;
    (1..=terms)
        .map(|k| {
            let lo = (k + 1) / 2;
            let hi = k.min(half);
            let s = (lo..=hi).fold(T::zero(), |acc, j| {
                let num = T::of(j).powi(half as i32) * factorial::<T>(2 * j);
                let den = factorial::<T>(half - j)
                    * factorial::<T>(j)
                    * factorial::<T>(j - 1)
                    * factorial::<T>(k - j)
                    * factorial::<T>(2 * j - k);
                acc + num / den
            });
            if (k + half) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Gaver–Stehfest estimate of the inverse Laplace transform at `x`, sampling
/// the transform at `k ln2 / x` for `k = 1..terms`.
pub fn gaver_stehfest<T, F>(mut transform: F, x: T, terms: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if terms % 2 != 0 || !(8..=20).contains(&terms) {
        return Err(Error::Parameter(format!("Gaver–Stehfest needs an even number of terms in 8..=20, got {terms}")));
    }
    if !(x > T::zero() && x.is_finite()) {
        return Err(Error::Domain(format!("Gaver–Stehfest needs x > 0, got {x}")));
    }
    let step = T::LN_2() / x;
    let mut sum = T::zero();
    for (i, v) in stehfest_weights::<T>(terms).into_iter().enumerate() {
        sum += v * transform(step * T::of(i + 1))?;
    }
    Ok(sum * step)
}

/// Inverts `1/ψ` of the family at `x` in double-double arithmetic.
pub fn invert_scale(f: &ScaleFamily<f64>, x: f64, terms: usize) -> Result<f64> {
    let wide = f.cast::<DoubleDouble>();
    let beta = wide.phi_zero();
    let xs = DoubleDouble::from_f64(x);
    if !(DoubleDouble::LN_2() / xs > beta) {
        return Err(Error::Domain(format!("inversion at x = {x} samples ψ below Φ(0)")));
    }
    let v = gaver_stehfest(|t| Ok(wide.psi(t)?.recip()), xs, terms)?;
    Ok(v.f64())
}

/// `(θ - Φ(0)) ∫_0^∞ e^{-θx} W(x) dx`, which equals `1/φ(θ)`.
///
/// The range is cut at the first `T = truncation_point·2^k` where
/// `tail_bound(T)`, a bound on the discarded part of the scaled integral,
/// falls below `abs_tol/10`.
pub fn laplace_forward<T, W, B>(
    mut w: W,
    theta: T,
    phi_zero: T,
    q: &QuadratureConfig<T>,
    mut tail_bound: B,
) -> Result<Truncated<T>>
where
    T: Real,
    W: FnMut(T) -> Result<T>,
    B: FnMut(T) -> Result<T>,
{
    q.validate()?;
    if !(theta > phi_zero) {
        return Err(Error::Domain(format!(
            "Laplace transform of W needs θ > Φ(0) = {phi_zero}, got {theta}"
        )));
    }
    let mut failure = None;
    let (cut, bound) = choose_truncation(q.truncation_point, q.abs_tol * T::lit(0.1), |t| {
        tail_bound(t).unwrap_or_else(|e| {
            failure = Some(e);
            T::zero()
        })
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let pts = breaks_to(theta.recip().min(T::one()) / T::lit(16.0), cut);
    let r = integrate_breaks(|x: T| Ok((-theta * x).exp() * w(x)?), &pts, q)?;
    Ok(Truncated { value: (theta - phi_zero) * r.value, truncation_point: cut, tail_bound: bound })
}

/// Tail bound for [`laplace_forward`] from concavity of `e^{-Φ(0)x}W(x)`.
fn concave_tail<T: Real>(w: T, w_prime: T, t: T, theta: T, phi_zero: T) -> T {
    let s = theta - phi_zero;
    // tilted W and its slope at T
    let wt = (-phi_zero * t).exp() * w;
    let wpt = (-phi_zero * t).exp() * (w_prime - phi_zero * w);
    s * (-s * t).exp() * (wt / s + wpt.max(T::zero()) / (s * s))
}

/// `|(θ - Φ(0))∫e^{-θx}W dx · φ(θ) - 1|` for a family, with truncation data.
pub fn laplace_pair_residual(
    f: &ScaleFamily<f64>,
    theta: f64,
    q: &QuadratureConfig<f64>,
) -> Result<(f64, Truncated<f64>)> {
    let probe = FamilyProbe::from_family(f)?;
    probe_laplace(&probe, theta, q)
}

fn probe_laplace(p: &FamilyProbe, theta: f64, q: &QuadratureConfig<f64>) -> Result<(f64, Truncated<f64>)> {
    let pz = p.phi_zero;
    let est = laplace_forward(
        |x| (p.w)(x),
        theta,
        pz,
        q,
        |t| Ok(concave_tail((p.w)(t)?, (p.w_prime)(t)?, t, theta, pz)),
    )?;
    let phi = (p.phi)(theta)?;
    Ok(((est.value * phi - 1.0).abs(), est))
}

/// A scale function together with its conjugate: `W(0)`, `W`, `W′`, `W*`
/// and `W*′`.
#[derive(Clone)]
pub struct ConjugatePair<T> {
    pub w_zero: T,
    pub w: Func<T>,
    pub w_prime: Func<T>,
    pub w_star: Func<T>,
    pub w_star_prime: Func<T>,
}

impl<T: Real> ConjugatePair<T> {
    /// The pair of a family; a drift-negative family is represented by its
    /// tilted pair `(e^{-βx}W, W*_β)`.
    pub fn of(f: &ScaleFamily<T>) -> Result<Self> {
        let g = match f {
            ScaleFamily::DriftNegative(dn) => dn.base().tilt(dn.beta())?,
            _ => f.clone(),
        };
        let (a, b, c, d) = (g.clone(), g.clone(), g.clone(), g.clone());
        Ok(Self {
            w_zero: g.w(T::zero())?,
            w: Arc::new(move |x| a.w(x)),
            w_prime: Arc::new(move |x| b.w_prime(x)),
            w_star: Arc::new(move |x| c.w_star(x)),
            w_star_prime: Arc::new(move |x| d.w_star_prime(x)),
        })
    }
}

/// `|W(0)W*(x) + ∫_0^x W*(x-y) W′(y) dy - x|`, split at `h = x/2`.
///
/// `W′` may have a non-integrable-looking spike at the origin (such as
/// `1/(y ln²y)`), so the first half is integrated by parts into
/// `W*(x-h)(W(h)-W(0)) + ∫_0^h W*′(x-y)(W(y)-W(0)) dy`, whose integrand is
/// bounded there.
pub fn convolution_residual<T: Real>(pair: &ConjugatePair<T>, x: T, q: &QuadratureConfig<T>) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("convolution needs x >= 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let h = x * T::half();
    let w0 = pair.w_zero;
    let (w, wp, ws, wsp) = (&pair.w, &pair.w_prime, &pair.w_star, &pair.w_star_prime);
    let near_w = integrate_from_zero(|y: T| Ok(wsp(x - y)? * (w(y)? - w0)), h, q)?;
    let near_ws = integrate_from_zero(
        |s: T| if s == T::zero() { Ok(T::zero()) } else { Ok(ws(s)? * wp(x - s)?) },
        h,
        q,
    )?;
    let boundary = ws(x - h)? * (w(h)? - w0);
    let total = w0 * ws(x)? + boundary + near_w.value + near_ws.value;
    Ok((total - x).abs())
}

/// Everything [`verify_probe`] needs, as closures so that deliberately
/// altered scale functions can be checked against the true exponent.
#[derive(Clone)]
pub struct FamilyProbe {
    pub description: String,
    pub phi_zero: f64,
    pub w: Func<f64>,
    pub w_prime: Func<f64>,
    pub phi: Func<f64>,
    /// Gaver–Stehfest inversion of `1/ψ`.
    pub inverse: Option<Func<f64>>,
    pub pair: Option<ConjugatePair<f64>>,
    /// Whether `W` should be non-decreasing and concave.
    pub shape: bool,
}

impl FamilyProbe {
    pub fn from_family(f: &ScaleFamily<f64>) -> Result<Self> {
        let (a, b, c, d) = (f.clone(), f.clone(), f.clone(), f.clone());
        let pair = match ConjugatePair::of(f) {
            Ok(p) => Some(p),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            description: f.describe(),
            phi_zero: f.phi_zero(),
            w: Arc::new(move |x| a.w(x)),
            w_prime: Arc::new(move |x| b.w_prime(x)),
            phi: Arc::new(move |t| c.phi_ladder(t)),
            inverse: Some(Arc::new(move |x| invert_scale(&d, x, WIDE_TERMS))),
            pair,
            shape: !f.is_drift_negative(),
        })
    }

    /// Multiplies `W` (and hence `W′`, `W(0)`) by `factor`, leaving `φ`
    /// and the inversion untouched.
    pub fn with_w_scaled(mut self, factor: f64) -> Self {
        let (w, wp) = (self.w.clone(), self.w_prime.clone());
        self.w = Arc::new(move |x| Ok(factor * w(x)?));
        self.w_prime = Arc::new(move |x| Ok(factor * wp(x)?));
        if let Some(p) = self.pair.as_mut() {
            let (w, wp) = (p.w.clone(), p.w_prime.clone());
            p.w_zero *= factor;
            p.w = Arc::new(move |x| Ok(factor * w(x)?));
            p.w_prime = Arc::new(move |x| Ok(factor * wp(x)?));
        }
        self.description = format!("{} scaled by {factor}", self.description);
        self
    }
}

/// Acceptance tolerances for each kind of check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub laplace: f64,
    pub inversion: f64,
    pub convolution: f64,
    pub shape: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { laplace: 1e-5, inversion: 1e-6, convolution: 1e-4, shape: 1e-9 }
    }
}

/// One check at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub point: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: &str, point: f64, residual: f64, tolerance: f64) -> Self {
        Self { check: check.to_string(), point, residual, tolerance, pass: residual.abs() <= tolerance }
    }
}

/// Where an improper integral was cut and the bound on what was dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationRecord {
    pub check: String,
    pub point: f64,
    pub truncation_point: f64,
    pub tail_bound: f64,
}

/// Outcome of [`verify_family`]. Serialises without the wall time so that
/// identical inputs give identical JSON.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub all_passed: bool,
    pub records: Vec<CheckRecord>,
    pub truncation_bounds: Vec<TruncationRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

enum Job {
    Laplace(f64),
    Inversion(f64),
    Convolution(f64),
    Shape,
}

type JobOut = (Vec<CheckRecord>, Option<TruncationRecord>);

fn run_job(p: &FamilyProbe, job: &Job, x_grid: &[f64], tol: &Tolerances, q: &QuadratureConfig<f64>) -> Result<JobOut> {
    match *job {
        Job::Laplace(theta) => {
            let (res, est) = probe_laplace(p, theta, q)?;
            let trunc = TruncationRecord {
                check: "laplace_pair".into(),
                point: theta,
                truncation_point: est.truncation_point,
                tail_bound: est.tail_bound,
            };
            Ok((vec![CheckRecord::new("laplace_pair", theta, res, tol.laplace)], Some(trunc)))
        }
        Job::Inversion(x) => {
            let inv = p.inverse.as_ref().expect("inversion job needs an inverse");
            let (got, want) = (inv(x)?, (p.w)(x)?);
            let rel = ((got - want) / want).abs();
            Ok((vec![CheckRecord::new("inversion", x, rel, tol.inversion)], None))
        }
        Job::Convolution(x) => {
            let pair = p.pair.as_ref().expect("convolution job needs a pair");
            let r = convolution_residual(pair, x, q)?;
            Ok((vec![CheckRecord::new("convolution", x, r, tol.convolution)], None))
        }
        Job::Shape => {
            let top = x_grid.iter().cloned().fold(0.0, f64::max);
            let n = 64;
            let xs: Vec<f64> = (0..=n).map(|i| top * i as f64 / n as f64).collect();
            let ws: Vec<f64> = xs.iter().map(|&x| (p.w)(x)).collect::<Result<_>>()?;
            let scale = ws.iter().cloned().fold(1.0, f64::max);
            let drop = ws.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max) / scale;
            // second differences of a concave function are non-positive;
            // the first triple is skipped because W(0) may be an atom
            let bend = ws.windows(3).skip(1).map(|w| (w[0] - 2.0 * w[1] + w[2]).max(0.0)).fold(0.0, f64::max) / scale;
            Ok((
                vec![
                    CheckRecord::new("concave", top, bend, tol.shape),
                    CheckRecord::new("monotone", top, drop, tol.shape),
                ],
                None,
            ))
        }
    }
}

/// Runs every applicable check over the grids. Check failures are recorded;
/// evaluation failures are returned as errors.
pub fn verify_probe(
    p: &FamilyProbe,
    x_grid: &[f64],
    theta_grid: &[f64],
    tol: &Tolerances,
    q: &QuadratureConfig<f64>,
) -> Result<VerificationReport> {
    if x_grid.is_empty() || theta_grid.is_empty() {
        return Err(Error::Domain("verification grids must be non-empty".into()));
    }
    if x_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain("x grid must be positive and finite".into()));
    }
    let start = Instant::now();
    let mut jobs: Vec<Job> = theta_grid.iter().filter(|&&t| t > p.phi_zero).map(|&t| Job::Laplace(t)).collect();
    if p.inverse.is_some() {
        jobs.extend(
            x_grid.iter().filter(|&&x| std::f64::consts::LN_2 / x > p.phi_zero).map(|&x| Job::Inversion(x)),
        );
    }
    if p.pair.is_some() {
        jobs.extend(x_grid.iter().map(|&x| Job::Convolution(x)));
    }
    if p.shape {
        jobs.push(Job::Shape);
    }
    let outs: Vec<JobOut> = jobs.par_iter().map(|j| run_job(p, j, x_grid, tol, q)).collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut truncation_bounds = Vec::new();
    for (r, t) in outs {
        records.extend(r);
        truncation_bounds.extend(t);
    }
    let key = |c: &str, x: f64| (c.to_string(), x.to_bits());
    records.sort_by(|a, b| a.check.cmp(&b.check).then(a.point.total_cmp(&b.point)));
    truncation_bounds.sort_by_key(|t| key(&t.check, t.point));
    let all_passed = records.iter().all(|r| r.pass);
    Ok(VerificationReport {
        family: p.description.clone(),
        all_passed,
        records,
        truncation_bounds,
        wall_time: start.elapsed(),
    })
}

/// [`verify_probe`] for a catalog family.
pub fn verify_family(
    f: &ScaleFamily<f64>,
    x_grid: &[f64],
    theta_grid: &[f64],
    tol: &Tolerances,
) -> Result<VerificationReport> {
    verify_probe(&FamilyProbe::from_family(f)?, x_grid, theta_grid, tol, &QuadratureConfig::default())
}

/// Grids used when none are given.
pub const DEFAULT_X_GRID: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_THETA_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
