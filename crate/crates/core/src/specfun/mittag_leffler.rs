//! Two-parameter Mittag-Leffler function `E_{α,β}(z)` for real `z`.
//!
//! Small arguments use the power series. Large negative arguments use the
//! Hankel-contour integral folded onto the negative real axis (plus the
//! residues of the poles that lie inside the contour when `α > 1`); large
//! positive arguments add the dominant residue to the same integral.

use super::gamma::{ln_gamma, rgamma};
use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, integrate_power, integrate_to_infinity, QuadratureConfig};
use crate::real::Real;

/// Parameters `(α, β)` of the Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> MlParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::two()) {
            return Err(Error::Parameter(format!("Mittag-Leffler α must lie in (0, 2], got {alpha}")));
        }
        if !(beta > T::zero() && beta.is_finite()) {
            return Err(Error::Parameter(format!("Mittag-Leffler β must be positive and finite, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

/// Above this value of `|z|^{1/α}` the positive-argument series is replaced
/// by the residue form.
const SERIES_EXP_LIMIT: f64 = 30.0;
/// Largest `z^{1/α}` for which `E(z)` itself is representable.
const OVERFLOW_EXP: f64 = 700.0;

fn inner_cfg<T: Real>() -> QuadratureConfig<T> {
    QuadratureConfig {
        abs_tol: T::lit(1e-17),
        rel_tol: T::lit(1e-13),
        max_subdivisions: 4000,
        truncation_point: T::lit(60.0),
    }
}

/// `E_{α,β}(z)`.
pub fn mittag_leffler<T: Real>(p: MlParams<T>, z: T) -> Result<T> {
    mittag_leffler_scaled(p, z, T::zero())
}

/// `e^{-shift} E_{α,β}(z)`, evaluated without forming `E` when it would
/// overflow. Useful for products such as `e^{-γy} E_{ν,ν}(c y^ν)`.
pub fn mittag_leffler_scaled<T: Real>(p: MlParams<T>, z: T, shift: T) -> Result<T> {
    if !z.is_finite() {
        return Err(Error::Domain("Mittag-Leffler argument must be finite".into()));
    }
    let (alpha, beta) = (p.alpha, p.beta);
    let scale = (-shift).exp();
    if z == T::zero() {
        return Ok(rgamma(beta) * scale);
    }
    if z > T::zero() {
        if alpha > T::one() {
            // E_{α,β}(z) = (E_{α/2,β}(√z) + E_{α/2,β}(-√z)) / 2
            let half = MlParams { alpha: alpha * T::half(), beta };
            let r = z.sqrt();
            let a = mittag_leffler_scaled(half, r, shift)?;
            let b = mittag_leffler_scaled(half, -r, shift)?;
            return Ok((a + b) * T::half());
        }
        let rho = z.powf(alpha.recip());
        if rho <= T::lit(SERIES_EXP_LIMIT) {
            return Ok(series(alpha, beta, z)? * scale);
        }
        if rho - shift > T::lit(OVERFLOW_EXP) {
            return Err(Error::Numerical {
                what: format!("E_{{{alpha},{beta}}}({z}) overflows"),
                partial: f64::INFINITY,
            });
        }
        if beta >= T::one() + alpha {
            let lower = mittag_leffler_scaled(MlParams { alpha, beta: beta - alpha }, z, shift)?;
            return Ok((lower - rgamma(beta - alpha) * scale) / z);
        }
        let residue = z.powf((T::one() - beta) / alpha) / alpha * (rho - shift).exp();
        return Ok(residue + hankel(alpha, beta, z)? * scale);
    }
    if -z <= T::one() {
        return Ok(series(alpha, beta, z)? * scale);
    }
    if alpha == T::one() {
        return Ok(ml_one_negative(beta, -z)? * scale);
    }
    Ok(negative_large(alpha, beta, -z)? * scale)
}

/// Power series; used for `|z| <= 1` and moderate positive `z`.
fn series<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    let mut sum = T::zero();
    let lnz = z.abs().ln();
    let negative = z < T::zero();
    let mut small_run = 0;
    for k in 0..20_000usize {
        let arg = alpha * T::of(k) + beta;
        let term = if arg > T::lit(2.0) {
            let mag = (T::of(k) * lnz - ln_gamma(arg)).exp();
            if negative && k % 2 == 1 {
                -mag
            } else {
                mag
            }
        } else {
            z.powi(k as i32) * rgamma(arg)
        };
        sum += term;
        // stop only after the terms are decreasing and negligible
        if arg > T::lit(2.0) && T::of(k) * alpha > z.abs().powf(alpha.recip()) {
            if term.abs() <= T::lit(1e-17) * sum.abs() || term.abs() < T::lit(1e-300) {
                small_run += 1;
                if small_run >= 2 {
                    return Ok(sum);
                }
            } else {
                small_run = 0;
            }
        }
    }
    Err(Error::Numerical { what: "Mittag-Leffler series did not converge".into(), partial: sum.f64() })
}

/// `sin(πx)` with exact reduction, so integer `x` gives exactly zero.
fn sin_pi<T: Real>(x: T) -> T {
    let n = (x * T::two()).round();
    let r = x - n * T::half();
    let s = (T::PI() * r).sin();
    let c = (T::PI() * r).cos();
    match (n.to_i64().unwrap_or(0)).rem_euclid(4) {
        0 => s,
        1 => c,
        2 => -s,
        _ => -c,
    }
}

/// Contour integral part, valid for real `z` and `β < 1 + α`:
/// `(1/π) ∫_0^∞ e^{-r} r^{α-β} [r^α sin πβ + z sin π(α-β)] / D(r) dr`
/// with `D = r^{2α} - 2 z r^α cos πα + z²`.
fn hankel<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    let pi = T::PI();
    let (sb, sab) = (sin_pi(beta), sin_pi(alpha - beta));
    let (sa, ca) = (sin_pi(alpha), sin_pi(alpha + T::half()));
    let g = move |r: T| {
        let ra = r.powf(alpha);
        // D written as a sum of squares keeps its relative accuracy near α = 1
        let d = (ra - z * ca).powi(2) + (z * sa).powi(2);
        (-r).exp() * (ra * sb + z * sab) / d
    };
    let cfg = inner_cfg::<T>();
    let split = z.abs().powf(alpha.recip());
    // e^{-r} leaves nothing beyond r = 64 at double precision
    let far = T::lit(64.0);
    let head_end = (split * T::half()).min(T::half());
    let power = alpha - beta + T::one();
    let mut total = integrate_power(|u: T| Ok(g(u)), power, head_end, &cfg)?.value;
    let mut pts = vec![head_end];
    let mut p = T::one();
    while p < far {
        if p > head_end {
            pts.push(p);
        }
        p *= T::two();
    }
    if split > head_end && split < far {
        pts.push(split);
    }
    // near α = 1 with z < 0 the denominator has a sharp minimum at
    // r^α = z cos πα, of relative width about |sin πα|
    if z < T::zero() && ca < T::zero() {
        let peak = (z * ca).powf(alpha.recip());
        let mut w = peak * sa.abs() / alpha;
        while w < peak * T::lit(0.25) {
            for q in [peak - w, peak + w] {
                if q > head_end && q < far {
                    pts.push(q);
                }
            }
            w *= T::two();
        }
        if peak > head_end && peak < far {
            pts.push(peak);
        }
    }
    pts.push(far);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    // a Lorentzian spike of width |sin πα| saturates the error estimate long
    // before the value itself stops improving
    let peak_cfg = if sa.abs() < T::lit(0.01) && z < T::zero() {
        QuadratureConfig { rel_tol: T::lit(1e-11), ..cfg }
    } else {
        cfg
    };
    total += integrate_breaks(|r: T| Ok(r.powf(alpha - beta) * g(r)), &pts, &peak_cfg)?.value;
    total += integrate_to_infinity(|r: T| Ok(r.powf(alpha - beta) * g(r)), far, T::one(), &cfg)?.value;
    Ok(total / pi)
}

/// `E_{α,β}(-x)` for `x > 1`, `α ≠ 1`.
fn negative_large<T: Real>(alpha: T, beta: T, x: T) -> Result<T> {
    if beta >= T::one() + alpha {
        // E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z
        let lower = negative_large(alpha, beta - alpha, x)?;
        return Ok((lower - rgamma(beta - alpha)) / (-x));
    }
    let mut value = hankel(alpha, beta, -x)?;
    if alpha > T::one() {
        // poles at s = x^{1/α} e^{±iπ/α}
        let rho = x.powf(alpha.recip());
        let ang = T::PI() / alpha;
        let modulus = x.powf((T::one() - beta) / alpha) * (rho * ang.cos()).exp();
        let phase = ang * (T::one() - beta) + rho * ang.sin();
        value += T::two() / alpha * modulus * phase.cos();
    }
    Ok(value)
}

/// `E_{1,β}(-x)` for `x > 1`.
fn ml_one_negative<T: Real>(beta: T, x: T) -> Result<T> {
    if beta == T::one() {
        return Ok((-x).exp());
    }
    if beta > T::one() {
        // (1/Γ(β-1)) ∫_0^1 e^{-x(1-s)} s^{β-2} ds
        let cfg = inner_cfg::<T>();
        let v = integrate_power(|s: T| Ok((-x * (T::one() - s)).exp()), beta - T::one(), T::one(), &cfg)?.value;
        return Ok(v * rgamma(beta - T::one()));
    }
    // E_{1,β}(z) = 1/Γ(β) + z E_{1,β+1}(z)
    Ok(rgamma(beta) - x * ml_one_negative(beta + T::one(), x)?)
}
