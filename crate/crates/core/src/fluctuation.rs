//! Fluctuation identities: the right inverse `Φ` of `ψ`, two-sided exit
//! and ruin probabilities.

use serde::Serialize;

use crate::catalog::ScaleFamily;
use crate::error::{Error, Result};
use crate::real::Real;

/// Controls for [`phi_of_q`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootConfig<T> {
    /// Target for `|ψ(Φ(q)) - q|`.
    pub abs_tol: T,
    pub max_iterations: usize,
    /// Factor by which the upper bracket grows while `ψ` is still below `q`.
    pub initial_bracket_growth: T,
}

impl<T: Real> Default for RootConfig<T> {
    fn default() -> Self {
        Self { abs_tol: T::lit(1e-12), max_iterations: 400, initial_bracket_growth: T::two() }
    }
}

impl<T: Real> RootConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || self.max_iterations == 0 || !(self.initial_bracket_growth > T::one()) {
            return Err(Error::Parameter(format!(
                "root config needs abs_tol > 0, max_iterations > 0 and growth > 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

// Values within this band outside [0,1] are rounding and get clamped.
const CLAMP_BAND: f64 = 1e-9;

fn clamp_probability<T: Real>(p: T, what: &str) -> Result<T> {
    let band = T::lit(CLAMP_BAND);
    if !p.is_finite() || p < -band || p > T::one() + band {
        return Err(Error::Inconsistency(format!("{what} = {p} lies outside [0,1]")));
    }
    Ok(p.max(T::zero()).min(T::one()))
}

/// `Φ(q) = sup{θ ≥ 0 : ψ(θ) = q}`.
///
/// `ψ` is convex, increasing beyond `Φ(0)` and unbounded, so the root is
/// bracketed between `Φ(0)` and a geometrically grown upper point and then
/// bisected.
pub fn phi_of_q<T: Real>(f: &ScaleFamily<T>, q: T, cfg: &RootConfig<T>) -> Result<T> {
    cfg.validate()?;
    if !(q >= T::zero()) {
        return Err(Error::Domain(format!("Φ needs q >= 0, got {q}")));
    }
    let mut lo = f.phi_zero();
    if q == T::zero() {
        return Ok(lo);
    }
    let mut step = T::one().max(lo);
    let mut hi = lo + step;
    let mut iterations = 0;
    while f.psi(hi)? < q {
        lo = hi;
        step *= cfg.initial_bracket_growth;
        hi = lo + step;
        iterations += 1;
        if iterations >= cfg.max_iterations || !hi.is_finite() {
            return Err(Error::Numerical { what: format!("no bracket for Φ({q})"), partial: hi.f64() });
        }
    }
    while iterations < cfg.max_iterations {
        let mid = (lo + hi) * T::half();
        let r = f.psi(mid)? - q;
        if r.abs() <= cfg.abs_tol {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if r < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Err(Error::Numerical { what: format!("bisection for Φ({q}) stalled"), partial: ((lo + hi) * T::half()).f64() })
}

/// `P_x(τ_a⁺ < τ_0⁻) = W(x)/W(a)`.
pub fn exit_up_probability<T: Real>(f: &ScaleFamily<T>, x: T, a: T) -> Result<T> {
    if !(a > T::zero()) {
        return Err(Error::Domain(format!("exit level a must be positive, got {a}")));
    }
    if x > a {
        return Err(Error::Domain(format!("start x = {x} lies above the exit level a = {a}")));
    }
    if x < T::zero() {
        return Ok(T::zero());
    }
    if x == a {
        return Ok(T::one());
    }
    let wa = f.w(a)?;
    if !(wa > T::zero()) {
        return Err(Error::Inconsistency(format!("W(a) = {wa} is not positive")));
    }
    clamp_probability(f.w(x)? / wa, "exit probability")
}

/// `P_x(τ_0⁻ < ∞) = 1 - ψ′(0+)W(x)` with `ψ′(0+) = φ(0) = κ`.
///
/// A drift-negative parent drifts to `-∞`, so ruin is certain.
pub fn ruin_probability<T: Real>(f: &ScaleFamily<T>, x: T) -> Result<T> {
    if x.is_nan() {
        return Err(Error::Domain("ruin probability at NaN".into()));
    }
    if f.is_drift_negative() || x < T::zero() {
        return Ok(T::one());
    }
    let kappa = f.kappa();
    if kappa == T::zero() {
        return Ok(T::one());
    }
    clamp_probability(T::one() - kappa * f.w(x)?, "ruin probability")
}
