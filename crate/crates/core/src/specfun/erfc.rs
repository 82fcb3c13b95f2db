//! Scaled complementary error function.

use crate::error::{Error, Result};
use crate::real::Real;

/// `e^{t^2} erfc(t)` for `t >= 0`.
pub fn erfcx<T: Real>(t: T) -> T {
    if t < T::lit(1.5) {
        // erf(t) = 2/sqrt(pi) e^{-t^2} sum 2^n t^{2n+1} / (2n+1)!!, positive terms
        let t2 = t * t;
        let mut term = t;
        let mut sum = t;
        for n in 1..200 {
            term *= T::two() * t2 / T::of(2 * n + 1);
            sum += term;
            if term <= sum * T::lit(1e-18) {
                break;
            }
        }
        return t2.exp() - T::FRAC_2_SQRT_PI() * sum;
    }
    // Lentz evaluation of 1/(t + (1/2)/(t + 1/(t + (3/2)/(t + ...))))
    let tiny = T::lit(1e-300);
    let mut f = t;
    let mut c = t;
    let mut d = T::zero();
    for n in 1..5000 {
        let a = T::of(n) * T::half();
        d = t + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = t + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() < T::lit(1e-17) {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * T::half() / f
}

/// `η(x) = e^x erfc(√x)`, `x >= 0`.
pub fn eta<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("η needs x >= 0, got {x}")));
    }
    Ok(eta_unchecked(x))
}

pub(crate) fn eta_unchecked<T: Real>(x: T) -> T {
    erfcx(x.max(T::zero()).sqrt())
}
