//! Modified Bessel function of the first kind for real order `ν >= 0`.

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::real::Real;

/// `ln(e^{-x} I_ν(x))` by the ascending series, rescaling the partial sum so
/// that large arguments do not overflow.
fn ln_scaled_series<T: Real>(nu: T, x: T) -> T {
    let q = x * x * T::lit(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    let mut log_shift = T::zero();
    let big = T::lit(1e200);
    let mut k = 1usize;
    loop {
        let fk = T::of(k);
        term *= q / (fk * (nu + fk));
        sum += term;
        if sum > big {
            sum /= big;
            term /= big;
            log_shift += big.ln();
        }
        // terms decrease once k exceeds roughly x/2
        if fk > x && term <= sum * T::lit(1e-18) {
            break;
        }
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    nu * (x * T::half()).ln() - ln_gamma(nu + T::one()) - x + sum.ln() + log_shift
}

/// Hankel asymptotic expansion of `e^{-x} I_ν(x)`, valid for `x >> ν²`.
fn scaled_asymptotic<T: Real>(nu: T, x: T) -> T {
    let mu = T::lit(4.0) * nu * nu;
    let mut term = T::one();
    let mut sum = T::one();
    let mut prev = T::infinity();
    for k in 1..60 {
        let odd = T::of(2 * k - 1);
        term *= -(mu - odd * odd) / (T::of(k) * T::lit(8.0) * x);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < T::lit(1e-17) * sum.abs() {
            break;
        }
    }
    sum / (T::two() * T::PI() * x).sqrt()
}

fn check<T: Real>(nu: T, x: T) -> Result<()> {
    if !(nu >= T::zero() && x >= T::zero()) {
        return Err(Error::Domain(format!("I_ν(x) needs ν >= 0 and x >= 0, got ν={nu}, x={x}")));
    }
    Ok(())
}

/// `e^{-x} I_ν(x)` for `ν >= 0`, `x >= 0`.
pub fn bessel_i_scaled<T: Real>(nu: T, x: T) -> Result<T> {
    check(nu, x)?;
    Ok(bessel_i_scaled_unchecked(nu, x))
}

/// `I_ν(x)` for `ν >= 0`, `x >= 0`.
pub fn bessel_i<T: Real>(nu: T, x: T) -> Result<T> {
    check(nu, x)?;
    Ok(bessel_i_unchecked(nu, x))
}

pub(crate) fn bessel_i_scaled_unchecked<T: Real>(nu: T, x: T) -> T {
    if x == T::zero() {
        return if nu == T::zero() { T::one() } else { T::zero() };
    }
    let threshold = (nu * nu * T::half()).max(T::lit(30.0));
    if x > threshold && x > T::lit(8.0) * nu {
        scaled_asymptotic(nu, x)
    } else {
        ln_scaled_series(nu, x).exp()
    }
}

pub(crate) fn bessel_i_unchecked<T: Real>(nu: T, x: T) -> T {
    if x == T::zero() {
        return bessel_i_scaled_unchecked(nu, x);
    }
    let threshold = (nu * nu * T::half()).max(T::lit(30.0));
    if x > threshold && x > T::lit(8.0) * nu {
        scaled_asymptotic(nu, x) * x.exp()
    } else {
        (ln_scaled_series(nu, x) + x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_to_infinity, QuadratureConfig};
    use proptest::prelude::*;

    /// Integral representation valid for real order.
    fn oracle(nu: f64, x: f64) -> f64 {
        let cfg = QuadratureConfig::fine();
        let pi = std::f64::consts::PI;
        let a = integrate(|t: f64| Ok((x * (t.cos() - 1.0)).exp() * (nu * t).cos()), 0.0, pi, &cfg)
            .unwrap()
            .value
            / pi;
        let b = if (nu * pi).sin().abs() < 1e-15 {
            0.0
        } else {
            (nu * pi).sin() / pi
                * integrate_to_infinity(|t: f64| Ok((-x * t.cosh() - nu * t - x).exp()), 0.0, 1.0, &cfg)
                    .unwrap()
                    .value
        };
        a - b
    }

    #[test]
    fn integer_and_fractional_orders() {
        for &(nu, x) in &[(0.0, 0.5), (0.0, 5.0), (1.0, 2.0), (2.5, 3.0), (0.3, 12.0), (4.0, 40.0), (0.0, 45.0), (7.5, 60.0)] {
            let want = oracle(nu, x);
            let got = bessel_i_scaled_unchecked(nu, x);
            assert!(((got - want) / want).abs() < 1e-10, "nu={nu} x={x} {got} {want}");
        }
    }

    #[test]
    fn half_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(pi x)) sinh x
        for &x in &[0.1f64, 1.0, 10.0, 50.0] {
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
            assert!(((bessel_i_unchecked(0.5, x) - want) / want).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn small_cases_and_domain() {
        assert_eq!(bessel_i(0.0f64, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.5f64, 0.0).unwrap(), 0.0);
        // I_0(1) = (1/π) ∫_0^π e^{cos t} dt
        let cfg = QuadratureConfig::fine();
        let want = integrate(|t: f64| Ok(t.cos().exp()), 0.0, std::f64::consts::PI, &cfg).unwrap().value
            / std::f64::consts::PI;
        assert!(((bessel_i(0.0, 1.0).unwrap() - want) / want).abs() < 1e-13);
        assert!(matches!(bessel_i(-0.5f64, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(0.5f64, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn large_argument_does_not_overflow() {
        let v = bessel_i_scaled_unchecked(3.0f64, 800.0);
        assert!(v.is_finite() && v > 0.0);
        let s = ln_scaled_series(3.0f64, 800.0).exp();
        assert!(((v - s) / s).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn three_term_recurrence(nu in 1.0f64..6.0, x in 0.2f64..40.0) {
            // I_{ν-1} - I_{ν+1} = (2ν/x) I_ν
            let lhs = bessel_i_scaled_unchecked(nu - 1.0, x) - bessel_i_scaled_unchecked(nu + 1.0, x);
            let rhs = 2.0 * nu / x * bessel_i_scaled_unchecked(nu, x);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
        }
    }
}
