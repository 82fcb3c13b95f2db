//! Incomplete gamma functions and the exponential integral.

use super::gamma::{gamma, ln_gamma};
use crate::real::Real;

const MAX_ITER: usize = 2000;

fn tiny<T: Real>() -> T {
    T::lit(1e-300)
}

fn eps<T: Real>() -> T {
    T::lit(1e-17)
}

/// Series part of the regularized lower function, `x < a + 1`.
fn p_series<T: Real>(a: T, x: T) -> T {
    let mut ap = a;
    let mut del = a.recip();
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += T::one();
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * eps::<T>() {
            break;
        }
    }
    sum * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Lentz continued fraction giving `Γ(a, x) e^x x^-a`; valid for any real
/// `a` once `x` is moderately large.
fn upper_cf<T: Real>(a: T, x: T) -> T {
    let mut b = x + T::one() - a;
    let mut c = tiny::<T>().recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::of(i);
        let an = -fi * (fi - a);
        b += T::two();
        d = an * d + b;
        if d.abs() < tiny() {
            d = tiny();
        }
        c = b + an / c;
        if c.abs() < tiny() {
            c = tiny();
        }
        d = d.recip();
        let del = d * c;
        h *= del;
        if (del - T::one()).abs() < eps() {
            break;
        }
    }
    h
}

/// Regularized lower incomplete gamma `P(a, x)` for `a > 0`, `x >= 0`.
pub fn gamma_p<T: Real>(a: T, x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x < a + T::one() {
        p_series(a, x)
    } else {
        T::one() - gamma_q(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q<T: Real>(a: T, x: T) -> T {
    if x <= T::zero() {
        return T::one();
    }
    if x < a + T::one() {
        T::one() - p_series(a, x)
    } else {
        upper_cf(a, x) * (a * x.ln() - x - ln_gamma(a)).exp()
    }
}

/// Unregularized upper incomplete gamma `Γ(a, x)` for `a > -1`, `x > 0`.
pub fn upper_gamma<T: Real>(a: T, x: T) -> T {
    if a == T::zero() {
        return exp_int_e1(x);
    }
    if x >= T::one() {
        return upper_cf(a, x) * (a * x.ln() - x).exp();
    }
    if a > T::zero() {
        return gamma(a) * gamma_q(a, x);
    }
    // Γ(a, x) = (Γ(a+1, x) - x^a e^-x) / a, no cancellation for small x
    (upper_gamma(a + T::one(), x) - (a * x.ln() - x).exp()) / a
}

/// Exponential integral `E1(x) = Γ(0, x)` for `x > 0`.
pub fn exp_int_e1<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::infinity();
    }
    if x >= T::one() {
        return upper_cf(T::zero(), x) * (-x).exp();
    }
    let euler = T::lit(0.577_215_664_901_532_9);
    let mut term = T::one();
    let mut sum = T::zero();
    for k in 1..MAX_ITER {
        let fk = T::of(k);
        term *= -x / fk;
        let add = term / fk;
        sum += add;
        if add.abs() < eps::<T>() * sum.abs() {
            break;
        }
    }
    -euler - x.ln() - sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_power, integrate_to_infinity, QuadratureConfig};
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::fine()
    }

    #[test]
    fn exponential_case_is_closed_form() {
        for &x in &[0.1f64, 1.0, 3.0, 20.0] {
            assert!((gamma_p(1.0, x) - (1.0 - (-x).exp())).abs() < 1e-15);
            assert!(((gamma_q(1.0, x) - (-x).exp()) / (-x).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn lower_function_against_quadrature() {
        for &(a, x) in &[(0.5f64, 0.3f64), (0.5, 4.0), (2.5, 1.0), (2.5, 9.0), (7.0, 3.0)] {
            let oracle = integrate_power(|t: f64| Ok((-t).exp()), a, x, &cfg()).unwrap().value;
            let got = gamma_p(a, x) * gamma(a);
            assert!(((got - oracle) / oracle).abs() < 1e-11, "a={a} x={x}");
        }
    }

    #[test]
    fn negative_order_upper_function() {
        for &(a, x) in &[(-0.3f64, 0.2f64), (-0.5, 1.5), (-0.7, 12.0), (-0.5, 0.01)] {
            let oracle = integrate_to_infinity(|t: f64| Ok(t.powf(a - 1.0) * (-t).exp()), x, 1.0, &cfg())
                .unwrap()
                .value;
            let got = upper_gamma(a, x);
            assert!(((got - oracle) / oracle).abs() < 1e-11, "a={a} x={x} {got} {oracle}");
        }
    }

    #[test]
    fn exponential_integral() {
        for &x in &[0.01f64, 0.5, 1.0, 4.0, 30.0] {
            let oracle = integrate_to_infinity(|t: f64| Ok((-t).exp() / t), x, 1.0, &cfg()).unwrap().value;
            assert!(((exp_int_e1(x) - oracle) / oracle).abs() < 1e-11, "x={x}");
        }
    }

    proptest! {
        #[test]
        fn p_and_q_complement(a in 0.05f64..20.0, x in 0.0f64..40.0) {
            let s = gamma_p(a, x) + gamma_q(a, x);
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!(gamma_p(a, x) >= -1e-15 && gamma_p(a, x) <= 1.0 + 1e-15);
        }
    }
}
