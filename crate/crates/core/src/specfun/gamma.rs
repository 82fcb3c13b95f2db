//! Gamma function family.

use crate::real::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(x: T) -> T {
    // x is the shifted argument z - 1
    let mut a = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += T::lit(c) / (x + T::of(i));
    }
    a
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.floor()
}

/// Γ(x); infinite at the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::infinity();
    }
    if x < T::half() {
        // reflection
        let s = (T::PI() * x).sin();
        return T::PI() / (s * gamma(T::one() - x));
    }
    if x > T::lit(171.7) {
        return T::infinity();
    }
    if x == x.floor() && x <= T::lit(30.0) {
        // exact factorial for small integers
        let n = x.to_usize().unwrap_or(1);
        return (1..n).fold(T::one(), |acc, k| acc * T::of(k));
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + T::half();
    let lead = (T::two() * T::PI()).sqrt();
    if x > T::lit(140.0) {
        let p = t.powf((z + T::half()) * T::half());
        return lead * p * ((-t).exp() * p) * lanczos_sum(z);
    }
    lead * t.powf(z + T::half()) * (-t).exp() * lanczos_sum(z)
}

/// ln|Γ(x)|.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::infinity();
    }
    if x < T::half() {
        let s = (T::PI() * x).sin().abs();
        return T::PI().ln() - s.ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + T::half();
    T::half() * (T::two() * T::PI()).ln() + (z + T::half()) * t.ln() - t + lanczos_sum(z).ln()
}

/// 1/Γ(x), which is entire: zero at the poles of Γ.
pub fn rgamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x > T::lit(171.0) {
        return (-ln_gamma(x)).exp();
    }
    gamma(x).recip()
}

/// Logarithmic derivative of Γ.
pub fn digamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::nan();
    }
    if x < T::zero() {
        return digamma(T::one() - x) - T::PI() / (T::PI() * x).tan();
    }
    let mut acc = T::zero();
    let mut x = x;
    while x < T::lit(10.0) {
        acc -= x.recip();
        x += T::one();
    }
    let inv2 = (x * x).recip();
    // asymptotic series with Bernoulli coefficients
    let series = inv2
        * (T::lit(1.0 / 12.0)
            - inv2 * (T::lit(1.0 / 120.0) - inv2 * (T::lit(1.0 / 252.0) - inv2 * (T::lit(1.0 / 240.0) - inv2 * T::lit(1.0 / 132.0)))));
    acc + x.ln() - T::half() / x - series
}
