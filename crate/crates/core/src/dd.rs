//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! giving roughly 106 bits of mantissa.
//!
//! Used where cancellation in alternating sums defeats plain `f64`, most
//! notably Gaver–Stehfest inversion.

use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

use crate::real::Real;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub const fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        if !hi.is_finite() {
            return Self { hi, lo: 0.0 };
        }
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self { hi: self.hi * s, lo: self.lo * s }
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn is_zero_val(self) -> bool {
        self.hi == 0.0
    }

    const LN2: Self = Self::new(0.6931471805599453, 2.3190468138462996e-17);
    const PI_DD: Self = Self::new(3.141592653589793, 1.2246467991473532e-16);

    /// Taylor series of `exp(r) - 1` for small `|r|`.
    fn expm1_small(r: Self) -> Self {
        let mut term = r;
        let mut sum = r;
        for k in 2..40 {
            term = term * r / Self::from_f64(k as f64);
            sum += term;
            if term.hi.abs() <= 1e-34 * sum.hi.abs() {
                break;
            }
        }
        sum
    }

    fn exp_impl(self) -> Self {
        if self.hi.is_nan() {
            return self;
        }
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::zero();
        }
        let k = (self.hi / Self::LN2.hi).round();
        let r = self - Self::LN2.mul_f64(k);
        // halve nine times, expand, then square back
        let r = r.ldexp(-9);
        let mut e = Self::expm1_small(r);
        for _ in 0..9 {
            // (1+e)^2 - 1 = e (2 + e)
            e = e * (e + Self::from_f64(2.0));
        }
        (e + Self::one()).ldexp(k as i32)
    }

    fn ln_impl(self) -> Self {
        if self.hi.is_nan() || self.hi < 0.0 {
            return Self::from_f64(f64::NAN);
        }
        if self.hi == 0.0 {
            return Self::from_f64(f64::NEG_INFINITY);
        }
        if self.hi.is_infinite() {
            return self;
        }
        let mut y = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp_impl() - Self::one();
        }
        y
    }

    /// sin and cos of a reduced argument `|r| <= pi/4`.
    fn sin_cos_small(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut term = r;
        let mut s = r;
        let mut k = 1.0;
        loop {
            term = -term * r2 / Self::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        let mut term = Self::one();
        let mut c = Self::one();
        let mut k = 0.0;
        loop {
            term = -term * r2 / Self::from_f64((k + 1.0) * (k + 2.0));
            c += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        (s, c)
    }

    fn sin_cos_impl(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            return (Self::from_f64(f64::NAN), Self::from_f64(f64::NAN));
        }
        let half_pi = Self::PI_DD.ldexp(-1);
        let q = (self.hi / half_pi.hi).round();
        let r = self - half_pi.mul_f64(q);
        let (s, c) = Self::sin_cos_small(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan_impl(self) -> Self {
        if self.hi.is_nan() {
            return self;
        }
        if self.hi.is_infinite() {
            return Self::PI_DD.ldexp(-1) * Self::from_f64(self.hi.signum());
        }
        let mut y = Self::from_f64(self.hi.atan());
        for _ in 0..2 {
            let (s, c) = y.sin_cos_impl();
            // Newton on tan(y) = x, written to avoid dividing by cos
            y += (self * c - s) * c;
        }
        y
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self::from_f64(v)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        if !s.is_finite() {
            return Self::from_f64(s);
        }
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        if !p.is_finite() {
            return Self::from_f64(p);
        }
        Self::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || b.hi.is_infinite() {
            return Self::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Self::new(h, l) + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {
        $(impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        })*
    };
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_val()
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from_f64)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.to_i128().and_then(|v| v.try_into().ok())
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i128().and_then(|v| v.try_into().ok())
    }
    fn to_i128(&self) -> Option<i128> {
        let t = self.trunc();
        if !t.hi.is_finite() || t.hi.abs() > 1.6e38 {
            return None;
        }
        Some(t.hi as i128 + t.lo as i128)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Self::renorm(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::renorm(hi, lo))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Self::from_f64(n))
    }
}

impl NumCast for DoubleDouble {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(<Self as From<f64>>::from)
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        Self::new(2.718281828459045, 1.4456468917292502e-16)
    }
    fn FRAC_1_PI() -> Self {
        Self::one() / Self::PI_DD
    }
    fn FRAC_1_SQRT_2() -> Self {
        Self::SQRT_2().ldexp(-1)
    }
    fn FRAC_2_PI() -> Self {
        Self::from_f64(2.0) / Self::PI_DD
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Self::from_f64(2.0) / Self::PI_DD.sqrt()
    }
    fn FRAC_PI_2() -> Self {
        Self::PI_DD.ldexp(-1)
    }
    fn FRAC_PI_3() -> Self {
        Self::PI_DD / Self::from_f64(3.0)
    }
    fn FRAC_PI_4() -> Self {
        Self::PI_DD.ldexp(-2)
    }
    fn FRAC_PI_6() -> Self {
        Self::PI_DD / Self::from_f64(6.0)
    }
    fn FRAC_PI_8() -> Self {
        Self::PI_DD.ldexp(-3)
    }
    fn LN_10() -> Self {
        Self::new(2.302585092994046, -2.1707562233822494e-16)
    }
    fn LN_2() -> Self {
        Self::LN2
    }
    fn LOG10_E() -> Self {
        Self::one() / Self::LN_10()
    }
    fn LOG2_E() -> Self {
        Self::one() / Self::LN2
    }
    fn PI() -> Self {
        Self::PI_DD
    }
    fn SQRT_2() -> Self {
        Self::new(1.4142135623730951, -9.667293313452913e-17)
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        Self::from_f64(f64::NAN)
    }
    fn infinity() -> Self {
        Self::from_f64(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Self::from_f64(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Self::from_f64(-0.0)
    }
    fn min_value() -> Self {
        Self::from_f64(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Self::from_f64(f64::MIN_POSITIVE)
    }
    fn epsilon() -> Self {
        Self::from_f64(4.930380657631324e-32)
    }
    fn max_value() -> Self {
        Self::from_f64(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let h = self.hi.floor();
        if h == self.hi {
            Self::renorm(h, self.lo.floor())
        } else {
            Self::from_f64(h)
        }
    }
    fn ceil(self) -> Self {
        let h = self.hi.ceil();
        if h == self.hi {
            Self::renorm(h, self.lo.ceil())
        } else {
            Self::from_f64(h)
        }
    }
    fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Self::from_f64(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        if n.is_zero_val() {
            return Self::one();
        }
        if self.is_zero_val() {
            return if n.hi > 0.0 { Self::zero() } else { Self::infinity() };
        }
        if self.hi < 0.0 {
            if n == n.trunc() && n.hi.abs() < 2f64.powi(31) {
                return self.powi(n.hi as i32 + n.lo as i32);
            }
            return Self::nan();
        }
        (n * self.ln_impl()).exp_impl()
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::zero() } else { Self::nan() };
        }
        if self.hi.is_infinite() {
            return self;
        }
        let q = self.hi.sqrt();
        let (p, e) = two_prod(q, q);
        let r = (self - Self::new(p, e)).hi;
        Self::renorm(q, r / (2.0 * q))
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn exp2(self) -> Self {
        (self * Self::LN2).exp_impl()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn log(self, base: Self) -> Self {
        self.ln_impl() / base.ln_impl()
    }
    fn log2(self) -> Self {
        self.ln_impl() / Self::LN2
    }
    fn log10(self) -> Self {
        self.ln_impl() / Self::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self - other
        }
    }
    fn cbrt(self) -> Self {
        if self.is_zero_val() {
            return self;
        }
        let a = self.abs();
        let mut y = Self::from_f64(a.hi.cbrt());
        // one Newton step on y^3 = a
        y = y - (y * y * y - a) / (Self::from_f64(3.0) * y * y);
        if self.hi < 0.0 {
            -y
        } else {
            y
        }
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos_impl().0
    }
    fn cos(self) -> Self {
        self.sin_cos_impl().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos_impl();
        s / c
    }
    fn asin(self) -> Self {
        self.atan2((Self::one() - self * self).sqrt())
    }
    fn acos(self) -> Self {
        (Self::one() - self * self).sqrt().atan2(self)
    }
    fn atan(self) -> Self {
        self.atan_impl()
    }
    fn atan2(self, other: Self) -> Self {
        let (y, x) = (self, other);
        if x.hi == 0.0 {
            return if y.hi > 0.0 {
                Self::FRAC_PI_2()
            } else if y.hi < 0.0 {
                -Self::FRAC_PI_2()
            } else {
                Self::zero()
            };
        }
        let base = (y / x).atan_impl();
        if x.hi > 0.0 {
            base
        } else if y.hi >= 0.0 {
            base + Self::PI_DD
        } else {
            base - Self::PI_DD
        }
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            Self::expm1_small(self)
        } else {
            self.exp_impl() - Self::one()
        }
    }
    fn ln_1p(self) -> Self {
        if self.hi.abs() > 0.5 {
            return (Self::one() + self).ln_impl();
        }
        // Newton on expm1(y) = x keeps the relative accuracy of tiny x
        let mut y = Self::from_f64(self.hi.ln_1p());
        for _ in 0..2 {
            let em = Self::expm1_small(y);
            y = y - (em - self) / (em + Self::one());
        }
        y
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let e = self.exp_m1();
            (e + e / (e + Self::one())).ldexp(-1)
        } else {
            let e = self.exp_impl();
            (e - e.recip()).ldexp(-1)
        }
    }
    fn cosh(self) -> Self {
        let e = self.exp_impl();
        (e + e.recip()).ldexp(-1)
    }
    fn tanh(self) -> Self {
        if self.hi.abs() > 20.0 {
            return Self::from_f64(self.hi.signum());
        }
        let e = (self.ldexp(1)).exp_m1();
        e / (e + Self::from_f64(2.0))
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let r = if a.hi < 0.5 {
            // log1p(a + a^2/(1 + sqrt(1 + a^2)))
            let a2 = a * a;
            (a + a2 / (Self::one() + (Self::one() + a2).sqrt())).ln_1p()
        } else {
            (a + (a * a + Self::one()).sqrt()).ln_impl()
        };
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        (self + (self * self - Self::one()).sqrt()).ln_impl()
    }
    fn atanh(self) -> Self {
        (self.ldexp(1) / (Self::one() - self)).ln_1p().ldexp(-1)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}

impl Real for DoubleDouble {
    fn lit(v: f64) -> Self {
        Self::from_f64(v)
    }
}
