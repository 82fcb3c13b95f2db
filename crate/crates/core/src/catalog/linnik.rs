use super::{check_param, inner, Kernel};
use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, integrate_to_infinity};
use crate::real::{Extended, Real};
use crate::specfun::{breaks_to, choose_truncation, exp_int_e1, gamma_p, ln_gamma, mittag_leffler, volterra_nu, MlParams};

/// `φ(θ) = λ ln(1 + θ^α)`, the ladder exponent of a geometric stable law.
///
/// The scale function itself is only known for `α = 1`; the conjugate is
/// available for every `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linnik<T> {
    lambda: T,
    alpha: T,
}

impl<T: Real> Linnik<T> {
    pub fn new(lambda: T, alpha: T) -> Result<Self> {
        check_param(lambda > T::zero() && lambda.is_finite(), "linnik needs lambda > 0")?;
        check_param(alpha > T::zero() && alpha <= T::one(), "linnik needs alpha in (0,1]")?;
        Ok(Self { lambda, alpha })
    }

    pub(crate) fn new_unchecked(lambda: T, alpha: T) -> Self {
        Self { lambda, alpha }
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    fn exponential(&self) -> bool {
        self.alpha == T::one()
    }

    fn relax(&self, z: T) -> Result<T> {
        mittag_leffler(MlParams::new(self.alpha, T::one())?, -z)
    }

    fn only_exponential(&self) -> Result<()> {
        if self.exponential() {
            Ok(())
        } else {
            Err(Error::Unsupported("W unavailable for Linnik α≠1; conjugate W* available".into()))
        }
    }
}

impl<T: Real> Kernel<T> for Linnik<T> {
    fn phi(&self, theta: T) -> Result<T> {
        Ok(self.lambda * theta.powf(self.alpha).ln_1p())
    }

    fn kappa(&self) -> T {
        T::zero()
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        if self.exponential() {
            return Ok(self.lambda * exp_int_e1(x));
        }
        let f = |z: T| Ok(self.relax(z)? / z);
        let r = integrate_to_infinity(f, x, x.max(T::one()), &inner())?;
        Ok(self.alpha * self.lambda * r.value)
    }

    fn density(&self, x: T) -> Result<T> {
        if self.exponential() {
            return Ok(self.lambda * (-x).exp() / x);
        }
        Ok(self.alpha * self.lambda * self.relax(x)? / x)
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Infinite
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        if self.exponential() {
            Ok(Extended::Finite(self.lambda))
        } else {
            Ok(Extended::Infinite)
        }
    }

    /// `W(x) = (1/λ) ∫_0^∞ P(s,x) ds` with `P` the regularised lower gamma.
    fn w(&self, x: T) -> Result<T> {
        self.only_exponential()?;
        let cfg = inner::<T>();
        let lx = x.ln();
        // For s+1 >= 2x the integrand is below 2e^{-x}x^s/Γ(s+1), whose
        // terms halve per unit step.
        let bound = |s: T| T::lit(4.0) * (s * lx - x - ln_gamma(s + T::one())).exp();
        let start = (T::two() * x).max(T::two());
        let (cut, _) = choose_truncation(start, cfg.abs_tol * T::lit(0.1), bound)?;
        let scale = lx.abs().max(T::two()).recip();
        let pts = breaks_to(scale, cut);
        let r = integrate_breaks(|s: T| Ok(gamma_p(s, x)), &pts, &cfg)?;
        Ok(r.value / self.lambda)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        self.only_exponential()?;
        Ok((-x).exp() * volterra_nu(x, &inner())? / self.lambda)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let al = self.alpha * self.lambda;
        if self.exponential() {
            return Ok(self.lambda * (-(-x).exp_m1() + x * exp_int_e1(x)));
        }
        // ∫_0^x Υ(y,∞)dy = ∫_0^x zυ(z)dz + xΥ(x,∞)
        let mut pts = vec![T::zero()];
        let mut p = T::one();
        while p < x {
            pts.push(p);
            p *= T::two();
        }
        pts.push(x);
        let body = integrate_breaks(|z| self.relax(z), &pts, &inner())?.value;
        Ok(al * body + x * Kernel::tail(self, x)?)
    }

    fn w_zero(&self) -> T {
        T::zero()
    }

    fn w_prime_zero(&self) -> Extended<T> {
        Extended::Infinite
    }

    fn jump_mass(&self) -> Extended<T> {
        Extended::Infinite
    }
}
