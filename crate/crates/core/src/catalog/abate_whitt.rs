use super::{check_param, Kernel};
use crate::error::Result;
use crate::real::{Extended, Real};
use crate::specfun::eta;

/// `φ(θ) = 1 - λ/((μ+√θ)(1+√θ))`, built on `η(x) = e^x erfc(√x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbateWhitt<T> {
    lambda: T,
    mu: T,
}

fn sqrt_over_pi<T: Real>(x: T) -> T {
    (x / T::PI()).sqrt()
}

impl<T: Real> AbateWhitt<T> {
    pub fn new(lambda: T, mu: T) -> Result<Self> {
        check_param(lambda > T::zero() && lambda.is_finite(), "abate_whitt needs lambda > 0")?;
        check_param(mu > T::zero() && mu.is_finite(), "abate_whitt needs mu > 0")?;
        check_param(lambda < mu, "abate_whitt needs lambda < mu")?;
        Ok(Self { lambda, mu })
    }

    pub(crate) fn new_unchecked(lambda: T, mu: T) -> Self {
        Self { lambda, mu }
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    fn near_one(&self) -> bool {
        (self.mu - T::one()).abs() < T::lit(1e-8)
    }

    /// Roots `ν₁ > ν₂` of `ν² - (1+μ)ν + μ - λ`.
    pub fn nus(&self) -> (T, T) {
        let h = (T::one() + self.mu) * T::half();
        let g = (T::one() - self.mu) * T::half();
        let nu1 = h + (g * g + self.lambda).sqrt();
        (nu1, (self.mu - self.lambda) / nu1)
    }
}

impl<T: Real> Kernel<T> for AbateWhitt<T> {
    fn phi(&self, theta: T) -> Result<T> {
        let s = theta.sqrt();
        Ok(T::one() - self.lambda / ((self.mu + s) * (T::one() + s)))
    }

    fn kappa(&self) -> T {
        T::one() - self.lambda / self.mu
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        let (l, m) = (self.lambda, self.mu);
        if self.near_one() {
            return Ok(l * ((T::one() - T::two() * x) * eta(x)? + T::two() * sqrt_over_pi(x)));
        }
        Ok(l / (T::one() - m) * (eta(m * m * x)? / m - eta(x)?))
    }

    fn density(&self, x: T) -> Result<T> {
        let (l, m) = (self.lambda, self.mu);
        if self.near_one() {
            return Ok(l * ((T::two() * x + T::one()) * eta(x)? - T::two() * sqrt_over_pi(x)));
        }
        Ok(l * (eta(x)? - m * eta(m * m * x)?) / (T::one() - m))
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Finite(self.lambda / self.mu)
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        Ok(Extended::Infinite)
    }

    fn w(&self, x: T) -> Result<T> {
        let (n1, n2) = self.nus();
        let k = Kernel::kappa(self);
        let mix = (n1 * eta(x * n2 * n2)? - n2 * eta(x * n1 * n1)?) / (n1 - n2);
        Ok((T::one() - self.lambda / self.mu * mix) / k)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        let (n1, n2) = self.nus();
        Ok(self.lambda * (n1 * eta(x * n1 * n1)? - n2 * eta(x * n2 * n2)?) / (n1 - n2))
    }

    fn w_star(&self, x: T) -> Result<T> {
        let (l, m) = (self.lambda, self.mu);
        let k = Kernel::kappa(self);
        let sp = sqrt_over_pi(x);
        let jumps = if self.near_one() {
            l * ((T::lit(3.0) - T::two() * x) * eta(x)? + T::lit(6.0) * sp - T::lit(3.0))
        } else {
            let g = |mm: T| -> Result<T> {
                Ok((eta(mm * mm * x)? + T::two() * mm * sp - T::one()) / (mm * mm * mm))
            };
            l / (T::one() - m) * (g(m)? - g(T::one())?)
        };
        Ok(k * x + jumps)
    }

    fn w_zero(&self) -> T {
        T::one()
    }

    fn w_prime_zero(&self) -> Extended<T> {
        Extended::Finite(self.lambda)
    }

    fn jump_mass(&self) -> Extended<T> {
        Extended::Finite(self.lambda)
    }
}
