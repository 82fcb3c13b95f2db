use super::{check_param, Kernel};
use crate::error::Result;
use crate::real::{Extended, Real};

/// `φ(θ) = κ + dθ`: Brownian motion with drift, `W(x) = (1 - e^{-κx/d})/κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianDrift<T> {
    kappa: T,
    d: T,
}

impl<T: Real> BrownianDrift<T> {
    /// `κ = 0` is accepted and gives `W(x) = x/d`.
    pub fn new(kappa: T, d: T) -> Result<Self> {
        check_param(kappa >= T::zero() && kappa.is_finite(), "brownian_drift needs kappa >= 0")?;
        check_param(d > T::zero() && d.is_finite(), "brownian_drift needs d > 0")?;
        Ok(Self { kappa, d })
    }

    pub(crate) fn new_unchecked(kappa: T, d: T) -> Self {
        Self { kappa, d }
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn d(&self) -> T {
        self.d
    }
}

impl<T: Real> Kernel<T> for BrownianDrift<T> {
    fn phi(&self, theta: T) -> Result<T> {
        Ok(self.kappa + self.d * theta)
    }
    fn kappa(&self) -> T {
        self.kappa
    }
    fn drift(&self) -> T {
        self.d
    }
    fn tail(&self, _x: T) -> Result<T> {
        Ok(T::zero())
    }
    fn density(&self, _x: T) -> Result<T> {
        Ok(T::zero())
    }
    fn total_mass(&self) -> Extended<T> {
        Extended::Finite(T::zero())
    }
    fn first_moment(&self) -> Result<Extended<T>> {
        Ok(Extended::Finite(T::zero()))
    }
    fn w(&self, x: T) -> Result<T> {
        if self.kappa == T::zero() {
            return Ok(x / self.d);
        }
        Ok(-(-self.kappa * x / self.d).exp_m1() / self.kappa)
    }
    fn w_prime(&self, x: T) -> Result<T> {
        Ok((-self.kappa * x / self.d).exp() / self.d)
    }
    fn w_star(&self, x: T) -> Result<T> {
        Ok(self.d + self.kappa * x)
    }
    fn w_zero(&self) -> T {
        T::zero()
    }
    fn w_prime_zero(&self) -> Extended<T> {
        Extended::Finite(self.d.recip())
    }
    fn jump_mass(&self) -> Extended<T> {
        Extended::Finite(T::zero())
    }
}
