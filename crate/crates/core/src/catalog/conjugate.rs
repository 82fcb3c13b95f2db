use super::{Kernel, ScaleFamily};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};
use crate::real::{Extended, Real};

/// The family of `φ*(θ) = θ/φ(θ)`: scale function `W*` of the base, and
/// conjugate `W` of the base.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugate<T> {
    base: Box<ScaleFamily<T>>,
    kappa: T,
    drift: T,
}

impl<T: Real> Conjugate<T> {
    pub(crate) fn new(base: ScaleFamily<T>) -> Result<Self> {
        let kappa = base.kappa_star()?;
        let drift = base.d_star()?;
        Ok(Self { base: Box::new(base), kappa, drift })
    }

    pub(crate) fn from_base(base: ScaleFamily<T>) -> Self {
        let kappa = base.kappa_star().unwrap_or_else(|_| T::nan());
        let drift = base.d_star().unwrap_or_else(|_| T::nan());
        Self { base: Box::new(base), kappa, drift }
    }

    pub fn base(&self) -> &ScaleFamily<T> {
        &self.base
    }
}

impl<T: Real> Kernel<T> for Conjugate<T> {
    fn phi(&self, theta: T) -> Result<T> {
        if theta == T::zero() {
            return Ok(self.kappa);
        }
        Ok(theta / Kernel::phi(&*self.base, theta)?)
    }

    fn kappa(&self) -> T {
        self.kappa
    }

    fn drift(&self) -> T {
        self.drift
    }

    fn tail(&self, x: T) -> Result<T> {
        Ok(Kernel::w_prime(&*self.base, x)? - self.kappa)
    }

    /// `-W″` of the base, by central differences.
    fn density(&self, x: T) -> Result<T> {
        let h = x * T::lit(1e-4);
        let up = Kernel::w_prime(&*self.base, x + h)?;
        let down = Kernel::w_prime(&*self.base, x - h)?;
        Ok((down - up) / (T::two() * h))
    }

    fn total_mass(&self) -> Extended<T> {
        match Kernel::w_prime_zero(&*self.base) {
            Extended::Finite(v) => Extended::Finite(v - self.kappa),
            Extended::Infinite => Extended::Infinite,
        }
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        let kb = self.base.kappa();
        if kb > T::zero() {
            return Ok(Extended::Finite(kb.recip() - self.drift));
        }
        if self.kappa == T::zero() {
            return Ok(Extended::Infinite);
        }
        // The head is exact: ∫_0^1 (W′ - κ*) = W(1) - W(0) - κ*. Beyond it
        // W′ - κ* decays to rounding noise, which a mapped infinite interval
        // would amplify, so doubling chunks are summed until negligible.
        let q = QuadratureConfig::default();
        let mut total = Kernel::w(&*self.base, T::one())? - Kernel::w_zero(&*self.base) - self.kappa;
        let (mut x, mut quiet) = (T::one(), 0);
        for _ in 0..64 {
            let chunk = integrate(|y| Kernel::tail(self, y), x, x * T::two(), &q)?.value;
            total += chunk;
            x *= T::two();
            quiet = if chunk.abs() <= q.abs_tol * total.abs().max(T::one()) { quiet + 1 } else { 0 };
            if quiet == 2 {
                return Ok(Extended::Finite(total));
            }
        }
        Err(Error::Numerical { what: "first moment of the conjugate measure did not settle".into(), partial: total.f64() })
    }

    fn w(&self, x: T) -> Result<T> {
        Kernel::w_star(&*self.base, x)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Kernel::w_star_prime(&*self.base, x)
    }

    fn w_star(&self, x: T) -> Result<T> {
        Kernel::w(&*self.base, x)
    }

    fn w_star_prime(&self, x: T) -> Result<T> {
        Kernel::w_prime(&*self.base, x)
    }

    fn w_zero(&self) -> T {
        self.base.drift()
    }

    fn w_prime_zero(&self) -> Extended<T> {
        match self.base.total_mass() {
            Extended::Finite(m) => Extended::Finite(self.base.kappa() + m),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// `-W″(0+)` of the base, which is `(κ + Υ(0,∞))/d²` when `d > 0`.
    fn jump_mass(&self) -> Extended<T> {
        let d = self.base.drift();
        match self.base.total_mass() {
            Extended::Finite(m) if d > T::zero() => Extended::Finite((self.base.kappa() + m) / (d * d)),
            _ => Extended::Infinite,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_conjugate() {
        let base = ScaleFamily::brownian_drift(1.0f64, 2.0).unwrap();
        let c = base.conjugate_family().unwrap();
        assert_eq!(c.kappa(), 0.0);
        assert_eq!(c.drift(), 0.0);
        for &x in &[0.5, 1.0] {
            assert_eq!(c.w(x).unwrap(), base.w_star(x).unwrap());
            assert_eq!(c.w_star(x).unwrap(), base.w(x).unwrap());
            // υ*(x) = (κ/d²) e^{-κx/d}
            let want = 0.25 * (-x / 2.0).exp();
            assert!((c.upsilon_density(x).unwrap() - want).abs() < 1e-8);
        }
        assert_eq!(c.total_mass(), Extended::Finite(0.5));
        assert_eq!(c.jump_mass(), Extended::Finite(0.25));
        assert!((c.phi_ladder(3.0).unwrap() * base.phi_ladder(3.0).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(c.conjugate_family().unwrap(), base);
    }

    #[test]
    fn moments_of_conjugate() {
        // φ = 1 + 2θ: φ* = θ/(1+2θ) has Υ* tail e^{-x/2}/2, mean ∫ = 1
        let c = ScaleFamily::brownian_drift(1.0f64, 2.0).unwrap().conjugate_family().unwrap();
        assert_eq!(c.first_moment().unwrap(), Extended::Finite(1.0));
        let kst = c.kappa_star().unwrap();
        assert!((kst - 1.0).abs() < 1e-15);
    }
}
