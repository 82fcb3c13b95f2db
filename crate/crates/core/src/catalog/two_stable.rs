use super::{check_param, Kernel};
use crate::error::Result;
use crate::real::{Extended, Real};
use crate::specfun::{mittag_leffler, rgamma, MlParams};

/// `φ(θ) = aθ^{β-α} + bθ^β`, the two-sided stable ladder exponent.
///
/// `a = 0` is the pure stable limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStable<T> {
    a: T,
    b: T,
    alpha: T,
    beta: T,
}

impl<T: Real> TwoStable<T> {
    pub fn new(a: T, b: T, alpha: T, beta: T) -> Result<Self> {
        check_param(a >= T::zero() && a.is_finite(), "two_stable needs a >= 0")?;
        check_param(b > T::zero() && b.is_finite(), "two_stable needs b > 0")?;
        check_param(alpha > T::zero() && alpha <= T::one(), "two_stable needs alpha in (0,1]")?;
        check_param(beta > T::zero() && beta <= T::one(), "two_stable needs beta in (0,1]")?;
        check_param(alpha <= beta, "two_stable needs alpha <= beta")?;
        Ok(Self { a, b, alpha, beta })
    }

    pub(crate) fn new_unchecked(a: T, b: T, alpha: T, beta: T) -> Self {
        Self { a, b, alpha, beta }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    fn a_jumps(&self) -> bool {
        self.alpha < self.beta && self.a > T::zero()
    }

    fn b_jumps(&self) -> bool {
        self.beta < T::one()
    }

    fn ml(&self, shift: T, x: T) -> Result<T> {
        let p = MlParams::new(self.alpha, self.beta + shift)?;
        mittag_leffler(p, -self.a * x.powf(self.alpha) / self.b)
    }
}

impl<T: Real> Kernel<T> for TwoStable<T> {
    fn phi(&self, theta: T) -> Result<T> {
        if theta == T::zero() {
            return Ok(Kernel::kappa(self));
        }
        Ok(self.a * theta.powf(self.beta - self.alpha) + self.b * theta.powf(self.beta))
    }

    fn kappa(&self) -> T {
        if self.alpha == self.beta {
            self.a
        } else {
            T::zero()
        }
    }

    fn drift(&self) -> T {
        if self.beta == T::one() {
            self.b
        } else {
            T::zero()
        }
    }

    fn tail(&self, x: T) -> Result<T> {
        let mut t = T::zero();
        if self.a_jumps() {
            let e = self.beta - self.alpha;
            t += self.a * x.powf(-e) * rgamma(T::one() - e);
        }
        if self.b_jumps() {
            t += self.b * x.powf(-self.beta) * rgamma(T::one() - self.beta);
        }
        Ok(t)
    }

    fn density(&self, x: T) -> Result<T> {
        let mut d = T::zero();
        if self.a_jumps() {
            let e = self.beta - self.alpha;
            d += self.a * e * x.powf(-T::one() - e) * rgamma(T::one() - e);
        }
        if self.b_jumps() {
            d += self.b * self.beta * x.powf(-T::one() - self.beta) * rgamma(T::one() - self.beta);
        }
        Ok(d)
    }

    fn total_mass(&self) -> Extended<T> {
        self.jump_mass()
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        Ok(self.jump_mass())
    }

    /// `W(x) = (x^β/b) E_{α,β+1}(-a x^α/b)`.
    fn w(&self, x: T) -> Result<T> {
        Ok(x.powf(self.beta) / self.b * self.ml(T::one(), x)?)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(x.powf(self.beta - T::one()) / self.b * self.ml(T::zero(), x)?)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let mut v = Kernel::drift(self) + Kernel::kappa(self) * x;
        if self.a_jumps() {
            let e = T::one() - self.beta + self.alpha;
            v += self.a * x.powf(e) * rgamma(T::one() + e);
        }
        if self.b_jumps() {
            let e = T::one() - self.beta;
            v += self.b * x.powf(e) * rgamma(T::one() + e);
        }
        Ok(v)
    }

    fn w_zero(&self) -> T {
        T::zero()
    }

    fn w_prime_zero(&self) -> Extended<T> {
        if self.beta == T::one() {
            Extended::Finite(self.b.recip())
        } else {
            Extended::Infinite
        }
    }

    fn jump_mass(&self) -> Extended<T> {
        if self.a_jumps() || self.b_jumps() {
            Extended::Infinite
        } else {
            Extended::Finite(T::zero())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ScaleFamily;

    fn fam(a: f64, b: f64, alpha: f64, beta: f64) -> ScaleFamily<f64> {
        ScaleFamily::two_stable(a, b, alpha, beta, 0.0).unwrap()
    }

    #[test]
    fn furrer_case() {
        let f = fam(1.0, 1.0, 0.5, 0.5);
        let p = MlParams::new(0.5, 1.0).unwrap();
        for &x in &[0.1, 1.0, 4.0] {
            let want = 1.0 - mittag_leffler(p, -(x as f64).sqrt()).unwrap();
            assert!((f.w(x).unwrap() - want).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn density_display() {
        let f = fam(1.0, 1.0, 0.3, 0.8);
        let p = MlParams::new(0.3, 0.8).unwrap();
        let x = 1.3f64;
        let want = x.powf(-0.2) * mittag_leffler(p, -x.powf(0.3)).unwrap();
        assert!((f.w_prime(x).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn pure_stable_limit() {
        let f = fam(0.0, 2.0, 0.5, 0.7);
        let x = 1.5f64;
        let want = 2.0 * x.powf(0.3) / crate::specfun::gamma(1.3);
        assert!((f.w_star(x).unwrap() - want).abs() < 1e-14);
        let w = x.powf(0.7) / (2.0 * crate::specfun::gamma(1.7));
        assert!((f.w(x).unwrap() - w).abs() < 1e-14);
    }

    #[test]
    fn gaussian_part() {
        let f = fam(1.0, 1.0, 0.5, 1.0);
        assert_eq!(f.drift(), 1.0);
        assert_eq!(f.w_prime_zero(), Extended::Finite(1.0));
        let g = fam(1.0, 1.0, 0.5, 0.5);
        assert_eq!(g.kappa(), 1.0);
    }

    #[test]
    fn parameter_order() {
        assert!(ScaleFamily::two_stable(1.0f64, 1.0, 0.8, 0.3, 0.0).is_err());
        assert!(ScaleFamily::two_stable(1.0f64, 1.0, 0.3, 0.8, -1.0).is_err());
    }
}
