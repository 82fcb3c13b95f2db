use super::{check_param, inner, Kernel};
use crate::error::Result;
use crate::quad::integrate_power;
use crate::real::{Extended, Real};
use crate::specfun::{gamma_p, mittag_leffler, mittag_leffler_scaled, rgamma, upper_gamma, MlParams};

/// `φ(θ) = κ + c(θ+γ)^α - cγ^α`, a killed and tempered stable subordinator
/// without drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KilledStable<T> {
    kappa: T,
    c: T,
    alpha: T,
    gamma: T,
}

impl<T: Real> KilledStable<T> {
    pub fn new(kappa: T, c: T, alpha: T, gamma: T) -> Result<Self> {
        check_param(kappa >= T::zero() && kappa.is_finite(), "killed_stable needs kappa >= 0")?;
        check_param(c > T::zero() && c.is_finite(), "killed_stable needs c > 0")?;
        check_param(alpha > T::zero() && alpha < T::one(), "killed_stable needs alpha in (0,1)")?;
        check_param(gamma >= T::zero() && gamma.is_finite(), "killed_stable needs gamma >= 0")?;
        Ok(Self { kappa, c, alpha, gamma })
    }

    pub(crate) fn new_unchecked(kappa: T, c: T, alpha: T, gamma: T) -> Self {
        Self { kappa, c, alpha, gamma }
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Coefficient `(cγ^α - κ)/c` of `y^α` in the Mittag-Leffler argument.
    fn growth(&self) -> T {
        (self.c * self.gamma.powf(self.alpha) - self.kappa) / self.c
    }

    /// `(1/c) e^{-γy} E_{α,α}(growth·y^α)`.
    fn smooth_density(&self, y: T) -> Result<T> {
        let p = MlParams::new(self.alpha, self.alpha)?;
        Ok(mittag_leffler_scaled(p, self.growth() * y.powf(self.alpha), self.gamma * y)? / self.c)
    }
}

impl<T: Real> Kernel<T> for KilledStable<T> {
    fn phi(&self, theta: T) -> Result<T> {
        let (c, a, g) = (self.c, self.alpha, self.gamma);
        Ok(self.kappa + c * ((theta + g).powf(a) - g.powf(a)))
    }

    fn kappa(&self) -> T {
        self.kappa
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        let (c, a, g) = (self.c, self.alpha, self.gamma);
        if g == T::zero() {
            return Ok(c * x.powf(-a) * rgamma(T::one() - a));
        }
        Ok(c * a * rgamma(T::one() - a) * g.powf(a) * upper_gamma(-a, g * x))
    }

    fn density(&self, x: T) -> Result<T> {
        let (c, a) = (self.c, self.alpha);
        Ok(c * a * (-self.gamma * x).exp() * x.powf(-T::one() - a) * rgamma(T::one() - a))
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Infinite
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        if self.gamma == T::zero() {
            return Ok(Extended::Infinite);
        }
        Ok(Extended::Finite(self.c * self.alpha * self.gamma.powf(self.alpha - T::one())))
    }

    fn w(&self, x: T) -> Result<T> {
        let (c, a) = (self.c, self.alpha);
        if self.gamma == T::zero() {
            let p = MlParams::new(a, a + T::one())?;
            return Ok(x.powf(a) / c * mittag_leffler(p, -self.kappa * x.powf(a) / c)?);
        }
        Ok(integrate_power(|y| self.smooth_density(y), a, x, &inner())?.value)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(x.powf(self.alpha - T::one()) * self.smooth_density(x)?)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let (c, a, g) = (self.c, self.alpha, self.gamma);
        if g == T::zero() {
            return Ok(self.kappa * x + c * x.powf(T::one() - a) * rgamma(T::two() - a));
        }
        // ∫_0^x Υ(y,∞)dy = ∫_0^x z Υ(dz) + xΥ(x,∞)
        let body = c * a * g.powf(a - T::one()) * gamma_p(T::one() - a, g * x);
        Ok(self.kappa * x + body + x * Kernel::tail(self, x)?)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ScaleFamily;

    #[test]
    fn killed_closed_form() {
        let f = ScaleFamily::killed_stable(1.0f64, 1.0, 0.5, 0.0).unwrap();
        let p = MlParams::new(0.5, 1.0).unwrap();
        for &x in &[0.2f64, 1.0, 3.0] {
            let want = 1.0 - mittag_leffler(p, -x.sqrt()).unwrap();
            assert!((f.w(x).unwrap() - want).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn matches_two_stable() {
        let k = ScaleFamily::killed_stable(0.7f64, 1.3, 0.4, 0.0).unwrap();
        let t = ScaleFamily::two_stable(0.7f64, 1.3, 0.4, 0.4, 0.0).unwrap();
        for &x in &[0.3, 1.0, 2.0, 5.0] {
            assert!((k.w(x).unwrap() - t.w(x).unwrap()).abs() < 1e-13);
            assert!((k.w_star(x).unwrap() - t.w_star(x).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn tempered_equals_tilt_of_untempered() {
        // κ = cγ^α + κ' with κ' = 0.2 gives a tilt of KilledStable{κ', γ=0}
        let (c, a, g): (f64, f64, f64) = (1.0, 0.5, 0.8);
        let kappa = 0.2 + c * g.powf(a);
        let direct = ScaleFamily::killed_stable(kappa, c, a, g).unwrap();
        let tilted = ScaleFamily::killed_stable(0.2f64, c, a, 0.0).unwrap().tilt(g).unwrap();
        for &x in &[0.5, 1.0, 2.0] {
            let (u, v) = (direct.w(x).unwrap(), tilted.w(x).unwrap());
            assert!((u - v).abs() < 1e-9 * v, "W x={x}: {u} vs {v}");
            let (u, v) = (direct.w_star(x).unwrap(), tilted.w_star(x).unwrap());
            assert!((u - v).abs() < 1e-9 * v, "W* x={x}: {u} vs {v}");
        }
    }

    #[test]
    fn conjugate_slope() {
        let f = ScaleFamily::killed_stable(0.0f64, 1.0, 0.6, 0.5).unwrap();
        for &x in &[0.3, 1.0, 2.0] {
            let h = 1e-5;
            let fd = (f.w_star(x + h).unwrap() - f.w_star(x - h).unwrap()) / (2.0 * h);
            assert!((fd - f.upsilon_tail(x).unwrap()).abs() < 1e-7, "x={x}");
        }
    }
}
