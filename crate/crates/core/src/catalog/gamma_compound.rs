use super::{check_param, inner, Kernel};
use crate::error::Result;
use crate::quad::integrate_power;
use crate::real::{Extended, Real};
use crate::specfun::{gamma_p, gamma_q, ln_gamma, mittag_leffler_scaled, MlParams};

/// `φ(θ) = κ + λ(1 - (γ/(γ+θ))^ν)`: compound Poisson with gamma jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCompound<T> {
    kappa: T,
    lambda: T,
    gamma: T,
    nu: T,
}

impl<T: Real> GammaCompound<T> {
    pub fn new(kappa: T, lambda: T, gamma: T, nu: T) -> Result<Self> {
        check_param(kappa >= T::zero() && kappa.is_finite(), "gamma_compound needs kappa >= 0")?;
        check_param(lambda > T::zero() && lambda.is_finite(), "gamma_compound needs lambda > 0")?;
        check_param(gamma > T::zero() && gamma.is_finite(), "gamma_compound needs gamma > 0")?;
        check_param(nu > T::zero() && nu < T::one(), "gamma_compound needs nu in (0,1)")?;
        Ok(Self { kappa, lambda, gamma, nu })
    }

    pub(crate) fn new_unchecked(kappa: T, lambda: T, gamma: T, nu: T) -> Self {
        Self { kappa, lambda, gamma, nu }
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    /// `ρ = λ/(λ+κ)`.
    pub fn rho(&self) -> T {
        self.lambda / (self.lambda + self.kappa)
    }

    /// `W′(y) y^{1-ν}`.
    fn smooth_density(&self, y: T) -> Result<T> {
        let rg = self.rho() * self.gamma.powf(self.nu);
        let p = MlParams::new(self.nu, self.nu)?;
        Ok(rg / (self.lambda + self.kappa) * mittag_leffler_scaled(p, rg * y.powf(self.nu), self.gamma * y)?)
    }
}

impl<T: Real> Kernel<T> for GammaCompound<T> {
    fn phi(&self, theta: T) -> Result<T> {
        Ok(self.kappa - self.lambda * (-self.nu * (theta / self.gamma).ln_1p()).exp_m1())
    }

    fn kappa(&self) -> T {
        self.kappa
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        Ok(self.lambda * gamma_q(self.nu, self.gamma * x))
    }

    fn density(&self, x: T) -> Result<T> {
        let (g, n) = (self.gamma, self.nu);
        Ok(self.lambda * (n * g.ln() + (n - T::one()) * x.ln() - g * x - ln_gamma(n)).exp())
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Finite(self.lambda)
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        Ok(Extended::Finite(self.lambda * self.nu / self.gamma))
    }

    fn w(&self, x: T) -> Result<T> {
        let body = integrate_power(|y| self.smooth_density(y), self.nu, x, &inner())?.value;
        Ok(Kernel::w_zero(self) + body)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(x.powf(self.nu - T::one()) * self.smooth_density(x)?)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let (g, n) = (self.gamma, self.nu);
        let gx = g * x;
        Ok(self.kappa * x + self.lambda * (x * gamma_q(n, gx) + n / g * gamma_p(n + T::one(), gx)))
    }

    fn w_zero(&self) -> T {
        (self.kappa + self.lambda).recip()
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
    use crate::catalog::ScaleFamily;
    use crate::quad::{integrate_half_line, QuadratureConfig};

    #[test]
    fn starts_at_inverse_mass() {
        let f = ScaleFamily::gamma_compound(1.0f64, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(f.w(0.0).unwrap(), 0.5);
        assert!((f.w(1e-12).unwrap() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn laplace_of_measure() {
        // W(0) + ∫ e^{-θx} W′ dx = 1/φ(θ)
        let f = ScaleFamily::gamma_compound(1.0f64, 1.0, 1.0, 0.5).unwrap();
        let cfg = QuadratureConfig::<f64>::default();
        for &theta in &[0.5, 2.0] {
            let lt = integrate_half_line(|x: f64| Ok((-theta * x).exp() * f.w_prime(x)?), &cfg).unwrap().value;
            let want = 1.0 / f.phi_ladder(theta).unwrap();
            assert!(((0.5 + lt - want) / want).abs() < 1e-7, "θ={theta}");
        }
    }

    #[test]
    fn derivative_matches() {
        let f = ScaleFamily::gamma_compound(0.3f64, 2.0, 1.5, 0.4).unwrap();
        for &x in &[0.5, 1.0, 2.0] {
            let h = 1e-5;
            let fd = (f.w(x + h).unwrap() - f.w(x - h).unwrap()) / (2.0 * h);
            assert!((fd - f.w_prime(x).unwrap()).abs() < 1e-6, "x={x}");
            let fd = (f.w_star(x + h).unwrap() - f.w_star(x - h).unwrap()) / (2.0 * h);
            assert!((fd - f.kappa() - f.upsilon_tail(x).unwrap()).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn no_killing_limit() {
        let f = ScaleFamily::gamma_compound(0.0f64, 1.0, 1.0, 0.5).unwrap();
        assert!((f.kappa_star().unwrap() - 2.0).abs() < 1e-14);
        // W′ tends to κ* = γ/(λν)
        assert!((f.w_prime(200.0).unwrap() - 2.0).abs() < 1e-3);
    }
}
