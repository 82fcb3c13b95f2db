use super::{check_param, inner, Kernel};
use crate::error::Result;
use crate::quad::{integrate_power, integrate_power_range};
use crate::real::{Extended, Real};
use crate::specfun::{digamma, gamma, ln_gamma, rgamma};

/// `φ(θ) = cβθ Γ(ν+βθ)/Γ(ν+βθ+λ)`, the ratio-of-gammas ladder exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio<T> {
    beta: T,
    c: T,
    nu: T,
    lambda: T,
}

impl<T: Real> GammaRatio<T> {
    pub fn new(beta: T, c: T, nu: T, lambda: T) -> Result<Self> {
        check_param(beta > T::zero() && beta.is_finite(), "gamma_ratio needs beta > 0")?;
        check_param(c > T::zero() && c.is_finite(), "gamma_ratio needs c > 0")?;
        check_param(nu >= T::zero() && nu.is_finite(), "gamma_ratio needs nu >= 0")?;
        check_param(lambda > T::zero() && lambda < T::one(), "gamma_ratio needs lambda in (0,1)")?;
        Ok(Self { beta, c, nu, lambda })
    }

    pub(crate) fn new_unchecked(beta: T, c: T, nu: T, lambda: T) -> Self {
        Self { beta, c, nu, lambda }
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// `1 - e^{-x/β}`.
    fn one_minus_q(&self, x: T) -> T {
        -(-x / self.beta).exp_m1()
    }

    /// `ln(1 - e^{-x/β})`.
    fn ln_one_minus_q(&self, x: T) -> T {
        let q = (-x / self.beta).exp();
        if q < T::half() {
            (-q).ln_1p()
        } else {
            self.one_minus_q(x).ln()
        }
    }

    /// `c/Γ(λ)`.
    fn k(&self) -> T {
        self.c * rgamma(self.lambda)
    }

    fn kappa_star(&self) -> T {
        if self.nu == T::zero() {
            return T::zero();
        }
        (ln_gamma(self.nu + self.lambda) - ln_gamma(self.nu)).exp() / (self.c * self.beta)
    }

    /// `Υ*(x,∞) = Aβ[(q/(1-q))^λ/λ + J(q)]` with `A = λ/(cβ²Γ(1-λ))` and
    /// `J(q) = ∫_0^q u^{λ-1}(1-u)^{-λ-1}(u^ν - 1) du`.
    fn upsilon_star(&self, x: T) -> Result<T> {
        let lam = self.lambda;
        let ab = lam / (self.c * self.beta * gamma(T::one() - lam));
        let lead = (lam * (-x / self.beta - self.ln_one_minus_q(x))).exp() / lam;
        Ok(ab * (lead + self.j(x)?))
    }

    fn j(&self, x: T) -> Result<T> {
        let (lam, nu) = (self.lambda, self.nu);
        if nu == T::zero() {
            return Ok(T::zero());
        }
        let q = (-x / self.beta).exp();
        let cfg = inner::<T>();
        let s = q.min(T::half());
        let near_zero = |u: T| {
            let unu = if u == T::zero() { -T::one() } else { (nu * u.ln()).exp_m1() };
            Ok(((-lam - T::one()) * (-u).ln_1p()).exp() * unu)
        };
        let mut total = integrate_power(near_zero, lam, s, &cfg)?.value;
        if q > T::half() {
            // u = 1 - v moves the (1-u)^{-λ-1} end to the origin
            let near_one = |v: T| {
                if v == T::zero() {
                    return Ok(-nu);
                }
                let l = (-v).ln_1p();
                Ok(((lam - T::one()) * l).exp() * (nu * l).exp_m1() / v)
            };
            total += integrate_power_range(near_one, T::one() - lam, self.one_minus_q(x), T::half(), &cfg)?.value;
        }
        Ok(total)
    }
}

impl<T: Real> Kernel<T> for GammaRatio<T> {
    fn phi(&self, theta: T) -> Result<T> {
        if theta == T::zero() {
            return Ok(Kernel::kappa(self));
        }
        let bt = self.beta * theta;
        if self.nu == T::zero() {
            return Ok(self.c * (ln_gamma(bt + T::one()) - ln_gamma(bt + self.lambda)).exp());
        }
        let a = self.nu + bt;
        Ok(self.c * bt * (ln_gamma(a) - ln_gamma(a + self.lambda)).exp())
    }

    fn kappa(&self) -> T {
        if self.nu == T::zero() {
            self.k()
        } else {
            T::zero()
        }
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        let l1 = self.ln_one_minus_q(x);
        if self.nu == T::zero() {
            return Ok(self.k() * ((self.lambda - T::one()) * l1).exp_m1());
        }
        Ok(self.k() * (-x * self.nu / self.beta + (self.lambda - T::one()) * l1).exp())
    }

    fn density(&self, x: T) -> Result<T> {
        let (q, omq) = ((-x / self.beta).exp(), self.one_minus_q(x));
        let l1 = self.ln_one_minus_q(x);
        let pre = self.k() / self.beta * (-x * self.nu / self.beta + (self.lambda - T::two()) * l1).exp();
        Ok(pre * (self.nu * omq + (T::one() - self.lambda) * q))
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Infinite
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        let cb = self.c * self.beta;
        if self.nu == T::zero() {
            return Ok(Extended::Finite(
                cb * (digamma(T::one()) - digamma(self.lambda)) * rgamma(self.lambda),
            ));
        }
        Ok(Extended::Finite(cb * (ln_gamma(self.nu) - ln_gamma(self.nu + self.lambda)).exp()))
    }

    /// `W(x) = κ*x + ∫_0^x z υ*(z) dz + xΥ*(x,∞)`, `υ*(z) = A q^{ν+λ}(1-q)^{-λ-1}`.
    fn w(&self, x: T) -> Result<T> {
        let lam = self.lambda;
        let a = lam / (self.c * self.beta * self.beta * gamma(T::one() - lam));
        let smooth = |z: T| {
            let ratio = if z == T::zero() { self.beta } else { z / self.one_minus_q(z) };
            Ok(a * (-(self.nu + lam) * z / self.beta).exp() * ratio.powf(lam + T::one()))
        };
        let body = integrate_power(smooth, T::one() - lam, x, &inner())?.value;
        Ok(self.kappa_star() * x + body + x * self.upsilon_star(x)?)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(self.kappa_star() + self.upsilon_star(x)?)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let lam = self.lambda;
        let k = self.k();
        let g = |z: T| {
            let ratio = if z == T::zero() { self.beta.recip() } else { self.one_minus_q(z) / z };
            Ok(k * (-z * self.nu / self.beta).exp() * ratio.powf(lam - T::one()))
        };
        Ok(integrate_power(g, lam, x, &inner())?.value)
    }

    fn w_star_prime(&self, x: T) -> Result<T> {
        Ok(self.k() * (-x * self.nu / self.beta + (self.lambda - T::one()) * self.ln_one_minus_q(x)).exp())
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
    use crate::catalog::ScaleFamily;
    use crate::quad::{integrate_half_line, QuadratureConfig};
    use crate::specfun::gamma;

    fn fam(beta: f64, c: f64, nu: f64, lambda: f64) -> ScaleFamily<f64> {
        ScaleFamily::gamma_ratio(beta, c, nu, lambda).unwrap()
    }

    #[test]
    fn conjugate_closed_case() {
        let f = fam(1.0, gamma(1.5), 1.0, 0.5);
        for &x in &[0.01, 0.3, 1.0, 2.5, 5.0] {
            let want = (1.0 - (-x as f64).exp()).sqrt();
            let got = f.w_star(x).unwrap();
            assert!((got - want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn killed_case_phi() {
        let f = fam(1.0, 1.0, 0.0, 0.4);
        let theta = 1.7;
        let want = gamma(theta + 1.0) / gamma(theta + 0.4);
        assert!((f.phi_ladder(theta).unwrap() - want).abs() < 1e-13);
        assert!((f.phi_ladder(0.0).unwrap() - 1.0 / gamma(0.4)).abs() < 1e-14);
    }

    #[test]
    fn killed_case_displays() {
        // W Γ(1-λ) = ∫_0^x (e^y - 1)^{-λ} dy and W* Γ(λ) = ∫_0^x (1 - e^{-z})^{λ-1} dz
        let lam = 0.4;
        let f = fam(1.0, 1.0, 0.0, lam);
        let cfg = QuadratureConfig::<f64>::fine();
        for &x in &[0.5, 1.0, 3.0] {
            let w_int = crate::quad::integrate_power(
                |y: f64| Ok(if y == 0.0 { 1.0 } else { (y / y.exp_m1()).powf(lam) }),
                1.0 - lam,
                x,
                &cfg,
            )
            .unwrap()
            .value;
            assert!((f.w(x).unwrap() * gamma(1.0 - lam) - w_int).abs() < 1e-11, "x={x}");
            let ws_int = crate::quad::integrate_power(
                |z: f64| Ok(if z == 0.0 { 1.0 } else { (-(-z).exp_m1() / z).powf(lam - 1.0) }),
                lam,
                x,
                &cfg,
            )
            .unwrap()
            .value;
            assert!((f.w_star(x).unwrap() * gamma(lam) - ws_int).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn laplace_of_density() {
        // ∫ e^{-θx} W′(x) dx = 1/φ(θ) since W(0) = 0
        let f = fam(1.0, 1.0, 0.5, 0.5);
        let cfg = QuadratureConfig::<f64>::default();
        for &theta in &[0.5, 2.0] {
            let lt = integrate_half_line(|x: f64| Ok((-theta * x).exp() * f.w_prime(x)?), &cfg).unwrap().value;
            let want = 1.0 / f.phi_ladder(theta).unwrap();
            assert!(((lt - want) / want).abs() < 1e-7, "θ={theta}: {lt} vs {want}");
        }
    }

    #[test]
    fn derivative_matches() {
        let f = fam(0.7, 1.3, 0.8, 0.3);
        for &x in &[0.5, 1.0, 2.0] {
            let h = 1e-5;
            let fd = (f.w(x + h).unwrap() - f.w(x - h).unwrap()) / (2.0 * h);
            assert!((fd - f.w_prime(x).unwrap()).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn tail_derivative_is_density() {
        let f = fam(0.7, 1.3, 0.8, 0.3);
        for &x in &[0.2, 1.0, 3.0] {
            let h = 1e-5;
            let fd = (f.upsilon_tail(x - h).unwrap() - f.upsilon_tail(x + h).unwrap()) / (2.0 * h);
            let d = f.upsilon_density(x).unwrap();
            assert!(((fd - d) / d).abs() < 1e-6, "x={x}");
        }
    }
}
