use super::{inner, Kernel, ScaleFamily};
use crate::error::Result;
use crate::quad::{integrate_from_zero, integrate_half_line, integrate_to_infinity};
use crate::real::{Extended, Real};

/// Exponential tilt: `φ_β(θ) = φ(θ+β)`, `Υ_β(dx) = e^{-βx}Υ(dx)`,
/// `W_β′(x) = e^{-βx}W′(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tilted<T> {
    base: Box<ScaleFamily<T>>,
    beta: T,
    kappa: T,
}

impl<T: Real> Tilted<T> {
    pub(crate) fn new(base: ScaleFamily<T>, beta: T) -> Result<Self> {
        let kappa = Kernel::phi(&base, beta)?;
        Ok(Self { base: Box::new(base), beta, kappa })
    }

    pub(crate) fn from_parts(base: ScaleFamily<T>, beta: T) -> Self {
        let kappa = Kernel::phi(&base, beta).unwrap_or_else(|_| T::nan());
        Self { base: Box::new(base), beta, kappa }
    }

    pub fn base(&self) -> &ScaleFamily<T> {
        &self.base
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// `F(x) = ∫_x^∞ e^{-βz} Υ(z,∞) dz` of the base.
    fn damped_tail_integral(&self, x: T) -> Result<T> {
        let b = self.beta;
        let f = |z: T| Ok((-b * z).exp() * Kernel::tail(&*self.base, z)?);
        Ok(integrate_to_infinity(f, x, b.recip(), &inner())?.value)
    }

    fn jumps(&self) -> bool {
        self.base.total_mass() != Extended::Finite(T::zero())
    }
}

impl<T: Real> Kernel<T> for Tilted<T> {
    fn phi(&self, theta: T) -> Result<T> {
        Kernel::phi(&*self.base, theta + self.beta)
    }

    fn kappa(&self) -> T {
        self.kappa
    }

    fn drift(&self) -> T {
        Kernel::drift(&*self.base)
    }

    fn tail(&self, x: T) -> Result<T> {
        if !self.jumps() {
            return Ok(T::zero());
        }
        let b = self.beta;
        Ok((-b * x).exp() * Kernel::tail(&*self.base, x)? - b * self.damped_tail_integral(x)?)
    }

    fn density(&self, x: T) -> Result<T> {
        Ok((-self.beta * x).exp() * Kernel::density(&*self.base, x)?)
    }

    fn total_mass(&self) -> Extended<T> {
        match self.base.total_mass() {
            Extended::Finite(m) => {
                let lost = self.kappa - self.base.kappa() - self.base.drift() * self.beta;
                Extended::Finite((m - lost).max(T::zero()))
            }
            Extended::Infinite => Extended::Infinite,
        }
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        if !self.jumps() {
            return Ok(Extended::Finite(T::zero()));
        }
        let b = self.beta;
        let f = |z: T| Ok((T::one() - b * z) * (-b * z).exp() * Kernel::tail(&*self.base, z)?);
        Ok(Extended::Finite(integrate_half_line(f, &inner())?.value))
    }

    fn w(&self, x: T) -> Result<T> {
        let b = self.beta;
        let f = |y: T| {
            if y == T::zero() {
                return Ok(T::zero());
            }
            Ok((-b * y).exp() * Kernel::w_prime(&*self.base, y)?)
        };
        Ok(Kernel::w_zero(&*self.base) + integrate_from_zero(f, x, &inner())?.value)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok((-self.beta * x).exp() * Kernel::w_prime(&*self.base, x)?)
    }

    /// `W*_β(x) = d + φ(β)x + ∫_0^x (1-βy)e^{-βy}Υ(y,∞)dy - βxF(x)`.
    fn w_star(&self, x: T) -> Result<T> {
        let lin = Kernel::drift(self) + self.kappa * x;
        if !self.jumps() {
            return Ok(lin);
        }
        let b = self.beta;
        let f = |y: T| {
            if y == T::zero() {
                return Ok(T::zero());
            }
            Ok((T::one() - b * y) * (-b * y).exp() * Kernel::tail(&*self.base, y)?)
        };
        let body = integrate_from_zero(f, x, &inner())?.value;
        Ok(lin + body - b * x * self.damped_tail_integral(x)?)
    }

    fn w_zero(&self) -> T {
        Kernel::w_zero(&*self.base)
    }

    fn w_prime_zero(&self) -> Extended<T> {
        Kernel::w_prime_zero(&*self.base)
    }

    fn jump_mass(&self) -> Extended<T> {
        Kernel::jump_mass(&*self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{mittag_leffler, MlParams};
    use crate::quad::{integrate_power, QuadratureConfig};

    #[test]
    fn brownian_tilt_is_brownian() {
        let base = ScaleFamily::brownian_drift(1.0f64, 2.0).unwrap();
        let t = base.tilt(0.5).unwrap();
        // φ(θ+½) = 2 + 2θ
        let same = ScaleFamily::brownian_drift(2.0f64, 2.0).unwrap();
        for &x in &[0.5, 1.0, 3.0] {
            assert!((t.w(x).unwrap() - same.w(x).unwrap()).abs() < 1e-13);
            assert!((t.w_star(x).unwrap() - same.w_star(x).unwrap()).abs() < 1e-13);
        }
        assert_eq!(t.total_mass(), Extended::Finite(0.0));
    }

    #[test]
    fn two_stable_tilt_display() {
        // (1/b) ∫_0^x e^{-mt} t^{β-1} E_{α,β}(-a t^α/b) dt
        let (a, b, al, be, m) = (1.0f64, 1.0, 0.5, 0.8, 0.5);
        let f = ScaleFamily::two_stable(a, b, al, be, m).unwrap();
        let p = MlParams::new(al, be).unwrap();
        let cfg = QuadratureConfig::<f64>::fine();
        for &x in &[0.5f64, 1.0, 2.0] {
            let want = integrate_power(
                |t: f64| Ok((-m * t).exp() * mittag_leffler(p, -a * t.powf(al) / b)? / b),
                be,
                x,
                &cfg,
            )
            .unwrap()
            .value;
            let got = f.w(x).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn small_tilt_approaches_base() {
        let base = ScaleFamily::gamma_compound(1.0f64, 1.0, 1.0, 0.5).unwrap();
        let t = base.tilt(1e-7).unwrap();
        for &x in &[0.5, 2.0] {
            assert!((t.w(x).unwrap() - base.w(x).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn tail_matches_damped_density() {
        let base = ScaleFamily::gamma_compound(1.0f64, 1.0, 1.0, 0.5).unwrap();
        let t = base.tilt(0.7).unwrap();
        for &x in &[0.3, 1.0, 2.0] {
            let h = 1e-5;
            let fd = (t.upsilon_tail(x - h).unwrap() - t.upsilon_tail(x + h).unwrap()) / (2.0 * h);
            let d = t.upsilon_density(x).unwrap();
            assert!(((fd - d) / d).abs() < 1e-6, "x={x}");
        }
        // finite-mass bookkeeping: Υ_β(0,∞) = ∫ e^{-βx} υ(x) dx
        let direct = crate::quad::integrate_half_line(|x: f64| t.upsilon_density(x), &QuadratureConfig::default())
            .unwrap()
            .value;
        assert!((t.total_mass().value() - direct).abs() < 1e-8);
    }
}
