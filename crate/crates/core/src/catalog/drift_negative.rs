use super::{Kernel, ScaleFamily, Tilted};
use crate::error::{Error, Result};
use crate::real::{Extended, Real};

/// Parent `ψ(θ) = (θ-β)φ(θ)` for a ladder exponent with `κ = 0`; the
/// process drifts to `-∞` and `W(x) = e^{βx} W_β(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftNegative<T> {
    tilted: Tilted<T>,
}

impl<T: Real> DriftNegative<T> {
    pub(crate) fn new(base: ScaleFamily<T>, beta: T) -> Result<Self> {
        if !(beta > T::zero() && beta.is_finite()) {
            return Err(Error::Domain(format!("drift_negative needs β > 0, got {beta}")));
        }
        if base.is_drift_negative() {
            return Err(Error::Unsupported("nested drift-negative construction".into()));
        }
        if base.kappa() != T::zero() {
            return Err(Error::Parameter(format!(
                "drift_negative needs a base with zero killing rate, got κ = {}",
                base.kappa()
            )));
        }
        Ok(Self { tilted: Tilted::new(base, beta)? })
    }

    pub(crate) fn from_parts(base: ScaleFamily<T>, beta: T) -> Self {
        Self { tilted: Tilted::from_parts(base, beta) }
    }

    pub fn base(&self) -> &ScaleFamily<T> {
        self.tilted.base()
    }

    pub fn beta(&self) -> T {
        self.tilted.beta()
    }

    fn unsupported<U>() -> Result<U> {
        Err(Error::Unsupported("W* of a drift-negative family".into()))
    }
}

impl<T: Real> Kernel<T> for DriftNegative<T> {
    fn phi(&self, theta: T) -> Result<T> {
        Kernel::phi(self.base(), theta)
    }

    fn kappa(&self) -> T {
        T::zero()
    }

    fn drift(&self) -> T {
        Kernel::drift(self.base())
    }

    fn tail(&self, x: T) -> Result<T> {
        Kernel::tail(self.base(), x)
    }

    fn density(&self, x: T) -> Result<T> {
        Kernel::density(self.base(), x)
    }

    fn total_mass(&self) -> Extended<T> {
        Kernel::total_mass(self.base())
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        Kernel::first_moment(self.base())
    }

    fn w(&self, x: T) -> Result<T> {
        Ok((self.beta() * x).exp() * Kernel::w(&self.tilted, x)?)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(self.beta() * Kernel::w(self, x)? + Kernel::w_prime(self.base(), x)?)
    }

    fn w_star(&self, _x: T) -> Result<T> {
        Self::unsupported()
    }

    fn w_star_prime(&self, _x: T) -> Result<T> {
        Self::unsupported()
    }

    fn w_zero(&self) -> T {
        Kernel::w_zero(self.base())
    }

    fn w_prime_zero(&self) -> Extended<T> {
        match Kernel::w_prime_zero(self.base()) {
            Extended::Finite(v) => Extended::Finite(v + self.beta() * Kernel::w_zero(self.base())),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// `Π(-∞,0) = υ(0+) + βΥ(0,∞)`.
    fn jump_mass(&self) -> Extended<T> {
        match (Kernel::jump_mass(self.base()), Kernel::total_mass(self.base())) {
            (Extended::Finite(j), Extended::Finite(m)) => Extended::Finite(j + self.beta() * m),
            _ => Extended::Infinite,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_power, QuadratureConfig};
    use crate::specfun::rgamma;

    fn conj_gamma_ratio(lambda: f64) -> ScaleFamily<f64> {
        ScaleFamily::gamma_ratio(1.0, 1.0, 0.0, lambda).unwrap().conjugate_family().unwrap()
    }

    #[test]
    fn needs_zero_killing() {
        let killed = ScaleFamily::brownian_drift(1.0f64, 1.0).unwrap();
        assert!(matches!(killed.drift_negative(0.5), Err(Error::Parameter(_))));
        let f = ScaleFamily::brownian_drift(0.0f64, 1.0).unwrap().drift_negative(0.5).unwrap();
        assert_eq!(f.phi_zero(), 0.5);
        assert!(matches!(f.drift_negative(0.5), Err(Error::Unsupported(_))));
        assert!(matches!(f.conjugate_family(), Err(Error::Unsupported(_))));
        assert!(matches!(f.tilt(0.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn root_at_beta() {
        let f = conj_gamma_ratio(0.5).drift_negative(0.25).unwrap();
        assert_eq!(f.psi(0.25).unwrap(), 0.0);
        assert!(f.psi(1.0).unwrap() > 0.0);
        assert!(f.psi(0.1).unwrap() < 0.0);
    }

    #[test]
    fn brownian_closed_form() {
        // ψ(θ) = (θ-β)dθ has W(x) = (e^{βx} - 1)/(βd)
        let (beta, d) = (0.5f64, 2.0);
        let f = ScaleFamily::brownian_drift(0.0, d).unwrap().drift_negative(beta).unwrap();
        for &x in &[0.3, 1.0, 3.0] {
            let want = (beta * x).exp_m1() / (beta * d);
            assert!((f.w(x).unwrap() - want).abs() < 1e-12 * want, "x={x}");
            let h = 1e-5;
            let fd = (f.w(x + h).unwrap() - f.w(x - h).unwrap()) / (2.0 * h);
            assert!((fd - f.w_prime(x).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn gamma_ratio_display() {
        // W(x) = (c e^{νx}/Γ(λ)) ∫_0^x e^{-νz}(1-e^{-z})^{λ-1} dz with ν = β
        let (lambda, nu) = (0.5f64, 0.25);
        let f = conj_gamma_ratio(lambda).drift_negative(nu).unwrap();
        let cfg = QuadratureConfig::<f64>::fine();
        for &x in &[0.5f64, 1.0, 2.0] {
            let int = integrate_power(
                |z: f64| {
                    let r = if z == 0.0 { 1.0 } else { -(-z).exp_m1() / z };
                    Ok((-nu * z).exp() * r.powf(lambda - 1.0))
                },
                lambda,
                x,
                &cfg,
            )
            .unwrap()
            .value;
            let want = (nu * x).exp() * rgamma(lambda) * int;
            let got = f.w(x).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "x={x}: {got} vs {want}");
        }
    }
}
