use super::{inner, Kernel};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_breaks, integrate_to_infinity};
use crate::real::{Extended, Real};
use crate::specfun::{
    bessel_i_scaled_unchecked, bessel_order_moment_scaled, breaks_to, choose_truncation, gamma_p, ln_gamma,
};

/// `φ(θ) = ln(1 + θ + √(θ(θ+2)))`, Lévy density `e^{-x}I₀(x)/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BesselLadder;

/// `t G(t,x) = t ∫_0^x e^{-y} I_t(y)/y dy`, a probability in `[0,1]`,
/// summed from the power series of `I_t`.
fn order_mass<T: Real>(t: T, x: T) -> Result<T> {
    let ln2 = T::LN_2();
    let mut sum = T::zero();
    for k in 0..100_000usize {
        let kk = T::of(k);
        let a = T::two() * kk + t;
        let ln_c = ln_gamma(a) - a * ln2 - ln_gamma(kk + T::one()) - ln_gamma(kk + t + T::one());
        let term = t * ln_c.exp() * gamma_p(a, x);
        sum += term;
        if a > x && term <= T::epsilon() * T::lit(0.1) * sum {
            return Ok(sum);
        }
    }
    Err(Error::Numerical { what: "Bessel order series did not settle".into(), partial: sum.f64() })
}

impl<T: Real> Kernel<T> for BesselLadder {
    fn phi(&self, theta: T) -> Result<T> {
        Ok((theta + (theta * (theta + T::two())).sqrt()).ln_1p())
    }

    fn kappa(&self) -> T {
        T::zero()
    }

    fn drift(&self) -> T {
        T::zero()
    }

    fn tail(&self, x: T) -> Result<T> {
        let cfg = inner::<T>();
        let root = (T::two() * T::PI()).sqrt();
        let a = x.max(T::one());
        // subtract the leading 1/√(2πz) behaviour of e^{-z}I₀(z)
        let rest = |z: T| Ok((bessel_i_scaled_unchecked(T::zero(), z) - (root * z.sqrt()).recip()) / z);
        let mut t = T::two() / (root * a.sqrt()) + integrate_to_infinity(rest, a, a, &cfg)?.value;
        if x < T::one() {
            // z = e^u
            let head = |u: T| Ok(bessel_i_scaled_unchecked(T::zero(), u.exp()));
            t += integrate(head, x.ln(), T::zero(), &cfg)?.value;
        }
        Ok(t)
    }

    fn density(&self, x: T) -> Result<T> {
        Ok(bessel_i_scaled_unchecked(T::zero(), x) / x)
    }

    fn total_mass(&self) -> Extended<T> {
        Extended::Infinite
    }

    fn first_moment(&self) -> Result<Extended<T>> {
        Ok(Extended::Infinite)
    }

    /// `W(x) = ∫_0^∞ t G(t,x) dt`. For `t >= x` the integrand is below
    /// `(x/2)^t/Γ(t+1)`, which at least halves per unit step.
    fn w(&self, x: T) -> Result<T> {
        let cfg = inner::<T>();
        let lh = (x * T::half()).ln();
        let bound = |t: T| T::two() * (t * lh - ln_gamma(t + T::one())).exp();
        let start = x.max(T::two());
        let (cut, _) = choose_truncation(start, cfg.abs_tol * T::lit(0.1), bound)?;
        let scale = x.ln().abs().max(T::two()).recip();
        let mut pts = breaks_to(scale, cut);
        let s = x.sqrt();
        if s > scale && s < cut {
            pts.push(s);
            pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        }
        Ok(integrate_breaks(|t| order_mass(t, x), &pts, &cfg)?.value)
    }

    fn w_prime(&self, x: T) -> Result<T> {
        Ok(bessel_order_moment_scaled(x, &inner())?.value / x)
    }

    fn w_star(&self, x: T) -> Result<T> {
        let i0 = bessel_i_scaled_unchecked(T::zero(), x);
        let i1 = bessel_i_scaled_unchecked(T::one(), x);
        Ok(x * (i0 + i1) + x * Kernel::<T>::tail(self, x)?)
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
