//! Closed-form scale functions, their conjugates, tilting and the
//! drift-to-minus-infinity construction.
//!
//! Every family is a descending ladder height exponent `φ` together with the
//! scale function `W` of the parent process `ψ(θ) = θφ(θ)`. The conjugate
//! scale function `W*(x) = d + κx + ∫_0^x Υ(y,∞) dy` belongs to
//! `ψ*(θ) = θ²/φ(θ)`.

mod abate_whitt;
mod bessel_ladder;
mod brownian;
mod conjugate;
mod drift_negative;
mod gamma_compound;
mod gamma_ratio;
mod killed_stable;
mod linnik;
mod parent;
mod parse;
mod tilted;
mod two_stable;

use crate::bernstein::{self, func, BernsteinTriple};
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;
use crate::real::{Extended, Real};

pub use abate_whitt::AbateWhitt;
pub use bessel_ladder::BesselLadder;
pub use brownian::BrownianDrift;
pub use conjugate::Conjugate;
pub use drift_negative::DriftNegative;
pub use gamma_compound::GammaCompound;
pub use gamma_ratio::GammaRatio;
pub use killed_stable::KilledStable;
pub use linnik::Linnik;
pub use parent::{Behavior, ParentSpec, Variation};
pub use parse::{family_keys, parse_family, parse_key_values, FAMILY_NAMES, MODIFIER_KEYS};
pub use tilted::Tilted;
pub use two_stable::TwoStable;

/// Accuracy used by integral-form scale functions.
pub(crate) fn inner<T: Real>() -> QuadratureConfig<T> {
    QuadratureConfig::fine()
}

pub(crate) fn check_param(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(what.to_string()))
    }
}

/// Per-family formulas. `tail` and `density` describe the jump part only;
/// `w`, `w_prime`, `w_star` are called with `x > 0`.
pub(crate) trait Kernel<T: Real> {
    fn phi(&self, theta: T) -> Result<T>;
    fn kappa(&self) -> T;
    fn drift(&self) -> T;
    /// `Υ(x,∞)`.
    fn tail(&self, x: T) -> Result<T>;
    /// `υ(x)`.
    fn density(&self, x: T) -> Result<T>;
    fn total_mass(&self) -> Extended<T>;
    fn first_moment(&self) -> Result<Extended<T>>;
    fn w(&self, x: T) -> Result<T>;
    fn w_prime(&self, x: T) -> Result<T>;
    fn w_star(&self, x: T) -> Result<T>;
    fn w_star_prime(&self, x: T) -> Result<T> {
        Ok(self.kappa() + self.tail(x)?)
    }
    /// `W(0) = d*`.
    fn w_zero(&self) -> T;
    /// `W′(0+)`.
    fn w_prime_zero(&self) -> Extended<T>;
    /// `υ(0+)`, the total mass of the parent's Lévy measure.
    fn jump_mass(&self) -> Extended<T>;
}

/// A scale-function family. Construct through the checked constructors
/// such as [`ScaleFamily::brownian_drift`] or through [`parse_family`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleFamily<T> {
    BrownianDrift(BrownianDrift<T>),
    GammaRatio(GammaRatio<T>),
    TwoStable(TwoStable<T>),
    AbateWhitt(AbateWhitt<T>),
    KilledStable(KilledStable<T>),
    GammaCompound(GammaCompound<T>),
    Linnik(Linnik<T>),
    BesselLadder(BesselLadder),
    Tilted(Tilted<T>),
    DriftNegative(DriftNegative<T>),
    Conjugate(Conjugate<T>),
}

macro_rules! dispatch {
    ($self:expr, $k:ident => $e:expr) => {
        match $self {
            ScaleFamily::BrownianDrift($k) => $e,
            ScaleFamily::GammaRatio($k) => $e,
            ScaleFamily::TwoStable($k) => $e,
            ScaleFamily::AbateWhitt($k) => $e,
            ScaleFamily::KilledStable($k) => $e,
            ScaleFamily::GammaCompound($k) => $e,
            ScaleFamily::Linnik($k) => $e,
            ScaleFamily::BesselLadder($k) => $e,
            ScaleFamily::Tilted($k) => $e,
            ScaleFamily::DriftNegative($k) => $e,
            ScaleFamily::Conjugate($k) => $e,
        }
    };
}

impl<T: Real> Kernel<T> for ScaleFamily<T> {
    fn phi(&self, theta: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::phi(k, theta))
    }
    fn kappa(&self) -> T {
        dispatch!(self, k => Kernel::<T>::kappa(k))
    }
    fn drift(&self) -> T {
        dispatch!(self, k => Kernel::<T>::drift(k))
    }
    fn tail(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::tail(k, x))
    }
    fn density(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::density(k, x))
    }
    fn total_mass(&self) -> Extended<T> {
        dispatch!(self, k => Kernel::<T>::total_mass(k))
    }
    fn first_moment(&self) -> Result<Extended<T>> {
        dispatch!(self, k => Kernel::<T>::first_moment(k))
    }
    fn w(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::w(k, x))
    }
    fn w_prime(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::w_prime(k, x))
    }
    fn w_star(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::w_star(k, x))
    }
    fn w_star_prime(&self, x: T) -> Result<T> {
        dispatch!(self, k => Kernel::<T>::w_star_prime(k, x))
    }
    fn w_zero(&self) -> T {
        dispatch!(self, k => Kernel::<T>::w_zero(k))
    }
    fn w_prime_zero(&self) -> Extended<T> {
        dispatch!(self, k => Kernel::<T>::w_prime_zero(k))
    }
    fn jump_mass(&self) -> Extended<T> {
        dispatch!(self, k => Kernel::<T>::jump_mass(k))
    }
}

fn nonneg<T: Real>(x: T, what: &str) -> Result<()> {
    if x >= T::zero() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs a non-negative argument, got {x}")))
    }
}

impl<T: Real> ScaleFamily<T> {
    pub fn brownian_drift(kappa: T, d: T) -> Result<Self> {
        Ok(Self::BrownianDrift(BrownianDrift::new(kappa, d)?))
    }

    pub fn gamma_ratio(beta: T, c: T, nu: T, lambda: T) -> Result<Self> {
        Ok(Self::GammaRatio(GammaRatio::new(beta, c, nu, lambda)?))
    }

    /// `φ(θ) = a(θ+m)^{β-α} + b(θ+m)^β`; a positive `m` is realised as a tilt.
    pub fn two_stable(a: T, b: T, alpha: T, beta: T, m: T) -> Result<Self> {
        check_param(m >= T::zero() && m.is_finite(), "two_stable needs m >= 0")?;
        let base = Self::TwoStable(TwoStable::new(a, b, alpha, beta)?);
        if m > T::zero() {
            base.tilt(m)
        } else {
            Ok(base)
        }
    }

    pub fn abate_whitt(lambda: T, mu: T) -> Result<Self> {
        Ok(Self::AbateWhitt(AbateWhitt::new(lambda, mu)?))
    }

    pub fn killed_stable(kappa: T, c: T, alpha: T, gamma: T) -> Result<Self> {
        Ok(Self::KilledStable(KilledStable::new(kappa, c, alpha, gamma)?))
    }

    pub fn gamma_compound(kappa: T, lambda: T, gamma: T, nu: T) -> Result<Self> {
        Ok(Self::GammaCompound(GammaCompound::new(kappa, lambda, gamma, nu)?))
    }

    pub fn linnik(lambda: T, alpha: T) -> Result<Self> {
        Ok(Self::Linnik(Linnik::new(lambda, alpha)?))
    }

    pub fn bessel_ladder() -> Self {
        Self::BesselLadder(BesselLadder)
    }

    /// Exponential tilt `φ_β(θ) = φ(θ+β)`.
    pub fn tilt(&self, beta: T) -> Result<Self> {
        if !(beta > T::zero() && beta.is_finite()) {
            return Err(Error::Domain(format!("tilt needs β > 0, got {beta}")));
        }
        if self.is_drift_negative() {
            return Err(Error::Unsupported("tilting a drift-negative family".into()));
        }
        Ok(Self::Tilted(Tilted::new(self.clone(), beta)?))
    }

    /// Parent `ψ(θ) = (θ-β)φ(θ)` that drifts to `-∞`; needs `κ = 0`.
    pub fn drift_negative(&self, beta: T) -> Result<Self> {
        Ok(Self::DriftNegative(DriftNegative::new(self.clone(), beta)?))
    }

    /// The family of `φ* = θ/φ`, whose scale function is this family's `W*`.
    pub fn conjugate_family(&self) -> Result<Self> {
        match self {
            Self::DriftNegative(_) => Err(Error::Unsupported(
                "a drift-negative family has no conjugate scale function".into(),
            )),
            Self::Conjugate(c) => Ok(c.base().clone()),
            _ => Ok(Self::Conjugate(Conjugate::new(self.clone())?)),
        }
    }

    pub fn is_drift_negative(&self) -> bool {
        matches!(self, Self::DriftNegative(_))
    }

    /// Short machine name, as accepted by [`parse_family`].
    pub fn name(&self) -> &'static str {
        match self {
            Self::BrownianDrift(_) => "brownian_drift",
            Self::GammaRatio(_) => "gamma_ratio",
            Self::TwoStable(_) => "two_stable",
            Self::AbateWhitt(_) => "abate_whitt",
            Self::KilledStable(_) => "killed_stable",
            Self::GammaCompound(_) => "gamma_compound",
            Self::Linnik(_) => "linnik",
            Self::BesselLadder(_) => "bessel_ladder",
            Self::Tilted(_) => "tilted",
            Self::DriftNegative(_) => "drift_negative",
            Self::Conjugate(_) => "conjugate",
        }
    }

    /// Deterministic description including all parameters.
    pub fn describe(&self) -> String {
        match self {
            Self::BrownianDrift(k) => format!("brownian_drift(kappa={}, d={})", k.kappa(), k.d()),
            Self::GammaRatio(k) => {
                format!("gamma_ratio(beta={}, c={}, nu={}, lambda={})", k.beta(), k.c(), k.nu(), k.lambda())
            }
            Self::TwoStable(k) => {
                format!("two_stable(a={}, b={}, alpha={}, beta={})", k.a(), k.b(), k.alpha(), k.beta())
            }
            Self::AbateWhitt(k) => format!("abate_whitt(lambda={}, mu={})", k.lambda(), k.mu()),
            Self::KilledStable(k) => {
                format!("killed_stable(kappa={}, c={}, alpha={}, gamma={})", k.kappa(), k.c(), k.alpha(), k.gamma())
            }
            Self::GammaCompound(k) => format!(
                "gamma_compound(kappa={}, lambda={}, gamma={}, nu={})",
                k.kappa(),
                k.lambda(),
                k.gamma(),
                k.nu()
            ),
            Self::Linnik(k) => format!("linnik(lambda={}, alpha={})", k.lambda(), k.alpha()),
            Self::BesselLadder(_) => "bessel_ladder()".to_string(),
            Self::Tilted(k) => format!("tilt({}, beta={})", k.base().describe(), k.beta()),
            Self::DriftNegative(k) => format!("drift_negative({}, beta={})", k.base().describe(), k.beta()),
            Self::Conjugate(k) => format!("conjugate({})", k.base().describe()),
        }
    }

    /// Same family with another scalar type.
    pub fn cast<U: Real>(&self) -> ScaleFamily<U> {
        let c = |v: T| U::lit(v.f64());
        match self {
            Self::BrownianDrift(k) => ScaleFamily::BrownianDrift(BrownianDrift::new_unchecked(c(k.kappa()), c(k.d()))),
            Self::GammaRatio(k) => {
                ScaleFamily::GammaRatio(GammaRatio::new_unchecked(c(k.beta()), c(k.c()), c(k.nu()), c(k.lambda())))
            }
            Self::TwoStable(k) => {
                ScaleFamily::TwoStable(TwoStable::new_unchecked(c(k.a()), c(k.b()), c(k.alpha()), c(k.beta())))
            }
            Self::AbateWhitt(k) => ScaleFamily::AbateWhitt(AbateWhitt::new_unchecked(c(k.lambda()), c(k.mu()))),
            Self::KilledStable(k) => ScaleFamily::KilledStable(KilledStable::new_unchecked(
                c(k.kappa()),
                c(k.c()),
                c(k.alpha()),
                c(k.gamma()),
            )),
            Self::GammaCompound(k) => ScaleFamily::GammaCompound(GammaCompound::new_unchecked(
                c(k.kappa()),
                c(k.lambda()),
                c(k.gamma()),
                c(k.nu()),
            )),
            Self::Linnik(k) => ScaleFamily::Linnik(Linnik::new_unchecked(c(k.lambda()), c(k.alpha()))),
            Self::BesselLadder(_) => ScaleFamily::BesselLadder(BesselLadder),
            Self::Tilted(k) => ScaleFamily::Tilted(Tilted::from_parts(k.base().cast(), c(k.beta()))),
            Self::DriftNegative(k) => {
                ScaleFamily::DriftNegative(DriftNegative::from_parts(k.base().cast(), c(k.beta())))
            }
            Self::Conjugate(k) => ScaleFamily::Conjugate(Conjugate::from_base(k.base().cast())),
        }
    }

    /// Scale function; zero on the negative half-line and `d*` at the origin.
    pub fn w(&self, x: T) -> Result<T> {
        if x.is_nan() {
            return Err(Error::Domain("W at NaN".into()));
        }
        if x < T::zero() {
            return Ok(T::zero());
        }
        if x == T::zero() {
            return Ok(Kernel::w_zero(self));
        }
        Kernel::w(self, x)
    }

    /// Density of the scale measure on `(0,∞)`.
    pub fn w_prime(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("W′ needs x > 0, got {x}")));
        }
        Kernel::w_prime(self, x)
    }

    /// Conjugate scale function `W*`.
    pub fn w_star(&self, x: T) -> Result<T> {
        nonneg(x, "W*")?;
        if x == T::zero() {
            if self.is_drift_negative() {
                return Err(Error::Unsupported("W* of a drift-negative family".into()));
            }
            return Ok(Kernel::drift(self));
        }
        Kernel::w_star(self, x)
    }

    /// `W*′(x) = κ + Υ(x,∞)`.
    pub fn w_star_prime(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("W*′ needs x > 0, got {x}")));
        }
        if self.is_drift_negative() {
            return Err(Error::Unsupported("W* of a drift-negative family".into()));
        }
        Kernel::w_star_prime(self, x)
    }

    /// Ladder height exponent `φ`.
    pub fn phi_ladder(&self, theta: T) -> Result<T> {
        nonneg(theta, "φ")?;
        Kernel::phi(self, theta)
    }

    /// Parent exponent: `θφ(θ)`, or `(θ-β)φ(θ)` for a drift-negative family.
    pub fn psi(&self, theta: T) -> Result<T> {
        nonneg(theta, "ψ")?;
        let phi = Kernel::phi(self, theta)?;
        Ok((theta - self.phi_zero()) * phi)
    }

    /// `Φ(0)`, the largest root of `ψ = 0`.
    pub fn phi_zero(&self) -> T {
        match self {
            Self::DriftNegative(k) => k.beta(),
            _ => T::zero(),
        }
    }

    pub fn kappa(&self) -> T {
        Kernel::kappa(self)
    }

    pub fn drift(&self) -> T {
        Kernel::drift(self)
    }

    pub fn total_mass(&self) -> Extended<T> {
        Kernel::total_mass(self)
    }

    pub fn first_moment(&self) -> Result<Extended<T>> {
        Kernel::first_moment(self)
    }

    /// `Υ(x,∞)` of the ladder subordinator.
    pub fn upsilon_tail(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("Lévy tail needs x > 0, got {x}")));
        }
        Kernel::tail(self, x)
    }

    /// `υ(x)` of the ladder subordinator.
    pub fn upsilon_density(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("Lévy density needs x > 0, got {x}")));
        }
        Kernel::density(self, x)
    }

    /// `W′(0+)`, possibly infinite.
    pub fn w_prime_zero(&self) -> Extended<T> {
        Kernel::w_prime_zero(self)
    }

    /// Ladder triple with analytic mass and first moment.
    pub fn triple(&self) -> Result<BernsteinTriple<T>> {
        let (tail_src, dens_src, int_src) = (self.clone(), self.clone(), self.clone());
        let kappa = self.kappa();
        let drift = self.drift();
        let t = BernsteinTriple::new(
            kappa,
            drift,
            func(move |x| Kernel::tail(&tail_src, x)),
            self.total_mass(),
            self.first_moment()?,
        )?
        .with_density(func(move |x| Kernel::density(&dens_src, x)));
        if self.is_drift_negative() {
            return Ok(t);
        }
        // ∫_0^x Υ(y,∞) dy = W*(x) - d - κx
        Ok(t.with_integrated_tail(func(move |x: T| {
            if x <= T::zero() {
                return Ok(T::zero());
            }
            Ok(Kernel::w_star(&int_src, x)? - drift - kappa * x)
        })))
    }

    /// `κ*` of the conjugate exponent.
    pub fn kappa_star(&self) -> Result<T> {
        Ok(bernstein::kappa_star(&self.triple()?))
    }

    /// `d*` of the conjugate exponent.
    pub fn d_star(&self) -> Result<T> {
        Ok(bernstein::d_star(&self.triple()?))
    }

    /// Levy characteristics of the parent process.
    pub fn parent(&self) -> Result<ParentSpec<T>> {
        parent::parent_of(self)
    }
}
