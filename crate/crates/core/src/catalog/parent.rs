use std::fmt;
use std::sync::Arc;

use super::ScaleFamily;
use crate::bernstein::Func;
use crate::error::Result;
use crate::real::{Extended, Real};

/// Long-run behaviour of the parent process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behavior {
    Oscillates,
    DriftsToPlusInfinity,
    DriftsToMinusInfinity,
}

impl Behavior {
    pub fn as_str(&self) -> &'static str {
        match self {
            Behavior::Oscillates => "oscillates",
            Behavior::DriftsToPlusInfinity => "drifts_to_plus_infinity",
            Behavior::DriftsToMinusInfinity => "drifts_to_minus_infinity",
        }
    }
}

/// Path variation of the parent process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variation {
    Bounded,
    Unbounded,
}

impl Variation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variation::Bounded => "bounded",
            Variation::Unbounded => "unbounded",
        }
    }
}

/// Characteristics of the spectrally negative parent.
#[derive(Clone)]
pub struct ParentSpec<T> {
    /// Gaussian coefficient `√(2d)`.
    pub sigma: T,
    /// `x ↦ Π(-∞,-x)`.
    pub pi_tail: Func<T>,
    pub psi: Func<T>,
    pub behavior: Behavior,
    pub variation: Variation,
    /// `Π(-∞,0)`.
    pub total_jump_mass: Extended<T>,
}

impl<T: Real> fmt::Debug for ParentSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParentSpec")
            .field("sigma", &self.sigma)
            .field("behavior", &self.behavior)
            .field("variation", &self.variation)
            .field("total_jump_mass", &self.total_jump_mass)
            .finish_non_exhaustive()
    }
}

pub(crate) fn parent_of<T: Real>(f: &ScaleFamily<T>) -> Result<ParentSpec<T>> {
    let sigma = (T::two() * f.drift()).sqrt();
    let pi_tail: Func<T> = match f {
        ScaleFamily::DriftNegative(dn) => {
            let (base, beta) = (dn.base().clone(), dn.beta());
            Arc::new(move |x| Ok(base.upsilon_density(x)? + beta * base.upsilon_tail(x)?))
        }
        _ => {
            let g = f.clone();
            Arc::new(move |x| g.upsilon_density(x))
        }
    };
    let g = f.clone();
    let psi: Func<T> = Arc::new(move |theta| g.psi(theta));
    let behavior = if f.is_drift_negative() {
        Behavior::DriftsToMinusInfinity
    } else if f.kappa() > T::zero() {
        Behavior::DriftsToPlusInfinity
    } else {
        Behavior::Oscillates
    };
    let variation = if f.drift() == T::zero() && f.total_mass().is_finite() {
        Variation::Bounded
    } else {
        Variation::Unbounded
    };
    Ok(ParentSpec { sigma, pi_tail, psi, behavior, variation, total_jump_mass: super::Kernel::jump_mass(f) })
}
