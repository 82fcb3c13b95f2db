//! Bernstein functions given by their triple `(κ, d, Υ)`, conjugation, and a
//! sufficient test for specialness.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{integrate_from_zero, integrate_to_infinity, QuadratureConfig};
use crate::real::{Extended, Real};

/// Shared real function of one variable that may fail.
pub type Func<T> = Arc<dyn Fn(T) -> Result<T> + Send + Sync>;

/// Wraps a closure as a [`Func`].
pub fn func<T, F>(f: F) -> Func<T>
where
    F: Fn(T) -> Result<T> + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Killing rate, drift and Lévy measure of a subordinator. The measure is
/// held through its tail `Υ(x,∞)`; mass and first moment are analytic.
#[derive(Clone)]
pub struct BernsteinTriple<T> {
    kappa: T,
    drift: T,
    upsilon_tail: Func<T>,
    upsilon_density: Option<Func<T>>,
    integrated_tail: Option<Func<T>>,
    total_mass: Extended<T>,
    first_moment: Extended<T>,
}

impl<T: Real> fmt::Debug for BernsteinTriple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BernsteinTriple")
            .field("kappa", &self.kappa)
            .field("drift", &self.drift)
            .field("total_mass", &self.total_mass)
            .field("first_moment", &self.first_moment)
            .finish_non_exhaustive()
    }
}

impl<T: Real> BernsteinTriple<T> {
    pub fn new(
        kappa: T,
        drift: T,
        upsilon_tail: Func<T>,
        total_mass: Extended<T>,
        first_moment: Extended<T>,
    ) -> Result<Self> {
        if !(kappa >= T::zero() && kappa.is_finite()) {
            return Err(Error::Parameter(format!("killing rate must be finite and >= 0, got {kappa}")));
        }
        if !(drift >= T::zero() && drift.is_finite()) {
            return Err(Error::Parameter(format!("drift must be finite and >= 0, got {drift}")));
        }
        for (name, v) in [("total mass", total_mass), ("first moment", first_moment)] {
            if let Extended::Finite(v) = v {
                if !(v >= T::zero()) {
                    return Err(Error::Parameter(format!("{name} must be >= 0, got {v}")));
                }
            }
        }
        Ok(Self { kappa, drift, upsilon_tail, upsilon_density: None, integrated_tail: None, total_mass, first_moment })
    }

    /// Attaches the Lévy density `υ`.
    pub fn with_density(mut self, density: Func<T>) -> Self {
        self.upsilon_density = Some(density);
        self
    }

    /// Attaches `x ↦ ∫_0^x Υ(y,∞) dy`, which makes [`eval_phi`] integrate a
    /// continuous function instead of a possibly singular tail.
    pub fn with_integrated_tail(mut self, integrated: Func<T>) -> Self {
        self.integrated_tail = Some(integrated);
        self
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn drift(&self) -> T {
        self.drift
    }

    pub fn total_mass(&self) -> Extended<T> {
        self.total_mass
    }

    pub fn first_moment(&self) -> Extended<T> {
        self.first_moment
    }

    /// `Υ(x,∞)` for `x > 0`.
    pub fn tail(&self, x: T) -> Result<T> {
        (self.upsilon_tail)(x)
    }

    pub fn tail_fn(&self) -> Func<T> {
        self.upsilon_tail.clone()
    }

    /// `υ(x)` when a density was attached.
    pub fn density(&self, x: T) -> Option<Result<T>> {
        self.upsilon_density.as_ref().map(|d| d(x))
    }

    /// Checks the tail is non-negative and non-increasing on `grid`.
    pub fn check_tail(&self, grid: &[T]) -> Result<()> {
        let mut prev = T::infinity();
        for &x in grid {
            let v = self.tail(x)?;
            let slack = T::lit(1e-12) * v.abs().max(T::one());
            if !(v >= -slack) {
                return Err(Error::Parameter(format!("Lévy tail negative at x={x}: {v}")));
            }
            if v > prev + slack {
                return Err(Error::Parameter(format!("Lévy tail increases at x={x}")));
            }
            prev = v;
        }
        Ok(())
    }
}

/// `(κ*, d*, Υ*)` of the conjugate `θ/φ(θ)`, with `Υ*(x,∞) = W′(x) − κ*`.
#[derive(Clone)]
pub struct ConjugateTriple<T> {
    pub kappa_star: T,
    pub drift_star: T,
    pub upsilon_star_tail: Func<T>,
}

impl<T: Real> fmt::Debug for ConjugateTriple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConjugateTriple")
            .field("kappa_star", &self.kappa_star)
            .field("drift_star", &self.drift_star)
            .finish_non_exhaustive()
    }
}

impl<T: Real> ConjugateTriple<T> {
    /// Upgrades to a full triple once mass and first moment of `Υ*` are known.
    pub fn into_triple(self, total_mass: Extended<T>, first_moment: Extended<T>) -> Result<BernsteinTriple<T>> {
        BernsteinTriple::new(self.kappa_star, self.drift_star, self.upsilon_star_tail, total_mass, first_moment)
    }
}

/// `φ(θ) = κ + dθ + θ∫_0^∞ e^{-θx} Υ(x,∞) dx`, or `θ²∫e^{-θx}I(x)dx` for the
/// jump part when the integrated tail `I` is attached.
pub fn eval_phi<T: Real>(t: &BernsteinTriple<T>, theta: T, q: &QuadratureConfig<T>) -> Result<T> {
    if !(theta >= T::zero()) {
        return Err(Error::Domain(format!("φ needs θ >= 0, got {theta}")));
    }
    if theta == T::zero() {
        return Ok(t.kappa);
    }
    // u = θx turns both forms into ∫ e^{-u} g(u) du
    let jumps = match &t.integrated_tail {
        Some(i) => theta * half_line_exp(|u| i(u / theta), q)?,
        None => half_line_exp(|u| (t.upsilon_tail)(u / theta), q)?,
    };
    Ok(t.kappa + t.drift * theta + jumps)
}

fn half_line_exp<T: Real>(g: impl Fn(T) -> Result<T>, q: &QuadratureConfig<T>) -> Result<T> {
    let f = |u: T| {
        let e = (-u).exp();
        if e == T::zero() {
            return Ok(T::zero());
        }
        Ok(e * g(u)?)
    };
    let head = integrate_from_zero(f, T::one(), q)?.value;
    let tail = integrate_to_infinity(f, T::one(), T::one(), q)?.value;
    Ok(head + tail)
}

/// `κ* = 0` if `κ > 0`, else `1/(d + ∫x Υ(dx))`.
pub fn kappa_star<T: Real>(t: &BernsteinTriple<T>) -> T {
    if t.kappa > T::zero() {
        return T::zero();
    }
    match t.first_moment {
        Extended::Infinite => T::zero(),
        Extended::Finite(m) => (t.drift + m).recip(),
    }
}

/// `d* = 0` if `d > 0` or `Υ(0,∞) = ∞`, else `1/(κ + Υ(0,∞))`.
pub fn d_star<T: Real>(t: &BernsteinTriple<T>) -> T {
    if t.drift > T::zero() {
        return T::zero();
    }
    match t.total_mass {
        Extended::Infinite => T::zero(),
        Extended::Finite(m) => (t.kappa + m).recip(),
    }
}

/// Reads `(κ*, d*, Υ*)` off the potential density `W′`, checking on `grid`
/// that `W′ >= κ*` as specialness requires.
pub fn conjugate<T: Real>(t: &BernsteinTriple<T>, potential_density: Func<T>, grid: &[T]) -> Result<ConjugateTriple<T>> {
    let ks = kappa_star(t);
    let ds = d_star(t);
    let slack = T::lit(1e-9) * ks.max(T::one());
    for &x in grid {
        let w = potential_density(x)?;
        if w < ks - slack {
            return Err(Error::Inconsistency(format!(
                "potential density {w} below κ* = {ks} at x={x}; the function is not special"
            )));
        }
    }
    let tail = func(move |x| Ok(potential_density(x)? - ks));
    Ok(ConjugateTriple { kappa_star: ks, drift_star: ds, upsilon_star_tail: tail })
}

/// Sufficient condition for specialness: `log Υ(x,∞)` convex on the grid.
///
/// `false` means "not certified", never "not special". A tail that vanishes
/// and then becomes positive again is malformed.
pub fn is_special_sufficient<T: Real>(t: &BernsteinTriple<T>, grid: &[T]) -> Result<bool> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.first().is_some_and(|&x| !(x > T::zero())) {
        return Err(Error::Domain("grid must be positive and strictly increasing".into()));
    }
    let vals: Vec<T> = grid.iter().map(|&x| t.tail(x)).collect::<Result<_>>()?;
    if let Some(first_zero) = vals.iter().position(|&v| v <= T::zero()) {
        if vals[first_zero..].iter().any(|&v| v > T::zero()) {
            return Err(Error::Parameter("Lévy tail vanishes and then becomes positive".into()));
        }
        // a tail dying at a finite point is log-convex only if it was zero throughout
        return Ok(first_zero == 0);
    }
    let logs: Vec<T> = vals.iter().map(|v| v.ln()).collect();
    for i in 1..grid.len().saturating_sub(1) {
        let (x0, x1, x2) = (grid[i - 1], grid[i], grid[i + 1]);
        let w = (x2 - x1) / (x2 - x0);
        let chord = w * logs[i - 1] + (T::one() - w) * logs[i + 1];
        let tol = T::lit(1e-10) * logs[i].abs().max(T::one());
        if logs[i] > chord + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_half_line;
    use crate::specfun::{gamma, gamma_q};
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::fine()
    }

    fn zero_tail() -> Func<f64> {
        func(|_| Ok(0.0))
    }

    /// Gamma-jump compound Poisson with killing: `Υ(x,∞) = λ Q(ν, γx)`.
    fn gamma_cp(kappa: f64, lambda: f64, g: f64, nu: f64) -> BernsteinTriple<f64> {
        BernsteinTriple::new(
            kappa,
            0.0,
            func(move |x| Ok(lambda * gamma_q(nu, g * x))),
            Extended::Finite(lambda),
            Extended::Finite(lambda * nu / g),
        )
        .unwrap()
    }

    #[test]
    fn affine_case_and_zero() {
        let t = BernsteinTriple::new(1.0, 2.0, zero_tail(), Extended::Finite(0.0), Extended::Finite(0.0)).unwrap();
        assert_eq!(eval_phi(&t, 0.0, &cfg()).unwrap(), 1.0);
        assert!((eval_phi(&t, 3.0, &cfg()).unwrap() - 7.0).abs() < 1e-14);
        assert!(matches!(eval_phi(&t, -1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn gamma_jumps_against_closed_form() {
        let t = gamma_cp(1.0, 1.0, 1.0, 0.5);
        let want = 1.0 + (1.0 - 0.5f64.powf(0.5));
        let got = eval_phi(&t, 1.0, &cfg()).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn gamma_first_moment_matches_quadrature() {
        // ∫ x Υ(dx) = ∫ Υ(x,∞) dx for the Gamma jump law
        let t = gamma_cp(0.0, 1.0, 1.0, 0.5);
        let m = integrate_half_line(|x| t.tail(x), &cfg()).unwrap().value;
        assert!((m - 0.5).abs() < 1e-11);
        assert!((kappa_star(&t) - 2.0).abs() < 1e-15);
        assert_eq!(d_star(&t), 1.0);
    }

    #[test]
    fn star_quantities_vanish_against_their_partners() {
        let t = gamma_cp(1.0, 1.0, 1.0, 0.5);
        assert_eq!(kappa_star(&t), 0.0);
        assert_eq!(d_star(&t), 0.5);
        let b = BernsteinTriple::new(0.0, 1.0, zero_tail(), Extended::Finite(0.0), Extended::Finite(0.0)).unwrap();
        assert_eq!(d_star(&b), 0.0);
        assert_eq!(kappa_star(&b), 1.0);
        let heavy = BernsteinTriple::new(0.0, 0.0, func(|x: f64| Ok(x.powf(-0.5))), Extended::Infinite, Extended::Infinite)
            .unwrap();
        assert_eq!(kappa_star(&heavy), 0.0);
        assert_eq!(d_star(&heavy), 0.0);
    }

    #[test]
    fn brownian_conjugate_tail() {
        // φ(θ) = κ + dθ, W′(x) = e^{-κx/d}/d
        let (k, d) = (1.5, 0.5);
        let t = BernsteinTriple::new(k, d, zero_tail(), Extended::Finite(0.0), Extended::Finite(0.0)).unwrap();
        let wp = func(move |x: f64| Ok((-k * x / d).exp() / d));
        let grid: Vec<f64> = (1..50).map(|i| i as f64 * 0.1).collect();
        let c = conjugate(&t, wp, &grid).unwrap();
        assert_eq!((c.kappa_star, c.drift_star), (0.0, 0.0));
        let x = 0.7;
        assert!(((c.upsilon_star_tail)(x).unwrap() - (-k * x / d).exp() / d).abs() < 1e-15);
        // the conjugate has mass 1/d and first moment 1/κ; φ·φ* = θ
        let star = c.into_triple(Extended::Finite(1.0 / d), Extended::Finite(1.0 / k)).unwrap();
        for &th in &[0.3, 1.0, 4.0] {
            let prod = eval_phi(&t, th, &cfg()).unwrap() * eval_phi(&star, th, &cfg()).unwrap();
            assert!((prod / th - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugate_rejects_density_below_kappa_star() {
        let t = gamma_cp(0.0, 1.0, 1.0, 0.5);
        let bad = func(|x: f64| Ok(if x > 2.0 { 1.0 } else { 3.0 }));
        let r = conjugate(&t, bad, &[1.0, 3.0]);
        assert!(matches!(r, Err(Error::Inconsistency(_))));
    }

    #[test]
    fn log_convexity_checks() {
        let exp = BernsteinTriple::new(0.0, 0.0, func(|x: f64| Ok((-x).exp())), Extended::Finite(1.0), Extended::Finite(1.0))
            .unwrap();
        let grid: Vec<f64> = (1..100).map(|i| i as f64 * 0.05).collect();
        assert!(is_special_sufficient(&exp, &grid).unwrap());
        // gamma-ratio tail c e^{-x(ν+λ-1)/β}(e^{x/β}-1)^{λ-1}/Γ(λ)
        let (b, c, nu, lam) = (1.0, 1.0, 0.5, 0.5);
        let tail = func(move |x: f64| Ok(c * (-x * (nu + lam - 1.0) / b).exp() * ((x / b).exp_m1()).powf(lam - 1.0) / gamma(lam)));
        let g2 = BernsteinTriple::new(0.0, 0.0, tail, Extended::Infinite, Extended::Finite(1.0)).unwrap();
        assert!(is_special_sufficient(&g2, &grid).unwrap());
        // a log-concave tail is not certified
        let gauss = BernsteinTriple::new(0.0, 0.0, func(|x: f64| Ok((-x * x).exp())), Extended::Finite(1.0), Extended::Finite(0.5))
            .unwrap();
        assert!(!is_special_sufficient(&gauss, &grid).unwrap());
    }

    #[test]
    fn malformed_tails() {
        let jumpy = BernsteinTriple::new(
            0.0,
            0.0,
            func(|x: f64| Ok(if x < 1.0 { 0.0 } else { 1.0 })),
            Extended::Finite(1.0),
            Extended::Finite(1.0),
        )
        .unwrap();
        assert!(jumpy.check_tail(&[0.5, 1.5]).is_err());
        assert!(matches!(is_special_sufficient(&jumpy, &[0.5, 1.5, 2.0]), Err(Error::Parameter(_))));
        assert!(BernsteinTriple::new(-1.0, 0.0, zero_tail(), Extended::Finite(0.0), Extended::Finite(0.0)).is_err());
    }

    proptest! {
        #[test]
        fn phi_increasing_and_concave(th in 0.05f64..20.0, h in 0.01f64..2.0) {
            let t = gamma_cp(0.3, 2.0, 1.5, 0.4);
            let q = QuadratureConfig::default();
            let (a, b, c) = (
                eval_phi(&t, th, &q).unwrap(),
                eval_phi(&t, th + h, &q).unwrap(),
                eval_phi(&t, th + 2.0 * h, &q).unwrap(),
            );
            prop_assert!(b >= a - 1e-10 && c >= b - 1e-10);
            prop_assert!(a - 2.0 * b + c <= 1e-9);
        }
    }
}
