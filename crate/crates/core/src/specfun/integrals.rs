//! Improper integrals over an order parameter, truncated with explicit
//! analytic tail bounds.

use super::bessel::bessel_i_scaled_unchecked;
use super::gamma::ln_gamma;
use super::mittag_leffler::{mittag_leffler_scaled, MlParams};
use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, integrate_power, integrate_to_infinity, QuadratureConfig};
use crate::real::Real;

/// Value of a truncated improper integral together with where it was cut
/// and a rigorous bound on the discarded part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub truncation_point: T,
    pub tail_bound: T,
}

/// Doubles `start` until `bound(T) <= target`.
pub(crate) fn choose_truncation<T: Real>(
    start: T,
    target: T,
    mut bound: impl FnMut(T) -> T,
) -> Result<(T, T)> {
    let mut t = start;
    for _ in 0..60 {
        let b = bound(t);
        if b <= target {
            return Ok((t, b));
        }
        t *= T::two();
    }
    Err(Error::Numerical { what: "no truncation point meets the tail bound".into(), partial: f64::NAN })
}

pub(crate) fn breaks_to<T: Real>(scale: T, end: T) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut p = scale;
    while p < end {
        pts.push(p);
        p *= T::two();
    }
    pts.push(end);
    pts
}

/// `ν(y) = ∫_0^∞ y^{t-1}/Γ(t) dt`.
pub fn volterra_nu<T: Real>(y: T, q: &QuadratureConfig<T>) -> Result<T> {
    volterra_nu_truncated(y, q).map(|t| t.value)
}

/// [`volterra_nu`] with its truncation data. For `t >= max(2y, y+1)` the
/// integrand decreases with ratio at most 1/2 per unit step, so the tail is
/// below twice the integrand at the cut.
pub fn volterra_nu_truncated<T: Real>(y: T, q: &QuadratureConfig<T>) -> Result<Truncated<T>> {
    if !(y > T::zero()) {
        return Err(Error::Domain(format!("volterra_nu needs y > 0, got {y}")));
    }
    let ly = y.ln();
    let f = move |t: T| {
        if t == T::zero() {
            return T::zero();
        }
        ((t - T::one()) * ly - ln_gamma(t)).exp()
    };
    let start = (T::two() * y).max(y + T::one()).max(q.truncation_point.min(T::lit(8.0)));
    let (cut, bound) = choose_truncation(start, q.abs_tol * T::lit(0.1), |t| T::two() * f(t))?;
    let scale = (T::one() / ly.abs().max(T::one())).min(T::half());
    let pts = breaks_to(scale, cut);
    let r = integrate_breaks(|t| Ok(f(t)), &pts, q)?;
    Ok(Truncated { value: r.value, truncation_point: cut, tail_bound: bound })
}

/// `∫_0^∞ t I_t(y) dt`.
pub fn bessel_order_moment<T: Real>(y: T, q: &QuadratureConfig<T>) -> Result<T> {
    Ok(bessel_order_moment_scaled(y, q)?.value * y.exp())
}

/// `e^{-y} ∫_0^∞ t I_t(y) dt`, with the tail bounded through
/// `I_t(y) <= (y/2)^t e^{y²/(4(t+1))} / Γ(t+1)`.
pub fn bessel_order_moment_scaled<T: Real>(y: T, q: &QuadratureConfig<T>) -> Result<Truncated<T>> {
    if !(y > T::zero()) {
        return Err(Error::Domain(format!("bessel_order_moment needs y > 0, got {y}")));
    }
    let lh = (y * T::half()).ln();
    let bound = |t: T| {
        let ln_h = t * lh - ln_gamma(t);
        T::two() * (ln_h + y * y / (T::lit(4.0) * (t + T::one())) - y).exp()
    };
    let start = y.max(y * T::half() + T::one()).max(T::two());
    let (cut, tail) = choose_truncation(start, q.abs_tol * T::lit(0.1), bound)?;
    let scale = y.sqrt().max(T::one()) * T::half();
    let pts = breaks_to(scale, cut);
    let r = integrate_breaks(|t: T| Ok(t * bessel_i_scaled_unchecked(t, y)), &pts, q)?;
    Ok(Truncated { value: r.value, truncation_point: cut, tail_bound: tail })
}

/// Residual of the Laplace identity
/// `∫_0^∞ e^{-(θ+γ)x} x^{β-1} E_{α,β}(λx^α) dx = (θ+γ)^{α-β} / ((θ+γ)^α - λ)`.
pub fn ml_laplace_residual<T: Real>(
    p: MlParams<T>,
    lambda: T,
    gamma: T,
    theta: T,
    q: &QuadratureConfig<T>,
) -> Result<T> {
    let (alpha, beta) = (p.alpha(), p.beta());
    if gamma < T::zero() {
        return Err(Error::Domain("tilt γ must be non-negative".into()));
    }
    let s = theta + gamma;
    let growth = if lambda > T::zero() { lambda.powf(alpha.recip()) } else { T::zero() };
    if !(s > growth) {
        return Err(Error::Domain(format!(
            "transform diverges: θ + γ = {s} must exceed λ^(1/α) = {growth}"
        )));
    }
    let tight = QuadratureConfig {
        abs_tol: q.abs_tol * T::lit(0.1),
        rel_tol: (q.abs_tol * T::lit(0.1)).min(q.rel_tol),
        ..*q
    };
    let g = |x: T| mittag_leffler_scaled(p, lambda * x.powf(alpha), s * x);
    let head = integrate_power(g, beta, T::one(), &tight)?.value;
    let decay = (s - growth).recip();
    let tail = integrate_to_infinity(|x: T| Ok(x.powf(beta - T::one()) * g(x)?), T::one(), decay, &tight)?.value;
    let closed = s.powf(alpha - beta) / (s.powf(alpha) - lambda);
    Ok((head + tail - closed).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_i;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::fine()
    }

    #[test]
    fn volterra_self_convergence() {
        let coarse = QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-9, ..cfg() };
        let a = volterra_nu(1.0, &coarse).unwrap();
        let b = volterra_nu(1.0, &cfg()).unwrap();
        assert!(((a - b) / b).abs() < 1e-9);
        // known constant: ∫_0^∞ dt/Γ(t) = 2.80777024202851936522...
        assert!((b - 2.807_770_242_028_519).abs() < 1e-10, "{b}");
    }

    #[test]
    fn volterra_small_and_monotone() {
        let v = volterra_nu(1e-3, &cfg()).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let (a, b) = (volterra_nu(1.0, &cfg()).unwrap(), volterra_nu(2.0, &cfg()).unwrap());
        assert!(b > a);
        // ν(y) ≈ e^y for large y, with correction -∫_0^∞ e^{-yt}/(t(π² + ln²t)) dt
        let y = 20.0f64;
        let big = volterra_nu(y, &cfg()).unwrap();
        assert!(((big - y.exp()) / y.exp()).abs() < 1e-3);
    }

    #[test]
    fn volterra_reports_bound() {
        let t = volterra_nu_truncated(3.0f64, &cfg()).unwrap();
        assert!(t.tail_bound <= 1e-15 && t.truncation_point >= 6.0);
    }

    #[test]
    fn bessel_moment_refinements_agree() {
        let coarse = QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-9, ..cfg() };
        let a = bessel_order_moment(0.5, &coarse).unwrap();
        let b = bessel_order_moment(0.5, &cfg()).unwrap();
        assert!(a > 0.0 && ((a - b) / b).abs() < 1e-8);
        assert!(matches!(bessel_order_moment(0.0f64, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(volterra_nu(-1.0f64, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn bessel_moment_against_direct_sum() {
        // independent evaluation with the unscaled function on a plain grid
        let y = 3.0f64;
        let n = 6000;
        let h = 30.0 / n as f64;
        let direct: f64 = (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * t * bessel_i(t, y).unwrap()
            })
            .sum::<f64>()
            * h;
        let got = bessel_order_moment(y, &cfg()).unwrap();
        assert!(((got - direct) / got).abs() < 1e-6, "{got} vs {direct}");
    }

    #[test]
    fn laplace_residual_examples() {
        let q = QuadratureConfig::default();
        let exp_case = ml_laplace_residual(MlParams::new(1.0, 1.0).unwrap(), -1.0, 0.0, 1.0, &q).unwrap();
        assert!(exp_case < 1e-12);
        let half = ml_laplace_residual(MlParams::new(0.5, 0.5).unwrap(), -1.0, 0.0, 2.0, &q).unwrap();
        assert!(half < q.abs_tol, "{half}");
        let tilted = ml_laplace_residual(MlParams::new(0.9, 1.0).unwrap(), 0.5, 1.0, 1.0, &q).unwrap();
        assert!(tilted < q.abs_tol, "{tilted}");
    }

    #[test]
    fn laplace_residual_grid() {
        let q = QuadratureConfig::default();
        for &a in &[0.3f64, 0.6, 0.9] {
            for &b in &[0.5f64, 1.0, 1.5] {
                for &theta in &[1.0f64, 2.0, 4.0] {
                    let r = ml_laplace_residual(MlParams::new(a, b).unwrap(), -1.0, 0.0, theta, &q).unwrap();
                    assert!(r < q.abs_tol, "α={a} β={b} θ={theta}: {r}");
                }
            }
        }
    }

    #[test]
    fn laplace_residual_domain() {
        let q = QuadratureConfig::default();
        // λ^{1/α} = 4 exceeds θ + γ = 3
        let r = ml_laplace_residual(MlParams::new(0.5, 1.0).unwrap(), 2.0, 1.0, 2.0, &q);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
