use levy_scale::bernstein::{conjugate, eval_phi, func};
use levy_scale::catalog::{parse_family, parse_key_values, ScaleFamily};
use levy_scale::quad::integrate_from_zero;
use levy_scale::{Family, Quadrature};
use proptest::prelude::*;

fn families() -> Vec<Family> {
    vec![
        ScaleFamily::brownian_drift(1.0, 1.0).unwrap(),
        ScaleFamily::gamma_ratio(1.0, 1.0, 0.5, 0.5).unwrap(),
        ScaleFamily::two_stable(1.0, 1.0, 0.5, 0.5, 0.0).unwrap(),
        ScaleFamily::abate_whitt(1.0, 2.0).unwrap(),
        ScaleFamily::killed_stable(1.0, 1.0, 0.5, 0.0).unwrap(),
        ScaleFamily::gamma_compound(1.0, 1.0, 1.0, 0.5).unwrap(),
        ScaleFamily::linnik(1.0, 1.0).unwrap(),
        ScaleFamily::bessel_ladder(),
    ]
}

const THETAS: [f64; 8] = [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

#[test]
fn triple_reproduces_phi_and_is_bernstein_shaped() {
    let q = Quadrature::default();
    for f in families() {
        let t = f.triple().unwrap();
        let vals: Vec<f64> = THETAS.iter().map(|&th| eval_phi(&t, th, &q).unwrap()).collect();
        for (&th, &v) in THETAS.iter().zip(&vals) {
            let want = f.phi_ladder(th).unwrap();
            assert!(((v - want) / want).abs() < 1e-7, "{} θ={th}: {v} vs {want}", f.describe());
        }
        assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{}", f.describe());
        // chord slopes decrease
        let slopes: Vec<f64> = THETAS.windows(2).zip(vals.windows(2)).map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0])).collect();
        assert!(slopes.windows(2).all(|s| s[1] <= s[0] * (1.0 + 1e-9)), "{}: {slopes:?}", f.describe());
    }
}

#[test]
fn conjugate_triple_from_potential_density() {
    let q = Quadrature::default();
    let grid = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let specials = [
        ScaleFamily::brownian_drift(1.0, 1.0).unwrap(),
        ScaleFamily::gamma_ratio(1.0, 1.0, 0.5, 0.5).unwrap(),
        ScaleFamily::abate_whitt(1.0, 2.0).unwrap(),
        ScaleFamily::killed_stable(1.0, 1.0, 0.5, 0.0).unwrap(),
        ScaleFamily::gamma_compound(1.0, 1.0, 1.0, 0.5).unwrap(),
    ];
    for f in specials {
        let g = f.clone();
        let star = f.conjugate_family().unwrap();
        let ct = conjugate(&f.triple().unwrap(), func(move |x| g.w_prime(x)), &grid).unwrap();
        assert_eq!(ct.kappa_star, f.kappa_star().unwrap());
        assert_eq!(ct.drift_star, f.d_star().unwrap());
        let t = ct.into_triple(star.total_mass(), star.first_moment().unwrap()).unwrap();
        for th in [0.5, 1.0, 2.0] {
            let prod = eval_phi(&t, th, &q).unwrap() * f.phi_ladder(th).unwrap();
            assert!(((prod - th) / th).abs() < 1e-6, "{} θ={th}: φφ* = {prod}", f.describe());
        }
    }
}

#[test]
fn conjugate_coefficients_are_complementary() {
    for f in families() {
        let (k, d) = (f.kappa(), f.drift());
        let (ks, ds) = (f.kappa_star().unwrap(), f.d_star().unwrap());
        assert_eq!(k * ks, 0.0, "{}", f.describe());
        assert_eq!(d * ds, 0.0, "{}", f.describe());
        // W(0) = d*
        assert!((f.w(0.0).unwrap() - ds).abs() < 1e-14, "{}", f.describe());
    }
}

/// `∫_0^x (κ + Υ(y,∞)) W′(x-y) dy = 1` when `d = d* = 0`.
fn volterra_residual(f: &Family, x: f64) -> f64 {
    let q = Quadrature::default();
    let k = f.kappa();
    let h = x / 2.0;
    // split so that each singular endpoint sits at 0
    let a = integrate_from_zero(|y| Ok((k + f.upsilon_tail(y)?) * f.w_prime(x - y)?), h, &q).unwrap().value;
    let b = integrate_from_zero(|s| Ok((k + f.upsilon_tail(x - s)?) * f.w_prime(s)?), h, &q).unwrap().value;
    a + b - 1.0
}

#[test]
fn volterra_identity_without_drifts() {
    let fams = [
        ScaleFamily::gamma_ratio(1.0, 1.0, 0.5, 0.5).unwrap(),
        ScaleFamily::killed_stable(1.0, 1.0, 0.5, 0.0).unwrap(),
    ];
    for f in &fams {
        assert_eq!((f.drift(), f.d_star().unwrap()), (0.0, 0.0));
        for x in [0.25, 1.0, 3.0] {
            let r = volterra_residual(f, x);
            assert!(r.abs() < 1e-4, "{} x={x}: {r:e}", f.describe());
        }
    }
}

#[test]
fn slope_at_zero_is_finite_exactly_when_expected() {
    for f in families() {
        let parent = f.parent().unwrap();
        let expect_finite = parent.sigma > 0.0 || parent.total_jump_mass.is_finite();
        let w0 = f.w_prime_zero();
        assert_eq!(w0.is_finite(), expect_finite, "{}", f.describe());
        let near = f.w_prime(1e-9).unwrap();
        if expect_finite {
            assert!((near - w0.value()).abs() < 1e-4 * (1.0 + w0.value()), "{}: {near}", f.describe());
        } else {
            assert!(near > 10.0 * f.w_prime(1e-3).unwrap(), "{}: {near}", f.describe());
        }
    }
}

#[test]
fn tilted_family_verifies() {
    use levy_scale::oracle::{verify_family, Tolerances, DEFAULT_THETA_GRID, DEFAULT_X_GRID};
    let f = ScaleFamily::gamma_compound(1.0, 1.0, 1.0, 0.5).unwrap().tilt(0.7).unwrap();
    let r = verify_family(&f, &DEFAULT_X_GRID, &DEFAULT_THETA_GRID, &Tolerances::default()).unwrap();
    assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tilt_shifts_phi(beta in 0.05f64..3.0, theta in 0.05f64..10.0) {
        let base = ScaleFamily::gamma_compound(1.0, 1.0, 1.0, 0.5).unwrap();
        let t = base.tilt(beta).unwrap().triple().unwrap();
        let got = eval_phi(&t, theta, &Quadrature::default()).unwrap();
        let want = base.phi_ladder(theta + beta).unwrap();
        prop_assert!(((got - want) / want).abs() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn gamma_compound_starts_at_reciprocal_mass(k in 0.0f64..3.0, l in 0.1f64..3.0, g in 0.2f64..3.0, nu in 0.1f64..0.9) {
        let f = ScaleFamily::gamma_compound(k, l, g, nu).unwrap();
        let w0 = f.w(0.0).unwrap();
        prop_assert!((w0 - 1.0 / (k + l)).abs() < 1e-13 * w0.max(1.0));
    }

    #[test]
    fn brownian_w_is_increasing_and_concave(k in 0.01f64..5.0, d in 0.05f64..5.0, x in 0.0f64..20.0) {
        let f = ScaleFamily::brownian_drift(k, d).unwrap();
        let (a, b, c) = (f.w(x).unwrap(), f.w(x + 0.1).unwrap(), f.w(x + 0.2).unwrap());
        prop_assert!(b >= a && c >= b);
        prop_assert!(b - a >= c - b - 1e-15);
        prop_assert!(c <= 1.0 / k + 1e-12);
    }

    #[test]
    fn parsed_family_matches_constructor(k in 0.0f64..3.0, l in 0.1f64..3.0, g in 0.2f64..3.0, nu in 0.1f64..0.9, beta in 0.0f64..2.0) {
        // `{}` on f64 prints the shortest string that reads back exactly
        let text = format!("family=gamma_compound kappa={k} lambda={l} gamma={g} nu={nu} tilt={beta}");
        let parsed: Family = parse_family(&parse_key_values(&text).unwrap()).unwrap();
        let built = ScaleFamily::gamma_compound(k, l, g, nu).unwrap().tilt(beta).unwrap();
        prop_assert_eq!(parsed, built);
    }
}
