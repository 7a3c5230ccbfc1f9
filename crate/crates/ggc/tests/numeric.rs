use std::f64::consts::PI;

use ggc::numeric::*;
use ggc_core::poly::rat;
use proptest::prelude::*;

fn sym(s: &str) -> EuclidSymbol {
    EuclidSymbol::parse(s).unwrap()
}

fn grid(n: usize) -> Grid {
    Grid::new(n, 16.0 * PI).unwrap()
}

#[test]
fn grid_validation() {
    assert_eq!(Grid::new(100, 1.0), Err(NumericError::GridSize(100)));
    assert_eq!(Grid::new(64, 0.0), Err(NumericError::Period(0.0)));
    let g = Grid::standard();
    let xi = g.xi_weighted();
    assert_eq!(xi.len(), g.n + 1);
    assert_eq!(xi[0].0, -xi[g.n].0);
    assert_eq!(xi.iter().map(|p| p.1).sum::<f64>(), g.n as f64);
}

#[test]
fn constant_and_multiplier_symbols() {
    let g = Grid::standard();
    for t in [0.0, 0.5, 1.0] {
        let (one, adv) = quantize_tau_rn(&sym("1"), t, &g);
        assert!(adv.is_empty());
        assert!(relative_residual(&one.0, &GridOperator::identity(g.n).0) <= 1e-10);
        let (d, _) = quantize_tau_rn(&sym("xi1"), t, &g);
        let want = derivative(&g).scale(C64::new(0.0, -1.0));
        assert!(relative_residual(&d.0, &want.0) <= 1e-8, "t = {t}");
        let (x, _) = quantize_tau_rn(&sym("x1"), t, &g);
        assert!(relative_residual(&x.0, &coordinate(&g).0) <= 1e-12);
    }
}

#[test]
fn adjoint_dichotomy() {
    let g = Grid::standard();
    for s in ["x1 xi1", "x1^2 xi1 + 3 xi1^2", "x1 xi1^3 - 2 x1^3 xi1"] {
        let s = sym(s);
        assert!(adjoint_check(&s, 0.5, &g) <= 1e-10);
        assert!(adjoint_check(&s, 0.0, &g) >= 1e-3);
    }
    // Complex coefficients take the conjugate.
    let c = func_symbol(|x, xi| C64::new(x * xi, x + xi));
    assert!(adjoint_check(&c, 0.5, &g) <= 1e-10);
    assert!(adjoint_check(&c, 0.0, &g) >= 1e-3);
}

#[test]
fn difference_and_derivative_operators() {
    let s = sym("x1 xi1");
    let d = delta_x_operators(&s, 1, 0).unwrap();
    assert_eq!(d.poly().unwrap(), &CPoly::monomial(1, 0, C64::new(0.0, -1.0)));
    let x = delta_x_operators(&s, 0, 1).unwrap();
    assert_eq!(x.poly().unwrap(), &CPoly::monomial(0, 1, C64::new(1.0, 0.0)));
    let flat = sym("x1^3 + 2 x1");
    assert!(delta_x_operators(&flat, 1, 0).unwrap().poly().unwrap().is_zero());
    // (-i)^2 / 2! ∂_ξ² ξ³ = -3ξ
    let d2 = delta_x_operators(&sym("xi1^3"), 2, 0).unwrap();
    assert_eq!(d2.poly().unwrap(), &CPoly::monomial(0, 1, C64::new(-3.0, 0.0)));
    let f = func_symbol(|_, _| C64::new(1.0, 0.0));
    assert_eq!(delta_x_operators(&f, 1, 0).unwrap_err(), NumericError::NeedsPolynomial);
}

#[test]
fn symbol_text() {
    assert!(EuclidSymbol::parse("x2 xi1").is_err());
    assert!(EuclidSymbol::parse("y1").is_err());
    let s = sym("1/2 x1^2 xi1 - 3");
    assert_eq!(s.eval(2.0, 3.0), C64::new(3.0, 0.0));
}

#[test]
fn moyal_staircase() {
    let g = Grid::standard();
    for (a, b, m) in [("xi1", "x1", 1), ("xi1^2", "x1^2", 2), ("x1^2 xi1", "x1 xi1^2", 3)] {
        let (s1, s2) = (sym(a), sym(b));
        assert_eq!(terminating_order(s1.poly().unwrap(), s2.poly().unwrap()), m);
        let mut last = f64::INFINITY;
        for k in 0..m {
            let r = moyal_exactness_check(&s1, &s2, &g, k, &rat(1, 2)).unwrap().residual;
            assert!(r >= 1e-3, "{a} {b} M={k}: {r:e}");
            assert!(r <= last);
            last = r;
        }
        let r = moyal_exactness_check(&s1, &s2, &g, m, &rat(1, 2)).unwrap();
        assert!(r.residual <= 1e-6, "{a} {b}: {:e}", r.residual);
        let over = moyal_exactness_check(&s1, &s2, &g, m + 1, &rat(1, 2)).unwrap();
        assert!(over.residual <= 1e-6);
    }
    let xi = sym("xi1");
    assert!(moyal_exactness_check(&xi, &xi, &g, 0, &rat(1, 2)).unwrap().residual <= 1e-10);
}

#[test]
fn moyal_other_quantizations() {
    // The expansion engine is not specific to the symmetric choice.
    let g = Grid::standard();
    let (s1, s2) = (sym("x1 xi1"), sym("x1^2 + xi1^2"));
    for t in [rat(0, 1), rat(1, 3), rat(1, 1)] {
        let r = moyal_exactness_check(&s1, &s2, &g, 2, &t).unwrap();
        assert!(r.residual <= 1e-6, "t = {t}: {:e}", r.residual);
    }
}

#[test]
fn coarse_grid_advisory() {
    let g = grid(16);
    let (_, adv) = quantize_tau_rn(&sym("x1^2 xi1^2"), 0.5, &g);
    assert_eq!(adv, vec!["GRID_TOO_COARSE".to_string()]);
    let (_, adv) = quantize_tau_rn(&sym("x1 xi1"), 0.5, &Grid::standard());
    assert!(adv.is_empty());
}

#[test]
fn schrodinger_representation() {
    let g = Grid::standard();
    let id = schrodinger_rep(&g, 1.0, [0.0; 3]).unwrap();
    assert!(relative_residual(&id.0, &GridOperator::identity(g.n).0) <= 1e-12);
    for lambda in [1.0, 4.0, 0.5] {
        for r in rep_checks(&g, lambda, &SAMPLES).unwrap() {
            assert!(r.pass(), "{} at λ = {lambda}: {:e}", r.check, r.residual);
        }
    }
    let err = schrodinger_rep(&g, 1.0, [20.0, 0.0, 0.0]).unwrap_err();
    assert!(matches!(err, NumericError::ShiftOutOfRange { .. }));
    assert_eq!(schrodinger_rep(&g, 0.0, [0.0; 3]).unwrap_err(), NumericError::ZeroLambda);
    for r in rep_checks(&g, -1.0, &SAMPLES).unwrap() {
        assert_eq!(r.advisories, vec!["NEGATIVE_LAMBDA_UNVERIFIED".to_string()]);
    }
}

#[test]
fn central_character_phase() {
    let g = Grid::standard();
    let p = schrodinger_rep(&g, 2.0, [0.0, 0.0, 0.3]).unwrap();
    let want = C64::new(0.0, 0.6).exp();
    for a in 0..g.n {
        assert!((p.0[[a, a]] - want).norm() <= 1e-10);
    }
}

#[test]
fn sublaplacian() {
    for (n, lambda) in [(128, 1.0), (256, 1.0), (128, 4.0)] {
        let r = sublaplacian_symbol_check(&grid(n), lambda).unwrap();
        assert!(r.pass(), "N = {n}, λ = {lambda}: {:e}", r.residual);
    }
}

#[test]
fn grid_refinement_reduces_residuals() {
    let (coarse, fine) = (grid(32), grid(64));
    let hom = |g: &Grid| rep_checks(g, 1.0, &SAMPLES).unwrap()[0].residual;
    let sub = |g: &Grid| sublaplacian_symbol_check(g, 1.0).unwrap().residual;
    assert!(hom(&fine) * 2.0 <= hom(&coarse));
    assert!(sub(&fine) * 2.0 <= sub(&coarse));
}

#[test]
fn metaplectic() {
    let g = Grid::standard();
    let id = metaplectic_check(&g, 1.0, MetaplecticKind::Dilation(1.0)).unwrap();
    assert!(id.residual <= 1e-10);
    for kind in [MetaplecticKind::Dilation(1.2), MetaplecticKind::Dilation(-0.8), MetaplecticKind::Chirp(0.5), MetaplecticKind::J] {
        let r = metaplectic_check(&g, 1.0, kind).unwrap();
        assert!(r.residual <= 1e-6, "{kind:?}: {:e}", r.residual);
        assert!(r.advisories.is_empty());
    }
    let far = metaplectic_check(&g, 1.0, MetaplecticKind::Dilation(2.0)).unwrap();
    assert_eq!(far.advisories, vec!["RESAMPLING_LOSS".to_string()]);
    assert!(matches!(metaplectic_op(&g, 1.0, MetaplecticKind::Dilation(0.0)), Err(NumericError::ZeroDilation)));
}

#[test]
fn report_bounds() {
    let g = Grid::standard();
    let r = ResidualReport::new("x", &g, 1e-4, 1e-3, Bound::Min);
    assert!(!r.pass());
    let r = ResidualReport::new("x", &g, 1e-4, 1e-3, Bound::Max);
    assert!(r.pass());
    let nan = ResidualReport::new("x", &g, f64::NAN, 1e-3, Bound::Max);
    assert!(!nan.pass());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_form_matches_evaluation(c in proptest::collection::vec(-5i64..=5, 6), x in -3.0f64..3.0, xi in -3.0f64..3.0) {
        let mons = ["", " x1", " xi1", " x1 xi1", " x1^2", " xi1^3"];
        let mut text = String::from("0");
        for (k, m) in c.iter().zip(mons) {
            text += &format!(" {} {}{m}", if *k < 0 { "-" } else { "+" }, k.abs());
        }
        let s = sym(&text);
        let want = c[0] as f64 + c[1] as f64 * x + c[2] as f64 * xi + c[3] as f64 * x * xi + c[4] as f64 * x * x + c[5] as f64 * xi.powi(3);
        prop_assert!((s.eval(x, xi) - C64::new(want, 0.0)).norm() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn cpoly_product_rule(p in 0u32..4, q in 0u32..4, r in 0u32..4, s in 0u32..4) {
        let a = CPoly::monomial(p, q, C64::new(1.0, 2.0));
        let b = CPoly::monomial(r, s, C64::new(-0.5, 1.0));
        let lhs = a.mul(&b).derivative(1, 0);
        let rhs = a.derivative(1, 0).mul(&b).add(&a.mul(&b.derivative(1, 0)));
        prop_assert_eq!(lhs, rhs);
    }
}
