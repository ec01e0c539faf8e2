//! Rolling-spheres family: frame reproduction and invariants.

use distinv_core::catalog;
use distinv_core::invariants::{self, Eps1Style};
use distinv_core::manifold::{build_adapted_frame, lie_bracket};
use distinv_core::parse::parse_expr;
use distinv_core::scalar::{rat, rat_i};

#[test]
fn rolling_x3_matches_closed_form() {
    // X3 = -(cot(phi)/r) X2 + (1/rhat^2 - 1/r^2) d/dbeta for (r, rhat) = (1, 2)
    let spec = catalog::rolling(rat_i(1), rat_i(2)).unwrap();
    let chart = &spec.chart;
    let x3 = lie_bracket(&spec.x1, &spec.x2).unwrap();
    let cot_factor = parse_expr(chart, "-cf/sf").unwrap(); // r = 1
    let mut expect = spec.x2.scale(&cot_factor);
    let beta_coef = parse_expr(chart, "1/4 - 1").unwrap();
    expect.coef[4] = expect.coef[4].add(&beta_coef);
    for k in 0..5 {
        assert_eq!(x3.coef[k], expect.coef[k], "component {k}");
    }
}

#[test]
fn rolling_1_2_invariants() {
    let spec = catalog::rolling(rat_i(1), rat_i(2)).unwrap();
    let samples = [(rat_i(1), rat_i(0)), (rat_i(1), rat_i(2))];
    let rep = invariants::run_pipeline(&spec, Eps1Style::PolarMinus, &samples).unwrap();
    assert!(rep.residual_zero);
    // A0 = -R^4/(r^2 rhat^2), A1 = -(1/r^2 + 1/rhat^2) R^2 for rolling
    let chart = &spec.chart;
    let expect_a1 = parse_expr(chart, "-(1 + 1/4)*(u4^2 + u5^2)").unwrap();
    assert_eq!(rep.a1, expect_a1, "A1 = {}", rep.a1);
    // A = (9 rhat^4 - 82 r^2 rhat^2 + 9 r^4)/(3500 r^4 rhat^4) * R^4; (1,2): (144-328+9)/56000 = -175/56000 = -1/320
    let expect_a = parse_expr(chart, "-(u4^2+u5^2)^2/320").unwrap();
    assert_eq!(rep.a.expr, expect_a, "A = {}", rep.a.expr);
    // rho_D = (4 sqrt 35 / 3) (r^2 + rhat^2)/sqrt|(9 rhat^2 - r^2)(rhat^2 - 9 r^2)|
    let target = 4.0 * 35.0f64.sqrt() / 3.0 * 5.0 / (35.0f64 * 5.0).sqrt();
    for (_, _, r) in &rep.rho_samples {
        assert!((r - target).abs() < 1e-11, "rho = {r} want {target}");
    }
}

#[test]
fn rolling_1_3_form_vanishes() {
    let spec = catalog::rolling(rat_i(1), rat_i(3)).unwrap();
    let rep = invariants::run_pipeline(&spec, Eps1Style::PolarMinus, &[]).unwrap();
    assert!(rep.a.is_zero(), "A(1,3) = {}", rep.a.expr);
    let _ = build_adapted_frame(&spec, true).unwrap();
    let _ = rat(1, 2);
}
