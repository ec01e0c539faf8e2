//! First end-to-end exercises of the symbolic pipeline on catalog entries.

use distinv_core::catalog;
use distinv_core::cotangent::Cotangent;
use distinv_core::invariants::{self, Eps1Style};
use distinv_core::manifold::build_adapted_frame;
use distinv_core::parse::parse_expr;
use distinv_core::scalar::{rat, rat_i};

#[test]
fn d1_fundamental_form_vanishes() {
    let spec = catalog::d1().unwrap();
    let rep = invariants::run_pipeline(&spec, Eps1Style::PolarMinus, &[]).unwrap();
    assert!(rep.residual_zero);
    assert!(rep.a.is_zero(), "A_D1 must vanish identically, got {}", rep.a.expr);
}

#[test]
fn d2_fundamental_form_and_ricci() {
    let spec = catalog::d2().unwrap();
    let samples = [
        (rat_i(1), rat_i(0)),
        (rat_i(0), rat_i(1)),
        (rat_i(2), rat_i(1)),
    ];
    let rep = invariants::run_pipeline(&spec, Eps1Style::PolarMinus, &samples).unwrap();
    assert!(rep.residual_zero);
    // A = (9/3500)(u4^2 + u5^2)^2
    let chart = &spec.chart;
    let expect = parse_expr(chart, "9/3500 * (u4^2 + u5^2)^2").unwrap();
    assert_eq!(rep.a.expr, expect, "A_D2 = {}", rep.a.expr);
    let target = 4.0 * 35.0f64.sqrt() / 9.0;
    for (_, _, r) in &rep.rho_samples {
        assert!((r - target).abs() < 1e-12, "rho_D = {r}, want {target}");
    }
    // monotonicity certificate
    let frame = build_adapted_frame(&spec, true).unwrap();
    let cot = Cotangent::new(frame).unwrap();
    let cert = cot.monotonicity_certificate().unwrap();
    let expect_cert = parse_expr(chart, "(u4^2 + u5^2)^2").unwrap();
    assert_eq!(cert, expect_cert);
}

#[test]
fn d2_a0_a1_values() {
    let spec = catalog::d2().unwrap();
    let frame = build_adapted_frame(&spec, true).unwrap();
    let cot = Cotangent::new(frame).unwrap();
    let eps = invariants::choose_eps1(&cot, Eps1Style::PolarMinus).unwrap();
    let sol = invariants::solve_a0a1(&cot, &eps).unwrap();
    let chart = &spec.chart;
    assert!(sol.a0.is_zero(), "A0 = {}", sol.a0);
    let expect_a1 = parse_expr(chart, "-(u4^2 + u5^2)").unwrap();
    assert_eq!(sol.a1, expect_a1, "A1 = {}", sol.a1);
    assert!(sol.residual.is_zero());
    let _ = rat(1, 2);
}
