//! Matrix-curve analyzer: flat curve, D2's reduced Jacobi curve, jump curves.

use distinv_core::catalog;
use distinv_core::cotangent::{Cotangent, CotangentPoint};
use distinv_core::grasscurve::{
    canonical_basis_m2, cross_ratio_trace_residual, extension_dims, generating_jets,
    jump_asymptotics, reduced_jacobi_series, ricci_and_density, series_density_at,
    structural_eq_check, weight_rank, MatCurve,
};
use distinv_core::invariants::{self, Eps1Style};
use distinv_core::manifold::build_adapted_frame;
use distinv_core::scalar::{rat, rat_i, Rat};
use distinv_core::series::Ser1;

fn flat_curve(ord: usize) -> MatCurve {
    // S = [[t, t^2/2], [t^2/2, t^3/3]]
    let mk = |coeffs: Vec<(usize, Rat)>| {
        let mut c = vec![Rat::from_integer(0.into()); ord];
        for (k, v) in coeffs {
            c[k] = v;
        }
        Ser1::from_poly_coeffs(c, ord)
    };
    MatCurve::new(vec![
        vec![mk(vec![(1, rat_i(1))]), mk(vec![(2, rat(1, 2))])],
        vec![mk(vec![(2, rat(1, 2))]), mk(vec![(3, rat(1, 3))])],
    ])
    .unwrap()
}

#[test]
fn flat_curve_weight_rank_g() {
    let s = flat_curve(12);
    let (k, r) = weight_rank(&s).unwrap();
    assert_eq!((k, r), (4, 1));
    let dims = extension_dims(&s, 2).unwrap();
    assert_eq!(dims, vec![3, 4]); // m + i
    let jets = generating_jets(&s, 4).unwrap();
    let (rho, a) = ricci_and_density(&jets).unwrap();
    assert!(rho.is_zero_to_window(), "rho = {rho:?}");
    assert!(a.is_zero_to_window(), "A = {a:?}");
    // trace identity residual
    let res = cross_ratio_trace_residual(&s).unwrap();
    assert!(res.is_zero_to_window(), "trace residual {res:?}");
}

#[test]
fn flat_curve_canonical_basis() {
    let s = flat_curve(12);
    let frame = canonical_basis_m2(&s).unwrap();
    // seprime and all rows with rho = A = 0
    let zero = Ser1::zero_to(8);
    let res = structural_eq_check(&frame, &zero, &zero).unwrap();
    assert!(res.seprime.is_zero_to_window(), "seprime {:?}", res.seprime);
    for (i, row) in res.rows.iter().enumerate() {
        for c in row {
            assert!(c.is_zero_to_window(), "row {i} residual {c:?}");
        }
    }
    for c in &res.e1_fourth {
        assert!(c.is_zero_to_window(), "e1^(4) residual {c:?}");
    }
}

#[test]
fn m1_jump_curve() {
    // S = t^2: rho pole -1/4, A identically zero (k = 1)
    let s = MatCurve::new(vec![vec![Ser1::from_poly_coeffs(
        vec![rat_i(0), rat_i(0), rat_i(1)],
        10,
    )]])
    .unwrap();
    let j = jump_asymptotics(&s).unwrap();
    assert_eq!(j.k, 1);
    assert_eq!(j.k0, 2);
    assert_eq!(j.rho_pole, rat(-1, 4));
    assert_eq!(j.a_pole, rat_i(0)); // 3(k-1)/(80k) = 0 for k = 1
}

#[test]
fn d2_jacobi_series_and_cross_check() {
    let spec = catalog::d2().unwrap();
    let frame = build_adapted_frame(&spec, true).unwrap();
    let cot = Cotangent::new(frame).unwrap();
    let q = spec.base_point.clone().unwrap();
    let lambda = CotangentPoint::on_d2perp(&spec.chart, q, &[rat_i(2), rat_i(1)]).unwrap();
    let curve = reduced_jacobi_series(&cot, &lambda, 12).unwrap();
    assert!(curve.is_symmetric());
    let (k, r) = weight_rank(&curve).unwrap();
    assert_eq!((k, r), (4, 1));
    // cross-check against the pipeline value at (2,1): A = 9/3500 * 25 = 9/140
    let a0 = series_density_at(&cot, &lambda, 12).unwrap();
    assert_eq!(a0, rat(9, 140));
    let rep = invariants::run_pipeline(&spec, Eps1Style::PolarMinus, &[]).unwrap();
    let pipeline_val = rep.a.eval(&lambda).unwrap();
    assert_eq!(a0, pipeline_val);
}
