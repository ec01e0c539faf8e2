//! The dimension-five invariant pipeline: choice of the normalized section
//! epsilon_1, the fourth-order relation under ad h, the fundamental form,
//! its tangential realization, the projective Ricci curvature, and the
//! covariance check under basis changes of the distribution.

use num_traits::{Signed, Zero};

use crate::cotangent::{co_bracket, CoField, Cotangent, CotangentPoint, FiberForm};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::EMat;
use crate::manifold::{build_adapted_frame, BasePoint, DistributionSpec};
use crate::poly::Poly;
use crate::scalar::{rat, rat_i, rat_to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eps1Style {
    InvU5,
    InvU4,
    PolarMinus,
    PolarPlus,
}

impl Eps1Style {
    pub fn parse(s: &str) -> Result<Eps1Style> {
        match s {
            "inv_u5" => Ok(Eps1Style::InvU5),
            "inv_u4" => Ok(Eps1Style::InvU4),
            "polar_minus" => Ok(Eps1Style::PolarMinus),
            "polar_plus" => Ok(Eps1Style::PolarPlus),
            other => Err(Error::InvalidStyle(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Eps1Style::InvU5 => "inv_u5",
            Eps1Style::InvU4 => "inv_u4",
            Eps1Style::PolarMinus => "polar_minus",
            Eps1Style::PolarPlus => "polar_plus",
        }
    }

    pub const ALL: [Eps1Style; 4] =
        [Eps1Style::InvU5, Eps1Style::InvU4, Eps1Style::PolarMinus, Eps1Style::PolarPlus];
}

#[derive(Clone, Debug)]
pub struct Epsilon1Choice {
    pub style: &'static str,
    pub field: CoField,
}

/// The standard styles: 6*(gamma4 d/du4 + gamma5 d/du5) with
/// gamma4 u5 - gamma5 u4 = +-1.
pub fn choose_eps1(cot: &Cotangent, style: Eps1Style) -> Result<Epsilon1Choice> {
    let chart = cot.chart();
    let n = chart.n;
    let u4 = Expr::symbol(chart, chart.fiber_index(3));
    let u5 = Expr::symbol(chart, chart.fiber_index(4));
    let six = Expr::constant(chart, rat_i(6));
    let mut f = CoField::zero(chart);
    match style {
        Eps1Style::InvU5 => {
            f.coef[n + 3] = six.div(&u5)?;
        }
        Eps1Style::InvU4 => {
            f.coef[n + 4] = six.div(&u4)?;
        }
        Eps1Style::PolarMinus => {
            let r2 = u4.mul(&u4).add(&u5.mul(&u5));
            f.coef[n + 3] = six.mul(&u5).div(&r2)?;
            f.coef[n + 4] = six.mul(&u4).div(&r2)?.neg();
        }
        Eps1Style::PolarPlus => {
            let d = u5.mul(&u5).sub(&u4.mul(&u4));
            f.coef[n + 3] = six.mul(&u5).div(&d)?;
            f.coef[n + 4] = six.mul(&u4).div(&d)?;
        }
    }
    Ok(Epsilon1Choice { style: style.name(), field: f })
}

/// Custom epsilon_1 = 6 (gamma4 d/du4 + gamma5 d/du5); accepted only when
/// gamma4 u5 - gamma5 u4 is constant along characteristic curves, i.e.
/// h(gamma4 u5 - gamma5 u4) = 0 on (D^2)-perp.
pub fn choose_eps1_custom(cot: &Cotangent, gamma4: &Expr, gamma5: &Expr) -> Result<Epsilon1Choice> {
    let chart = cot.chart();
    let n = chart.n;
    let u4 = Expr::symbol(chart, chart.fiber_index(3));
    let u5 = Expr::symbol(chart, chart.fiber_index(4));
    let inv = gamma4.mul(&u5).sub(&gamma5.mul(&u4));
    let h_inv = cot.h.apply(&inv)?;
    let assigns: Vec<(usize, Rat)> = (0..3).map(|j| (chart.fiber_index(j), Rat::zero())).collect();
    if !h_inv.subst_scalars(&assigns)?.is_zero() {
        return Err(Error::InvalidStyle(
            "custom gamma pair is not invariant along characteristic curves".into(),
        ));
    }
    let six = Expr::constant(chart, rat_i(6));
    let mut f = CoField::zero(chart);
    f.coef[n + 3] = six.mul(gamma4);
    f.coef[n + 4] = six.mul(gamma5);
    Ok(Epsilon1Choice { style: "custom", field: f })
}

#[derive(Clone, Debug)]
pub struct A0A1Solution {
    pub a0: Expr,
    pub a1: Expr,
    pub b1: Expr,
    /// B1 - h(A1); must vanish identically.
    pub residual: Expr,
}

/// Restriction of an expression to {u1 = u2 = u3 = 0}.
fn restrict(e: &Expr) -> Result<Expr> {
    let chart = &e.chart;
    let assigns: Vec<(usize, Rat)> = (0..3).map(|j| (chart.fiber_index(j), Rat::zero())).collect();
    e.subst_scalars(&assigns)
}

/// Derivation along h on functions of (x, u4, u5), using the restricted
/// components of the characteristic field.
pub fn h_derivation(cot: &Cotangent, f: &Expr) -> Result<Expr> {
    let hres = cot.h.restrict_d2perp()?;
    restrict(&hres.apply(f)?)
}

/// Solve (ad h)^4(eps1) = A0 eps1 + B1 ad h(eps1) + A1 (ad h)^2(eps1)
/// mod span(h, e) on (D^2)-perp, and check B1 = h(A1).
pub fn solve_a0a1(cot: &Cotangent, eps: &Epsilon1Choice) -> Result<A0A1Solution> {
    let n = cot.n();
    if n != 5 {
        return Err(Error::WrongDimension { expected: 5, got: n });
    }
    let ad1 = co_bracket(&cot.h, &eps.field)?;
    let ad2 = co_bracket(&cot.h, &ad1)?;
    let ad3 = co_bracket(&cot.h, &ad2)?;
    let ad4 = co_bracket(&cot.h, &ad3)?;
    let cols: Vec<Vec<Expr>> = [&eps.field, &ad1, &ad2, &cot.h, &cot.euler]
        .iter()
        .map(|f| f.coef.iter().map(restrict).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<Expr> = ad4.coef.iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let m = EMat::from_columns(&cols);
    let x = m.solve(&rhs).map_err(|_| Error::InconsistentSystem)?;
    let a0 = x[0].clone();
    let b1 = x[1].clone();
    let a1 = x[2].clone();
    let residual = b1.sub(&h_derivation(cot, &a1)?);
    Ok(A0A1Solution { a0, a1, b1, residual })
}

/// 35 A = A0 + (9/100) A1^2 - (3/10) h(h(A1)); the result must be a
/// homogeneous degree-4 polynomial in (u4, u5).
pub fn fundamental_form(cot: &Cotangent, sol: &A0A1Solution) -> Result<FiberForm> {
    if !sol.residual.is_zero() {
        return Err(Error::NonzeroResidual);
    }
    let ha1 = h_derivation(cot, &sol.a1)?;
    let hha1 = h_derivation(cot, &ha1)?;
    let chart = cot.chart();
    let a = sol
        .a0
        .add(&sol.a1.mul(&sol.a1).mul_scalar(&rat(9, 100)))
        .sub(&hha1.mul_scalar(&rat(3, 10)))
        .mul_scalar(&rat(1, 35));
    let _ = chart;
    FiberForm::new(a, Some(4))
}

/// Second fundamental form C = rho A^2 - (1/6) h(h(A)) A + (3/16) (h A)^2
/// with rho = -(2/15) A1 (degree-10 homogeneous numerator of rho_D).
pub fn second_fundamental_form(
    cot: &Cotangent,
    sol: &A0A1Solution,
    a: &FiberForm,
) -> Result<FiberForm> {
    let rho = sol.a1.mul_scalar(&rat(-2, 15));
    let ha = h_derivation(cot, &a.expr)?;
    let hha = h_derivation(cot, &ha)?;
    let c = rho
        .mul(&a.expr)
        .mul(&a.expr)
        .sub(&hha.mul(&a.expr).mul_scalar(&rat(1, 6)))
        .add(&ha.mul(&ha).mul_scalar(&rat(3, 16)));
    FiberForm::new(c, Some(10))
}

/// rho_D at a point: C / |A|^(5/2), evaluated in floating point; the only
/// float in the pipeline. Exact ingredients: C/A^2 is rational, so
/// rho_D = (C/A^2) / sqrt(|A|).
pub fn projective_ricci_at(
    a: &FiberForm,
    c: &FiberForm,
    lambda: &CotangentPoint,
) -> Result<f64> {
    let av = a.eval(lambda)?;
    if av.is_zero() {
        return Err(Error::VanishingFundamentalForm);
    }
    let cv = c.eval(lambda)?;
    let ratio = &cv / (&av * &av);
    Ok(rat_to_f64(&ratio) / rat_to_f64(&av.abs()).sqrt())
}

/// Tangential fundamental form: A_q(alpha X1 + beta X2) = A(q; u4 = beta,
/// u5 = -alpha).
pub fn tangential_form(a: &FiberForm, q: &BasePoint, alpha: &Rat, beta: &Rat) -> Result<Rat> {
    let pt = CotangentPoint {
        base: q.clone(),
        u: vec![Rat::zero(), Rat::zero(), Rat::zero(), beta.clone(), -alpha.clone()],
    };
    a.eval(&pt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormClass {
    Zero,
    PlusSquareDefinite,
    MinusSquareDefinite,
    SquareIndefinite,
    Other,
}

impl FormClass {
    pub fn name(&self) -> &'static str {
        match self {
            FormClass::Zero => "zero",
            FormClass::PlusSquareDefinite => "plus-square-definite",
            FormClass::MinusSquareDefinite => "minus-square-definite",
            FormClass::SquareIndefinite => "square-indefinite",
            FormClass::Other => "other",
        }
    }
}

/// Classify a binary quartic at a base point by squarefree structure and the
/// discriminant of its square root.
pub fn classify_form(a: &FiberForm, q: &BasePoint) -> Result<FormClass> {
    let chart = &a.expr.chart;
    let p = a.at_base_point(q)?;
    if p.is_zero() {
        return Ok(FormClass::Zero);
    }
    let rad = p.squarefree_radical()?;
    let i4 = chart.fiber_index(3);
    let i5 = chart.fiber_index(4);
    let deg = |poly: &Poly| -> u32 {
        poly.terms()
            .iter()
            .map(|(m, _)| m.0[i4] as u32 + m.0[i5] as u32)
            .max()
            .unwrap_or(0)
    };
    if deg(&rad) != 2 {
        return Ok(FormClass::Other);
    }
    // A = c * rad^2?
    let rad2 = rad.mul(&rad);
    let Ok(qq) = p.exact_div(&rad2) else { return Ok(FormClass::Other) };
    let Some(c) = qq.as_constant() else { return Ok(FormClass::Other) };
    // rad = a u4^2 + b u4 u5 + c5 u5^2
    let coeff_of = |e4: u16, e5: u16| -> Rat {
        rad.terms()
            .iter()
            .find(|(m, _)| m.0[i4] == e4 && m.0[i5] == e5)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rat::zero)
    };
    let qa = coeff_of(2, 0);
    let qb = coeff_of(1, 1);
    let qc = coeff_of(0, 2);
    let disc = &qb * &qb - rat_i(4) * &qa * &qc;
    if disc.is_negative() {
        Ok(if c.is_positive() { FormClass::PlusSquareDefinite } else { FormClass::MinusSquareDefinite })
    } else if disc.is_positive() {
        Ok(FormClass::SquareIndefinite)
    } else {
        Ok(FormClass::Other)
    }
}

/// Full pipeline output for one distribution.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub style: &'static str,
    pub a0: Expr,
    pub a1: Expr,
    pub residual_zero: bool,
    pub a: FiberForm,
    pub c: FiberForm,
    pub class: FormClass,
    /// (u4, u5, rho_D) samples where A != 0.
    pub rho_samples: Vec<(Rat, Rat, f64)>,
}

pub fn run_pipeline(
    spec: &DistributionSpec,
    style: Eps1Style,
    samples: &[(Rat, Rat)],
) -> Result<InvariantReport> {
    let frame = build_adapted_frame(spec, true)?;
    let cot = Cotangent::new(frame)?;
    run_pipeline_on(&cot, spec, style, samples)
}

pub fn run_pipeline_on(
    cot: &Cotangent,
    spec: &DistributionSpec,
    style: Eps1Style,
    samples: &[(Rat, Rat)],
) -> Result<InvariantReport> {
    let eps = choose_eps1(cot, style)?;
    let sol = solve_a0a1(cot, &eps)?;
    let a = fundamental_form(cot, &sol)?;
    let c = second_fundamental_form(cot, &sol, &a)?;
    let q = spec
        .base_point
        .clone()
        .unwrap_or_else(|| BasePoint::origin(&spec.chart));
    let class = classify_form(&a, &q)?;
    let mut rho_samples = Vec::new();
    for (u4, u5) in samples {
        let lam = CotangentPoint::on_d2perp(&spec.chart, q.clone(), &[u4.clone(), u5.clone()])?;
        match projective_ricci_at(&a, &c, &lam) {
            Ok(r) => rho_samples.push((u4.clone(), u5.clone(), r)),
            Err(Error::VanishingFundamentalForm) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(InvariantReport {
        style: eps.style,
        a0: sol.a0.clone(),
        a1: sol.a1.clone(),
        residual_zero: sol.residual.is_zero(),
        a,
        c,
        class,
        rho_samples,
    })
}

/// Recompute the pipeline for X~ = nu X and verify
/// A~(lambda) = det(nu)^8 A(lambda) after transporting the fiber
/// coordinates. Exact identity of expressions.
pub fn covariance_check(spec: &DistributionSpec, nu: &[[Expr; 2]; 2]) -> Result<bool> {
    let chart = &spec.chart;
    let delta = nu[0][0].mul(&nu[1][1]).sub(&nu[0][1].mul(&nu[1][0]));
    if delta.is_zero() {
        return Err(Error::SingularBasisChange);
    }
    let x1t = spec.x1.scale(&nu[0][0]).add(&spec.x2.scale(&nu[0][1]));
    let x2t = spec.x1.scale(&nu[1][0]).add(&spec.x2.scale(&nu[1][1]));
    let spec_t = DistributionSpec::new(chart, x1t, x2t, spec.base_point.clone(), None)?;

    let frame = build_adapted_frame(spec, true)?;
    let frame_t = build_adapted_frame(&spec_t, true)?;

    // transition: column k of E = coordinates of X~_k in the X-frame
    let m_old = frame.matrix();
    let m_new = frame_t.matrix();
    let e = m_old.inverse()?;
    let mut trans = vec![vec![Expr::zero(chart); 5]; 5]; // trans[l][k]
    for l in 0..5 {
        for k in 0..5 {
            let mut acc = Expr::zero(chart);
            for r in 0..5 {
                acc = acc.add(&e[(l, r)].mul(&m_new[(r, k)]));
            }
            trans[l][k] = acc;
        }
    }

    let cot = Cotangent::new(frame)?;
    let cot_t = Cotangent::new(frame_t)?;
    let sol = solve_a0a1(&cot, &choose_eps1(&cot, Eps1Style::PolarMinus)?)?;
    let a = fundamental_form(&cot, &sol)?;
    let sol_t = solve_a0a1(&cot_t, &choose_eps1(&cot_t, Eps1Style::PolarMinus)?)?;
    let a_t = fundamental_form(&cot_t, &sol_t)?;

    // u~_k = sum_l E[l][k] u_l restricted to u1 = u2 = u3 = 0
    let u4_sym = chart.fiber_index(3);
    let u5_sym = chart.fiber_index(4);
    let u4 = Expr::symbol(chart, u4_sym);
    let u5 = Expr::symbol(chart, u5_sym);
    let image4 = trans[3][3].mul(&u4).add(&trans[4][3].mul(&u5));
    let image5 = trans[3][4].mul(&u4).add(&trans[4][4].mul(&u5));
    let a_t_transported =
        a_t.expr.subst_exprs(&[(u4_sym, image4), (u5_sym, image5)])?;
    let delta8 = delta.pow(8)?;
    let expect = delta8.mul(&a.expr);
    Ok(a_t_transported == expect)
}
