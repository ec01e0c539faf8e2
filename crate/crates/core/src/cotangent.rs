//! Symplectic machinery on T*M in frame-induced fiber coordinates: lifts,
//! the characteristic field, brackets, the J-flag on the annihilator of D^2,
//! and the weight-jump loci.

use std::sync::Arc;

use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{EMat, QMat};
use crate::manifold::{BasePoint, Frame};
use crate::par;
use crate::poly::Poly;
use crate::scalar::Rat;

/// Vector field on T*M: 2n coefficients, first the d/dx parts then the d/du
/// parts; coefficients may involve base, fiber, and aux symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct CoField {
    pub chart: Arc<Chart>,
    pub coef: Vec<Expr>,
}

impl CoField {
    pub fn zero(chart: &Arc<Chart>) -> CoField {
        CoField { chart: chart.clone(), coef: vec![Expr::zero(chart); 2 * chart.n] }
    }

    pub fn fiber_coord(chart: &Arc<Chart>, j: usize) -> CoField {
        let mut v = CoField::zero(chart);
        v.coef[chart.n + j] = Expr::one(chart);
        v
    }

    pub fn add(&self, other: &CoField) -> CoField {
        CoField {
            chart: self.chart.clone(),
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &CoField) -> CoField {
        CoField {
            chart: self.chart.clone(),
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> CoField {
        CoField { chart: self.chart.clone(), coef: self.coef.iter().map(|c| c.mul(f)).collect() }
    }

    /// Apply as a derivation to a function on T*M.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        let chart = &self.chart;
        let mut acc = Expr::zero(chart);
        for i in 0..chart.n {
            if !self.coef[i].is_zero() {
                acc = acc.add(&self.coef[i].mul(&f.diff(chart.base_index(i))?));
            }
            let j = chart.n + i;
            if !self.coef[j].is_zero() {
                acc = acc.add(&self.coef[j].mul(&f.diff(chart.fiber_index(i))?));
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, pt: &CotangentPoint) -> Result<Vec<Rat>> {
        let assign = pt.assignment(&self.chart);
        self.coef.iter().map(|c| c.eval(&assign).map_err(|_| Error::EvaluationPole)).collect()
    }

    /// Restrict coefficients to {u1 = u2 = u3 = 0}.
    pub fn restrict_d2perp(&self) -> Result<CoField> {
        let chart = &self.chart;
        let assigns: Vec<(usize, Rat)> =
            (0..3).map(|j| (chart.fiber_index(j), Rat::zero())).collect();
        let coef = self
            .coef
            .iter()
            .map(|c| c.subst_scalars(&assigns))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoField { chart: chart.clone(), coef })
    }
}

/// Point of T*M with rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint {
    pub base: BasePoint,
    pub u: Vec<Rat>,
}

impl CotangentPoint {
    /// A point of (D^2)-perp over `base` with fiber values (u4, ..., un).
    pub fn on_d2perp(chart: &Chart, base: BasePoint, upper: &[Rat]) -> Result<CotangentPoint> {
        if upper.len() != chart.n - 3 {
            return Err(Error::DimensionMismatch("need n-3 fiber coordinates".into()));
        }
        let mut u = vec![Rat::zero(); 3];
        u.extend_from_slice(upper);
        Ok(CotangentPoint { base, u })
    }

    pub fn assignment(&self, chart: &Chart) -> Vec<Option<Rat>> {
        let mut v = self.base.assignment(chart);
        for (j, val) in self.u.iter().enumerate() {
            v[chart.fiber_index(j)] = Some(val.clone());
        }
        v
    }

    /// Not on (D^3)-perp: (u4, u5) != (0, 0) for growth starting (2,3,5).
    pub fn off_d3perp(&self) -> bool {
        !(self.u[3].is_zero() && self.u[4].is_zero())
    }
}

/// Frame-attached cotangent machinery: the Hamiltonian lifts and the named
/// fields of the characteristic construction.
pub struct Cotangent {
    pub frame: Frame,
    pub lifts: Vec<CoField>,
    pub h: CoField,
    pub euler: CoField,
    pub theta: CoField,
    pub xx: CoField,
    pub f: CoField,
}

impl Cotangent {
    pub fn new(frame: Frame) -> Result<Cotangent> {
        let chart = frame.chart.clone();
        let n = chart.n;
        let lifts: Vec<CoField> =
            (0..n).map(|i| hamiltonian_lift(i, &frame)).collect::<Result<Vec<_>>>()?;
        let u = |j: usize| Expr::symbol(&chart, chart.fiber_index(j));
        let h = lifts[1].scale(&u(3)).sub(&lifts[0].scale(&u(4)));
        let euler = euler_field(&chart);
        // theta = u4 d/du5 - u5 d/du4
        let mut theta = CoField::zero(&chart);
        theta.coef[n + 4] = u(3);
        theta.coef[n + 3] = u(4).neg();
        // X = u5 uvec2 + u4 uvec1 - (u4^2 + u5^2) d/du3
        let r2 = u(3).mul(&u(3)).add(&u(4).mul(&u(4)));
        let mut xx = lifts[1].scale(&u(4)).add(&lifts[0].scale(&u(3)));
        xx.coef[n + 2] = xx.coef[n + 2].sub(&r2);
        // F = uvec3 + u4 d/du1 + u5 d/du2
        let mut f = lifts[2].clone();
        f.coef[n] = f.coef[n].add(&u(3));
        f.coef[n + 1] = f.coef[n + 1].add(&u(4));
        Ok(Cotangent { frame, lifts, h, euler, theta, xx, f })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.frame.chart
    }

    pub fn n(&self) -> usize {
        self.frame.chart.n
    }

    /// Poisson bracket {u_i, u_j} = du_j(uvec_i), as an expression linear in
    /// the fiber symbols.
    pub fn poisson(&self, i: usize, j: usize) -> Expr {
        self.lifts[i].coef[self.n() + j].clone()
    }

    /// Tangency-corrected lift: Y~_j = uvec_j + sum_{i<3} {u_i, u_j} d/du_i.
    pub fn tilde_y(&self, j: usize) -> CoField {
        let n = self.n();
        let mut v = self.lifts[j].clone();
        for i in 0..3 {
            let pb = self.poisson(i, j);
            v.coef[n + i] = v.coef[n + i].add(&pb);
        }
        v
    }

    /// sigma(V, W) via the decomposition V = sum a_i uvec_i + sum b_j d/du_j.
    pub fn sigma(&self, v: &CoField, w: &CoField) -> Result<Expr> {
        let (a, b) = self.decompose(v)?;
        let (c, d) = self.decompose(w)?;
        let chart = self.chart();
        let n = self.n();
        let mut acc = Expr::zero(chart);
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if c[j].is_zero() {
                    continue;
                }
                // sigma(uvec_i, uvec_j) = {u_j, u_i}
                let pb = self.poisson(j, i);
                if !pb.is_zero() {
                    acc = acc.add(&a[i].mul(&c[j]).mul(&pb));
                }
            }
        }
        for i in 0..n {
            acc = acc.add(&a[i].mul(&d[i])).sub(&c[i].mul(&b[i]));
        }
        Ok(acc)
    }

    /// Decompose into frame-lift and vertical parts.
    fn decompose(&self, v: &CoField) -> Result<(Vec<Expr>, Vec<Expr>)> {
        let n = self.n();
        let minv = self.frame_inverse()?;
        let mut a = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Expr::zero(self.chart());
            for r in 0..n {
                acc = acc.add(&minv[(k, r)].mul(&v.coef[r]));
            }
            a.push(acc);
        }
        let mut b = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = v.coef[n + j].clone();
            for i in 0..n {
                if !a[i].is_zero() {
                    acc = acc.sub(&a[i].mul(&self.lifts[i].coef[n + j]));
                }
            }
            b.push(acc);
        }
        Ok((a, b))
    }

    fn frame_inverse(&self) -> Result<EMat> {
        self.frame.matrix().inverse()
    }

    /// J-flag spanning fields levels 0..=imax; level 0 spans J itself.
    pub fn j_spanning(&self, imax: usize) -> Result<Vec<Vec<CoField>>> {
        let chart = self.chart();
        let n = self.n();
        let mut level0 = vec![self.h.clone(), self.euler.clone(), self.xx.clone(), self.theta.clone()];
        for j in 5..n {
            level0.push(CoField::fiber_coord(chart, j));
        }
        let mut levels = vec![level0];
        for _ in 0..imax {
            let prev = levels.last().unwrap().clone();
            let next = par::map_default(prev, |v| co_bracket(&self.h, &v).expect("same chart"));
            levels.push(next);
        }
        Ok(levels)
    }

    /// Dimensions of J^(i)(lambda) for i = 0..=imax at a rational point.
    pub fn j_flag(&self, lambda: &CotangentPoint, imax: usize) -> Result<Vec<usize>> {
        if !lambda.off_d3perp() {
            return Err(Error::BasePointOnD3perp);
        }
        let levels = self.j_spanning(imax)?;
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        let mut dims = Vec::new();
        for level in &levels {
            for f in level {
                cols.push(f.eval(lambda)?);
            }
            dims.push(QMat::from_columns(&cols).rank());
        }
        Ok(dims)
    }

    /// Dimensions of J^(i) at a generic lambda over the base point: the u
    /// coordinates stay symbolic and ranks are taken over the function field.
    pub fn j_flag_generic(&self, q: &BasePoint, imax: usize) -> Result<Vec<usize>> {
        let levels = self.j_spanning(imax)?;
        let chart = self.chart();
        let assigns: Vec<(usize, Rat)> = q
            .base
            .iter()
            .enumerate()
            .map(|(i, v)| (chart.base_index(i), v.clone()))
            .chain(
                q.aux
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (chart.aux_index(k), v.clone())),
            )
            .chain((0..3).map(|j| (chart.fiber_index(j), Rat::zero())))
            .collect();
        let mut cols: Vec<Vec<Expr>> = Vec::new();
        let mut dims = Vec::new();
        for level in &levels {
            for f in level {
                let col = f
                    .coef
                    .iter()
                    .map(|c| c.subst_scalars(&assigns))
                    .collect::<Result<Vec<_>>>()?;
                cols.push(col);
            }
            dims.push(EMat::from_columns(&cols).rank());
        }
        Ok(dims)
    }

    /// Constant-weight test: dim J^(n-3) = 2n - 4 at lambda.
    pub fn rd_membership(&self, lambda: &CotangentPoint) -> Result<bool> {
        let n = self.n();
        let dims = self.j_flag(lambda, n - 3)?;
        Ok(dims[n - 3] == 2 * n - 4)
    }

    /// sigma([h, X], X) restricted to (D^2)-perp; equals (u4^2+u5^2)^2 for
    /// every distribution with growth type (2,3,4 or 5, ...).
    pub fn monotonicity_certificate(&self) -> Result<Expr> {
        let hx = co_bracket(&self.h, &self.xx)?;
        let s = self.sigma(&hx, &self.xx)?;
        let chart = self.chart();
        let assigns: Vec<(usize, Rat)> =
            (0..3).map(|j| (chart.fiber_index(j), Rat::zero())).collect();
        s.subst_scalars(&assigns)
    }
}

/// uvec_i = X_i + sum_{j,k} c_{ji}^k u_k d/du_j where [X_i, X_j] = sum c_{ji}^k X_k.
pub fn hamiltonian_lift(i: usize, frame: &Frame) -> Result<CoField> {
    let chart = &frame.chart;
    let n = chart.n;
    let mut coef = Vec::with_capacity(2 * n);
    coef.extend(frame.fields[i].coef.iter().cloned());
    for j in 0..n {
        let mut acc = Expr::zero(chart);
        for k in 0..n {
            let c = frame.c_of(i, j, k);
            if !c.is_zero() {
                acc = acc.add(&c.mul(&Expr::symbol(chart, chart.fiber_index(k))));
            }
        }
        coef.push(acc);
    }
    Ok(CoField { chart: chart.clone(), coef })
}

/// Euler field sum u_j d/du_j.
pub fn euler_field(chart: &Arc<Chart>) -> CoField {
    let n = chart.n;
    let mut v = CoField::zero(chart);
    for j in 0..n {
        v.coef[n + j] = Expr::symbol(chart, chart.fiber_index(j));
    }
    v
}

/// Lie bracket of cotangent fields in the 2n coordinate fields, always on
/// full T*M.
pub fn co_bracket(v: &CoField, w: &CoField) -> Result<CoField> {
    if !Arc::ptr_eq(&v.chart, &w.chart) && *v.chart != *w.chart {
        return Err(Error::ChartMismatch);
    }
    let chart = v.chart.clone();
    let n = chart.n;
    let syms: Vec<usize> =
        (0..n).map(|i| chart.base_index(i)).chain((0..n).map(|j| chart.fiber_index(j))).collect();
    let coef = par::map_default((0..2 * n).collect::<Vec<_>>(), |k| {
        let mut t = Expr::zero(&chart);
        for (idx, &sym) in syms.iter().enumerate() {
            if !v.coef[idx].is_zero() {
                t = t.add(&v.coef[idx].mul(&w.coef[k].diff(sym).expect("chart symbol")));
            }
            if !w.coef[idx].is_zero() {
                t = t.sub(&w.coef[idx].mul(&v.coef[k].diff(sym).expect("chart symbol")));
            }
        }
        t
    });
    Ok(CoField { chart, coef })
}

/// Homogeneous polynomial in the fiber symbols u4..un with base-coefficient
/// expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberForm {
    pub expr: Expr,
    pub degree: u32,
}

impl FiberForm {
    /// Validate: polynomial in u4..un, homogeneous of the stated degree.
    pub fn new(expr: Expr, expected_degree: Option<u32>) -> Result<FiberForm> {
        let chart = &expr.chart;
        for j in 0..chart.n {
            if expr.den.uses_var(chart.fiber_index(j)) {
                return Err(Error::NotPolynomial);
            }
        }
        for j in 0..3 {
            if expr.uses_symbol(chart.fiber_index(j)) {
                return Err(Error::NotPolynomial);
            }
        }
        let mut degree = None;
        for (m, _) in expr.num.terms() {
            let d: u32 = (3..chart.n).map(|j| m.0[chart.fiber_index(j)] as u32).sum();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        let degree = degree.unwrap_or(0);
        if let Some(want) = expected_degree {
            if !expr.is_zero() && degree != want {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(FiberForm { expr, degree })
    }

    pub fn is_zero(&self) -> bool {
        self.expr.is_zero()
    }

    /// Evaluate the fiber polynomial at rational fiber values over a base point.
    pub fn eval(&self, pt: &CotangentPoint) -> Result<Rat> {
        self.expr.eval(&pt.assignment(&self.expr.chart)).map_err(|_| Error::EvaluationPole)
    }

    /// The u-polynomial with base coefficients evaluated at q.
    pub fn at_base_point(&self, q: &BasePoint) -> Result<Poly> {
        let chart = &self.expr.chart;
        let assigns: Vec<(usize, Rat)> = q
            .base
            .iter()
            .enumerate()
            .map(|(i, v)| (chart.base_index(i), v.clone()))
            .chain(q.aux.iter().enumerate().map(|(k, v)| (chart.aux_index(k), v.clone())))
            .collect();
        let e = self.expr.subst_scalars(&assigns).map_err(|_| Error::EvaluationPole)?;
        if !e.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        let d = e.den.as_constant().expect("constant denominator");
        Ok(e.num.mul_scalar(&d.recip()))
    }
}

/// Deficiency polynomial P_D at q. For n = 5 the unit constant; for n = 6
/// the alpha_6 form of the structure functions; for n > 6 the radical of the
/// GCD of maximal minors of the J^(n-3) spanning matrix (sampled until
/// stable).
pub fn deficiency_polynomial(cot: &Cotangent, q: &BasePoint) -> Result<FiberForm> {
    let chart = cot.chart();
    let n = cot.n();
    if n == 5 {
        return FiberForm::new(Expr::one(chart), Some(0));
    }
    if n == 6 {
        return alpha6_form(cot, q);
    }
    minor_gcd_deficiency(cot, q)
}

/// alpha_6 = c_52^6 u4^2 - (c_42^6 + c_51^6) u4 u5 + c_41^6 u5^2 with the
/// structure functions of the adapted frame (x left symbolic).
pub fn alpha6_form(cot: &Cotangent, _q: &BasePoint) -> Result<FiberForm> {
    let chart = cot.chart();
    let n = cot.n();
    if n != 6 {
        return Err(Error::WrongDimension { expected: 6, got: n });
    }
    let fr = &cot.frame;
    let u4 = Expr::symbol(chart, chart.fiber_index(3));
    let u5 = Expr::symbol(chart, chart.fiber_index(4));
    // paper c_{ji}^k for bracket [X_i, X_j] is c_of(i-1, j-1, k-1) here
    let c52 = fr.c_of(1, 4, 5); // c_{52}^6: [X_2, X_5]
    let c42 = fr.c_of(1, 3, 5); // c_{42}^6: [X_2, X_4]
    let c51 = fr.c_of(0, 4, 5); // c_{51}^6: [X_1, X_5]
    let c41 = fr.c_of(0, 3, 5); // c_{41}^6: [X_1, X_4]
    let e = c52
        .mul(&u4.mul(&u4))
        .sub(&c42.add(c51).mul(&u4.mul(&u5)))
        .add(&c41.mul(&u5.mul(&u5)));
    FiberForm::new(e, None)
}

fn minor_gcd_deficiency(cot: &Cotangent, q: &BasePoint) -> Result<FiberForm> {
    let chart = cot.chart();
    let n = cot.n();
    let levels = cot.j_spanning(n - 3)?;
    let assigns: Vec<(usize, Rat)> = q
        .base
        .iter()
        .enumerate()
        .map(|(i, v)| (chart.base_index(i), v.clone()))
        .chain(q.aux.iter().enumerate().map(|(k, v)| (chart.aux_index(k), v.clone())))
        .chain((0..3).map(|j| (chart.fiber_index(j), Rat::zero())))
        .collect();
    let mut cols: Vec<Vec<Expr>> = Vec::new();
    for level in &levels {
        for f in level {
            let col =
                f.coef.iter().map(|c| c.subst_scalars(&assigns)).collect::<Result<Vec<_>>>()?;
            if col.iter().any(|c| !c.is_zero()) {
                cols.push(col);
            }
        }
    }
    let target = 2 * n - 4;
    let rows = 2 * n;
    if cols.len() < target {
        return FiberForm::new(Expr::zero(chart), None);
    }
    // deterministic LCG over (row-subset, col-subset) choices
    let mut state: u64 = 0x5DEECE66D;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state
    };
    let mut gcd_poly: Option<Poly> = None;
    let mut stable = 0usize;
    let mut nonzero_seen = false;
    for _ in 0..400 {
        if stable >= 24 {
            break;
        }
        let mut row_idx: Vec<usize> = (0..rows).collect();
        let mut col_idx: Vec<usize> = (0..cols.len()).collect();
        for i in (1..row_idx.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            row_idx.swap(i, j);
        }
        for i in (1..col_idx.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            col_idx.swap(i, j);
        }
        let sub_cols: Vec<Vec<Expr>> = col_idx[..target]
            .iter()
            .map(|&c| row_idx[..target].iter().map(|&r| cols[c][r].clone()).collect())
            .collect();
        let det = EMat::from_columns(&sub_cols).det()?;
        if det.is_zero() {
            continue;
        }
        nonzero_seen = true;
        if !det.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        let dpoly = det.num.clone();
        gcd_poly = Some(match gcd_poly {
            None => dpoly.primitive(),
            Some(g) => {
                let ng = g.gcd(&dpoly);
                if ng == g {
                    stable += 1;
                } else {
                    stable = 0;
                }
                ng
            }
        });
        if gcd_poly.as_ref().is_some_and(|g| g.is_constant()) {
            break;
        }
    }
    if !nonzero_seen {
        // every sampled minor vanished identically: rank never reaches 2n-4
        return FiberForm::new(Expr::zero(chart), None);
    }
    let g = gcd_poly.expect("nonzero minor seen");
    if g.is_constant() {
        return Err(Error::NotHypersurface);
    }
    let rad = g.squarefree_radical()?;
    FiberForm::new(Expr::from_poly(chart, rad), None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpLocusReport {
    pub real_nonempty: Option<bool>,
    pub complex_nonempty: bool,
    pub witness: Option<Vec<Rat>>,
}

/// Weight-jump locus S^0_D(q): P_D = 0, h(P_D) != 0. The complexified test
/// is exact divisibility over Q: the locus is empty over C iff
/// radical(P_D) divides h(P_D).
pub fn weight_jump_locus(cot: &Cotangent, q: &BasePoint) -> Result<JumpLocusReport> {
    let chart = cot.chart();
    let n = cot.n();
    if n < 6 {
        return Err(Error::WrongDimension { expected: 6, got: n });
    }
    let p = deficiency_polynomial(cot, q)?;
    if p.is_zero() {
        // R_D empty; no jump-one points
        return Ok(JumpLocusReport { real_nonempty: Some(false), complex_nonempty: false, witness: None });
    }
    if p.degree == 0 {
        return Ok(JumpLocusReport { real_nonempty: Some(false), complex_nonempty: false, witness: None });
    }
    let hp = cot.h.apply(&p.expr)?;
    let base_assigns: Vec<(usize, Rat)> = q
        .base
        .iter()
        .enumerate()
        .map(|(i, v)| (chart.base_index(i), v.clone()))
        .chain(q.aux.iter().enumerate().map(|(k, v)| (chart.aux_index(k), v.clone())))
        .chain((0..3).map(|j| (chart.fiber_index(j), Rat::zero())))
        .collect();
    let p_at_q = p.expr.subst_scalars(&base_assigns)?;
    let hp_at_q = hp.subst_scalars(&base_assigns)?;
    if !p_at_q.is_polynomial() || !hp_at_q.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let p_poly = p_at_q.num.clone();
    let hp_poly = hp_at_q.num.clone();
    let rad = p_poly.squarefree_radical()?;
    let complex_nonempty = if hp_poly.is_zero() { false } else { !rad.divides_exactly(&hp_poly) };
    // best-effort real witness: 2-variable slices over small rationals
    let witness = if complex_nonempty { find_real_witness(chart, &p_poly, &hp_poly) } else { None };
    let real_nonempty = match (&witness, complex_nonempty) {
        (_, false) => Some(false),
        (Some(_), true) => Some(true),
        (None, true) => None, // unknown
    };
    Ok(JumpLocusReport { real_nonempty, complex_nonempty, witness })
}

/// Search rational points with P = 0, h(P) != 0 on slices where all but two
/// of u4..un are frozen to small rationals.
fn find_real_witness(chart: &Chart, p: &Poly, hp: &Poly) -> Option<Vec<Rat>> {
    let n = chart.n;
    let fiber_syms: Vec<usize> = (3..n).map(|j| chart.fiber_index(j)).collect();
    let small: Vec<Rat> = [0i64, 1, -1, 2, -2, 3, -3, 5]
        .iter()
        .map(|&k| Rat::from_integer(k.into()))
        .collect();
    // choose the two active symbols; freeze the rest
    for a in 0..fiber_syms.len() {
        for b in 0..fiber_syms.len() {
            if a == b {
                continue;
            }
            // freeze others to values from `small`, singly indexed sweep
            for fill in &small {
                let mut q = p.clone();
                for (k, &sym) in fiber_syms.iter().enumerate() {
                    if k != a && k != b {
                        q = q.subst_scalar(sym, fill);
                    }
                }
                // set u_b = 1, solve for u_a over candidates
                let qa = q.subst_scalar(fiber_syms[b], &Rat::from_integer(1.into()));
                for cand in &small {
                    let val = qa.subst_scalar(fiber_syms[a], cand);
                    if val.as_constant().is_some_and(|v| v.is_zero()) {
                        // candidate zero of P; check h(P) != 0 there
                        let mut vals = vec![Rat::zero(); chart.nsyms()];
                        for (k, &sym) in fiber_syms.iter().enumerate() {
                            vals[sym] = if k == a {
                                cand.clone()
                            } else if k == b {
                                Rat::from_integer(1.into())
                            } else {
                                fill.clone()
                            };
                        }
                        let hval = hp.eval(&vals);
                        let u45_ok = !(vals[chart.fiber_index(3)].is_zero()
                            && vals[chart.fiber_index(4)].is_zero());
                        if !hval.is_zero() && u45_ok {
                            let w: Vec<Rat> =
                                (3..n).map(|j| vals[chart.fiber_index(j)].clone()).collect();
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Quadratic form Q_{lambda-bar, X1, X2}(v) = p . [nu, [nu, [X1, X2]]](q) on
/// D(q) for n = 6, in coordinates v = alpha X1 + beta X2.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneQuadraticForm {
    /// coefficients (q_aa, q_ab, q_bb) of alpha^2, alpha*beta, beta^2
    pub coeffs: [Rat; 3],
}

impl PlaneQuadraticForm {
    pub fn eval(&self, alpha: &Rat, beta: &Rat) -> Rat {
        &self.coeffs[0] * alpha * alpha + &self.coeffs[1] * alpha * beta + &self.coeffs[2] * beta * beta
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

pub fn n6_quadratic_form(cot: &Cotangent, q: &BasePoint) -> Result<PlaneQuadraticForm> {
    let n = cot.n();
    if n != 6 {
        return Err(Error::WrongDimension { expected: 6, got: n });
    }
    let fr = &cot.frame;
    // lambda-bar: generator of (D^3)-perp(q) = annihilator of X1..X5 at q
    let mut m = QMat::zeros(5, n);
    for (r, f) in fr.fields.iter().take(5).enumerate() {
        let vals = crate::manifold::VField::eval(f, q)?;
        for c in 0..n {
            m[(r, c)] = vals[c].clone();
        }
    }
    let p_bar = nullspace_one(&m)?;
    let x1 = &fr.fields[0];
    let x2 = &fr.fields[1];
    let x3 = crate::manifold::lie_bracket(x1, x2)?;
    let mut coeffs = [Rat::zero(), Rat::zero(), Rat::zero()];
    // alpha^2 term: [X1,[X1,X3]]; cross: [X1,[X2,X3]] + [X2,[X1,X3]]; beta^2: [X2,[X2,X3]]
    let b13 = crate::manifold::lie_bracket(x1, &x3)?;
    let b23 = crate::manifold::lie_bracket(x2, &x3)?;
    let t_aa = crate::manifold::lie_bracket(x1, &b13)?;
    let t_ab1 = crate::manifold::lie_bracket(x1, &b23)?;
    let t_ab2 = crate::manifold::lie_bracket(x2, &b13)?;
    let t_bb = crate::manifold::lie_bracket(x2, &b23)?;
    let dot = |f: &crate::manifold::VField| -> Result<Rat> {
        let vals = f.eval(q)?;
        Ok(vals.iter().zip(p_bar.iter()).map(|(a, b)| a * b).sum())
    };
    coeffs[0] = dot(&t_aa)?;
    coeffs[1] = dot(&t_ab1)? + dot(&t_ab2)?;
    coeffs[2] = dot(&t_bb)?;
    Ok(PlaneQuadraticForm { coeffs })
}

/// One-dimensional nullspace generator of a rational matrix.
fn nullspace_one(m: &QMat) -> Result<Vec<Rat>> {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| !a[(r, col)].is_zero());
        let Some(piv) = piv else { continue };
        for c in 0..cols {
            let t = a[(row, c)].clone();
            a[(row, c)] = a[(piv, c)].clone();
            a[(piv, c)] = t;
        }
        let p = a[(row, col)].clone();
        for c in 0..cols {
            a[(row, c)] = &a[(row, c)] / &p;
        }
        for r in 0..rows {
            if r != row && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                for c in 0..cols {
                    let t = &a[(row, c)] * &f;
                    a[(r, c)] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let free: Vec<usize> =
        (0..cols).filter(|c| !pivots.iter().any(|(_, pc)| pc == c)).collect();
    if free.len() != 1 {
        return Err(Error::WrongDimension { expected: 1, got: free.len() });
    }
    let fc = free[0];
    let mut v = vec![Rat::zero(); cols];
    v[fc] = Rat::from_integer(1.into());
    for (r, c) in pivots {
        v[c] = -a[(r, fc)].clone();
    }
    Ok(v)
}
