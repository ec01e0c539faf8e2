//! Vector-field calculus on the base manifold: Lie brackets, adapted frames
//! with structure functions, growth vectors, and the tangential flags that
//! detect regular abnormal trajectories.

use std::sync::Arc;

use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{EMat, QMat};
use crate::par;
use crate::scalar::Rat;

/// Vector field on the base manifold: coefficients of d/dx_i. Coefficients
/// may involve base and aux symbols but never fiber symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct VField {
    pub chart: Arc<Chart>,
    pub coef: Vec<Expr>,
}

impl VField {
    pub fn new(chart: &Arc<Chart>, coef: Vec<Expr>) -> Result<VField> {
        if coef.len() != chart.n {
            return Err(Error::DimensionMismatch(format!(
                "vector field needs {} coefficients, got {}",
                chart.n,
                coef.len()
            )));
        }
        for c in &coef {
            for j in 0..chart.n {
                if c.uses_symbol(chart.fiber_index(j)) {
                    return Err(Error::DimensionMismatch(
                        "vector-field coefficient uses a fiber symbol".into(),
                    ));
                }
            }
        }
        Ok(VField { chart: chart.clone(), coef })
    }

    pub fn zero(chart: &Arc<Chart>) -> VField {
        VField { chart: chart.clone(), coef: vec![Expr::zero(chart); chart.n] }
    }

    pub fn coord(chart: &Arc<Chart>, i: usize) -> VField {
        let mut v = VField::zero(chart);
        v.coef[i] = Expr::one(chart);
        v
    }

    pub fn add(&self, other: &VField) -> VField {
        VField {
            chart: self.chart.clone(),
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> VField {
        VField { chart: self.chart.clone(), coef: self.coef.iter().map(|c| c.mul(f)).collect() }
    }

    pub fn sub(&self, other: &VField) -> VField {
        VField {
            chart: self.chart.clone(),
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// Apply the field as a derivation to a function of base/aux symbols.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        let mut acc = Expr::zero(&self.chart);
        for (i, c) in self.coef.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&f.diff(self.chart.base_index(i))?));
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &BasePoint) -> Result<Vec<Rat>> {
        let assign = point.assignment(&self.chart);
        self.coef.iter().map(|c| c.eval(&assign).map_err(|_| Error::EvaluationPole)).collect()
    }
}

/// Lie bracket [X, Y], computed coefficientwise as X(Y^k) - Y(X^k).
pub fn lie_bracket(x: &VField, y: &VField) -> Result<VField> {
    if !Arc::ptr_eq(&x.chart, &y.chart) && *x.chart != *y.chart {
        return Err(Error::ChartMismatch);
    }
    let chart = &x.chart;
    let coef = par::map_default((0..chart.n).collect::<Vec<_>>(), |k| {
        let mut t = Expr::zero(chart);
        for i in 0..chart.n {
            if !x.coef[i].is_zero() {
                t = t.add(&x.coef[i].mul(&y.coef[k].diff(i).expect("base symbol")));
            }
            if !y.coef[i].is_zero() {
                t = t.sub(&y.coef[i].mul(&x.coef[k].diff(i).expect("base symbol")));
            }
        }
        t
    });
    Ok(VField { chart: chart.clone(), coef })
}

/// Iterated ad: (ad X)^k (Y).
pub fn ad_pow(x: &VField, y: &VField, k: usize) -> Result<Vec<VField>> {
    let mut out = vec![y.clone()];
    for _ in 0..k {
        let next = lie_bracket(x, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Rational base point: values for the base coordinates and for every aux
/// symbol (aux values must satisfy the chart's rewrite relations).
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoint {
    pub base: Vec<Rat>,
    pub aux: Vec<Rat>,
}

impl BasePoint {
    pub fn new(chart: &Chart, base: Vec<Rat>, aux: Vec<Rat>) -> Result<BasePoint> {
        if base.len() != chart.n || aux.len() != chart.aux.len() {
            return Err(Error::DimensionMismatch("base point arity".into()));
        }
        // aux values must satisfy the rewrite relations
        for rule in &chart.rewrites {
            let mut values = vec![Rat::zero(); chart.nsyms()];
            for (i, b) in base.iter().enumerate() {
                values[i] = b.clone();
            }
            for (k, a) in aux.iter().enumerate() {
                values[2 * chart.n + k] = a.clone();
            }
            let lhs_val = {
                let mut acc = Rat::from_integer(1.into());
                for (v, &e) in rule.lhs.0.iter().enumerate() {
                    if e > 0 {
                        acc *= num_traits::pow::pow(values[v].clone(), e as usize);
                    }
                }
                acc
            };
            let rhs_val = rule.rhs.eval(&values);
            if lhs_val != rhs_val {
                return Err(Error::DimensionMismatch(
                    "aux values violate a rewrite relation".into(),
                ));
            }
        }
        Ok(BasePoint { base, aux })
    }

    pub fn origin(chart: &Chart) -> BasePoint {
        BasePoint { base: vec![Rat::zero(); chart.n], aux: vec![Rat::zero(); chart.aux.len()] }
    }

    /// Assignment vector over all chart symbols (fiber symbols unset).
    pub fn assignment(&self, chart: &Chart) -> Vec<Option<Rat>> {
        let mut v = vec![None; chart.nsyms()];
        for (i, b) in self.base.iter().enumerate() {
            v[i] = Some(b.clone());
        }
        for (k, a) in self.aux.iter().enumerate() {
            v[2 * chart.n + k] = Some(a.clone());
        }
        v
    }
}

/// The single user-facing input: a chart, two generating fields, an optional
/// base point, and optional completion fields for n > 5.
#[derive(Clone, Debug)]
pub struct DistributionSpec {
    pub chart: Arc<Chart>,
    pub x1: VField,
    pub x2: VField,
    pub base_point: Option<BasePoint>,
    pub completion: Option<Vec<VField>>,
}

impl DistributionSpec {
    pub fn new(
        chart: &Arc<Chart>,
        x1: VField,
        x2: VField,
        base_point: Option<BasePoint>,
        completion: Option<Vec<VField>>,
    ) -> Result<Self> {
        let m = EMat::from_columns(&[x1.coef.clone(), x2.coef.clone()]);
        if m.rank() < 2 {
            return Err(Error::DegenerateDistribution);
        }
        Ok(DistributionSpec { chart: chart.clone(), x1, x2, base_point, completion })
    }
}

/// Frame with cached structure functions. `c_of(i, j, k)` is the coefficient
/// of X_k in [X_i, X_j] (0-based); in the classical indexing this is c_{ji}^k
/// for the bracket [X_i, X_j].
#[derive(Clone, Debug)]
pub struct Frame {
    pub chart: Arc<Chart>,
    pub fields: Vec<VField>,
    pub c: Vec<Vec<Vec<Expr>>>,
    pub strongly_adapted: bool,
}

impl Frame {
    pub fn n(&self) -> usize {
        self.fields.len()
    }

    pub fn c_of(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.c[i][j][k]
    }

    /// Frame matrix: column i holds the coefficients of X_i.
    pub fn matrix(&self) -> EMat {
        EMat::from_columns(&self.fields.iter().map(|f| f.coef.clone()).collect::<Vec<_>>())
    }

    /// Build from explicit fields, verifying invertibility and computing the
    /// structure functions.
    pub fn from_fields(chart: &Arc<Chart>, fields: Vec<VField>, strongly_adapted: bool) -> Result<Frame> {
        let n = chart.n;
        if fields.len() != n {
            return Err(Error::DimensionMismatch("frame needs n fields".into()));
        }
        let m = EMat::from_columns(&fields.iter().map(|f| f.coef.clone()).collect::<Vec<_>>());
        let det = m.det()?;
        if det.is_zero() {
            return Err(Error::DegenerateFrame);
        }
        let inv = m.inverse()?;
        // brackets in parallel, then coefficients by applying the inverse
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i < j).collect();
        let brackets = par::map_default(pairs.clone(), |(i, j)| {
            lie_bracket(&fields[i], &fields[j]).expect("same chart")
        });
        let zero = Expr::zero(chart);
        let mut c = vec![vec![vec![zero.clone(); n]; n]; n];
        for (idx, (i, j)) in pairs.iter().enumerate() {
            let br = &brackets[idx];
            for k in 0..n {
                let mut acc = Expr::zero(chart);
                for r in 0..n {
                    acc = acc.add(&inv[(k, r)].mul(&br.coef[r]));
                }
                c[*i][*j][k] = acc.clone();
                c[*j][*i][k] = acc.neg();
            }
        }
        Ok(Frame { chart: chart.clone(), fields, c, strongly_adapted })
    }
}

/// Build an adapted frame. With `strong`, X3 = [X1,X2], X4 = [X1,X3],
/// X5 = [X2,X3]; a supplied completion of n-5 extra fields (or an automatic
/// greedy choice of coordinate fields) fills dimensions beyond five. A full
/// user completion of n-2 fields replaces X3..Xn after an adaptedness check.
pub fn build_adapted_frame(spec: &DistributionSpec, strong: bool) -> Result<Frame> {
    let chart = &spec.chart;
    let n = chart.n;
    if n < 5 {
        return Err(Error::WrongDimension { expected: 5, got: n });
    }
    let x1 = spec.x1.clone();
    let x2 = spec.x2.clone();
    if let Some(completion) = &spec.completion {
        if completion.len() == n - 2 {
            // full user frame: validate adaptedness mod the lower powers
            let fields: Vec<VField> =
                [x1.clone(), x2.clone()].into_iter().chain(completion.iter().cloned()).collect();
            let x3b = lie_bracket(&x1, &x2)?;
            check_congruent(&fields[..2], &completion[0], &x3b)?;
            let x4b = lie_bracket(&x1, &completion[0])?;
            check_congruent(&fields[..3], &completion[1], &x4b)?;
            let x5b = lie_bracket(&x2, &completion[0])?;
            check_congruent(&fields[..3], &completion[2], &x5b)?;
            return Frame::from_fields(chart, fields, false);
        }
    }
    let x3 = lie_bracket(&x1, &x2)?;
    let x4 = lie_bracket(&x1, &x3)?;
    let x5 = lie_bracket(&x2, &x3)?;
    let mut fields = vec![x1, x2, x3, x4, x5];
    if !strong {
        return Err(Error::Internal(
            "weak-adapted frames require a full user completion".into(),
        ));
    }
    if n > 5 {
        if let Some(completion) = &spec.completion {
            if completion.len() != n - 5 {
                return Err(Error::CompletionFailed);
            }
            fields.extend(completion.iter().cloned());
        } else {
            complete_with_coordinates(chart, &mut fields, spec.base_point.as_ref())?;
        }
    }
    Frame::from_fields(chart, fields, true)
}

/// Verify `candidate == bracket mod span(lower...)` as rational functions.
fn check_congruent(lower: &[VField], candidate: &VField, bracket: &VField) -> Result<()> {
    let diff = candidate.sub(bracket);
    if diff.coef.iter().all(|c| c.is_zero()) {
        return Ok(());
    }
    let mut cols: Vec<Vec<Expr>> = lower.iter().map(|f| f.coef.clone()).collect();
    let base_rank = EMat::from_columns(&cols).rank();
    cols.push(diff.coef.clone());
    if EMat::from_columns(&cols).rank() == base_rank {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(
            "supplied completion is not adapted to the distribution".into(),
        ))
    }
}

/// Greedy completion by coordinate fields, preferring determinants that do
/// not vanish at the base point; deterministic order.
fn complete_with_coordinates(
    chart: &Arc<Chart>,
    fields: &mut Vec<VField>,
    base_point: Option<&BasePoint>,
) -> Result<()> {
    let n = chart.n;
    while fields.len() < n {
        let mut chosen = None;
        for i in 0..n {
            let cand = VField::coord(chart, i);
            let mut cols: Vec<Vec<Expr>> =
                fields.iter().map(|f| f.coef.clone()).collect();
            cols.push(cand.coef.clone());
            let m = EMat::from_columns(&cols);
            if m.rank() != fields.len() + 1 {
                continue;
            }
            if let Some(pt) = base_point {
                // require pointwise independence too
                let mut ok = true;
                let mut qcols: Vec<Vec<Rat>> = Vec::new();
                for f in fields.iter().chain(std::iter::once(&cand)) {
                    match f.eval(pt) {
                        Ok(v) => qcols.push(v),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok || QMat::from_columns(&qcols).rank() != fields.len() + 1 {
                    continue;
                }
            }
            chosen = Some(cand);
            break;
        }
        match chosen {
            Some(c) => fields.push(c),
            None => return Err(Error::CompletionFailed),
        }
    }
    Ok(())
}

/// Flag dimensions: nondecreasing, bounded by the ambient dimension.
pub type FlagDims = Vec<usize>;

/// Small growth vector at a rational point.
pub fn growth_vector(spec: &DistributionSpec, q: &BasePoint, depth: usize) -> Result<FlagDims> {
    let n = spec.chart.n;
    let mut level: Vec<VField> = vec![spec.x1.clone(), spec.x2.clone()];
    let mut all: Vec<VField> = level.clone();
    let mut dims = Vec::new();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for f in &all {
        cols.push(f.eval(q)?);
    }
    dims.push(QMat::from_columns(&cols).rank());
    for _ in 1..depth {
        if *dims.last().unwrap() == n {
            dims.push(n);
            continue;
        }
        let gens = [spec.x1.clone(), spec.x2.clone()];
        let mut next = Vec::new();
        for g in &gens {
            for f in &level {
                next.push(lie_bracket(g, f)?);
            }
        }
        for f in &next {
            cols.push(f.eval(q)?);
        }
        all.extend(next.iter().cloned());
        level = next;
        dims.push(QMat::from_columns(&cols).rank());
    }
    Ok(dims)
}

/// Dimensions of T_xi^(i) = span(X1, X2, ad X1 (X2), ..., (ad X1)^i (X2)) at
/// q, for i = 1..=imax. The caller pre-rotates the basis so the trajectory
/// direction is X1.
pub fn tangent_flag_dims(spec: &DistributionSpec, q: &BasePoint, imax: usize) -> Result<FlagDims> {
    let ads = ad_pow(&spec.x1, &spec.x2, imax)?;
    let mut cols: Vec<Vec<Rat>> = vec![spec.x1.eval(q)?, spec.x2.eval(q)?];
    let mut dims = Vec::new();
    for item in ads.iter().skip(1) {
        cols.push(item.eval(q)?);
        dims.push(QMat::from_columns(&cols).rank());
    }
    Ok(dims)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbnormalFlags {
    pub constant_weight: bool,
    pub corank1: bool,
    pub regular: bool,
}

/// Flags for the abnormal trajectory through q tangent to X1.
///
/// `constant_weight` and `corank1` are pointwise conditions on the tangential
/// flag; `regular` is the regularity span condition, taken as a germ property
/// along the trajectory: when the span is deficient at q itself it is
/// re-evaluated generically.
pub fn regular_abnormal_check(spec: &DistributionSpec, q: &BasePoint) -> Result<AbnormalFlags> {
    let n = spec.chart.n;
    let dims = tangent_flag_dims(spec, q, n - 2)?;
    let constant_weight = dims[n - 4] == n - 1; // dim T^(n-3)
    let corank1 = dims[n - 3] == n - 1; // dim T^(n-2)
    // regularity span: X1, X2, ad^1..ad^(n-3), [X2,[X1,X2]]
    let ads = ad_pow(&spec.x1, &spec.x2, n - 3)?;
    let x3 = lie_bracket(&spec.x1, &spec.x2)?;
    let extra = lie_bracket(&spec.x2, &x3)?;
    let mut fields: Vec<VField> = vec![spec.x1.clone(), spec.x2.clone()];
    fields.extend(ads.iter().skip(1).cloned());
    fields.push(extra);
    let mut qcols = Vec::new();
    for f in &fields {
        qcols.push(f.eval(q)?);
    }
    let mut regular = QMat::from_columns(&qcols).rank() == n;
    if !regular {
        let m = EMat::from_columns(&fields.iter().map(|f| f.coef.clone()).collect::<Vec<_>>());
        regular = m.rank() == n;
    }
    Ok(AbnormalFlags { constant_weight, corank1, regular })
}
