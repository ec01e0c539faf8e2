//! Exact rational functions over a chart, with canonical normalisation:
//! rewrite rules applied, fraction reduced by polynomial GCD, denominator
//! monic in graded-lex order.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{rat_to_f64, Rat};

#[derive(Clone, Debug)]
pub struct Expr {
    pub chart: Arc<Chart>,
    pub num: Poly,
    pub den: Poly,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.same_chart(other) && self.num == other.num && self.den == other.den
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn same_chart(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.chart, &other.chart) || *self.chart == *other.chart
    }

    fn normalized(chart: Arc<Chart>, num: Poly, den: Poly) -> Result<Expr> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        let num = chart.rewrite(&num);
        let den = chart.rewrite(&den);
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        if num.is_zero() {
            let one = Poly::one(chart.nsyms());
            return Ok(Expr { chart, num, den: one });
        }
        // a constant on either side cannot share a factor
        let (mut num, mut den) = if num.is_constant() || den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        let lead = den.leading().expect("nonzero").1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.mul_scalar(&inv);
            den = den.mul_scalar(&inv);
        }
        Ok(Expr { chart, num, den })
    }

    pub fn from_poly(chart: &Arc<Chart>, p: Poly) -> Expr {
        let den = Poly::one(chart.nsyms());
        Expr::normalized(chart.clone(), p, den).expect("unit denominator")
    }

    pub fn zero(chart: &Arc<Chart>) -> Expr {
        Expr::from_poly(chart, Poly::zero(chart.nsyms()))
    }

    pub fn one(chart: &Arc<Chart>) -> Expr {
        Expr::from_poly(chart, Poly::one(chart.nsyms()))
    }

    pub fn constant(chart: &Arc<Chart>, c: Rat) -> Expr {
        Expr::from_poly(chart, Poly::constant(chart.nsyms(), c))
    }

    pub fn symbol(chart: &Arc<Chart>, sym: usize) -> Expr {
        Expr::from_poly(chart, Poly::var(chart.nsyms(), sym))
    }

    pub fn symbol_named(chart: &Arc<Chart>, name: &str) -> Result<Expr> {
        let sym = chart.lookup(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Expr::symbol(chart, sym))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    fn check_chart(&self, other: &Expr) -> Result<()> {
        if self.same_chart(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        self.check_chart(other).expect("chart mismatch");
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Expr::normalized(self.chart.clone(), num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr { chart: self.chart.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        self.check_chart(other).expect("chart mismatch");
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        Expr::normalized(self.chart.clone(), num, den).expect("nonzero denominator")
    }

    pub fn mul_scalar(&self, c: &Rat) -> Expr {
        Expr::normalized(self.chart.clone(), self.num.mul_scalar(c), self.den.clone())
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        self.check_chart(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        let num = self.num.mul(&other.den);
        let den = self.den.mul(&other.num);
        Expr::normalized(self.chart.clone(), num, den)
    }

    pub fn pow(&self, k: i64) -> Result<Expr> {
        if k >= 0 {
            Ok(Expr::normalized(
                self.chart.clone(),
                self.num.pow(k as u32),
                self.den.pow(k as u32),
            )
            .expect("nonzero denominator"))
        } else {
            if self.is_zero() {
                return Err(Error::DivisionByZeroFunction);
            }
            Expr::normalized(self.chart.clone(), self.den.pow((-k) as u32), self.num.pow((-k) as u32))
        }
    }

    /// Partial derivative by a chart symbol. Base symbols trigger the aux
    /// chain rule; fiber and aux symbols are independent variables.
    pub fn diff(&self, sym: usize) -> Result<Expr> {
        if sym >= self.chart.nsyms() {
            return Err(Error::UnknownSymbol(format!("#{sym}")));
        }
        let dnum = self.poly_diff_chain(&self.num, sym);
        let dden = self.poly_diff_chain(&self.den, sym);
        // (n/d)' = (n'd - nd')/d^2
        let n = Expr::from_poly(&self.chart, self.num.clone());
        let d = Expr::from_poly(&self.chart, self.den.clone());
        let res = dnum.mul(&d).sub(&n.mul(&dden));
        let den2 = Expr::from_poly(&self.chart, self.den.mul(&self.den));
        res.div(&den2)
    }

    /// d(p)/d(sym) as an Expr, with the aux chain rule through base symbols.
    fn poly_diff_chain(&self, p: &Poly, sym: usize) -> Expr {
        let chart = &self.chart;
        let mut acc = Expr::from_poly(chart, p.diff_raw(sym));
        if chart.is_base(sym) {
            for (k, aux) in chart.aux.iter().enumerate() {
                if let Some((tn, td)) = &aux.table[sym] {
                    let a_idx = chart.aux_index(k);
                    let dp = p.diff_raw(a_idx);
                    if dp.is_zero() {
                        continue;
                    }
                    let t = Expr::normalized(chart.clone(), tn.clone(), td.clone())
                        .expect("table denominator nonzero");
                    acc = acc.add(&Expr::from_poly(chart, dp).mul(&t));
                }
            }
        }
        acc
    }

    /// Exact evaluation; `values[sym]` must cover every symbol that occurs.
    pub fn eval(&self, values: &[Option<Rat>]) -> Result<Rat> {
        let fill = |p: &Poly| -> Result<Vec<Rat>> {
            let mut v = vec![Rat::zero(); self.chart.nsyms()];
            for (i, slot) in values.iter().enumerate() {
                if let Some(r) = slot {
                    v[i] = r.clone();
                }
            }
            for (m, _) in p.terms() {
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 && values.get(i).map_or(true, |s| s.is_none()) {
                        return Err(Error::UnknownSymbol(self.chart.symbol_name(i).into()));
                    }
                }
            }
            Ok(v)
        };
        let nv = fill(&self.num)?;
        let dv = fill(&self.den)?;
        let d = self.den.eval(&dv);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(&nv) / d)
    }

    pub fn eval_f64(&self, values: &[Option<Rat>]) -> Result<f64> {
        Ok(rat_to_f64(&self.eval(values)?))
    }

    /// Substitute an exact scalar for one symbol.
    pub fn subst_scalar(&self, sym: usize, value: &Rat) -> Result<Expr> {
        Expr::normalized(
            self.chart.clone(),
            self.num.subst_scalar(sym, value),
            self.den.subst_scalar(sym, value),
        )
    }

    /// Substitute several scalars at once.
    pub fn subst_scalars(&self, assigns: &[(usize, Rat)]) -> Result<Expr> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (sym, v) in assigns {
            num = num.subst_scalar(*sym, v);
            den = den.subst_scalar(*sym, v);
        }
        Expr::normalized(self.chart.clone(), num, den)
    }

    /// Substitute expressions for symbols (identity elsewhere).
    pub fn subst_exprs(&self, assigns: &[(usize, Expr)]) -> Result<Expr> {
        let chart = &self.chart;
        let mut images: Vec<Expr> =
            (0..chart.nsyms()).map(|i| Expr::symbol(chart, i)).collect();
        for (sym, e) in assigns {
            images[*sym] = e.clone();
        }
        let eval_poly = |p: &Poly| -> Expr {
            let mut acc = Expr::zero(chart);
            for (m, c) in p.terms() {
                let mut t = Expr::constant(chart, c.clone());
                for (v, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&images[v].pow(e as i64).expect("nonnegative power"));
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        let n = eval_poly(&self.num);
        let d = eval_poly(&self.den);
        n.div(&d)
    }

    /// Degree in the given symbol of the numerator minus the denominator.
    pub fn uses_symbol(&self, sym: usize) -> bool {
        self.num.uses_var(sym) || self.den.uses_var(sym)
    }
}

// ---------------------------------------------------------------------------
// canonical text serialization
// ---------------------------------------------------------------------------

fn fmt_poly(chart: &Chart, p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || m.total_degree() == 0 {
            if mag.denom().is_one() {
                factors.push(format!("{}", mag.numer()));
            } else {
                factors.push(format!("{}/{}", mag.numer(), mag.denom()));
            }
        }
        for (v, &e) in m.0.iter().enumerate() {
            if e == 1 {
                factors.push(chart.symbol_name(v).to_string());
            } else if e > 1 {
                factors.push(format!("{}^{}", chart.symbol_name(v), e));
            }
        }
        write!(f, "{}", factors.join("*"))?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let d = self.den.as_constant().expect("constant");
            if d.is_one() {
                return fmt_poly(&self.chart, &self.num, f);
            }
            // denominator is monic, so a constant denominator is exactly 1
        }
        write!(f, "(")?;
        fmt_poly(&self.chart, &self.num, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.chart, &self.den, f)?;
        write!(f, ")")
    }
}

impl Expr {
    pub fn to_canonical_string(&self) -> String {
        format!("{self}")
    }
}

pub struct PolyDisplay<'a>(pub &'a Chart, pub &'a Poly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self.0, self.1, f)
    }
}
