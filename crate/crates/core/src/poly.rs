//! Sparse multivariate polynomials over exact rationals.
//!
//! Monomials are dense exponent vectors over a fixed symbol order; terms are
//! kept sorted in descending graded-lexicographic order so that structural
//! equality is semantic equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_gcd, Rat};

/// Exponent vector; length equals the chart's symbol count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Box<[u16]>);

impl Mono {
    pub fn unit(nsyms: usize) -> Self {
        Mono(vec![0u16; nsyms].into_boxed_slice())
    }

    pub fn var(nsyms: usize, i: usize) -> Self {
        let mut e = vec![0u16; nsyms];
        e[i] = 1;
        Mono(e.into_boxed_slice())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>()
                .into_boxed_slice(),
        )
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn div_into(&self, other: &Mono) -> Mono {
        Mono(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect::<Vec<_>>()
                .into_boxed_slice(),
        )
    }

    /// Graded lexicographic comparison with the fixed symbol order.
    pub fn grlex(&self, other: &Mono) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

/// Wrapper giving `Mono` the grlex order for use in ordered maps.
#[derive(Clone, PartialEq, Eq, Debug)]
struct OrdMono(Mono);

impl PartialOrd for OrdMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.grlex(&other.0)
    }
}

/// Multivariate polynomial; terms sorted descending grlex, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nsyms: usize,
    terms: Vec<(Mono, Rat)>,
}

impl Poly {
    pub fn zero(nsyms: usize) -> Self {
        Poly { nsyms, terms: Vec::new() }
    }

    pub fn constant(nsyms: usize, c: Rat) -> Self {
        if c.is_zero() {
            Self::zero(nsyms)
        } else {
            Poly { nsyms, terms: vec![(Mono::unit(nsyms), c)] }
        }
    }

    pub fn one(nsyms: usize) -> Self {
        Self::constant(nsyms, Rat::one())
    }

    pub fn var(nsyms: usize, i: usize) -> Self {
        Poly { nsyms, terms: vec![(Mono::var(nsyms, i), Rat::one())] }
    }

    pub fn from_terms(nsyms: usize, terms: Vec<(Mono, Rat)>) -> Self {
        let mut map: BTreeMap<OrdMono, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = map.entry(OrdMono(m)).or_insert_with(Rat::zero);
            *e += c;
        }
        let mut out: Vec<(Mono, Rat)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.0, c)).collect();
        out.reverse();
        Poly { nsyms, terms: out }
    }

    pub fn nsyms(&self) -> usize {
        self.nsyms
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.total_degree() == 0)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Leading term in grlex order.
    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[var] > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nsyms: self.nsyms,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nsyms, other.nsyms);
        // merge two sorted descending lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.grlex(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { nsyms: self.nsyms, terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nsyms, other.nsyms);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nsyms);
        }
        let mut map: BTreeMap<OrdMono, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let e = map.entry(OrdMono(m)).or_insert_with(Rat::zero);
                *e += c;
            }
        }
        let mut out: Vec<(Mono, Rat)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.0, c)).collect();
        out.reverse();
        Poly { nsyms: self.nsyms, terms: out }
    }

    pub fn mul_scalar(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nsyms);
        }
        Poly {
            nsyms: self.nsyms,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nsyms);
        }
        Poly {
            nsyms: self.nsyms,
            terms: self.terms.iter().map(|(mm, k)| (mm.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nsyms);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Plain partial derivative; no chain rule for aux symbols.
    pub fn diff_raw(&self, var: usize) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut me = m.0.to_vec();
            me[var] -= 1;
            terms.push((Mono(me.into_boxed_slice()), c * Rat::from_integer(e.into())));
        }
        // order is preserved within grlex? differentiating can reorder; rebuild
        Poly::from_terms(self.nsyms, terms)
    }

    /// Substitute a scalar for one variable.
    pub fn subst_scalar(&self, var: usize, value: &Rat) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut me = m.0.to_vec();
            me[var] = 0;
            let factor = num_traits::pow::pow(value.clone(), e as usize);
            terms.push((Mono(me.into_boxed_slice()), c * factor));
        }
        Poly::from_terms(self.nsyms, terms)
    }

    /// Substitute polynomials for all variables simultaneously.
    pub fn subst_all(&self, images: &[Poly], out_nsyms: usize) -> Poly {
        let mut acc = Poly::zero(out_nsyms);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_nsyms, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[v].pow(e as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluate with a full assignment (one value per symbol).
    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow::pow(values[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Content: positive rational c such that self/c has coprime integer
    /// coefficients. Zero polynomial has content 0.
    pub fn content(&self) -> Rat {
        let mut g = Rat::zero();
        for (_, c) in &self.terms {
            g = rat_gcd(&g, c);
        }
        g
    }

    /// Primitive part with a sign normalisation: leading coefficient positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.mul_scalar(&c.recip())
    }

    /// Exact division; error if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        if self.is_zero() {
            return Ok(Poly::zero(self.nsyms));
        }
        let (dm, dc) = (&divisor.terms[0].0, &divisor.terms[0].1);
        let mut rem = self.clone();
        let mut qterms: Vec<(Mono, Rat)> = Vec::new();
        while !rem.is_zero() {
            let (lm, lc) = (&rem.terms[0].0, &rem.terms[0].1);
            if !dm.divides(lm) {
                return Err(Error::Internal("exact_div: not divisible".into()));
            }
            let qm = dm.div_into(lm);
            let qc = lc / dc;
            rem = rem.sub(&divisor.mul_mono(&qm, &qc));
            qterms.push((qm, qc));
        }
        Ok(Poly::from_terms(self.nsyms, qterms))
    }

    pub fn divides_exactly(&self, other: &Poly) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Collect the polynomial as univariate in `var` with Poly coefficients
    /// (exponent of `var` zeroed inside the coefficients).
    fn to_univar(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut coeffs = vec![Poly::zero(self.nsyms); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut me = m.0.to_vec();
            me[var] = 0;
            coeffs[e] =
                coeffs[e].add(&Poly { nsyms: self.nsyms, terms: vec![(Mono(me.into_boxed_slice()), c.clone())] });
        }
        coeffs
    }

    fn from_univar(nsyms: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut me = m.0.to_vec();
                me[var] += e as u16;
                terms.push((Mono(me.into_boxed_slice()), c.clone()));
            }
        }
        Poly::from_terms(nsyms, terms)
    }

    /// Multivariate GCD over Q, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd_impl(self, other)
    }

    /// Squarefree part (radical): product of the distinct irreducible factors,
    /// primitive with positive leading coefficient.
    pub fn squarefree_radical(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = self.clone();
        for v in 0..self.nsyms {
            if self.uses_var(v) {
                g = g.gcd(&self.diff_raw(v));
            }
        }
        if g.is_constant() {
            return Ok(self.primitive());
        }
        Ok(self.exact_div(&g)?.primitive())
    }
}

fn gcd_impl(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let a = a.primitive();
    let b = b.primitive();
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nsyms);
    }
    // main variable: used by both, minimising the larger degree
    let mut var = None;
    let mut best = u32::MAX;
    for v in 0..a.nsyms {
        if a.uses_var(v) && b.uses_var(v) {
            let d = a.degree_in(v).max(b.degree_in(v)) as u32;
            if d < best {
                best = d;
                var = Some(v);
            }
        }
    }
    let var = match var {
        Some(v) => v,
        // no common variable: gcd of contents is a constant
        None => return Poly::one(a.nsyms),
    };
    let ua = a.to_univar(var);
    let ub = b.to_univar(var);
    let cont_a = vec_content(&ua);
    let cont_b = vec_content(&ub);
    let prim_a = vec_exact_div(&ua, &cont_a);
    let prim_b = vec_exact_div(&ub, &cont_b);
    let cont_g = gcd_impl(&cont_a, &cont_b);
    let prim_g = subresultant_prs(prim_a, prim_b, a.nsyms);
    let g = Poly::from_univar(a.nsyms, var, &prim_g);
    g.mul(&cont_g).primitive()
}

fn vec_content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero(coeffs.first().map(|p| p.nsyms).unwrap_or(0));
    for c in coeffs {
        if !c.is_zero() {
            g = gcd_impl(&g, c);
        }
    }
    g
}

fn vec_exact_div(coeffs: &[Poly], d: &Poly) -> Vec<Poly> {
    coeffs.iter().map(|c| c.exact_div(d).expect("content divides")).collect()
}

fn vec_trim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of univariate polynomials with Poly coefficients.
fn pseudo_rem(a: &[Poly], b: &[Poly], nsyms: usize) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly> = a.to_vec();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r = lb*r - lr * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&lr.mul(bc));
        }
        r = vec_trim(r);
        if r.is_empty() {
            break;
        }
    }
    if r.is_empty() {
        vec![Poly::zero(nsyms); 0]
    } else {
        r
    }
}

/// Primitive PRS: contents are stripped at every step. Simpler than the
/// subresultant scaling and adequate for the coefficient sizes seen here.
fn subresultant_prs(a: Vec<Poly>, b: Vec<Poly>, nsyms: usize) -> Vec<Poly> {
    let (mut f, mut g) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        if g.is_empty() {
            let c = vec_content(&f);
            return vec_exact_div(&f, &c);
        }
        if g.len() == 1 {
            // nonzero constant remainder: coprime
            return vec![Poly::one(nsyms)];
        }
        let r = pseudo_rem(&f, &g, nsyms);
        let r = vec_trim(r);
        f = g;
        g = if r.is_empty() {
            Vec::new()
        } else {
            let c = vec_content(&r);
            vec_exact_div(&r, &c)
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_i};

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn arithmetic_and_order() {
        let p = x(0).add(&Poly::one(3)); // x+1
        let q = p.mul(&p); // x^2+2x+1
        assert_eq!(q.terms().len(), 3);
        assert_eq!(q.total_degree(), 2);
        let d = q.diff_raw(0); // 2x+2
        assert_eq!(d, x(0).mul_scalar(&rat_i(2)).add(&Poly::constant(3, rat_i(2))));
    }

    #[test]
    fn exact_division_and_gcd() {
        // (x^2-1)/(x-1) = x+1
        let num = x(0).mul(&x(0)).sub(&Poly::one(3));
        let den = x(0).sub(&Poly::one(3));
        assert_eq!(num.exact_div(&den).unwrap(), x(0).add(&Poly::one(3)));
        // gcd((x+y)^2 (x-y), (x+y)(x-y)^2) = (x+y)(x-y)
        let s = x(0).add(&x(1));
        let d = x(0).sub(&x(1));
        let a = s.pow(2).mul(&d);
        let b = s.mul(&d.pow(2));
        let g = a.gcd(&b);
        assert_eq!(g, s.mul(&d).primitive());
    }

    #[test]
    fn squarefree() {
        // (x-y)^2 * x -> (x-y) * x
        let d = x(0).sub(&x(1));
        let p = d.pow(2).mul(&x(0));
        let r = p.squarefree_radical().unwrap();
        assert_eq!(r, d.mul(&x(0)).primitive());
        // x^4 -> x
        assert_eq!(x(0).pow(4).squarefree_radical().unwrap(), x(0));
        // x^2+y^2 squarefree already
        let q = x(0).pow(2).add(&x(1).pow(2));
        assert_eq!(q.squarefree_radical().unwrap(), q);
    }

    #[test]
    fn content_primitive() {
        let p = x(0).mul_scalar(&rat(4, 3)).add(&Poly::constant(3, rat(2, 3)));
        assert_eq!(p.content(), rat(2, 3));
        let pr = p.primitive();
        assert_eq!(pr, x(0).mul_scalar(&rat_i(2)).add(&Poly::one(3)));
    }
}
