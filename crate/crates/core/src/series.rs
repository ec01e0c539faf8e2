//! Truncated power/Laurent series with tracked validity windows.
//!
//! A series knows its coefficients on a finite exponent window; coefficients
//! beyond the window are undefined, never assumed zero. Every operation
//! propagates the guaranteed-valid order conservatively.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_i, rat_sqrt_exact, Rat};

/// Univariate series: sum of `c[i] * t^(lo+i)`; exponents below `lo` are
/// exactly zero, exponents at or above `lo + c.len()` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Ser1 {
    pub lo: i64,
    pub c: Vec<Rat>,
}

impl Ser1 {
    pub fn new(lo: i64, c: Vec<Rat>) -> Self {
        Ser1 { lo, c }
    }

    /// Zero series known up to O(t^end).
    pub fn zero_to(end: i64) -> Self {
        Ser1 { lo: end, c: Vec::new() }
    }

    /// Polynomial coefficients `c[k] t^k`, treated as exact to order `ord`.
    pub fn from_poly_coeffs(mut c: Vec<Rat>, ord: usize) -> Self {
        if c.len() < ord {
            c.resize(ord, Rat::zero());
        }
        Ser1 { lo: 0, c }
    }

    pub fn constant(v: Rat, ord: usize) -> Self {
        let mut c = vec![Rat::zero(); ord];
        if !c.is_empty() {
            c[0] = v;
        }
        Ser1 { lo: 0, c }
    }

    /// First exponent with known valid coefficient.
    pub fn end(&self) -> i64 {
        self.lo + self.c.len() as i64
    }

    /// True valuation within the window; `None` when all known coefficients
    /// vanish (the series is O(t^end)).
    pub fn val(&self) -> Option<i64> {
        self.c.iter().position(|x| !x.is_zero()).map(|i| self.lo + i as i64)
    }

    fn val_or_end(&self) -> i64 {
        self.val().unwrap_or_else(|| self.end())
    }

    pub fn coeff(&self, k: i64) -> Rat {
        if k < self.lo {
            return Rat::zero();
        }
        let i = (k - self.lo) as usize;
        self.c.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Whether exponent `k` is inside the known window.
    pub fn knows(&self, k: i64) -> bool {
        k < self.end()
    }

    pub fn is_zero_to_window(&self) -> bool {
        self.val().is_none()
    }

    pub fn neg(&self) -> Ser1 {
        Ser1 { lo: self.lo, c: self.c.iter().map(|x| -x.clone()).collect() }
    }

    pub fn add(&self, other: &Ser1) -> Ser1 {
        let lo = self.lo.min(other.lo);
        let end = self.end().min(other.end());
        if end <= lo {
            return Ser1::zero_to(end);
        }
        let mut c = vec![Rat::zero(); (end - lo) as usize];
        for (i, v) in c.iter_mut().enumerate() {
            let k = lo + i as i64;
            *v = self.coeff(k) + other.coeff(k);
        }
        Ser1 { lo, c }
    }

    pub fn sub(&self, other: &Ser1) -> Ser1 {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &Rat) -> Ser1 {
        Ser1 { lo: self.lo, c: self.c.iter().map(|x| x * f).collect() }
    }

    pub fn mul(&self, other: &Ser1) -> Ser1 {
        let va = self.val_or_end();
        let vb = other.val_or_end();
        let end = (self.end() + vb).min(other.end() + va);
        let lo = self.lo + other.lo;
        if end <= lo {
            return Ser1::zero_to(end);
        }
        let mut c = vec![Rat::zero(); (end - lo) as usize];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = self.lo + i as i64 + other.lo + j as i64;
                if k >= lo && k < end {
                    c[(k - lo) as usize] += a * b;
                }
            }
        }
        Ser1 { lo, c }
    }

    pub fn shift(&self, by: i64) -> Ser1 {
        Ser1 { lo: self.lo + by, c: self.c.clone() }
    }

    /// Multiplicative inverse; the leading known coefficient must be nonzero.
    pub fn invert(&self) -> Result<Ser1> {
        let v = self.val().ok_or(Error::OrderUnderflow { have: self.end(), need: self.end() + 1 })?;
        let rel = (v - self.lo) as usize;
        let unit: Vec<Rat> = self.c[rel..].to_vec(); // unit[0] != 0
        let n = unit.len();
        let mut inv = vec![Rat::zero(); n];
        let u0 = unit[0].clone();
        inv[0] = u0.recip();
        for k in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc += &unit[j] * &inv[k - j];
            }
            inv[k] = -acc / &u0;
        }
        Ok(Ser1 { lo: -v, c: inv })
    }

    pub fn div(&self, other: &Ser1) -> Result<Ser1> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn diff(&self) -> Ser1 {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, v) in self.c.iter().enumerate() {
            let k = self.lo + i as i64;
            c.push(v * rat_i(k));
        }
        // t^0 term maps to zero coefficient at t^-1; keep window shape
        Ser1 { lo: self.lo - 1, c }
    }

    pub fn pow_i(&self, k: i64) -> Result<Ser1> {
        if k == 0 {
            let end = self.end() - self.val_or_end();
            return Ok(Ser1::constant(Rat::one(), end.max(1) as usize));
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..k.abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// ln of a series with unit constant term (lo-normalized, c[0] = 1).
    pub fn ln_unit(&self) -> Result<Ser1> {
        let v = self.val().ok_or(Error::OrderTooLow("ln of zero window".into()))?;
        if v != 0 || !self.coeff(0).is_one() {
            return Err(Error::OrderTooLow("ln requires unit constant term".into()));
        }
        let n = (self.end()).max(1) as usize;
        let mut x = self.clone();
        x.c[(0 - x.lo) as usize] = Rat::zero(); // x = self - 1
        let mut acc = Ser1::zero_to(self.end());
        let mut p = Ser1::constant(Rat::one(), n);
        for j in 1..n as i64 {
            p = p.mul(&x);
            if p.is_zero_to_window() && p.val_or_end() >= self.end() {
                break;
            }
            acc = acc.add(&p.scale(&(rat_i(if j % 2 == 1 { 1 } else { -1 }) / rat_i(j))));
        }
        Ok(acc)
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Ser1> {
        if self.val().is_some_and(|v| v <= 0) {
            return Err(Error::OrderTooLow("exp requires positive valuation".into()));
        }
        let n = self.end().max(1) as usize;
        let mut acc = Ser1::constant(Rat::one(), n);
        let mut p = Ser1::constant(Rat::one(), n);
        let mut fact = Rat::one();
        for j in 1..n as i64 {
            p = p.mul(self);
            fact *= rat_i(j);
            acc = acc.add(&p.scale(&fact.clone().recip()));
        }
        // window: min over additions already tracked
        Ok(acc)
    }

    /// Composition self(phi(t)); requires `self` regular (lo >= 0 after
    /// trimming) or Laurent with invertible phi; phi must have valuation 1.
    pub fn compose(&self, phi: &Ser1) -> Result<Ser1> {
        if phi.val() != Some(1) {
            return Err(Error::OrderTooLow("compose requires phi with valuation 1".into()));
        }
        let mut acc = Ser1::zero_to(phi.end());
        for (i, coeff) in self.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let k = self.lo + i as i64;
            let p = phi.pow_i(k)?;
            acc = acc.add(&p.scale(coeff));
        }
        // account for truncation of self: error O(phi^end) = O(t^end)
        let end = acc.end().min(self.end());
        Ok(acc.truncate_end(end))
    }

    pub fn truncate_end(&self, end: i64) -> Ser1 {
        if end >= self.end() {
            return self.clone();
        }
        if end <= self.lo {
            return Ser1::zero_to(end);
        }
        Ser1 { lo: self.lo, c: self.c[..(end - self.lo) as usize].to_vec() }
    }

    /// Square root: valuation must be even with a perfect-square leading
    /// coefficient. Sign choice: positive square root of the leading term.
    pub fn sqrt(&self) -> Result<Ser1> {
        let v = self.val().ok_or(Error::NotASquare)?;
        if v % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let rel = (v - self.lo) as usize;
        let unit: Vec<Rat> = self.c[rel..].to_vec();
        let c0 = unit[0].clone();
        let r0 = rat_sqrt_exact(&c0).ok_or(Error::NotASquare)?;
        let n = unit.len();
        // q with q^2 = unit: q0 = r0; 2 q0 qk = unit_k - sum_{j=1..k-1} qj q(k-j)
        let mut q = vec![Rat::zero(); n];
        q[0] = r0.clone();
        for k in 1..n {
            let mut acc = unit[k].clone();
            for j in 1..k {
                acc -= &q[j] * &q[k - j];
            }
            q[k] = acc / (rat_i(2) * &r0);
        }
        Ok(Ser1 { lo: v / 2, c: q })
    }

    pub fn trim_leading_zeros(&self) -> Ser1 {
        match self.val() {
            None => Ser1::zero_to(self.end()),
            Some(v) => Ser1 { lo: v, c: self.c[(v - self.lo) as usize..].to_vec() },
        }
    }
}

/// Bivariate series `s^sv * F(s, tau)` with `F` regular and known on the
/// triangle `{ s^i tau^j : i + j < n }`. Negative powers occur only in `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ser2 {
    pub sv: i64,
    pub n: usize,
    /// d[i][j] = coefficient of s^(sv+i) tau^j, stored for i+j < n.
    pub d: Vec<Vec<Rat>>,
}

impl Ser2 {
    pub fn zero(n: usize) -> Self {
        Ser2 { sv: 0, n, d: (0..n).map(|i| vec![Rat::zero(); n - i]).collect() }
    }

    pub fn constant(v: Rat, n: usize) -> Self {
        let mut z = Self::zero(n);
        if n > 0 {
            z.d[0][0] = v;
        }
        z
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.d.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Lowest total degree of a nonzero known coefficient of the regular
    /// factor; `n` when the window is all zero.
    fn total_val(&self) -> usize {
        for deg in 0..self.n {
            for i in 0..=deg {
                if !self.get(i, deg - i).is_zero() {
                    return deg;
                }
            }
        }
        self.n
    }

    pub fn is_zero_to_window(&self) -> bool {
        self.total_val() == self.n
    }

    fn resized(&self, n: usize) -> Ser2 {
        let mut z = Ser2::zero(n);
        z.sv = self.sv;
        for i in 0..n.min(self.d.len()) {
            for j in 0..(n - i).min(self.d[i].len()) {
                z.d[i][j] = self.d[i][j].clone();
            }
        }
        z
    }

    /// Reinterpret with a lower s-valuation (padding explicit zero rows).
    fn with_sv(&self, sv: i64) -> Ser2 {
        assert!(sv <= self.sv);
        let shift = (self.sv - sv) as usize;
        // regular factor gains `shift` leading zero rows; window grows since
        // those rows are exactly zero
        let n = self.n + shift;
        let mut z = Ser2::zero(n);
        z.sv = sv;
        for i in 0..self.d.len() {
            for j in 0..self.d[i].len() {
                z.d[i + shift][j] = self.d[i][j].clone();
            }
        }
        z
    }

    pub fn neg(&self) -> Ser2 {
        let mut z = self.clone();
        for row in z.d.iter_mut() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        z
    }

    pub fn add(&self, other: &Ser2) -> Ser2 {
        let sv = self.sv.min(other.sv);
        let a = self.with_sv(sv);
        let b = other.with_sv(sv);
        let n = a.n.min(b.n);
        let mut z = Ser2::zero(n);
        z.sv = sv;
        for i in 0..n {
            for j in 0..n - i {
                z.d[i][j] = a.get(i, j) + b.get(i, j);
            }
        }
        z
    }

    pub fn sub(&self, other: &Ser2) -> Ser2 {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &Rat) -> Ser2 {
        let mut z = self.clone();
        for row in z.d.iter_mut() {
            for v in row.iter_mut() {
                *v = &*v * f;
            }
        }
        z
    }

    pub fn mul(&self, other: &Ser2) -> Ser2 {
        let va = self.total_val();
        let vb = other.total_val();
        let n = (self.n + vb).min(other.n + va);
        let mut z = Ser2::zero(n);
        z.sv = self.sv + other.sv;
        for i1 in 0..self.d.len() {
            for j1 in 0..self.d[i1].len() {
                let a = &self.d[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.d.len() {
                    for j2 in 0..other.d[i2].len() {
                        let b = &other.d[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        let (i, j) = (i1 + i2, j1 + j2);
                        if i + j < n {
                            z.d[i][j] += a * b;
                        }
                    }
                }
            }
        }
        z
    }

    /// Reciprocal of a series whose regular factor has nonzero constant term.
    pub fn invert(&self) -> Result<Ser2> {
        let c0 = self.get(0, 0);
        if c0.is_zero() {
            return Err(Error::OrderTooLow("invert: zero constant term in regular factor".into()));
        }
        let n = self.n;
        let mut inv = Ser2::zero(n);
        inv.sv = -self.sv;
        // solve (self_reg * inv_reg) = 1 degreewise
        inv.d[0][0] = c0.clone().recip();
        for deg in 1..n {
            for i in 0..=deg {
                let j = deg - i;
                // sum over (i1,j1)+(i2,j2)=(i,j), (i2,j2) != (i,j)
                let mut acc = Rat::zero();
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        if i1 + j1 == 0 {
                            continue;
                        }
                        let a = self.get(i1, j1);
                        if a.is_zero() {
                            continue;
                        }
                        acc += a * inv.get(i - i1, j - j1);
                    }
                }
                inv.d[i][j] = -acc / &c0;
            }
        }
        Ok(inv)
    }

    pub fn div(&self, other: &Ser2) -> Result<Ser2> {
        Ok(self.mul(&other.invert()?))
    }

    /// ln(F / F(0,0)) of the regular factor, dropping the additive constant;
    /// the Laurent factor s^sv is the caller's business.
    pub fn ln_unit(&self) -> Result<Ser2> {
        let c0 = self.get(0, 0);
        if c0.is_zero() {
            return Err(Error::OrderTooLow("ln: zero constant term".into()));
        }
        let n = self.n;
        let mut x = self.scale(&c0.recip());
        x.sv = 0;
        x.d[0][0] = Rat::zero();
        let mut acc = Ser2::zero(n);
        let mut p = Ser2::constant(Rat::one(), n);
        for j in 1..n as i64 {
            p = p.mul(&x);
            p = p.resized(n);
            if p.is_zero_to_window() {
                break;
            }
            let f = rat_i(if j % 2 == 1 { 1 } else { -1 }) / rat_i(j);
            acc = acc.add(&p.scale(&f));
        }
        Ok(acc)
    }

    /// d/ds, honouring the Laurent factor.
    pub fn diff_s(&self) -> Ser2 {
        let mut z = self.clone();
        for (i, row) in z.d.iter_mut().enumerate() {
            let k = self.sv + i as i64;
            for v in row.iter_mut() {
                *v = &*v * rat_i(k);
            }
        }
        z.sv = self.sv - 1;
        z
    }

    /// d/dtau.
    pub fn diff_t(&self) -> Ser2 {
        let n = self.n.saturating_sub(1);
        let mut z = Ser2::zero(n);
        z.sv = self.sv;
        for i in 0..n {
            for j in 0..n - i {
                z.d[i][j] = self.get(i, j + 1) * rat_i(j as i64 + 1);
            }
        }
        z
    }

    /// Extract the coefficient of s^k as a series in tau.
    pub fn extract_s(&self, k: i64) -> Ser1 {
        if k < self.sv {
            // exactly zero below the valuation; knowledge extends across the window
            return Ser1::zero_to(self.n as i64 + (self.sv - k));
        }
        let i = (k - self.sv) as usize;
        if i >= self.n {
            return Ser1::zero_to(0);
        }
        let c: Vec<Rat> = (0..self.n - i).map(|j| self.get(i, j)).collect();
        Ser1 { lo: 0, c }
    }

    /// Divide by s^k (a pure shift of the Laurent valuation).
    pub fn shift_sv(&self, by: i64) -> Ser2 {
        let mut z = self.clone();
        z.sv += by;
        z
    }

    /// Exact division by s^k: the rows of the regular factor below k must be
    /// zero within the window; they are removed, keeping the window honest.
    pub fn exact_div_spow(&self, k: usize) -> Result<Ser2> {
        for i in 0..k.min(self.d.len()) {
            for (j, v) in self.d[i].iter().enumerate() {
                if !v.is_zero() {
                    let _ = j;
                    return Err(Error::NotDivisible);
                }
            }
        }
        let n = self.n.saturating_sub(k);
        let mut z = Ser2::zero(n);
        z.sv = self.sv; // s^k removed from the regular part, valuation unchanged
        for i in 0..n {
            for j in 0..n - i {
                z.d[i][j] = self.get(i + k, j);
            }
        }
        Ok(z)
    }

    /// Exact division by (a*s + b*tau), b nonzero. Errors when not exact
    /// within the window.
    pub fn div_linear(&self, a: &Rat, b: &Rat) -> Result<Ser2> {
        assert!(!b.is_zero());
        let n = self.n.saturating_sub(1);
        let mut q = Ser2::zero(n);
        q.sv = self.sv;
        // d[i][j] = a*q[i-1][j] + b*q[i][j-1]  =>  q[i][j-1] = (d[i][j] - a*q[i-1][j]) / b
        for i in 0..n {
            for j in (1..=(self.n - i).saturating_sub(1)).rev() {
                let prev = if i > 0 { q.get(i - 1, j) } else { Rat::zero() };
                let v = (self.get(i, j) - a * prev) / b;
                if j - 1 < n - i {
                    q.d[i][j - 1] = v;
                }
            }
        }
        // remainder check: pure s-column must reproduce
        for i in 0..self.n {
            let prev = if i > 0 { q.get(i - 1, 0) } else { Rat::zero() };
            let rem = self.get(i, 0) - a * prev;
            if !rem.is_zero() && i < n {
                return Err(Error::NotDivisible);
            }
        }
        Ok(q)
    }
}

/// Build S(tau + s) from a regular univariate series S(t).
pub fn recenter(s1: &Ser1) -> Result<Ser2> {
    if s1.lo < 0 {
        return Err(Error::OrderTooLow("recenter requires a regular series".into()));
    }
    let n = s1.end().max(0) as usize;
    let mut z = Ser2::zero(n);
    // (tau+s)^k = sum_a C(k,a) s^a tau^(k-a)
    let mut binom: Vec<Vec<Rat>> = vec![vec![rat_i(1)]];
    for k in 1..n {
        let prev = &binom[k - 1];
        let mut row = vec![rat_i(1)];
        for a in 1..k {
            row.push(&prev[a - 1] + &prev[a]);
        }
        row.push(rat_i(1));
        binom.push(row);
    }
    for (idx, coeff) in s1.c.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let k = s1.lo as usize + idx;
        for a in 0..=k {
            let (i, j) = (a, k - a);
            if i + j < n {
                z.d[i][j] += coeff * &binom[k][a];
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn t_series(ord: usize) -> Ser1 {
        // t
        let mut c = vec![Rat::zero(); ord];
        c[1] = rat_i(1);
        Ser1 { lo: 0, c }
    }

    #[test]
    fn ln_one_plus_t() {
        let one_plus_t = Ser1::constant(rat_i(1), 5).add(&t_series(5));
        let l = one_plus_t.ln_unit().unwrap();
        // t - t^2/2 + t^3/3 - t^4/4
        assert_eq!(l.coeff(1), rat_i(1));
        assert_eq!(l.coeff(2), rat(-1, 2));
        assert_eq!(l.coeff(3), rat(1, 3));
        assert_eq!(l.coeff(4), rat(-1, 4));
    }

    #[test]
    fn ln_exp_round_trip() {
        let x = t_series(7).add(&t_series(7).mul(&t_series(7)).scale(&rat(3, 5)));
        let e = x.exp().unwrap();
        let back = e.ln_unit().unwrap();
        for k in 0..7 {
            assert_eq!(back.coeff(k), x.coeff(k), "coeff {k}");
        }
    }

    #[test]
    fn laurent_diff_and_invert() {
        // t^-1 + t
        let s = Ser1 { lo: -1, c: vec![rat_i(1), rat_i(0), rat_i(1), rat_i(0), rat_i(0)] };
        let d = s.diff();
        assert_eq!(d.coeff(-2), rat_i(-1));
        assert_eq!(d.coeff(0), rat_i(1));
        let i = t_series(6).invert().unwrap();
        assert_eq!(i.coeff(-1), rat_i(1));
        let one = t_series(6).mul(&i);
        assert_eq!(one.coeff(0), rat_i(1));
        assert_eq!(one.coeff(1), rat_i(0));
    }

    #[test]
    fn sqrt_series() {
        // (1+t)^2 = 1+2t+t^2
        let p = Ser1::from_poly_coeffs(vec![rat_i(1), rat_i(2), rat_i(1)], 6);
        let r = p.sqrt().unwrap();
        assert_eq!(r.coeff(0), rat_i(1));
        assert_eq!(r.coeff(1), rat_i(1));
        assert_eq!(r.coeff(2), rat_i(0));
        // 4t^2*(1+t) -> 2t*sqrt(1+t)
        let q = Ser1::from_poly_coeffs(vec![rat_i(0), rat_i(0), rat_i(4), rat_i(4)], 8);
        let r2 = q.sqrt().unwrap();
        assert_eq!(r2.coeff(1), rat_i(2));
        assert_eq!(r2.coeff(2), rat_i(1));
        assert!(Ser1::from_poly_coeffs(vec![rat_i(2)], 4).sqrt().is_err());
    }

    #[test]
    fn ser2_roundtrip_mul_div() {
        // f = 1 + s + tau, g = 1 - s; f*g/g = f
        let mut f = Ser2::constant(rat_i(1), 8);
        f.d[1][0] = rat_i(1);
        f.d[0][1] = rat_i(1);
        let mut g = Ser2::constant(rat_i(1), 8);
        g.d[1][0] = rat_i(-1);
        let fg = f.mul(&g);
        let back = fg.div(&g).unwrap();
        for i in 0..6 {
            for j in 0..6 - i {
                assert_eq!(back.get(i, j), f.get(i, j));
            }
        }
    }

    #[test]
    fn ser2_div_linear() {
        // (s + 2 tau) * (1 + s*tau) divided back
        let mut f = Ser2::zero(8);
        f.d[1][0] = rat_i(1);
        f.d[0][1] = rat_i(2);
        let mut g = Ser2::constant(rat_i(1), 8);
        g.d[1][1] = rat_i(1);
        let prod = f.mul(&g);
        let q = prod.div_linear(&rat_i(1), &rat_i(2)).unwrap();
        for i in 0..5 {
            for j in 0..5 - i {
                assert_eq!(q.get(i, j), g.get(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn recenter_matches() {
        // S(t) = t^2: S(tau+s) = tau^2 + 2 s tau + s^2
        let s1 = Ser1::from_poly_coeffs(vec![rat_i(0), rat_i(0), rat_i(1)], 5);
        let z = recenter(&s1).unwrap();
        assert_eq!(z.get(0, 2), rat_i(1));
        assert_eq!(z.get(1, 1), rat_i(2));
        assert_eq!(z.get(2, 0), rat_i(1));
    }
}
