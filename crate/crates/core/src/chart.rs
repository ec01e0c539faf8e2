//! Charts: named base/fiber coordinates plus auxiliary function symbols with
//! derivation tables and rewrite rules (the differential-field extension used
//! for frames with trigonometric coefficients).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly};

/// Rational function stored chart-free as a numerator/denominator pair.
pub type RawRatFn = (Poly, Poly);

#[derive(Clone, Debug, PartialEq)]
pub struct AuxSymbol {
    pub name: String,
    /// d(aux)/d(x_j) for each base direction, None meaning zero.
    pub table: Vec<Option<RawRatFn>>,
}

/// Rewrite rule: whenever a term is divisible by `lhs`, one occurrence of
/// `lhs` is replaced by `rhs`. `rhs` must be grlex-smaller than `lhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rewrite {
    pub lhs: Mono,
    pub rhs: Poly,
}

#[derive(Debug)]
pub struct Chart {
    pub n: usize,
    pub base_names: Vec<String>,
    pub fiber_names: Vec<String>,
    pub aux: Vec<AuxSymbol>,
    pub rewrites: Vec<Rewrite>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.base_names == other.base_names
            && self.aux.iter().map(|a| &a.name).eq(other.aux.iter().map(|a| &a.name))
    }
}

impl Chart {
    pub fn nsyms(&self) -> usize {
        2 * self.n + self.aux.len()
    }

    pub fn base_index(&self, i: usize) -> usize {
        i
    }

    pub fn fiber_index(&self, j: usize) -> usize {
        self.n + j
    }

    pub fn aux_index(&self, k: usize) -> usize {
        2 * self.n + k
    }

    pub fn is_base(&self, sym: usize) -> bool {
        sym < self.n
    }

    pub fn is_fiber(&self, sym: usize) -> bool {
        sym >= self.n && sym < 2 * self.n
    }

    pub fn is_aux(&self, sym: usize) -> bool {
        sym >= 2 * self.n && sym < self.nsyms()
    }

    pub fn symbol_name(&self, sym: usize) -> &str {
        if self.is_base(sym) {
            &self.base_names[sym]
        } else if self.is_fiber(sym) {
            &self.fiber_names[sym - self.n]
        } else {
            &self.aux[sym - 2 * self.n].name
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.base_names.iter().position(|s| s == name) {
            return Some(i);
        }
        if let Some(j) = self.fiber_names.iter().position(|s| s == name) {
            return Some(self.n + j);
        }
        self.aux.iter().position(|a| a.name == name).map(|k| 2 * self.n + k)
    }

    /// Apply the rewrite rules to a polynomial until no term is reducible.
    /// Terms are reduced independently in one pass over a worklist; each
    /// replacement strictly lowers the grlex order, so this terminates.
    pub fn rewrite(&self, p: &Poly) -> Poly {
        if self.rewrites.is_empty() {
            return p.clone();
        }
        let mut work: Vec<(Mono, crate::scalar::Rat)> =
            p.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut done: Vec<(Mono, crate::scalar::Rat)> = Vec::with_capacity(work.len());
        'next: while let Some((m, c)) = work.pop() {
            for rule in &self.rewrites {
                if rule.lhs.divides(&m) {
                    let rest = rule.lhs.div_into(&m);
                    for (rm, rc) in rule.rhs.terms() {
                        work.push((rm.mul(&rest), rc * &c));
                    }
                    continue 'next;
                }
            }
            done.push((m, c));
        }
        Poly::from_terms(p.nsyms(), done)
    }
}

pub struct ChartBuilder {
    n: usize,
    base_names: Vec<String>,
    aux_names: Vec<String>,
}

impl ChartBuilder {
    pub fn new(n: usize, base_names: &[&str]) -> Result<Self> {
        if base_names.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} base symbols, got {}",
                base_names.len()
            )));
        }
        Ok(ChartBuilder {
            n,
            base_names: base_names.iter().map(|s| s.to_string()).collect(),
            aux_names: Vec::new(),
        })
    }

    pub fn aux(mut self, name: &str) -> Self {
        self.aux_names.push(name.to_string());
        self
    }

    /// A chart with the declared symbols and empty aux tables; used to parse
    /// the table expressions themselves.
    pub fn declare(&self) -> Arc<Chart> {
        Arc::new(Chart {
            n: self.n,
            base_names: self.base_names.clone(),
            fiber_names: (1..=self.n).map(|j| format!("u{j}")).collect(),
            aux: self
                .aux_names
                .iter()
                .map(|name| AuxSymbol { name: name.clone(), table: vec![None; self.n] })
                .collect(),
            rewrites: Vec::new(),
        })
    }

    /// Finish the chart with derivation tables and rewrite rules. Table keys
    /// are (aux index, base index); values are numerator/denominator pairs
    /// over the declared symbol set.
    pub fn finish(
        self,
        tables: Vec<(usize, usize, RawRatFn)>,
        rewrites: Vec<Rewrite>,
    ) -> Result<Arc<Chart>> {
        let mut aux: Vec<AuxSymbol> = self
            .aux_names
            .iter()
            .map(|name| AuxSymbol { name: name.clone(), table: vec![None; self.n] })
            .collect();
        for (k, j, f) in tables {
            if k >= aux.len() || j >= self.n {
                return Err(Error::DimensionMismatch("aux table index out of range".into()));
            }
            aux[k].table[j] = Some(f);
        }
        for r in &rewrites {
            let ok = r.rhs.terms().iter().all(|(m, _)| m.grlex(&r.lhs) == std::cmp::Ordering::Less);
            if !ok {
                return Err(Error::Internal(
                    "rewrite rule does not strictly reduce the monomial order".into(),
                ));
            }
        }
        Ok(Arc::new(Chart {
            n: self.n,
            base_names: self.base_names,
            fiber_names: (1..=self.n).map(|j| format!("u{j}")).collect(),
            aux,
            rewrites,
        }))
    }
}

/// Chart without aux symbols; the common case.
pub fn plain_chart(n: usize, base_names: &[&str]) -> Result<Arc<Chart>> {
    Ok(ChartBuilder::new(n, base_names)?.declare())
}
