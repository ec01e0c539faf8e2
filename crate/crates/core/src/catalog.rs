//! Built-in distributions: the polynomial witnesses D0(n), the free
//! nilpotent D1, the left-invariant families on SO(3) x R^2 and
//! SL(2,R) x R^2, the rolling-spheres family, and the dimension-six
//! weight-jump witnesses.
//!
//! SO(3) is realised on the affine chart of RP^3 (Gibbs vectors), where the
//! left-invariant fields are quadratic polynomials; SL(2,R) on the matrix
//! chart (a, b, c) with d = (1 + b c)/a, where they are rational with
//! denominator a. Both realisations reproduce the classical commutation
//! relations exactly.

use std::sync::Arc;

use num_traits::Zero;

use crate::chart::{plain_chart, Chart, ChartBuilder, Rewrite};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{BasePoint, DistributionSpec, VField};
use crate::parse::parse_expr;
use crate::scalar::{rat, rat_i, Rat};

pub struct CatalogEntry {
    pub name: String,
    pub spec: DistributionSpec,
}

fn vfield(chart: &Arc<Chart>, coords: &[&str]) -> Result<VField> {
    let coef = coords
        .iter()
        .map(|s| parse_expr(chart, s))
        .collect::<Result<Vec<_>>>()?;
    VField::new(chart, coef)
}

/// D0(n): X1 = d/dx1, X2 = d/dx2 + sum_{i=1}^{n-3} x1^i/i! d/dx_{i+2}
/// + x1 x2 d/dxn.
pub fn d0(n: usize) -> Result<DistributionSpec> {
    if n < 5 {
        return Err(Error::WrongDimension { expected: 5, got: n });
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let chart = plain_chart(n, &name_refs)?;
    let mut x1 = VField::zero(&chart);
    x1.coef[0] = Expr::one(&chart);
    let mut x2 = VField::zero(&chart);
    x2.coef[1] = Expr::one(&chart);
    let x1e = Expr::symbol(&chart, 0);
    let x2e = Expr::symbol(&chart, 1);
    let mut fact = Rat::from_integer(1.into());
    for i in 1..=(n - 3) {
        fact *= rat_i(i as i64);
        x2.coef[i + 1] = x1e.pow(i as i64)?.mul_scalar(&fact.clone().recip());
    }
    x2.coef[n - 1] = x2.coef[n - 1].add(&x1e.mul(&x2e));
    DistributionSpec::new(&chart, x1, x2, Some(BasePoint::origin(&chart)), None)
}

/// Free nilpotent (2,5)-distribution; the strong adapted frame reproduces
/// the nilpotent commutation table exactly.
pub fn d1() -> Result<DistributionSpec> {
    d0(5)
}

/// Left-invariant distribution on SO(3) x R^2.
pub fn d2() -> Result<DistributionSpec> {
    let chart = plain_chart(5, &["w1", "w2", "w3", "y1", "y2"])?;
    // a_i = (e_i + w x e_i + w_i w)/2
    let x1 = vfield(
        &chart,
        &[
            "(1 + w1^2)/2",
            "(w1*w2 + w3)/2",
            "(w1*w3 - w2)/2",
            "1",
            "0",
        ],
    )?;
    let x2 = vfield(
        &chart,
        &[
            "(w1*w2 - w3)/2",
            "(1 + w2^2)/2",
            "(w2*w3 + w1)/2",
            "0",
            "1",
        ],
    )?;
    DistributionSpec::new(&chart, x1, x2, Some(BasePoint::origin(&chart)), None)
}

fn sl2_chart() -> Result<Arc<Chart>> {
    plain_chart(5, &["a", "b", "c", "y1", "y2"])
}

/// Left-invariant hyperbolic distribution on SL(2,R) x R^2. The basis order
/// pins the sign split of the projective Ricci curvature: rho_D = -4
/// sqrt(35)/9 at (u4, u5) = (1, 0).
pub fn d3h() -> Result<DistributionSpec> {
    let chart = sl2_chart()?;
    // generators: g*E for E = (E12 - E21)/2 and (E11 - E22)/2
    let b2 = ["-b/2", "a/2", "-(1 + b*c)/(2*a)", "1", "0"];
    let b1 = ["a/2", "-b/2", "c/2", "0", "1"];
    let x1 = vfield(&chart, &b2)?;
    let x2 = vfield(&chart, &b1)?;
    let base = BasePoint::new(
        &chart,
        vec![rat_i(1), rat_i(0), rat_i(0), rat_i(0), rat_i(0)],
        vec![],
    )?;
    DistributionSpec::new(&chart, x1, x2, Some(base), None)
}

/// Left-invariant elliptic distribution on SL(2,R) x R^2.
pub fn d3e() -> Result<DistributionSpec> {
    let chart = sl2_chart()?;
    let b1 = ["a/2", "-b/2", "c/2", "1", "0"];
    let b3 = ["b/2", "a/2", "(1 + b*c)/(2*a)", "0", "1"];
    let x1 = vfield(&chart, &b1)?;
    let x2 = vfield(&chart, &b3)?;
    let base = BasePoint::new(
        &chart,
        vec![rat_i(1), rat_i(0), rat_i(0), rat_i(0), rat_i(0)],
        vec![],
    )?;
    DistributionSpec::new(&chart, x1, x2, Some(base), None)
}

/// Rolling of two spheres of radii r and r-hat without slipping or twisting.
/// Chart (phi, psi, phih, psih, beta) with aux symbols for the sines and
/// cosines of phi, phih, beta.
pub fn rolling(r: Rat, rhat: Rat) -> Result<DistributionSpec> {
    if r.is_zero() || rhat.is_zero() {
        return Err(Error::DimensionMismatch("rolling radii must be nonzero".into()));
    }
    let builder = ChartBuilder::new(5, &["phi", "psi", "phih", "psih", "beta"])?
        .aux("sf")
        .aux("cf")
        .aux("sF")
        .aux("cF")
        .aux("sb")
        .aux("cb");
    let pre = builder.declare();
    let n = pre.n;
    let table_entry = |src: &str| -> Result<(crate::poly::Poly, crate::poly::Poly)> {
        let e = parse_expr(&pre, src)?;
        Ok((e.num.clone(), e.den.clone()))
    };
    // derivation tables: d sf/d phi = cf, d cf/d phi = -sf, etc.
    let tables = vec![
        (0, 0, table_entry("cf")?),
        (1, 0, table_entry("-sf")?),
        (2, 2, table_entry("cF")?),
        (3, 2, table_entry("-sF")?),
        (4, 4, table_entry("cb")?),
        (5, 4, table_entry("-sb")?),
    ];
    // rewrites: sf^2 -> 1 - cf^2 and friends
    let mk_rewrite = |s_name: &str, c_name: &str| -> Result<Rewrite> {
        let s_idx = pre.lookup(s_name).expect("declared");
        let c_idx = pre.lookup(c_name).expect("declared");
        let mut lhs = crate::poly::Mono::unit(pre.nsyms());
        lhs.0[s_idx] = 2;
        let one = crate::poly::Poly::one(pre.nsyms());
        let c2 = crate::poly::Poly::var(pre.nsyms(), c_idx).pow(2);
        Ok(Rewrite { lhs, rhs: one.sub(&c2) })
    };
    let rewrites = vec![
        mk_rewrite("sf", "cf")?,
        mk_rewrite("sF", "cF")?,
        mk_rewrite("sb", "cb")?,
    ];
    let chart = ChartBuilder::new(n, &["phi", "psi", "phih", "psih", "beta"])?
        .aux("sf")
        .aux("cf")
        .aux("sF")
        .aux("cF")
        .aux("sb")
        .aux("cb")
        .finish(tables, rewrites)?;
    let rs = format!("{}/{}", r.numer(), r.denom());
    let rh = format!("{}/{}", rhat.numer(), rhat.denom());
    // X1 = v1 + cb vh1 + sb vh2 - (cF/(sF rh)) sb d/dbeta
    let x1 = vfield(
        &chart,
        &[
            &format!("1/({rs})"),
            "0",
            &format!("cb/({rh})"),
            &format!("sb/(({rh})*sF)"),
            &format!("-cF*sb/(sF*({rh}))"),
        ],
    )?;
    // X2 = v2 - sb vh1 + cb vh2 + (cf/(sf r) - (cF/(sF rh)) cb) d/dbeta
    let x2 = vfield(
        &chart,
        &[
            "0",
            &format!("1/(({rs})*sf)"),
            &format!("-sb/({rh})"),
            &format!("cb/(({rh})*sF)"),
            &format!("cf/(sf*({rs})) - cF*cb/(sF*({rh}))"),
        ],
    )?;
    // base point: sf = 3/5, cf = 4/5, sF = 3/5, cF = 4/5, sb = 0, cb = 1
    let base = BasePoint::new(
        &chart,
        vec![Rat::zero(); 5],
        vec![rat(3, 5), rat(4, 5), rat(3, 5), rat(4, 5), rat_i(0), rat_i(1)],
    )?;
    DistributionSpec::new(&chart, x1, x2, Some(base), None)
}

/// The dimension-six distribution with maximal growth vector (2,3,5,6) and a
/// real weight-jump locus over the origin.
pub fn dtilde() -> Result<DistributionSpec> {
    let chart = plain_chart(6, &["x1", "x2", "x3", "x4", "x5", "x6"])?;
    let mut x1 = VField::zero(&chart);
    x1.coef[0] = Expr::one(&chart);
    let x2 = vfield(
        &chart,
        &[
            "0",
            "1",
            "x1",
            "x1^2/2",
            "x1^4/24 + x1^2*x2/2",
            "x1*x2",
        ],
    )?;
    DistributionSpec::new(&chart, x1, x2, Some(BasePoint::origin(&chart)), None)
}

/// D-bar(n): the general weight-jump witness.
pub fn dbar(n: usize) -> Result<DistributionSpec> {
    if n < 6 {
        return Err(Error::WrongDimension { expected: 6, got: n });
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let chart = plain_chart(n, &name_refs)?;
    let mut x1 = VField::zero(&chart);
    x1.coef[0] = Expr::one(&chart);
    let mut x2 = VField::zero(&chart);
    x2.coef[1] = Expr::one(&chart);
    let x1e = Expr::symbol(&chart, 0);
    let x2e = Expr::symbol(&chart, 1);
    let mut fact = Rat::from_integer(1.into());
    for i in 1..=(n - 4) {
        fact *= rat_i(i as i64);
        x2.coef[i + 1] = x1e.pow(i as i64)?.mul_scalar(&fact.clone().recip());
    }
    let mut fact_n2 = Rat::from_integer(1.into());
    for i in 1..=(n - 2) {
        fact_n2 *= rat_i(i as i64);
    }
    x2.coef[n - 2] = x1e.pow((n - 2) as i64)?.mul_scalar(&fact_n2.recip());
    x2.coef[n - 1] = x1e.mul(&x2e);
    DistributionSpec::new(&chart, x1, x2, Some(BasePoint::origin(&chart)), None)
}

/// Every named catalog entry with its default parameters.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        CatalogEntry { name: "D0_5".into(), spec: d0(5)? },
        CatalogEntry { name: "D1".into(), spec: d1()? },
        CatalogEntry { name: "D2".into(), spec: d2()? },
        CatalogEntry { name: "D3h".into(), spec: d3h()? },
        CatalogEntry { name: "D3e".into(), spec: d3e()? },
        CatalogEntry { name: "rolling_1_2".into(), spec: rolling(rat_i(1), rat_i(2))? },
        CatalogEntry { name: "rolling_1_3".into(), spec: rolling(rat_i(1), rat_i(3))? },
        CatalogEntry { name: "Dtilde".into(), spec: dtilde()? },
        CatalogEntry { name: "Dbar_6".into(), spec: dbar(6)? },
    ])
}

/// Resolve a catalog reference like "D2", "D0(7)", "rolling(1,3)",
/// "Dbar(6)".
pub fn by_name(name: &str) -> Result<DistributionSpec> {
    let trimmed = name.trim();
    if let Some(rest) = trimmed.strip_prefix("D0(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = rest.trim().parse().map_err(|_| Error::ParseError {
            line: 0,
            col: 0,
            msg: format!("bad catalog dimension `{rest}`"),
        })?;
        return d0(n);
    }
    if let Some(rest) = trimmed.strip_prefix("Dbar(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = rest.trim().parse().map_err(|_| Error::ParseError {
            line: 0,
            col: 0,
            msg: format!("bad catalog dimension `{rest}`"),
        })?;
        return dbar(n);
    }
    if let Some(rest) = trimmed.strip_prefix("rolling(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::ParseError {
                line: 0,
                col: 0,
                msg: "rolling takes two radii".into(),
            });
        }
        let r = crate::scalar::rat_from_str(parts[0])?;
        let rhat = crate::scalar::rat_from_str(parts[1])?;
        return rolling(r, rhat);
    }
    match trimmed {
        "D0" | "D0_5" => d0(5),
        "D1" => d1(),
        "D2" => d2(),
        "D3h" => d3h(),
        "D3e" => d3e(),
        "Dtilde" => dtilde(),
        "Dbar" | "Dbar_6" => dbar(6),
        other => Err(Error::UnknownSymbol(format!("catalog entry `{other}`"))),
    }
}
