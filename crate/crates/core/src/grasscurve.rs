//! Analyzer for curves in the Grassmannian of half-dimensional subspaces,
//! given as truncated power series of m x m matrices: weight, rank,
//! generating function, Ricci curvature and fundamental-form density,
//! derivative curve and canonical basis (m = 2), structural-equation and
//! reparametrization checks, weight-jump asymptotics, and the reduced Jacobi
//! curve of a distribution as the bridge to the symbolic pipeline.

use num_traits::{One, Signed, Zero};

use crate::cotangent::{co_bracket, CoField, Cotangent, CotangentPoint};
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::scalar::{rat, rat_i, Rat};
use crate::series::{recenter, Ser1, Ser2};

/// Curve of m x m matrices as truncated series.
#[derive(Clone, Debug, PartialEq)]
pub struct MatCurve {
    pub m: usize,
    pub entries: Vec<Vec<Ser1>>,
}

impl MatCurve {
    pub fn new(entries: Vec<Vec<Ser1>>) -> Result<MatCurve> {
        let m = entries.len();
        if entries.iter().any(|row| row.len() != m) {
            return Err(Error::DimensionMismatch("matrix curve must be square".into()));
        }
        Ok(MatCurve { m, entries })
    }

    pub fn order(&self) -> i64 {
        self.entries.iter().flatten().map(|s| s.end()).min().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let d = self.entries[i][j].sub(&self.entries[j][i]);
                if !d.is_zero_to_window() {
                    return false;
                }
            }
        }
        true
    }

    /// Coefficient matrix of t^k.
    pub fn coeff_matrix(&self, k: i64) -> QMat {
        let mut q = QMat::zeros(self.m, self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                q[(i, j)] = self.entries[i][j].coeff(k);
            }
        }
        q
    }

    /// Entrywise derivative.
    pub fn derivative(&self) -> MatCurve {
        MatCurve {
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|s| s.diff()).collect())
                .collect(),
        }
    }

    /// Translate so the curve passes through 0 at t = 0.
    pub fn through_origin(&self) -> MatCurve {
        MatCurve {
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            let c0 = s.coeff(0);
                            s.sub(&Ser1::constant(c0, s.end().max(1) as usize))
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Entrywise composition with a reparametrization phi (phi(0) = 0,
    /// phi'(0) != 0).
    pub fn compose(&self, phi: &Ser1) -> Result<MatCurve> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|s| s.compose(phi)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MatCurve::new(entries)
    }

    /// Plain-text export: row-major, one line per entry, rational
    /// coefficients in ascending powers of t.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("m {}\n", self.m));
        for row in &self.entries {
            for s in row {
                let reg = s.trim_leading_zeros();
                out.push_str(&format!("lo {}", reg.lo));
                for c in &reg.c {
                    out.push_str(&format!(" {}/{}", c.numer(), c.denom()));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn import_text(text: &str) -> Result<MatCurve> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::ParseError {
            line: 1,
            col: 1,
            msg: "empty matrix-curve file".into(),
        })?;
        let m: usize = header
            .trim()
            .strip_prefix("m ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::ParseError { line: 1, col: 1, msg: "expected `m <size>`".into() })?;
        let mut entries = Vec::new();
        for i in 0..m {
            let mut row = Vec::new();
            for j in 0..m {
                let line = lines.next().ok_or_else(|| Error::ParseError {
                    line: 2 + i * m + j,
                    col: 1,
                    msg: "missing matrix entry".into(),
                })?;
                let mut parts = line.split_whitespace();
                let tag = parts.next();
                if tag != Some("lo") {
                    return Err(Error::ParseError {
                        line: 2 + i * m + j,
                        col: 1,
                        msg: "entry must start with `lo <exp>`".into(),
                    });
                }
                let lo: i64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::ParseError {
                        line: 2 + i * m + j,
                        col: 1,
                        msg: "bad lowest exponent".into(),
                    })?;
                let c = parts
                    .map(crate::scalar::rat_from_str)
                    .collect::<Result<Vec<_>>>()?;
                row.push(Ser1::new(lo, c));
            }
            entries.push(row);
        }
        MatCurve::new(entries)
    }
}

// ---------------------------------------------------------------------------
// small matrix helpers over Ser1 / Ser2
// ---------------------------------------------------------------------------

fn ser2_det(m: &[Vec<Ser2>]) -> Ser2 {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            // Laplace along the first column
            let mut acc: Option<Ser2> = None;
            for i in 0..n {
                let minor: Vec<Vec<Ser2>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (1..n).map(|c| m[r][c].clone()).collect())
                    .collect();
                let mut term = m[i][0].mul(&ser2_det(&minor));
                if i % 2 == 1 {
                    term = term.neg();
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.expect("nonempty")
        }
    }
}

fn ser2_adjugate(m: &[Vec<Ser2>]) -> Vec<Vec<Ser2>> {
    let n = m.len();
    if n == 1 {
        // adj of 1x1 is [1] with the convention adj*M = det*I
        let one = Ser2::constant(Rat::one(), m[0][0].n.max(1));
        return vec![vec![one]];
    }
    let mut adj = vec![vec![Ser2::zero(1); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Ser2>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let mut cof = ser2_det(&minor);
            if (i + j) % 2 == 1 {
                cof = cof.neg();
            }
            adj[j][i] = cof; // transpose of cofactor matrix
        }
    }
    adj
}

fn ser1_det(m: &[Vec<Ser1>]) -> Ser1 {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc: Option<Ser1> = None;
            for i in 0..n {
                let minor: Vec<Vec<Ser1>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (1..n).map(|c| m[r][c].clone()).collect())
                    .collect();
                let mut term = m[i][0].mul(&ser1_det(&minor));
                if i % 2 == 1 {
                    term = term.neg();
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.expect("nonempty")
        }
    }
}

/// Invert a Ser1 matrix whose constant term is invertible (Gauss-Jordan with
/// unit pivots).
fn ser1_inverse(m: &[Vec<Ser1>]) -> Result<Vec<Vec<Ser1>>> {
    let n = m.len();
    let ord = m.iter().flatten().map(|s| s.end()).min().unwrap_or(0).max(1) as usize;
    let mut a: Vec<Vec<Ser1>> = m.to_vec();
    let mut inv: Vec<Vec<Ser1>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ser1::constant(Rat::one(), ord)
                    } else {
                        Ser1::constant(Rat::zero(), ord)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].coeff(0).is_zero())
            .ok_or_else(|| Error::OrderTooLow("matrix inverse: singular constant term".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        let pinv = p.invert()?;
        for c in 0..n {
            a[col][c] = a[col][c].mul(&pinv);
            inv[col][c] = inv[col][c].mul(&pinv);
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col].clone();
                if f.is_zero_to_window() {
                    continue;
                }
                for c in 0..n {
                    let t = a[col][c].mul(&f);
                    a[r][c] = a[r][c].sub(&t);
                    let t2 = inv[col][c].mul(&f);
                    inv[r][c] = inv[r][c].sub(&t2);
                }
            }
        }
    }
    Ok(inv)
}

// ---------------------------------------------------------------------------
// weight, rank, flag dimensions
// ---------------------------------------------------------------------------

/// Weight (vanishing order of det(S_t - S_0)) and rank (of S'(0)).
pub fn weight_rank(s: &MatCurve) -> Result<(usize, usize)> {
    let s0 = s.through_origin();
    let det = ser1_det(&s0.entries);
    let k = det
        .val()
        .ok_or_else(|| Error::OrderTooLow("det(S_t - S_0) vanishes to the tracked order".into()))?;
    let sd = s.derivative();
    let r = sd.coeff_matrix(0).rank();
    Ok((k as usize, r))
}

/// Dimensions of the extension spaces D^(i) Lambda(0) for i = 1..=imax,
/// computed from the frame-columns [I; S(t) - S(0)] and their derivatives.
pub fn extension_dims(s: &MatCurve, imax: usize) -> Result<Vec<usize>> {
    let m = s.m;
    let s0 = s.through_origin();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for j in 0..m {
        let mut v = vec![Rat::zero(); 2 * m];
        v[j] = Rat::one();
        cols.push(v);
    }
    let mut dims = Vec::new();
    let mut fact = Rat::one();
    for i in 1..=imax {
        fact *= rat_i(i as i64);
        if !s0.entries.iter().flatten().all(|e| e.knows(i as i64)) {
            return Err(Error::OrderTooLow(format!("extension_dims needs order {}", i + 1)));
        }
        let ci = s0.coeff_matrix(i as i64);
        for j in 0..m {
            let mut v = vec![Rat::zero(); 2 * m];
            for r in 0..m {
                v[m + r] = &ci[(r, j)] * &fact;
            }
            cols.push(v);
        }
        dims.push(QMat::from_columns(&cols).rank());
    }
    Ok(dims)
}

// ---------------------------------------------------------------------------
// generating function and derived invariants
// ---------------------------------------------------------------------------

/// The two-variable data of the curve around (0,0) in the shear variables
/// (s, tau) with t0 = tau + s, t1 = tau.
pub struct GeneratingJets {
    pub k: usize,
    /// g(t0, t1) in (s, tau); the full function for the constant-weight path.
    pub g: Ser2,
}

/// det(S(tau+s) - S(tau)) as a Ser2.
fn delta_det(s: &MatCurve) -> Result<Ser2> {
    let delta = delta_matrix(s)?;
    Ok(ser2_det(&delta))
}

fn delta_matrix(s: &MatCurve) -> Result<Vec<Vec<Ser2>>> {
    let mut rows = Vec::with_capacity(s.m);
    for i in 0..s.m {
        let mut row = Vec::with_capacity(s.m);
        for j in 0..s.m {
            let reg = s.entries[i][j].trim_leading_zeros();
            if reg.lo < 0 {
                return Err(Error::OrderTooLow("matrix curve must be regular at 0".into()));
            }
            let two = recenter(&reg)?;
            // subtract the pure-tau part (s = 0 slice)
            let mut sub = two.clone();
            for jj in 0..sub.d.get(0).map(|r| r.len()).unwrap_or(0) {
                sub.d[0][jj] = Rat::zero();
            }
            row.push(sub);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Generating function g = d^2/dt0 dt1 ln(det(S_t0 - S_t1)/(t0-t1)^k) in
/// shear variables. Errors with NotDivisible when the weight is not constant
/// near 0 (jump path must be used instead).
pub fn generating_jets(s: &MatCurve, k: usize) -> Result<GeneratingJets> {
    let det = delta_det(s)?;
    let x = det.exact_div_spow(k)?;
    if x.get(0, 0).is_zero() {
        return Err(Error::NotDivisible);
    }
    let l = x.ln_unit()?;
    // d/dt0 = d_s, d/dt1 = d_tau - d_s
    let g = l.diff_t().diff_s().sub(&l.diff_s().diff_s());
    Ok(GeneratingJets { k, g })
}

/// rho(t) = g(t,t) and the density A(t) of the fundamental form.
pub fn ricci_and_density(jets: &GeneratingJets) -> Result<(Ser1, Ser1)> {
    let rho = jets.g.extract_s(0);
    let d2 = jets.g.diff_s().diff_s().extract_s(0);
    let a = d2
        .scale(&rat(1, 2))
        .sub(&rho.mul(&rho).scale(&rat(3, 5 * jets.k as i64)))
        .sub(&rho.diff().diff().scale(&rat(3, 20)));
    Ok((rho, a))
}

/// Residual of the infinitesimal-cross-ratio trace identity:
/// s^2 * (trace + k/(t0-t1)^2 + g) must vanish to the tracked order.
pub fn cross_ratio_trace_residual(s: &MatCurve) -> Result<Ser2> {
    let (k, _r) = weight_rank(s)?;
    let jets = generating_jets(s, k)?;
    let delta = delta_matrix(s)?;
    let det = ser2_det(&delta);
    let x = det.exact_div_spow(k)?; // det = s^k X
    let adj = ser2_adjugate(&delta);
    let sd = s.derivative();
    let sd_t0 = delta_of_derivative(&sd, true)?; // S'(tau+s)
    let sd_t1 = delta_of_derivative(&sd, false)?; // S'(tau)
    // N = tr(adj * S'(t1) * adj * S'(t0)); trace = -N/det^2
    let m = s.m;
    let mul = |a: &Vec<Vec<Ser2>>, b: &Vec<Vec<Ser2>>| -> Vec<Vec<Ser2>> {
        let mut out = vec![vec![Ser2::zero(1); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut acc: Option<Ser2> = None;
                for l in 0..m {
                    let t = a[i][l].mul(&b[l][j]);
                    acc = Some(match acc {
                        None => t,
                        Some(x) => x.add(&t),
                    });
                }
                out[i][j] = acc.expect("m > 0");
            }
        }
        out
    };
    let prod = mul(&mul(&mul(&adj, &sd_t1), &adj), &sd_t0);
    let mut n_tr: Option<Ser2> = None;
    for i in 0..m {
        n_tr = Some(match n_tr {
            None => prod[i][i].clone(),
            Some(x) => x.add(&prod[i][i]),
        });
    }
    let n_tr = n_tr.expect("m > 0");
    // s^2*trace = -N / (s^(2k-2) X^2)
    let n_div = n_tr.exact_div_spow(2 * k - 2)?;
    let x2 = x.mul(&x);
    let s2_trace = n_div.div(&x2)?.neg();
    // residual*s^2 = s^2*trace + k + s^2 g
    let mut s2g = jets.g.clone();
    s2g.sv += 2;
    let kconst = Ser2::constant(rat_i(k as i64), s2_trace.n.max(1));
    Ok(s2_trace.add(&kconst).add(&s2g))
}

fn delta_of_derivative(sd: &MatCurve, shifted: bool) -> Result<Vec<Vec<Ser2>>> {
    let mut rows = Vec::with_capacity(sd.m);
    for i in 0..sd.m {
        let mut row = Vec::with_capacity(sd.m);
        for j in 0..sd.m {
            let reg = sd.entries[i][j].trim_leading_zeros();
            if reg.lo < 0 {
                return Err(Error::OrderTooLow("derivative must be regular".into()));
            }
            if shifted {
                row.push(recenter(&reg)?);
            } else {
                // embed the pure-tau series
                let n = reg.end().max(0) as usize;
                let mut z = Ser2::zero(n);
                for (idx, c) in reg.c.iter().enumerate() {
                    let kk = reg.lo as usize + idx;
                    if kk < n {
                        z.d[0][kk] = c.clone();
                    }
                }
                row.push(z);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// canonical basis and structural equation (m = 2)
// ---------------------------------------------------------------------------

/// Canonical moving frame of a rank-1 constant-weight curve in L(W),
/// dim W = 4, as series in the basepoint tau. Vectors are in the global
/// graph chart: components (x1, x2, y1, y2) with the curve through
/// {(x, S(0)x)} at tau = 0.
pub struct CanonicalFrame {
    pub e1: [Ser1; 4],
    pub e2: [Ser1; 4],
    pub f1: [Ser1; 4],
    pub f2: [Ser1; 4],
    /// orientation: eps * Sdot(0) negative semidefinite
    pub eps: i64,
}

impl CanonicalFrame {
    /// sigma_eps((x1,y1),(x2,y2)) = eps*(x . y' - y . x') of tau-series vectors.
    pub fn sigma(&self, a: &[Ser1; 4], b: &[Ser1; 4]) -> Ser1 {
        let t = a[0]
            .mul(&b[2])
            .add(&a[1].mul(&b[3]))
            .sub(&a[2].mul(&b[0]))
            .sub(&a[3].mul(&b[1]));
        if self.eps < 0 {
            t.neg()
        } else {
            t
        }
    }
}

pub fn deriv_vec(v: &[Ser1; 4]) -> [Ser1; 4] {
    [v[0].diff(), v[1].diff(), v[2].diff(), v[3].diff()]
}

fn lincomb(vs: &[&[Ser1; 4]], cs: &[Ser1]) -> [Ser1; 4] {
    let mut out: [Ser1; 4] = [
        Ser1::zero_to(i64::MAX / 4),
        Ser1::zero_to(i64::MAX / 4),
        Ser1::zero_to(i64::MAX / 4),
        Ser1::zero_to(i64::MAX / 4),
    ];
    for (v, c) in vs.iter().zip(cs.iter()) {
        for i in 0..4 {
            out[i] = out[i].add(&v[i].mul(c));
        }
    }
    out
}

/// Rank-1 factorization eps * S'(t) = -nu(t) nu(t)^T. Picks eps in {+1,-1}
/// from the first nonzero diagonal behaviour; errors when the velocity is
/// not sign-semidefinite of rank <= 1.
fn velocity_generator(s: &MatCurve) -> Result<(i64, Vec<Ser1>)> {
    let sd = s.derivative();
    let m = s.m;
    // pivot: diagonal entry with minimal valuation
    let mut piv = None;
    let mut best = i64::MAX;
    for i in 0..m {
        if let Some(v) = sd.entries[i][i].val() {
            if v < best {
                best = v;
                piv = Some(i);
            }
        }
    }
    let piv = piv.ok_or(Error::SignViolation)?;
    let lead = sd.entries[piv][piv].coeff(best);
    let eps = if lead.is_negative() { 1 } else { -1 };
    // -eps*Sdot = nu nu^T
    let neg_eps_sd: Vec<Vec<Ser1>> = sd
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| if eps > 0 { e.neg() } else { e.clone() })
                .collect()
        })
        .collect();
    let nu_piv = neg_eps_sd[piv][piv].sqrt().map_err(|_| Error::SignViolation)?;
    let mut nu = vec![Ser1::zero_to(0); m];
    for i in 0..m {
        if i == piv {
            nu[i] = nu_piv.clone();
        } else {
            nu[i] = neg_eps_sd[i][piv].div(&nu_piv)?;
        }
    }
    // verify rank-1: nu_i nu_j = (-eps Sdot)_ij on the common window
    for i in 0..m {
        for j in 0..m {
            let prod = nu[i].mul(&nu[j]);
            let d = prod.sub(&neg_eps_sd[i][j]);
            if !d.is_zero_to_window() {
                return Err(Error::RankTooHigh);
            }
        }
    }
    Ok((eps, nu))
}

/// Canonical basis for an m = 2 rank-1 nondecreasing curve of constant
/// weight 4: e's from the Laurent coefficients of w(t,tau), f's from the
/// derivative curve, sigma-dual to the e's.
pub fn canonical_basis_m2(s: &MatCurve) -> Result<CanonicalFrame> {
    if s.m != 2 {
        return Err(Error::WrongDimension { expected: 2, got: s.m });
    }
    let (k, r) = weight_rank(s)?;
    if r > 1 {
        return Err(Error::RankTooHigh);
    }
    if k != 4 {
        return Err(Error::OrderTooLow(format!("constant weight 4 required, found det order {k}")));
    }
    let (eps, nu) = velocity_generator(s)?;
    let delta = delta_matrix(s)?;
    let det = ser2_det(&delta);
    let x = det.exact_div_spow(4)?;
    if x.get(0, 0).is_zero() {
        return Err(Error::NotDivisible);
    }
    let adj = ser2_adjugate(&delta);
    // w_x(s,tau) = Delta^{-1} nu(tau+s) = adj * nu(tau+s) / (s^4 X)
    let nu_shift: Vec<Ser2> = nu
        .iter()
        .map(|c| recenter(&c.trim_leading_zeros()))
        .collect::<Result<Vec<_>>>()?;
    let xinv = x.invert()?;
    let mut wx: Vec<Ser2> = Vec::with_capacity(2);
    for i in 0..2 {
        let mut acc: Option<Ser2> = None;
        for l in 0..2 {
            let t = adj[i][l].mul(&nu_shift[l]);
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        let mut v = acc.expect("2x2").mul(&xinv);
        v.sv -= 4;
        wx.push(v);
    }
    // e_i x-parts: Laurent s-coefficients at s^(i-1-m) = s^-2, s^-1
    let mut e1x = [wx[0].extract_s(-2), wx[1].extract_s(-2)];
    let mut e2x = [wx[0].extract_s(-1), wx[1].extract_s(-1)];
    // sign normalisation: first nonzero component of e1 gets positive leading coefficient
    let flip = {
        let mut f = false;
        for c in &e1x {
            if let Some(v) = c.val() {
                f = c.coeff(v).is_negative();
                break;
            }
        }
        f
    };
    if flip {
        for c in e1x.iter_mut() {
            *c = c.neg();
        }
        for c in e2x.iter_mut() {
            *c = c.neg();
        }
    }
    // lift x-parts to W: (x, S(tau) x)
    let s_tau: Vec<Vec<Ser1>> = s.entries.clone(); // same series, read in tau
    let lift = |xv: &[Ser1; 2]| -> [Ser1; 4] {
        let y0 = s_tau[0][0].mul(&xv[0]).add(&s_tau[0][1].mul(&xv[1]));
        let y1 = s_tau[1][0].mul(&xv[0]).add(&s_tau[1][1].mul(&xv[1]));
        [xv[0].clone(), xv[1].clone(), y0, y1]
    };
    let e1 = lift(&e1x);
    let e2 = lift(&e2x);
    // derivative curve: free term M0 of (S_t - S_tau)^{-1} = adj/(s^4 X)
    let mut m0 = [[Ser1::zero_to(0), Ser1::zero_to(0)], [Ser1::zero_to(0), Ser1::zero_to(0)]];
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = adj[i][j].mul(&xinv);
            entry.sv -= 4;
            m0[i][j] = entry.extract_s(0);
        }
    }
    // Lambda^0 basis: b_k = (M0 e_k, e_k + S_tau M0 e_k)
    let basis0: Vec<[Ser1; 4]> = (0..2)
        .map(|kk| {
            let xv = [m0[0][kk].clone(), m0[1][kk].clone()];
            let mut v = lift(&xv);
            v[2 + kk] = v[2 + kk].add(&Ser1::constant(Rat::one(), v[2 + kk].end().max(1) as usize));
            v
        })
        .collect();
    // f's: sigma_eps-dual basis inside Lambda^0
    let frame_tmp = CanonicalFrame {
        e1: e1.clone(),
        e2: e2.clone(),
        f1: basis0[0].clone(),
        f2: basis0[1].clone(),
        eps,
    };
    // solve [sig(b1,e1) sig(b2,e1); sig(b1,e2) sig(b2,e2)] alpha = (delta_i1, delta_i2)
    let s11 = frame_tmp.sigma(&basis0[0], &e1);
    let s21 = frame_tmp.sigma(&basis0[1], &e1);
    let s12 = frame_tmp.sigma(&basis0[0], &e2);
    let s22 = frame_tmp.sigma(&basis0[1], &e2);
    let det_s = s11.mul(&s22).sub(&s21.mul(&s12));
    let det_inv = det_s.invert()?;
    // system rows: sig(f, e1) = a1 s11 + a2 s21, sig(f, e2) = a1 s12 + a2 s22
    // f1: rhs (1, 0) -> alpha = (s22, -s12)/det
    let a11 = s22.mul(&det_inv);
    let a12 = s12.neg().mul(&det_inv);
    // f2: rhs (0, 1) -> alpha = (-s21, s11)/det
    let a21 = s21.neg().mul(&det_inv);
    let a22 = s11.mul(&det_inv);
    let f1 = lincomb(&[&basis0[0], &basis0[1]], &[a11, a12]);
    let f2 = lincomb(&[&basis0[0], &basis0[1]], &[a21, a22]);
    Ok(CanonicalFrame { e1, e2, f1, f2, eps })
}

/// Residuals of the four rows of the structural equation and of the
/// fourth-order equation for e1. All must vanish to the tracked order.
pub struct StructEqResiduals {
    pub rows: [[Ser1; 4]; 4],
    pub e1_fourth: [Ser1; 4],
    pub seprime: Ser1,
}

pub fn structural_eq_check(
    frame: &CanonicalFrame,
    rho: &Ser1,
    a: &Ser1,
) -> Result<StructEqResiduals> {
    let e1 = &frame.e1;
    let e2 = &frame.e2;
    let f1 = &frame.f1;
    let f2 = &frame.f2;
    let rho_p = rho.diff();
    let rho_pp = rho_p.diff();
    let c = |r: Rat, ord: usize| Ser1::constant(r, ord);
    let ord = e1.iter().map(|s| s.end()).min().unwrap_or(1).max(1) as usize;
    // row 1: e1' = 3 e2
    let r1 = sub4(&deriv_vec(e1), &scale4(e2, &c(rat_i(3), ord)));
    // row 2: e2' = (1/4) rho e1 + 4 f2
    let r2 = sub4(
        &deriv_vec(e2),
        &add4(&scale4(e1, &rho.scale(&rat(1, 4))), &scale4(f2, &c(rat_i(4), ord))),
    );
    // row 3: f1' = -(35/36 A - 1/8 rho^2 + 1/16 rho'') e1 - 7/16 rho' e2 - 1/4 rho f2
    let coef1 = a
        .scale(&rat(35, 36))
        .sub(&rho.mul(rho).scale(&rat(1, 8)))
        .add(&rho_pp.scale(&rat(1, 16)));
    let r3 = sub4(
        &deriv_vec(f1),
        &add4(
            &add4(&scale4(e1, &coef1.neg()), &scale4(e2, &rho_p.scale(&rat(-7, 16)))),
            &scale4(f2, &rho.scale(&rat(-1, 4))),
        ),
    );
    // row 4: f2' = -7/16 rho' e1 - 9/4 rho e2 - 3 f1
    let r4 = sub4(
        &deriv_vec(f2),
        &add4(
            &add4(&scale4(e1, &rho_p.scale(&rat(-7, 16))), &scale4(e2, &rho.scale(&rat(-9, 4)))),
            &scale4(f1, &c(rat_i(-3), ord)),
        ),
    );
    // e1^(4) = (35 A - 81/16 rho^2 - 9/4 rho'') e1 - 15/2 rho' e1' - 15/2 rho e1''
    let e1p = deriv_vec(e1);
    let e1pp = deriv_vec(&e1p);
    let e1ppp = deriv_vec(&e1pp);
    let e1pppp = deriv_vec(&e1ppp);
    let coef = a
        .scale(&rat_i(35))
        .sub(&rho.mul(rho).scale(&rat(81, 16)))
        .sub(&rho_pp.scale(&rat(9, 4)));
    let rhs = add4(
        &scale4(e1, &coef),
        &add4(&scale4(&e1p, &rho_p.scale(&rat(-15, 2))), &scale4(&e1pp, &rho.scale(&rat(-15, 2)))),
    );
    let e1_fourth = sub4(&e1pppp, &rhs);
    // seprime: sigma(e1'', e1') = 36
    let lhs = frame.sigma(&e1pp, &e1p);
    let seprime = lhs.sub(&Ser1::constant(rat_i(36), lhs.end().max(1) as usize));
    Ok(StructEqResiduals { rows: [r1, r2, r3, r4], e1_fourth, seprime })
}

fn add4(a: &[Ser1; 4], b: &[Ser1; 4]) -> [Ser1; 4] {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2]), a[3].add(&b[3])]
}

fn sub4(a: &[Ser1; 4], b: &[Ser1; 4]) -> [Ser1; 4] {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2]), a[3].sub(&b[3])]
}

fn scale4(a: &[Ser1; 4], c: &Ser1) -> [Ser1; 4] {
    [a[0].mul(c), a[1].mul(c), a[2].mul(c), a[3].mul(c)]
}

// ---------------------------------------------------------------------------
// weight-jump asymptotics
// ---------------------------------------------------------------------------

pub struct JumpAsymptotics {
    /// nearby constant weight
    pub k: usize,
    /// weight at the jump point
    pub k0: usize,
    /// coefficient of t^-2 in rho
    pub rho_pole: Rat,
    /// coefficient of t^-4 in A
    pub a_pole: Rat,
}

/// Laurent data of rho and A at a point of weight jump one.
pub fn jump_asymptotics(s: &MatCurve) -> Result<JumpAsymptotics> {
    let det2 = delta_det(s)?;
    // weight at 0: order of det(S_t - S_0) = order in s of det at tau = 0
    let det_at0 = ser1_det(&s.through_origin().entries);
    let k0 = det_at0
        .val()
        .ok_or_else(|| Error::OrderTooLow("det vanishes to tracked order".into()))? as usize;
    // generic nearby weight: minimal s-row of the recentred det with a
    // nonvanishing tau-series
    let mut k = None;
    for i in 0..det2.n {
        let row = det2.extract_s(det2.sv + i as i64);
        if !row.is_zero_to_window() {
            k = Some((det2.sv + i as i64) as usize);
            break;
        }
    }
    let k = k.ok_or_else(|| Error::OrderTooLow("det vanishes identically to window".into()))?;
    if k0 != k + 1 {
        return Err(Error::NotJumpOne);
    }
    let x = det2.exact_div_spow(k)?;
    // X(0,0) = 0, X = (s + 2 tau) * a with a(0,0) != 0
    if !x.get(0, 0).is_zero() {
        return Err(Error::NotJumpOne);
    }
    let a2 = x.div_linear(&rat_i(1), &rat_i(2))?;
    if a2.get(0, 0).is_zero() {
        return Err(Error::NotJumpOne);
    }
    let l = a2.ln_unit()?;
    let g_reg = l.diff_t().diff_s().sub(&l.diff_s().diff_s());
    // rho(t) = -1/(4 t^2) + g_reg(0, t)
    let rho_reg = g_reg.extract_s(0);
    let mut rho = rho_reg.clone();
    {
        // add the singular term
        let sing = Ser1 { lo: -2, c: vec![rat(-1, 4)] };
        rho = rho.add(&pad_to(&sing, rho_reg.end()));
    }
    // d^2 g / dt0^2 |diag = -6/(2t)^4 + (d_s^2 g_reg)(0, t) = -(3/8) t^-4 + ...
    let d2_reg = g_reg.diff_s().diff_s().extract_s(0);
    let mut d2 = d2_reg.clone();
    {
        let sing = Ser1 { lo: -4, c: vec![rat(-3, 8)] };
        d2 = d2.add(&pad_to(&sing, d2_reg.end()));
    }
    let a_lau = d2
        .scale(&rat(1, 2))
        .sub(&rho.mul(&rho).scale(&rat(3, 5 * k as i64)))
        .sub(&rho.diff().diff().scale(&rat(3, 20)));
    Ok(JumpAsymptotics { k, k0, rho_pole: rho.coeff(-2), a_pole: a_lau.coeff(-4) })
}

fn pad_to(s: &Ser1, end: i64) -> Ser1 {
    if s.end() >= end {
        return s.clone();
    }
    let mut c = s.c.clone();
    c.resize((end - s.lo) as usize, Rat::zero());
    Ser1 { lo: s.lo, c }
}

// ---------------------------------------------------------------------------
// reparametrization rules
// ---------------------------------------------------------------------------

pub struct ReparamResiduals {
    pub g_rule: Ser2,
    pub rho_rule: Ser1,
    pub schwarzian: Ser1,
}

/// Verify the reparametrization rule for g and the rho-rule with the
/// Schwarzian. phi must fix 0 with phi'(0) != 0.
pub fn reparametrization_check(s: &MatCurve, phi: &Ser1) -> Result<ReparamResiduals> {
    if phi.coeff(0) != Rat::zero() || phi.coeff(1).is_zero() {
        return Err(Error::SignViolation);
    }
    let (k, _) = weight_rank(s)?;
    let jets = generating_jets(s, k)?;
    let s_phi = s.compose(phi)?;
    let jets_phi = generating_jets(&s_phi, k)?;
    // u(s,tau) = phi(tau+s) - phi(tau): vanishes to first order in s
    let phi2 = recenter(&phi.trim_leading_zeros())?;
    let mut u = phi2.clone();
    for jj in 0..u.d.first().map(|r| r.len()).unwrap_or(0) {
        u.d[0][jj] = Rat::zero();
    }
    // compose g with (u, v): g(t0,t1) had variables s' = t0-t1 -> u, tau' = t1 -> v=phi(tau)
    let v_ser = embed_t(phi);
    let g_composed = ser2_compose(&jets.g, &u, &v_ser)?;
    // phidot(t0) phidot(t1)
    let phid = phi.diff();
    let phid_t0 = recenter(&phid.trim_leading_zeros())?;
    let phid_t1 = embed_t(&phid);
    let dd = phid_t0.mul(&phid_t1);
    // k*(dd/u^2 - 1/s^2): u = s * w, w unit
    let w = {
        let mut t = u.clone();
        t = t.exact_div_spow(1)?;
        t
    };
    let w2 = w.mul(&w);
    let mut corr = dd.div(&w2)?.sub(&Ser2::constant(Rat::one(), w2.n));
    corr.sv -= 2;
    let corr = corr.scale(&rat_i(k as i64));
    let g_rule = jets_phi.g.sub(&g_composed).sub(&corr);
    // rho rule: rho_phi(t) = phid(t)^2 rho(phi(t)) + (k/3) S(phi)
    let (rho, _a) = ricci_and_density(&jets)?;
    let (rho_phi, _) = ricci_and_density(&jets_phi)?;
    let rho_comp = rho.compose(phi)?;
    let sch = schwarzian(phi)?;
    let rhs = phid.mul(&phid).mul(&rho_comp).add(&sch.scale(&rat(k as i64, 3)));
    let rho_rule = rho_phi.sub(&rhs);
    Ok(ReparamResiduals { g_rule, rho_rule, schwarzian: sch })
}

/// S(phi) = (1/2) phi'''/phi' - (3/4) (phi''/phi')^2.
pub fn schwarzian(phi: &Ser1) -> Result<Ser1> {
    let p1 = phi.diff();
    let p2 = p1.diff();
    let p3 = p2.diff();
    let r = p2.div(&p1)?;
    Ok(p3.div(&p1)?.scale(&rat(1, 2)).sub(&r.mul(&r).scale(&rat(3, 4))))
}

fn embed_t(s: &Ser1) -> Ser2 {
    let reg = s.trim_leading_zeros();
    let n = reg.end().max(0) as usize;
    let mut z = Ser2::zero(n);
    for (idx, c) in reg.c.iter().enumerate() {
        let kk = reg.lo as usize + idx;
        if kk < n {
            z.d[0][kk] = c.clone();
        }
    }
    z
}

/// Substitute (s, tau) -> (u(s,tau), v(tau)) into a Ser2 (u with s-valuation
/// >= 1, v with tau-valuation >= 1 as a tau-series embedded in Ser2).
fn ser2_compose(g: &Ser2, u: &Ser2, v: &Ser2) -> Result<Ser2> {
    if g.sv < 0 {
        return Err(Error::OrderTooLow("compose of Laurent part unsupported".into()));
    }
    let n = g.n.min(u.n).min(v.n);
    let mut acc = Ser2::zero(n);
    // powers of u and v
    let mut upows: Vec<Ser2> = vec![Ser2::constant(Rat::one(), n)];
    let mut vpows: Vec<Ser2> = vec![Ser2::constant(Rat::one(), n)];
    for _i in 1..n {
        let last = upows.last().unwrap().mul(u);
        upows.push(last.resized_pub(n));
        let lastv = vpows.last().unwrap().mul(v);
        vpows.push(lastv.resized_pub(n));
    }
    for i in 0..g.d.len() {
        for j in 0..g.d[i].len() {
            let c = &g.d[i][j];
            if c.is_zero() {
                continue;
            }
            let si = (g.sv + i as i64) as usize;
            if si >= n || j >= n {
                continue;
            }
            let t = upows[si].mul(&vpows[j]).scale(c);
            acc = acc.add(&t);
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// reduced Jacobi curve of a distribution
// ---------------------------------------------------------------------------

/// Compute the reduced Jacobi curve at a rational point of
/// (D^2)-perp \ (D^3)-perp as an (n-3) x (n-3) symmetric matrix curve.
///
/// The chart on the reduced symplectic quotient W_lambda uses the first
/// block (theta, X, d/du6..d/dun) and a second block built from F and
/// kernel-combinations of the tangency-corrected lifts Y~_j; a symplectic
/// Gram-Schmidt correction makes the second block isotropic, and the final
/// pairing normalisation makes Lagrangianity read as matrix symmetry.
pub fn reduced_jacobi_series(
    cot: &Cotangent,
    lambda: &CotangentPoint,
    order: usize,
) -> Result<MatCurve> {
    let chart = cot.chart();
    let n = cot.n();
    let m = n - 3;
    if !lambda.off_d3perp() {
        return Err(Error::BasePointOnD3perp);
    }
    // first block: theta, X, du6..dun
    let mut first: Vec<CoField> = vec![cot.theta.clone(), cot.xx.clone()];
    for j in 5..n {
        first.push(CoField::fiber_coord(chart, j));
    }
    // tangency-corrected lifts Y~_4..Y~_n (u-indices 3..n-1)
    let tildes: Vec<CoField> = (3..n).map(|j| cot.tilde_y(j)).collect();
    let uvals: Vec<Rat> = (3..n).map(|j| lambda.u[j].clone()).collect();
    // kernel of the row (u4, ..., un): m-1 combinations
    let kernel = kernel_basis(&uvals);
    let mut second: Vec<CoField> = vec![cot.f.clone()];
    for comb in &kernel {
        let mut acc = CoField::zero(chart);
        for (c, ty) in comb.iter().zip(tildes.iter()) {
            if !c.is_zero() {
                acc = acc.add(&ty.scale(&crate::expr::Expr::constant(chart, c.clone())));
            }
        }
        second.push(acc);
    }
    // transversal: Z' = sum u_j(lambda) Y~_j
    let mut zfield = CoField::zero(chart);
    for (c, ty) in uvals.iter().zip(tildes.iter()) {
        if !c.is_zero() {
            zfield = zfield.add(&ty.scale(&crate::expr::Expr::constant(chart, c.clone())));
        }
    }
    let mut basis_fields: Vec<CoField> = Vec::with_capacity(2 * n - 3);
    basis_fields.extend(first.iter().cloned());
    basis_fields.extend(second.iter().cloned());
    basis_fields.push(zfield);
    basis_fields.push(cot.euler.clone());
    basis_fields.push(cot.h.clone());
    // evaluate the basis at lambda
    let mut bcols: Vec<Vec<Rat>> = Vec::new();
    for f in &basis_fields {
        bcols.push(f.eval(lambda)?);
    }
    let bmat = QMat::from_columns(&bcols);
    if bmat.rank() != 2 * n - 3 {
        return Err(Error::BasisDegenerateAtPoint);
    }
    // sigma pairings at lambda
    let sig_at = |a: &CoField, b: &CoField| -> Result<Rat> {
        let e = cot.sigma(a, b)?;
        e.eval(&lambda.assignment(chart)).map_err(|_| Error::EvaluationPole)
    };
    let mut p = QMat::zeros(m, m);
    let mut qg = QMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            p[(i, j)] = sig_at(&first[i], &second[j])?;
            qg[(i, j)] = sig_at(&second[i], &second[j])?;
        }
        for j in 0..m {
            // first block must be isotropic at lambda
            if i < j {
                let v = sig_at(&first[i], &first[j])?;
                if !v.is_zero() {
                    return Err(Error::NotLagrangian);
                }
            }
        }
    }
    // symplectic correction Gamma = -(1/2) P^{-T} Q
    let pt = transpose(&p);
    let gamma = {
        let mut g = QMat::zeros(m, m);
        for col in 0..m {
            let rhs: Vec<Rat> = (0..m).map(|r| -&qg[(r, col)] / rat_i(2)).collect();
            let x = pt.solve(&rhs).map_err(|_| Error::BasisDegenerateAtPoint)?;
            for r in 0..m {
                g[(r, col)] = x[r].clone();
            }
        }
        g
    };
    // ad-chain coordinates for the first-block fields
    let mut xi = vec![vec![Ser1::zero_to(order as i64 + 1); m]; m];
    let mut eta = vec![vec![Ser1::zero_to(order as i64 + 1); m]; m];
    for i in 0..m {
        for j in 0..m {
            xi[i][j] = Ser1::from_poly_coeffs(vec![], order + 1);
            eta[i][j] = Ser1::from_poly_coeffs(vec![], order + 1);
        }
    }
    let mut fact = Rat::one();
    for (jcol, v0) in first.iter().enumerate() {
        let mut cur = v0.clone();
        for kpow in 0..=order {
            if kpow > 0 {
                cur = co_bracket(&cot.h, &cur)?;
                fact = Rat::one(); // recomputed below
            }
            let vec_at = cur.eval(lambda)?;
            let coords = bmat.solve(&vec_at).map_err(|_| Error::BasisDegenerateAtPoint)?;
            // Z'-coordinate must vanish: index 2m
            if !coords[2 * m].is_zero() {
                return Err(Error::NotLagrangian);
            }
            let mut kfact = Rat::one();
            for f in 1..=kpow {
                kfact *= rat_i(f as i64);
            }
            for r in 0..m {
                let c_xi = &coords[r] / &kfact;
                let c_eta = &coords[m + r] / &kfact;
                set_coeff(&mut xi[r][jcol], kpow, c_xi);
                set_coeff(&mut eta[r][jcol], kpow, c_eta);
            }
        }
    }
    let _ = fact;
    // corrected coordinates: Xi' = Xi + Gamma * Eta, Eta' = Eta
    let mut xi_corr = xi.clone();
    for r in 0..m {
        for c in 0..m {
            let mut acc = xi[r][c].clone();
            for l in 0..m {
                if !gamma[(r, l)].is_zero() {
                    acc = acc.add(&eta[l][c].scale(&gamma[(r, l)]));
                }
            }
            xi_corr[r][c] = acc;
        }
    }
    // S = P * Eta * Xi'^{-1}
    let xi_inv = ser1_inverse(&xi_corr)?;
    let mut s_raw = vec![vec![Ser1::zero_to(0); m]; m];
    for r in 0..m {
        for c in 0..m {
            let mut acc: Option<Ser1> = None;
            for l in 0..m {
                let t = eta[r][l].mul(&xi_inv[l][c]);
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t),
                });
            }
            s_raw[r][c] = acc.expect("m > 0");
        }
    }
    let mut s_mat = vec![vec![Ser1::zero_to(0); m]; m];
    for r in 0..m {
        for c in 0..m {
            let mut acc: Option<Ser1> = None;
            for l in 0..m {
                if !p[(r, l)].is_zero() {
                    let t = s_raw[l][c].scale(&p[(r, l)]);
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t),
                    });
                }
            }
            s_mat[r][c] = acc.unwrap_or_else(|| Ser1::from_poly_coeffs(vec![], order + 1));
        }
    }
    let curve = MatCurve::new(s_mat)?;
    if !curve.is_symmetric() {
        return Err(Error::NotLagrangian);
    }
    Ok(curve)
}

fn set_coeff(s: &mut Ser1, k: usize, v: Rat) {
    let idx = (k as i64 - s.lo) as usize;
    if idx < s.c.len() {
        s.c[idx] = v;
    }
}

fn transpose(m: &QMat) -> QMat {
    let mut t = QMat::zeros(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            t[(j, i)] = m[(i, j)].clone();
        }
    }
    t
}

/// Deterministic kernel basis of the 1 x k row (v_1, ..., v_k), nonzero row.
fn kernel_basis(v: &[Rat]) -> Vec<Vec<Rat>> {
    let k = v.len();
    let piv = v.iter().position(|x| !x.is_zero()).expect("off (D^3)-perp");
    let mut out = Vec::new();
    for j in 0..k {
        if j == piv {
            continue;
        }
        // e_j - (v_j / v_piv) e_piv
        let mut w = vec![Rat::zero(); k];
        w[j] = Rat::one();
        w[piv] = -&v[j] / &v[piv];
        out.push(w);
    }
    out
}

/// Value A(0) of the series-route density at lambda, for cross-checking the
/// symbolic pipeline.
pub fn series_density_at(cot: &Cotangent, lambda: &CotangentPoint, order: usize) -> Result<Rat> {
    let curve = reduced_jacobi_series(cot, lambda, order)?;
    let m = curve.m;
    let (k, _r) = weight_rank(&curve)?;
    if k != m * m {
        return Err(Error::OrderTooLow(format!("expected constant weight {}, found {k}", m * m)));
    }
    let jets = generating_jets(&curve, k)?;
    let (_rho, a) = ricci_and_density(&jets)?;
    if !a.knows(0) {
        return Err(Error::OrderTooLow("density window misses t^0".into()));
    }
    Ok(a.coeff(0))
}

impl Ser2 {
    pub fn resized_pub(&self, n: usize) -> Ser2 {
        let mut z = Ser2::zero(n);
        z.sv = self.sv;
        for i in 0..n.min(self.d.len()) {
            for j in 0..(n - i).min(self.d[i].len()) {
                z.d[i][j] = self.d[i][j].clone();
            }
        }
        z
    }
}
