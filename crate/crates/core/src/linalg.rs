//! Exact linear algebra over the rationals and over the rational-function
//! field.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Rat;

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Self {
        let rows = cols.first().map(|c| c.len()).unwrap_or(0);
        let mut m = QMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            // find pivot
            let piv = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(piv) = piv else { continue };
            m.swap_rows(row, piv);
            let p = m[(row, col)].clone();
            for r in (row + 1)..m.rows {
                if !m[(r, col)].is_zero() {
                    let f = &m[(r, col)] / &p;
                    for c in col..m.cols {
                        let t = &m[(row, c)] * &f;
                        m[(r, c)] -= t;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    /// Solve `self * x = b`; requires the system to be consistent with full
    /// column rank. Errors otherwise.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("solve: rhs length".into()));
        }
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0;
        for col in 0..m.cols {
            let piv = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(piv) = piv else { continue };
            m.swap_rows(row, piv);
            rhs.swap(row, piv);
            let p = m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] / &p;
            }
            rhs[row] = &rhs[row] / &p;
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let t = &m[(row, c)] * &f;
                        m[(r, c)] -= t;
                    }
                    let t = &rhs[row] * &f;
                    rhs[r] -= t;
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == m.rows {
                break;
            }
        }
        if pivots.len() != self.cols {
            return Err(Error::Internal("solve: rank-deficient system".into()));
        }
        // consistency of the remaining rows
        for r in row..m.rows {
            if !rhs[r].is_zero() {
                return Err(Error::Internal("solve: inconsistent system".into()));
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, c) in pivots {
            x[c] = rhs[r].clone();
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

/// Dense matrix over the rational-function field.
#[derive(Clone, Debug)]
pub struct EMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Expr>,
}

impl EMat {
    pub fn new(rows: usize, cols: usize, fill: Expr) -> Self {
        EMat { rows, cols, data: vec![fill; rows * cols] }
    }

    pub fn from_columns(cols: &[Vec<Expr>]) -> Self {
        let rows = cols.first().map(|c| c.len()).unwrap_or(0);
        let fill = cols[0][0].clone();
        let mut m = EMat::new(rows, cols.len(), fill);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank as a matrix of rational functions (generic rank).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            let piv = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(piv) = piv else { continue };
            m.swap_rows(row, piv);
            let p = m[(row, col)].clone();
            for r in (row + 1)..m.rows {
                if !m[(r, col)].is_zero() {
                    let f = m[(r, col)].div(&p).expect("pivot nonzero");
                    for c in col..m.cols {
                        let t = m[(row, c)].mul(&f);
                        m[(r, c)] = m[(r, c)].sub(&t);
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    pub fn det(&self) -> Result<Expr> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("det: square matrix required".into()));
        }
        let mut m = self.clone();
        let chart = m.data[0].chart.clone();
        let mut det = Expr::one(&chart);
        let mut sign_negative = false;
        for col in 0..m.cols {
            let piv = (col..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(piv) = piv else {
                return Ok(Expr::zero(&chart));
            };
            if piv != col {
                m.swap_rows(col, piv);
                sign_negative = !sign_negative;
            }
            let p = m[(col, col)].clone();
            det = det.mul(&p);
            for r in (col + 1)..m.rows {
                if !m[(r, col)].is_zero() {
                    let f = m[(r, col)].div(&p).expect("pivot nonzero");
                    for c in col..m.cols {
                        let t = m[(col, c)].mul(&f);
                        m[(r, c)] = m[(r, c)].sub(&t);
                    }
                }
            }
        }
        Ok(if sign_negative { det.neg() } else { det })
    }

    /// Solve `self * x = b` over the function field; requires full column
    /// rank and consistency.
    pub fn solve(&self, b: &[Expr]) -> Result<Vec<Expr>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("solve: rhs length".into()));
        }
        let chart = self.data[0].chart.clone();
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let piv = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(piv) = piv else { continue };
            m.swap_rows(row, piv);
            rhs.swap(row, piv);
            let p = m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].div(&p).expect("pivot nonzero");
            }
            rhs[row] = rhs[row].div(&p).expect("pivot nonzero");
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let t = m[(row, c)].mul(&f);
                        m[(r, c)] = m[(r, c)].sub(&t);
                    }
                    let t = rhs[row].mul(&f);
                    rhs[r] = rhs[r].sub(&t);
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == m.rows {
                break;
            }
        }
        if pivots.len() != self.cols {
            return Err(Error::InconsistentSystem);
        }
        for r in row..m.rows {
            if !rhs[r].is_zero() {
                return Err(Error::InconsistentSystem);
            }
        }
        let mut x = vec![Expr::zero(&chart); self.cols];
        for (r, c) in pivots {
            x[c] = rhs[r].clone();
        }
        Ok(x)
    }

    /// Inverse via Gauss-Jordan; errors when the determinant is identically zero.
    pub fn inverse(&self) -> Result<EMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse: square matrix required".into()));
        }
        let n = self.rows;
        let chart = self.data[0].chart.clone();
        let mut m = self.clone();
        let mut inv = EMat::new(n, n, Expr::zero(&chart));
        for i in 0..n {
            inv[(i, i)] = Expr::one(&chart);
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[(r, col)].is_zero()).ok_or(Error::DegenerateFrame)?;
            m.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let p = m[(col, col)].clone();
            for c in 0..n {
                m[(col, c)] = m[(col, c)].div(&p).expect("pivot nonzero");
                inv[(col, c)] = inv[(col, c)].div(&p).expect("pivot nonzero");
            }
            for r in 0..n {
                if r != col && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in 0..n {
                        let t = m[(col, c)].mul(&f);
                        m[(r, c)] = m[(r, c)].sub(&t);
                        let t2 = inv[(col, c)].mul(&f);
                        inv[(r, c)] = inv[(r, c)].sub(&t2);
                    }
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for EMat {
    type Output = Expr;
    fn index(&self, (r, c): (usize, usize)) -> &Expr {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for EMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Expr {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_i};

    #[test]
    fn qmat_rank_solve() {
        let mut m = QMat::zeros(3, 2);
        m[(0, 0)] = rat_i(1);
        m[(1, 1)] = rat_i(2);
        m[(2, 0)] = rat_i(1);
        m[(2, 1)] = rat_i(2);
        assert_eq!(m.rank(), 2);
        let x = m.solve(&[rat_i(3), rat_i(4), rat_i(7)]).unwrap();
        assert_eq!(x, vec![rat_i(3), rat_i(2)]);
        assert!(m.solve(&[rat_i(3), rat_i(4), rat_i(8)]).is_err());
        assert_eq!(rat(1, 2) + rat(1, 2), rat_i(1));
    }
}
