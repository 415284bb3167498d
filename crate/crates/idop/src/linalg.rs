//! Exact dense linear algebra over the constant fraction field:
//! determinants, solving, kernel bases and one-sided inverses of
//! evaluation matrices. Pivoting is deterministic (first nonzero entry)
//! so every output is reproducible bit for bit.

use crate::error::{Error, Result};
use crate::funcalg::ConstFraction;

#[derive(Clone, PartialEq, Debug)]
pub struct ConstMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ConstFraction>,
}

impl ConstMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ConstFraction>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix shape mismatch");
        ConstMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ConstMatrix::new(rows, cols, vec![ConstFraction::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ConstMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ConstFraction::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ConstFraction>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        ConstMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ConstFraction {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ConstFraction) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<ConstFraction> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> ConstMatrix {
        let mut m = ConstMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &ConstMatrix) -> ConstMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ConstMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = ConstFraction::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ConstFraction]) -> Vec<ConstFraction> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ConstFraction::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * &v[k]);
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { e.is_one() } else { e.is_zero() };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    pub fn rref(&self) -> (ConstMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, j).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(r * m.cols + k, p * m.cols + k);
                }
            }
            let inv = m.get(r, j).inv();
            for k in 0..m.cols {
                m.set(r, k, &(m.get(r, k) * &inv) + &ConstFraction::zero());
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, j).is_zero() {
                    let f = m.get(i, j).clone();
                    for k in 0..m.cols {
                        let v = m.get(i, k) - &(m.get(r, k) * &f);
                        m.set(i, k, v);
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact determinant by Gaussian elimination with exact division.
    pub fn det(&self) -> Result<ConstFraction> {
        if self.rows != self.cols {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ConstFraction::one();
        for j in 0..n {
            let Some(p) = (j..n).find(|&i| !m.get(i, j).is_zero()) else {
                return Ok(ConstFraction::zero());
            };
            if p != j {
                for k in 0..n {
                    m.data.swap(j * n + k, p * n + k);
                }
                det = -det;
            }
            let pivot = m.get(j, j).clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in (j + 1)..n {
                if !m.get(i, j).is_zero() {
                    let f = &(m.get(i, j).clone()) * &inv;
                    for k in j..n {
                        let v = m.get(i, k) - &(m.get(j, k) * &f);
                        m.set(i, k, v);
                    }
                }
            }
        }
        Ok(det)
    }

    /// Basis of the null space `{v : Mv = 0}`, echelon-normalized so the
    /// first nonzero coordinate of each vector is 1. Empty iff injective.
    pub fn kernel(&self) -> Vec<Vec<ConstFraction>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            pivot_of_col[col] = Some(row);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![ConstFraction::zero(); self.cols];
            v[free] = ConstFraction::one();
            for (col, pivot_row) in pivot_of_col.iter().enumerate() {
                if let Some(row) = pivot_row {
                    v[col] = -r.get(*row, free).clone();
                }
            }
            // normalize first nonzero coordinate to 1
            if let Some(lead) = v.iter().find(|c| !c.is_zero()).cloned() {
                let inv = lead.inv();
                for c in v.iter_mut() {
                    *c = &*c * &inv;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Exact solution of `Mx = b` for square invertible `M`.
    pub fn solve(&self, b: &[ConstFraction]) -> Result<Vec<ConstFraction>> {
        if self.rows != self.cols {
            return Err(Error::NonSquare);
        }
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut m = ConstMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i, j).clone());
            }
            m.set(i, n, b[i].clone());
        }
        let (r, pivots) = m.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        Ok((0..n).map(|i| r.get(i, n).clone()).collect())
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<ConstMatrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        let mut m = ConstMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i, j).clone());
            }
            m.set(i, n + i, ConstFraction::one());
        }
        let (r, pivots) = m.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut out = ConstMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Greedy selection (in row order) of a maximal independent row set.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut selected: Vec<usize> = Vec::new();
        for i in 0..self.rows {
            let mut candidate = selected.clone();
            candidate.push(i);
            let sub = ConstMatrix::from_rows(candidate.iter().map(|&r| self.row(r)).collect());
            if sub.rank() == candidate.len() {
                selected = candidate;
            }
            if selected.len() == self.cols {
                break;
            }
        }
        selected
    }

    /// A left inverse `L` with `L * M = I`, built from the lexicographically
    /// first invertible row subset; zero columns elsewhere. Requires full
    /// column rank. This is deliberately not the Moore-Penrose pseudoinverse.
    pub fn left_inverse(&self) -> Result<ConstMatrix> {
        self.left_inverse_with_rows(&self.independent_rows())
    }

    /// Left inverse from a caller-chosen row subset (must be independent
    /// and of size `cols`); used to test independence of downstream results
    /// from the choice of left inverse.
    pub fn left_inverse_with_rows(&self, rows: &[usize]) -> Result<ConstMatrix> {
        let n = self.cols;
        if rows.len() != n {
            return Err(Error::RankDeficient);
        }
        let sub = ConstMatrix::from_rows(rows.iter().map(|&r| self.row(r)).collect());
        let inv = sub.inverse().map_err(|_| Error::RankDeficient)?;
        let mut l = ConstMatrix::zeros(n, self.rows);
        for i in 0..n {
            for (j, &r) in rows.iter().enumerate() {
                l.set(i, r, inv.get(i, j).clone());
            }
        }
        Ok(l)
    }
}
