use std::fmt;

use super::field::{Field, Scalar};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Mat> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for x in &row {
                if !field.contains(x) {
                    return Err(Error::InvalidField(format!("entry {x} not in {field}")));
                }
            }
            data.extend(row);
        }
        Ok(Mat { field, rows: n, cols, data })
    }

    /// Small-integer constructor, mostly for tests and fixtures.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&x| field.from_i64(x)).collect()
            })
            .collect();
        Mat::from_rows(field, rows, cols).expect("literal matrix")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_list(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch {:?} * {:?}", self.shape(), other.shape());
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let neg_a = f.neg(a);
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.sub_mul(&out.data[idx], &neg_a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix: `v^T M`.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        let f = self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            let neg_a = f.neg(a);
            for (j, slot) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !f.is_zero(b) {
                    *slot = f.sub_mul(slot, &neg_a, b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        let f = self.field;
        Mat { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.neg(a)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let f = self.field;
        Mat { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: i64) -> Mat {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut out = Mat::zeros(self.field, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, idx.len(), self.cols);
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(a, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                out.set(i, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn vstack(field: Field, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack width mismatch");
            out.put(r, 0, b);
            r += b.rows;
        }
        out
    }

    pub fn hstack(field: Field, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack height mismatch");
            out.put(0, c, b);
            c += b.cols;
        }
        out
    }

    pub fn block_diag(field: Field, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.put(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Kronecker product; with row-major vectorisation,
    /// `vec(A X B) = (A ⊗ B^T) vec(X)`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !f.is_zero(b) {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Mat {
        assert_eq!(data.len(), rows * cols, "flat data length mismatch");
        Mat { field, rows, cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub_mul(m.get(i, j), &factor, m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `{v : Mv = 0}` in canonical form.
    pub fn kernel(&self) -> Subspace {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            rows.push(v);
        }
        Subspace::span(f, self.cols, rows)
    }

    /// Column space, as a subspace of the target.
    pub fn image(&self) -> Subspace {
        Subspace::from_mat(&self.transpose())
    }

    /// Some `x` with `Mx = b`, free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side has length {}, expected {}", b.len(), self.rows)));
        }
        let f = self.field;
        let mut aug = Mat::zeros(f, self.rows, self.cols + 1);
        aug.put(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug.set(i, self.cols, x.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `M X = B` column by column.
    pub fn solve_mat(&self, b: &Mat) -> Result<Option<Mat>> {
        if b.rows != self.rows {
            return Err(Error::Dimension(format!("right-hand side has {} rows, expected {}", b.rows, self.rows)));
        }
        let f = self.field;
        let mut aug = Mat::zeros(f, self.rows, self.cols + b.cols);
        aug.put(0, 0, self);
        aug.put(0, self.cols, b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(f, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Two-sided inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_mat(&Mat::identity(self.field, self.rows)).ok()??;
        Some(x)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_of_proportional_rows() {
        let q = Field::Rationals;
        let m = Mat::from_i64(q, &[&[1, 2], &[2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0]);
        assert_eq!(r, Mat::from_i64(q, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rref().0, r);
    }

    #[test]
    fn rref_identity_is_fixed() {
        let q = Field::Rationals;
        let id = Mat::identity(q, 3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
    }

    #[test]
    fn rref_over_f5() {
        let f5 = Field::Prime(5);
        let m = Mat::from_i64(f5, &[&[1, 1], &[1, 2]]);
        assert_eq!(m.rref(), (Mat::identity(f5, 2), vec![0, 1]));
    }

    #[test]
    fn kernel_examples() {
        let q = Field::Rationals;
        assert_eq!(Mat::zeros(q, 2, 2).kernel().dim(), 2);
        assert_eq!(Mat::identity(q, 3).kernel().dim(), 0);
        let k = Mat::from_i64(q, &[&[1, 2], &[2, 4]]).kernel();
        assert_eq!(k, Subspace::span(q, 2, vec![vec![q.from_i64(-2), q.from_i64(1)]]));
    }

    #[test]
    fn solve_examples() {
        let q = Field::Rationals;
        let b = vec![q.from_i64(3), q.fraction(1, 2)];
        assert_eq!(Mat::identity(q, 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Mat::zeros(q, 2, 2).solve(&b).unwrap(), None);
        let m = Mat::from_i64(q, &[&[1, 2], &[2, 4]]);
        let x = m.solve(&[q.from_i64(1), q.from_i64(2)]).unwrap().unwrap();
        assert_eq!(x, vec![q.from_i64(1), q.from_i64(0)]);
        assert!(m.solve(&[q.one()]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f7 = Field::Prime(7);
        let m = Mat::from_i64(f7, &[&[2, 1], &[5, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(f7, 2));
    }
}
