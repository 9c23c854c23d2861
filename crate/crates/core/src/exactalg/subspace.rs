use super::field::{Field, Scalar};
use super::mat::Mat;
use crate::error::{Error, Result};

/// A linear subspace of `field^ambient`, stored by its reduced row echelon
/// basis so that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Row span of `m`.
    pub fn from_mat(m: &Mat) -> Subspace {
        let (r, pivots) = m.rref();
        let basis = r.submatrix(0..pivots.len(), 0..m.cols());
        Subspace { ambient: m.cols(), basis, pivots }
    }

    pub fn span(field: Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        let n = vectors.len();
        let m = Mat::from_rows(field, vectors, ambient).expect("vector length matches ambient");
        debug_assert_eq!(m.rows(), n);
        Subspace::from_mat(&m)
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: Field, ambient: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
        let rows = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace::span(field, ambient, rows)
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!("ambient dimensions {} and {} differ", self.ambient, other.ambient)));
        }
        Ok(())
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let f = self.field();
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.basis.vec_mul(&c);
        if back.iter().zip(v).all(|(a, b)| a == b) {
            Some(c)
        } else {
            debug_assert!(back.iter().zip(v).any(|(a, b)| !f.is_zero(&f.sub(a, b))));
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let m = Mat::vstack(self.field(), self.ambient, &[&self.basis, &other.basis]);
        Ok(Subspace::from_mat(&m))
    }

    /// Linear functionals vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let a = self.annihilator();
        let b = other.annihilator();
        let m = Mat::vstack(self.field(), self.ambient, &[a.basis(), b.basis()]);
        Ok(m.kernel())
    }

    /// `{v : Mv ∈ self}` for `m` mapping into the ambient space.
    pub fn preimage(&self, m: &Mat) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::Dimension(format!("map has {} rows, subspace lives in dimension {}", m.rows(), self.ambient)));
        }
        if self.is_full() {
            return Ok(Subspace::full(self.field(), m.cols()));
        }
        Ok(self.annihilator().basis().mul(m).kernel())
    }

    /// `M(self)` for `m` with `self.ambient` columns.
    pub fn image_under(&self, m: &Mat) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::Dimension(format!("map has {} columns, subspace lives in dimension {}", m.cols(), self.ambient)));
        }
        Ok(Subspace::from_mat(&self.basis.mul(&m.transpose())))
    }

    /// Canonical complement of `self` inside `larger`: vectors of `larger`
    /// reduced against `self`'s pivots, in echelon form. Their classes form a
    /// basis of `larger / self`.
    pub fn quotient_basis(&self, larger: &Subspace) -> Result<Mat> {
        self.check(larger)?;
        if !larger.contains_subspace(self) {
            return Err(Error::NotContained);
        }
        let mut rows = Vec::with_capacity(larger.dim());
        for i in 0..larger.dim() {
            rows.push(self.reduce(larger.basis.row(i)));
        }
        let m = Mat::from_rows(self.field(), rows, self.ambient)?;
        let (r, piv) = m.rref();
        Ok(r.submatrix(0..piv.len(), 0..self.ambient))
    }

    /// Normal form of `v` modulo the subspace: entries at pivot columns zeroed.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let b = self.basis.get(i, j);
                if !f.is_zero(b) {
                    *slot = f.sub_mul(slot, &c, b);
                }
            }
        }
        out
    }

    /// Coordinates in the quotient `larger / self` with respect to a basis
    /// returned by [`Subspace::quotient_basis`]; `v` must lie in `larger`.
    pub fn quotient_coordinates(&self, qbasis: &Mat, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let r = self.reduce(v);
        let q = Subspace::from_mat(qbasis);
        debug_assert_eq!(q.basis(), qbasis);
        q.coordinates(&r)
    }

    /// Basis vectors as plain rows.
    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_list()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn equal_subspaces_intersect_to_themselves() {
        let f = q();
        let u = Subspace::span(f, 3, vec![vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)]]);
        assert_eq!(u.intersection(&u).unwrap(), u);
        assert_eq!(u.quotient_basis(&u).unwrap().rows(), 0);
    }

    #[test]
    fn complementary_lines() {
        let f = q();
        let a = Subspace::coordinate(f, 2, [0]);
        let b = Subspace::span(f, 2, vec![vec![f.from_i64(1), f.from_i64(1)]]);
        assert!(a.sum(&b).unwrap().is_full());
        assert!(a.intersection(&b).unwrap().is_zero());
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let f = q();
        let m = Mat::from_i64(f, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(Subspace::zero(f, 2).preimage(&m).unwrap(), m.kernel());
    }

    #[test]
    fn quotient_requires_containment() {
        let f = q();
        let a = Subspace::coordinate(f, 2, [0]);
        let b = Subspace::coordinate(f, 2, [1]);
        assert!(matches!(a.quotient_basis(&b), Err(Error::NotContained)));
        let full = Subspace::full(f, 2);
        let qb = a.quotient_basis(&full).unwrap();
        assert_eq!(qb, Mat::from_i64(f, &[&[0, 1]]));
        let v = vec![f.from_i64(5), f.from_i64(3)];
        assert_eq!(a.quotient_coordinates(&qb, &v), Some(vec![f.from_i64(3)]));
    }

    #[test]
    fn mismatched_ambients_error() {
        let f = q();
        assert!(Subspace::zero(f, 2).sum(&Subspace::zero(f, 3)).is_err());
    }
}
