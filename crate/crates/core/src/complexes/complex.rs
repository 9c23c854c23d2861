use super::chain::ChainMap;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat, Subspace};

/// A bounded cochain complex of finite-dimensional vector spaces.
///
/// Degrees run over `lo..=hi`; `d(n)` has shape `dim(n+1) × dim(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<Mat>,
}

/// Cohomology in one degree together with canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub dim: usize,
    /// Rows are cocycles whose classes form a basis.
    pub representatives: Mat,
    pub cycles: Subspace,
    pub boundaries: Subspace,
}

impl Complex {
    /// Builds a complex from its dimensions starting at degree `lo` and the
    /// differentials `d(lo), …, d(hi-1)`.
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<Complex> {
        let expected = dims.len().saturating_sub(1);
        if diffs.len() != expected {
            return Err(Error::Dimension(format!("{} differentials for {} degrees", diffs.len(), dims.len())));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(Error::Dimension(format!(
                    "d({}) has shape {:?}, expected {:?}",
                    lo + i as i64,
                    d.shape(),
                    (dims[i + 1], dims[i])
                )));
            }
            if d.field() != field {
                return Err(Error::InvalidField(format!("d({}) is over {}", lo + i as i64, d.field())));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i].mul(&diffs[i - 1]).is_zero() {
                return Err(Error::NotAComplex(lo + i as i64 - 1));
            }
        }
        Ok(Complex { field, lo, dims, diffs })
    }

    pub fn zero(field: Field) -> Complex {
        Complex { field, lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// `k^dim` placed in a single degree.
    pub fn concentrated(field: Field, degree: i64, dim: usize) -> Complex {
        Complex { field, lo: degree, dims: vec![dim], diffs: Vec::new() }
    }

    /// Zero-differential complex with the given dimensions from `lo` on.
    pub fn formal(field: Field, lo: i64, dims: Vec<usize>) -> Complex {
        let diffs = dims.windows(2).map(|w| Mat::zeros(field, w[1], w[0])).collect();
        Complex { field, lo, dims, diffs }
    }

    /// Same complex re-indexed over a wider support.
    pub fn widened(&self, lo: i64, hi: i64) -> Complex {
        let lo = lo.min(self.lo());
        let hi = hi.max(self.hi());
        if hi < lo {
            return Complex { field: self.field, lo, dims: Vec::new(), diffs: Vec::new() };
        }
        let dims = (lo..=hi).map(|n| self.dim(n)).collect();
        let diffs = (lo..hi).map(|n| self.d(n)).collect();
        Complex { field: self.field, lo, dims, diffs }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d(n): C^n → C^{n+1}`, zero outside the support.
    pub fn d(&self, n: i64) -> Mat {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.field, self.dim(n + 1), self.dim(n))
        }
    }

    pub fn d_ref(&self, n: i64) -> Option<&Mat> {
        if n >= self.lo && n < self.hi() {
            Some(&self.diffs[(n - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(n) as i64).sum()
    }

    pub fn cycles(&self, n: i64) -> Subspace {
        self.d(n).kernel()
    }

    pub fn boundaries(&self, n: i64) -> Subspace {
        self.d(n - 1).image()
    }

    pub fn cohomology(&self, n: i64) -> Cohomology {
        let cycles = self.cycles(n);
        let boundaries = self.boundaries(n);
        let representatives = boundaries.quotient_basis(&cycles).expect("boundaries lie in cycles");
        Cohomology { dim: representatives.rows(), representatives, cycles, boundaries }
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        let dn = self.dim(n);
        if dn == 0 {
            return 0;
        }
        dn - self.d(n).rank() - self.d(n - 1).rank()
    }

    /// `(degree, dim H^degree)` over the support.
    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        self.degrees().map(|n| (n, self.cohomology_dim(n))).collect()
    }

    /// Nonzero cohomology dimensions; two complexes over a field are
    /// quasi-isomorphic exactly when these agree.
    pub fn cohomology_profile(&self) -> std::collections::BTreeMap<i64, usize> {
        self.degrees().map(|n| (n, self.cohomology_dim(n))).filter(|&(_, d)| d > 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.cohomology_dim(n) == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Degreewise direct sum, blocks in argument order.
    pub fn direct_sum(parts: &[&Complex]) -> Complex {
        let field = parts.first().map_or(Field::Rationals, |c| c.field);
        let nonempty: Vec<&&Complex> = parts.iter().filter(|c| !c.dims.is_empty()).collect();
        if nonempty.is_empty() {
            return Complex::zero(field);
        }
        let lo = nonempty.iter().map(|c| c.lo()).min().unwrap();
        let hi = nonempty.iter().map(|c| c.hi()).max().unwrap();
        let dims = (lo..=hi).map(|n| parts.iter().map(|c| c.dim(n)).sum()).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let blocks: Vec<Mat> = parts.iter().map(|c| c.d(n)).collect();
                let refs: Vec<&Mat> = blocks.iter().collect();
                Mat::block_diag(field, &refs)
            })
            .collect();
        Complex { field, lo, dims, diffs }
    }

    /// `top / bottom` for subcomplexes `bottom ⊆ top`, in the canonical
    /// quotient bases of [`Subspace::quotient_basis`].
    pub fn subquotient(&self, top: &Subcomplex, bottom: &Subcomplex) -> Result<SubquotientComplex> {
        let mut bases = Vec::new();
        let mut dims = Vec::new();
        let (lo, hi) = (self.lo(), self.hi());
        for n in lo..=hi {
            let qb = bottom.space(n).quotient_basis(&top.space(n))?;
            dims.push(qb.rows());
            bases.push(qb);
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let i = (n - lo) as usize;
            let d = self.d(n);
            let target_sub = Subspace::from_mat(&bases[i + 1]);
            let mut m = Mat::zeros(self.field, dims[i + 1], dims[i]);
            for j in 0..dims[i] {
                let img = d.mul_vec(bases[i].row(j));
                let red = bottom.space(n + 1).reduce(&img);
                let c = target_sub
                    .coordinates(&red)
                    .ok_or_else(|| Error::Filtration(format!("top level not closed under d in degree {n}")))?;
                for (k, x) in c.into_iter().enumerate() {
                    m.set(k, j, x);
                }
            }
            diffs.push(m);
        }
        let complex = Complex::new(self.field, lo, dims, diffs)?;
        Ok(SubquotientComplex { complex, bases, bottom: bottom.clone() })
    }

    /// A subcomplex as a complex in its own echelon basis.
    pub fn restrict(&self, sub: &Subcomplex) -> Result<SubquotientComplex> {
        self.subquotient(sub, &Subcomplex::zero(self))
    }

    pub fn quotient(&self, sub: &Subcomplex) -> Result<SubquotientComplex> {
        self.subquotient(&Subcomplex::full(self), sub)
    }
}

/// A subquotient complex together with the ambient vectors spanning it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientComplex {
    pub complex: Complex,
    /// Per degree (offset from the ambient `lo`), rows are ambient vectors
    /// whose classes give the basis of the subquotient.
    pub bases: Vec<Mat>,
    /// The subcomplex divided out.
    pub bottom: Subcomplex,
}

impl SubquotientComplex {
    /// Map `src → tgt` induced by an ambient chain map `f` that carries
    /// `src`'s top into `tgt`'s top and `src`'s bottom into `tgt`'s bottom.
    pub fn induced_map(f: &ChainMap, src: &SubquotientComplex, tgt: &SubquotientComplex) -> Result<ChainMap> {
        let field = f.field();
        let mut maps = std::collections::BTreeMap::new();
        let (lo, hi) = super::chain::span(&src.complex, &tgt.complex);
        for n in lo..=hi {
            let (Some(sb), Some(tb)) = (src.basis(n), tgt.basis(n)) else { continue };
            let tsub = Subspace::from_mat(tb);
            let bottom = tgt.bottom.space(n);
            let fm = f.f(n);
            let mut m = Mat::zeros(field, tb.rows(), sb.rows());
            for j in 0..sb.rows() {
                let img = fm.mul_vec(sb.row(j));
                let red = if bottom.ambient() == 0 { img } else { bottom.reduce(&img) };
                let c = tsub
                    .coordinates(&red)
                    .ok_or(Error::NotFiltered { level: 0, degree: n })?;
                for (i, x) in c.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            maps.insert(n, m);
        }
        ChainMap::new(src.complex.clone(), tgt.complex.clone(), maps)
    }

    /// A subcomplex of the ambient complex lying between bottom and top,
    /// rewritten in the coordinates of this subquotient.
    pub fn transport(&self, sub: &Subcomplex) -> Result<Subcomplex> {
        let field = self.complex.field();
        let spaces = self
            .complex
            .degrees()
            .map(|n| {
                let dim = self.complex.dim(n);
                let Some(basis) = self.basis(n) else { return Ok(Subspace::zero(field, dim)) };
                let bottom = self.bottom.space(n);
                let mut rows = Vec::new();
                for v in sub.space(n).rows() {
                    let c = bottom.quotient_coordinates(basis, &v).ok_or(Error::NotContained)?;
                    rows.push(c);
                }
                Ok(Subspace::span(field, dim, rows))
            })
            .collect::<Result<Vec<_>>>()?;
        Subcomplex::new(&self.complex, spaces)
    }

    pub fn basis(&self, n: i64) -> Option<&Mat> {
        let i = n - self.complex.lo();
        if i < 0 || i as usize >= self.bases.len() {
            None
        } else {
            Some(&self.bases[i as usize])
        }
    }
}

/// A graded subspace of a complex, one subspace per degree of its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    field: Field,
    lo: i64,
    spaces: Vec<Subspace>,
}

impl Subcomplex {
    pub fn zero(c: &Complex) -> Subcomplex {
        Subcomplex { field: c.field, lo: c.lo, spaces: c.degrees().map(|n| Subspace::zero(c.field, c.dim(n))).collect() }
    }

    pub fn full(c: &Complex) -> Subcomplex {
        Subcomplex { field: c.field, lo: c.lo, spaces: c.degrees().map(|n| Subspace::full(c.field, c.dim(n))).collect() }
    }

    /// Builds a subcomplex from one subspace per degree of `c` (closure under
    /// `d` is checked).
    pub fn new(c: &Complex, spaces: Vec<Subspace>) -> Result<Subcomplex> {
        if spaces.len() != c.dims.len() {
            return Err(Error::Dimension(format!("{} subspaces for {} degrees", spaces.len(), c.dims.len())));
        }
        for (i, s) in spaces.iter().enumerate() {
            if s.ambient() != c.dims[i] {
                return Err(Error::Dimension(format!("degree {} subspace has wrong ambient", c.lo + i as i64)));
            }
        }
        let sub = Subcomplex { field: c.field, lo: c.lo, spaces };
        if !sub.is_closed(c) {
            return Err(Error::Filtration("graded subspace is not closed under d".into()));
        }
        Ok(sub)
    }

    pub(crate) fn new_unchecked(c: &Complex, spaces: Vec<Subspace>) -> Subcomplex {
        Subcomplex { field: c.field, lo: c.lo, spaces }
    }

    /// The subspace in degree `n` (zero outside the support).
    pub fn space(&self, n: i64) -> Subspace {
        let i = n - self.lo;
        if i >= 0 && (i as usize) < self.spaces.len() {
            self.spaces[i as usize].clone()
        } else {
            Subspace::zero(self.field, 0)
        }
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.dim()).sum()
    }

    pub fn is_closed(&self, c: &Complex) -> bool {
        c.degrees().all(|n| {
            let d = c.d(n);
            let s = self.space(n);
            let t = self.space(n + 1);
            (0..s.dim()).all(|i| {
                let img = d.mul_vec(s.basis().row(i));
                if t.ambient() == 0 {
                    img.is_empty()
                } else {
                    t.contains(&img)
                }
            })
        })
    }

    pub fn contains(&self, other: &Subcomplex) -> bool {
        self.spaces.len() == other.spaces.len()
            && self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_subspace(b))
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        let spaces = self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.intersection(b).expect("same ambient")).collect();
        Subcomplex { field: self.field, lo: self.lo, spaces }
    }

    pub fn sum(&self, other: &Subcomplex) -> Subcomplex {
        let spaces = self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.sum(b).expect("same ambient")).collect();
        Subcomplex { field: self.field, lo: self.lo, spaces }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn zero_complex_has_no_cohomology() {
        let c = Complex::zero(q());
        assert!(c.is_acyclic());
        assert_eq!(c.cohomology_dim(3), 0);
    }

    #[test]
    fn identity_two_term_is_acyclic() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        assert_eq!(c.cohomology_dims(), vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn zero_map_two_term() {
        let c = Complex::formal(q(), 0, vec![1, 1]);
        assert_eq!(c.cohomology_dims(), vec![(0, 1), (1, 1)]);
        assert_eq!(c.cohomology(1).representatives.rows(), 1);
    }

    #[test]
    fn rejects_nonzero_square() {
        let f = q();
        let one = Mat::identity(f, 1);
        let err = Complex::new(f, 0, vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert_eq!(err, Error::NotAComplex(0));
    }

    #[test]
    fn quotient_by_subcomplex() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let deg1 = Subcomplex::new(&c, vec![Subspace::zero(f, 1), Subspace::full(f, 1)]).unwrap();
        let quo = c.quotient(&deg1).unwrap();
        assert_eq!(quo.complex.cohomology_dims(), vec![(0, 1), (1, 0)]);
        assert!(Subcomplex::new(&c, vec![Subspace::full(f, 1), Subspace::zero(f, 1)]).is_err());
    }
}
