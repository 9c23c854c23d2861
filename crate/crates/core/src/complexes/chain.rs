use std::collections::BTreeMap;

use super::complex::Complex;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};

/// A chain map `source → target`; `f(n)` has shape `target.dim(n) × source.dim(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i64, Mat>,
}

impl ChainMap {
    /// Checks shapes and commutation with the differentials.
    pub fn new(source: Complex, target: Complex, maps: BTreeMap<i64, Mat>) -> Result<ChainMap> {
        let m = ChainMap::new_unchecked(source, target, maps)?;
        m.verify()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Complex, target: Complex, maps: BTreeMap<i64, Mat>) -> Result<ChainMap> {
        for (&n, f) in &maps {
            if f.shape() != (target.dim(n), source.dim(n)) {
                return Err(Error::Dimension(format!(
                    "chain map component in degree {n} has shape {:?}, expected {:?}",
                    f.shape(),
                    (target.dim(n), source.dim(n))
                )));
            }
        }
        let maps = maps.into_iter().filter(|(_, f)| f.rows() > 0 && f.cols() > 0).collect();
        Ok(ChainMap { source, target, maps })
    }

    pub fn verify(&self) -> Result<()> {
        for n in self.degree_range() {
            let lhs = self.f(n + 1).mul(&self.source.d(n));
            let rhs = self.target.d(n).mul(&self.f(n));
            if lhs != rhs {
                return Err(Error::NotAChainMap(n));
            }
        }
        Ok(())
    }

    pub fn from_fn(source: &Complex, target: &Complex, mut f: impl FnMut(i64) -> Mat) -> Result<ChainMap> {
        let (lo, hi) = span(source, target);
        let maps = (lo..=hi).map(|n| (n, f(n))).collect();
        ChainMap::new(source.clone(), target.clone(), maps)
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let maps = c.degrees().map(|n| (n, Mat::identity(c.field(), c.dim(n)))).collect();
        ChainMap::new_unchecked(c.clone(), c.clone(), maps).expect("identity shapes")
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    fn degree_range(&self) -> std::ops::RangeInclusive<i64> {
        let (lo, hi) = span(&self.source, &self.target);
        (lo - 1)..=hi
    }

    /// Component in degree `n` (zero where unset).
    pub fn f(&self, n: i64) -> Mat {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.field(), self.target.dim(n), self.source.dim(n)))
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::Dimension("composable maps must share the middle complex".into()));
        }
        let (lo, hi) = span(&first.source, &self.target);
        let maps = (lo..=hi).map(|n| (n, self.f(n).mul(&first.f(n)))).collect();
        ChainMap::new_unchecked(first.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let (lo, hi) = span(&self.source, &self.target);
        let maps = (lo..=hi).map(|n| (n, self.f(n).add(&other.f(n)))).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), maps).expect("same shapes")
    }

    pub fn neg(&self) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (n, m.neg())).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    /// Matrix of the induced map `H^n(source) → H^n(target)` in the canonical
    /// representative bases.
    pub fn on_cohomology(&self, n: i64) -> Mat {
        let hs = self.source.cohomology(n);
        let ht = self.target.cohomology(n);
        let fmat = self.f(n);
        let mut out = Mat::zeros(self.field(), ht.dim, hs.dim);
        for j in 0..hs.dim {
            let img = fmat.mul_vec(hs.representatives.row(j));
            let c = ht
                .boundaries
                .quotient_coordinates(&ht.representatives, &img)
                .expect("image of a cocycle is a cocycle");
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// Mapping cone: `cone^n = target^n ⊕ source^{n+1}` with
    /// `d(y, x) = (d y + f x, −d x)`.
    pub fn cone(&self) -> Complex {
        let field = self.field();
        let (s, t) = (&self.source, &self.target);
        let shifted = super::ops::shift(s, 1);
        let (lo, hi) = span(t, &shifted);
        if hi < lo {
            return Complex::zero(field);
        }
        let dims: Vec<usize> = (lo..=hi).map(|n| t.dim(n) + s.dim(n + 1)).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let mut m = Mat::zeros(field, t.dim(n + 1) + s.dim(n + 2), t.dim(n) + s.dim(n + 1));
                m.put(0, 0, &t.d(n));
                m.put(0, t.dim(n), &self.f(n + 1));
                m.put(t.dim(n + 1), t.dim(n), &s.d(n + 1).neg());
                m
            })
            .collect();
        Complex::new(field, lo, dims, diffs).expect("cone of a chain map is a complex")
    }

    /// `fib(f) = cone(f)[−1]`: `fib^n = target^{n−1} ⊕ source^n`.
    pub fn fiber(&self) -> Complex {
        super::ops::shift(&self.cone(), -1)
    }

    /// The projection `fib(f) → source`.
    pub fn fiber_projection(&self) -> ChainMap {
        let fib = self.fiber();
        let s = &self.source;
        let field = self.field();
        let maps = fib
            .degrees()
            .map(|n| {
                let mut m = Mat::zeros(field, s.dim(n), fib.dim(n));
                m.put(0, self.target.dim(n - 1), &Mat::identity(field, s.dim(n)));
                (n, m)
            })
            .collect();
        ChainMap::new_unchecked(fib, s.clone(), maps).expect("projection shapes")
    }

    /// The inclusion `target → cone(f)`.
    pub fn cone_inclusion(&self) -> ChainMap {
        let cone = self.cone();
        let t = &self.target;
        let field = self.field();
        let maps = t
            .degrees()
            .map(|n| {
                let mut m = Mat::zeros(field, cone.dim(n), t.dim(n));
                m.put(0, 0, &Mat::identity(field, t.dim(n)));
                (n, m)
            })
            .collect();
        ChainMap::new_unchecked(t.clone(), cone, maps).expect("inclusion shapes")
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// Degreewise test that every induced map on cohomology is invertible.
    pub fn is_quasi_iso_degreewise(&self) -> bool {
        let (lo, hi) = span(&self.source, &self.target);
        (lo..=hi).all(|n| {
            let m = self.on_cohomology(n);
            m.rows() == m.cols() && m.rank() == m.rows()
        })
    }

    /// A chain map `s: target → source` with `self ∘ s = id`, if one exists.
    pub fn section(&self) -> Option<ChainMap> {
        let field = self.field();
        let (b, c) = (&self.source, &self.target);
        let h = super::ops::hom_complex(c, b);
        let total = h.dim(0);
        let mut blocks: Vec<Mat> = Vec::new();
        let mut rhs = Vec::new();
        if h.dim(1) > 0 {
            blocks.push(h.d(0));
            rhs.extend(std::iter::repeat_with(|| field.zero()).take(h.dim(1)));
        }
        for (i, off) in super::ops::hom_blocks(c, b, 0) {
            let g = self.f(i);
            let local = g.kron(&Mat::identity(field, c.dim(i)));
            let mut row = Mat::zeros(field, local.rows(), total);
            row.put(0, off, &local);
            blocks.push(row);
            rhs.extend(Mat::identity(field, c.dim(i)).to_vec());
        }
        // degrees where the target is nonzero but no block exists cannot be split
        if c.degrees().any(|i| c.dim(i) > 0 && b.dim(i) == 0) {
            return None;
        }
        if total == 0 {
            return Some(ChainMap::zero(c, b));
        }
        let refs: Vec<&Mat> = blocks.iter().collect();
        let system = Mat::vstack(field, total, &refs);
        let x = system.solve(&rhs).ok()??;
        Some(super::ops::hom_vector_to_map(c, b, &x))
    }

    /// Block diagonal sum of maps between direct sums.
    pub fn direct_sum(parts: &[&ChainMap]) -> ChainMap {
        let field = parts.first().map_or(Field::Rationals, |m| m.field());
        let src: Vec<&Complex> = parts.iter().map(|m| &m.source).collect();
        let tgt: Vec<&Complex> = parts.iter().map(|m| &m.target).collect();
        let source = Complex::direct_sum(&src);
        let target = Complex::direct_sum(&tgt);
        let (lo, hi) = span(&source, &target);
        let maps = (lo..=hi)
            .map(|n| {
                let blocks: Vec<Mat> = parts.iter().map(|m| m.f(n)).collect();
                let refs: Vec<&Mat> = blocks.iter().collect();
                (n, Mat::block_diag(field, &refs))
            })
            .collect();
        ChainMap::new_unchecked(source, target, maps).expect("block shapes")
    }
}

pub(crate) fn span(a: &Complex, b: &Complex) -> (i64, i64) {
    match (a.hi() < a.lo(), b.hi() < b.lo()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo(), b.hi()),
        (false, true) => (a.lo(), a.hi()),
        (false, false) => (a.lo().min(b.lo()), a.hi().max(b.hi())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(field: Field) -> Complex {
        Complex::concentrated(field, 0, 1)
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = Complex::new(Field::Rationals, 0, vec![2, 1], vec![Mat::from_i64(Field::Rationals, &[&[1, 1]])]).unwrap();
        let id = ChainMap::identity(&c);
        assert!(id.cone().is_acyclic());
        assert!(id.is_quasi_iso());
    }

    #[test]
    fn cone_of_zero_map_is_shift() {
        let f = Field::Rationals;
        let c = Complex::formal(f, 0, vec![1, 2]);
        let z = ChainMap::zero(&c, &Complex::zero(f));
        let cone = z.cone();
        assert_eq!(cone.cohomology_dims(), vec![(-1, 1), (0, 2)]);
    }

    #[test]
    fn multiplication_by_two() {
        for (field, expected) in [(Field::Rationals, true), (Field::Prime(2), false)] {
            let p = point(field);
            let two = ChainMap::new(p.clone(), p.clone(), [(0, Mat::from_i64(field, &[&[2]]))].into()).unwrap();
            assert_eq!(two.is_quasi_iso(), expected);
            assert_eq!(two.is_quasi_iso_degreewise(), expected);
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let f = Field::Rationals;
        let c = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let bad = ChainMap::new(c.clone(), c, [(0, Mat::identity(f, 1))].into());
        assert_eq!(bad.unwrap_err(), Error::NotAChainMap(0));
    }

    #[test]
    fn sections_of_split_and_nonsplit_maps() {
        let f = Field::Rationals;
        let acyclic = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let k0 = Complex::concentrated(f, 0, 1);
        let k1 = Complex::concentrated(f, 1, 1);
        // acyclic → k is surjective but not split
        let q = ChainMap::new(acyclic.clone(), k0, [(0, Mat::identity(f, 1))].into()).unwrap();
        assert!(q.section().is_none());
        let sum = Complex::direct_sum(&[&acyclic, &k1]);
        let proj = ChainMap::new(sum.clone(), k1, [(1, Mat::from_i64(f, &[&[0, 1]]))].into()).unwrap();
        let s = proj.section().unwrap();
        s.verify().unwrap();
        assert_eq!(proj.compose(&s).unwrap().f(1), Mat::identity(f, 1));
    }

    #[test]
    fn fiber_projection_is_chain_map() {
        let f = Field::Rationals;
        let c = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let d = Complex::formal(f, 0, vec![1, 1]);
        let m = ChainMap::new(d, c, [(1, Mat::identity(f, 1))].into()).unwrap();
        m.fiber_projection().verify().unwrap();
        m.cone_inclusion().verify().unwrap();
    }
}
