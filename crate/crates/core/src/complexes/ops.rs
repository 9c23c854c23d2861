use std::collections::BTreeMap;

use super::chain::ChainMap;
use super::complex::{Complex, Subcomplex};
use crate::exactalg::{Mat, Scalar, Subspace};

/// `shift(C, m)^n = C^{n+m}` with differential `(−1)^m d`.
pub fn shift(c: &Complex, m: i64) -> Complex {
    if c.hi() < c.lo() {
        return c.clone();
    }
    let dims = c.degrees().map(|n| c.dim(n)).collect();
    let diffs = (c.lo()..c.hi()).map(|n| c.d(n).signed(m)).collect();
    Complex::new(c.field(), c.lo() - m, dims, diffs).expect("shift preserves d∘d = 0")
}

/// `shift` applied to a chain map; components are unchanged.
pub fn shift_map(f: &ChainMap, m: i64) -> ChainMap {
    let s = shift(f.source(), m);
    let t = shift(f.target(), m);
    let (lo, hi) = super::chain::span(&s, &t);
    let maps = (lo..=hi).map(|n| (n, f.f(n + m))).collect();
    ChainMap::new_unchecked(s, t, maps).expect("shift keeps shapes")
}

/// `dual(C)^n = (C^{−n})^*` with `d^n = (−1)^{n+1} (d^{−n−1})^T`.
pub fn dual(c: &Complex) -> Complex {
    if c.hi() < c.lo() {
        return c.clone();
    }
    let (lo, hi) = (-c.hi(), -c.lo());
    let dims = (lo..=hi).map(|n| c.dim(-n)).collect();
    let diffs = (lo..hi).map(|n| c.d(-n - 1).transpose().signed(n + 1)).collect();
    Complex::new(c.field(), lo, dims, diffs).expect("dual preserves d∘d = 0")
}

/// The dual of `f: C → D` as a map `dual(D) → dual(C)`, componentwise transposes.
pub fn dual_map(f: &ChainMap) -> ChainMap {
    let s = dual(f.target());
    let t = dual(f.source());
    let (lo, hi) = super::chain::span(&s, &t);
    let maps = (lo..=hi).map(|n| (n, f.f(-n).transpose())).collect();
    ChainMap::new_unchecked(s, t, maps).expect("dual keeps shapes")
}

/// Canonical identification `C → dual(dual(C))`. The double dual carries
/// the differential `−d`, so the identification is `(−1)^n` in degree `n`.
pub fn double_dual_iso(c: &Complex) -> ChainMap {
    let dd = dual(&dual(c));
    let maps = c.degrees().map(|n| (n, Mat::identity(c.field(), c.dim(n)).signed(n))).collect();
    ChainMap::new(c.clone(), dd, maps).expect("double dual identification")
}

/// Block offsets of `(C ⊗ D)^n = ⊕_{i} C^i ⊗ D^{n−i}`, ascending in `i`.
fn tensor_blocks(c: &Complex, d: &Complex, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in c.degrees() {
        let j = n - i;
        let size = c.dim(i) * d.dim(j);
        if size > 0 {
            out.push((i, off));
            off += size;
        }
    }
    out
}

/// Tensor product with Koszul signs: `d(x ⊗ y) = dx ⊗ y + (−1)^i x ⊗ dy`.
pub fn tensor(c: &Complex, d: &Complex) -> Complex {
    let field = c.field();
    if c.total_dim() == 0 || d.total_dim() == 0 {
        return Complex::zero(field);
    }
    let (lo, hi) = (c.lo() + d.lo(), c.hi() + d.hi());
    let dim_at = |n: i64| c.degrees().map(|i| c.dim(i) * d.dim(n - i)).sum::<usize>();
    let dims: Vec<usize> = (lo..=hi).map(dim_at).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let mut m = Mat::zeros(field, dim_at(n + 1), dim_at(n));
            let src = tensor_blocks(c, d, n);
            let tgt: BTreeMap<i64, usize> = tensor_blocks(c, d, n + 1).into_iter().collect();
            for (i, off) in src {
                let j = n - i;
                if let Some(&t_off) = tgt.get(&(i + 1)) {
                    let blk = c.d(i).kron(&Mat::identity(field, d.dim(j)));
                    m.put(t_off, off, &blk);
                }
                if let Some(&t_off) = tgt.get(&i) {
                    let blk = Mat::identity(field, c.dim(i)).kron(&d.d(j)).signed(i);
                    m.put(t_off, off, &blk);
                }
            }
            m
        })
        .collect();
    Complex::new(field, lo, dims, diffs).expect("Koszul signs give d∘d = 0")
}

/// `Hom^n(C, D) = ⊕_i Hom(C^i, D^{i+n})`; each block is a row-major
/// flattened `dim D^{i+n} × dim C^i` matrix, blocks ascending in `i`.
/// Differential `Dφ = d_D φ − (−1)^n φ d_C`.
pub fn hom_complex(c: &Complex, d: &Complex) -> Complex {
    let field = c.field();
    if c.total_dim() == 0 || d.total_dim() == 0 {
        return Complex::zero(field);
    }
    let (lo, hi) = (d.lo() - c.hi(), d.hi() - c.lo());
    let dims: Vec<usize> = (lo..=hi).map(|n| hom_dim(c, d, n)).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let src = hom_blocks(c, d, n);
            let tgt: BTreeMap<i64, usize> = hom_blocks(c, d, n + 1).into_iter().collect();
            let mut m = Mat::zeros(field, hom_dim(c, d, n + 1), hom_dim(c, d, n));
            for (i, off) in src {
                // φ_i: C^i → D^{i+n}
                if let Some(&t_off) = tgt.get(&i) {
                    let blk = d.d(i + n).kron(&Mat::identity(field, c.dim(i)));
                    m.put(t_off, off, &blk);
                }
                if let Some(&t_off) = tgt.get(&(i - 1)) {
                    let blk = Mat::identity(field, d.dim(i + n)).kron(&c.d(i - 1).transpose()).signed(n + 1);
                    m.put(t_off, off, &blk);
                }
            }
            m
        })
        .collect();
    Complex::new(field, lo, dims, diffs).expect("hom differential squares to zero")
}

fn hom_dim(c: &Complex, d: &Complex, n: i64) -> usize {
    c.degrees().map(|i| c.dim(i) * d.dim(i + n)).sum()
}

pub(crate) fn hom_blocks(c: &Complex, d: &Complex, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in c.degrees() {
        let size = c.dim(i) * d.dim(i + n);
        if size > 0 {
            out.push((i, off));
            off += size;
        }
    }
    out
}

/// Reads a degree-0 element of `hom_complex(c, d)` as a family of matrices.
pub fn hom_vector_to_map(c: &Complex, d: &Complex, v: &[Scalar]) -> ChainMap {
    let field = c.field();
    let mut maps = BTreeMap::new();
    for (i, off) in hom_blocks(c, d, 0) {
        let (r, k) = (d.dim(i), c.dim(i));
        maps.insert(i, Mat::from_vec(field, r, k, v[off..off + r * k].to_vec()));
    }
    ChainMap::new_unchecked(c.clone(), d.clone(), maps).expect("hom block shapes")
}

/// Inverse of [`hom_vector_to_map`].
pub fn map_to_hom_vector(f: &ChainMap) -> Vec<Scalar> {
    let (c, d) = (f.source(), f.target());
    let mut v = Vec::new();
    for (i, _) in hom_blocks(c, d, 0) {
        v.extend(f.f(i).to_vec());
    }
    v
}

/// Smart truncation `τ^{≤n}`: everything below `n`, the cycles in degree
/// `n`, nothing above.
pub fn smart_truncate(c: &Complex, n: i64) -> Subcomplex {
    let field = c.field();
    let spaces = c
        .degrees()
        .map(|k| {
            if k < n {
                Subspace::full(field, c.dim(k))
            } else if k == n {
                c.cycles(k)
            } else {
                Subspace::zero(field, c.dim(k))
            }
        })
        .collect();
    Subcomplex::new_unchecked(c, spaces)
}

/// Stupid (brutal) truncation `σ^{≥n}`: degrees at least `n`.
pub fn stupid_truncate_above(c: &Complex, n: i64) -> Subcomplex {
    let field = c.field();
    let spaces = c
        .degrees()
        .map(|k| if k >= n { Subspace::full(field, c.dim(k)) } else { Subspace::zero(field, c.dim(k)) })
        .collect();
    Subcomplex::new_unchecked(c, spaces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn q() -> Field {
        Field::Rationals
    }

    fn sample() -> Complex {
        let f = q();
        Complex::new(f, -1, vec![2, 3, 1], vec![Mat::from_i64(f, &[&[1, 0], &[0, 1], &[0, 0]]), Mat::from_i64(f, &[&[0, 0, 1]])])
            .unwrap()
    }

    #[test]
    fn double_dual_is_identity() {
        let c = sample();
        let dd = dual(&dual(&c));
        assert_eq!(dd.dim(0), c.dim(0));
        assert_eq!(dd.d(0), c.d(0).neg());
        assert!(double_dual_iso(&c).is_quasi_iso());
    }

    #[test]
    fn dual_mirrors_cohomology() {
        let c = Complex::new(q(), 0, vec![1, 2, 1], vec![Mat::from_i64(q(), &[&[1], &[0]]), Mat::from_i64(q(), &[&[0, 0]])])
            .unwrap();
        let d = dual(&c);
        for n in -3..=3 {
            assert_eq!(d.cohomology_dim(n), c.cohomology_dim(-n));
        }
    }

    #[test]
    fn shifts_compose() {
        let c = sample();
        assert_eq!(shift(&c, 3), shift(&shift(&c, 1), 2));
        assert_eq!(shift(&c, 1).cohomology_dim(-1), c.cohomology_dim(0));
    }

    #[test]
    fn kunneth_on_point_plus_circle() {
        let c = Complex::formal(q(), 0, vec![1, 1]);
        let t = tensor(&c, &c);
        assert_eq!(t.cohomology_dims(), vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn hom_examples() {
        let f = q();
        let pt = Complex::concentrated(f, 0, 1);
        assert_eq!(hom_complex(&pt, &pt).cohomology_dim(0), 1);
        assert!(hom_complex(&pt, &Complex::zero(f)).is_zero());
        let acyclic = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let h = hom_complex(&acyclic, &sample());
        assert_eq!(h.cohomology_dim(0), 0);
        // brute force: every chain map from the acyclic complex is null-homotopic
        let hh = hom_complex(&acyclic, &acyclic);
        assert_eq!(hh.cycles(0).dim(), 1);
        assert_eq!(hh.cohomology_dim(0), 0);
    }

    #[test]
    fn hom_cycles_are_chain_maps() {
        let c = sample();
        let h = hom_complex(&c, &c);
        let z = h.cycles(0);
        for row in z.rows() {
            hom_vector_to_map(&c, &c, &row).verify().unwrap();
        }
        let id = ChainMap::identity(&c);
        let v = map_to_hom_vector(&id);
        assert!(z.contains(&v));
    }

    #[test]
    fn truncation_examples() {
        let c = Complex::formal(q(), 0, vec![1, 1]);
        let t = smart_truncate(&c, 0);
        assert_eq!(t.dims(), vec![1, 0]);
        assert!(t.is_closed(&c));
        assert_eq!(smart_truncate(&c, 5).dims(), vec![1, 1]);
        assert_eq!(smart_truncate(&c, -3).dims(), vec![0, 0]);
    }
}
