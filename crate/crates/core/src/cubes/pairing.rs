use std::collections::BTreeMap;

use crate::complexes::{dual, shift, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exactalg::Mat;

/// A finite poset on `0..n` given by its order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds the reflexive transitive closure of the given relations and
    /// rejects cycles.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<FinitePoset> {
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Dimension(format!("relation {a} ≤ {b} outside a poset of size {n}")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        for (a, row) in leq.iter().enumerate() {
            for b in (a + 1)..n {
                if row[b] && leq[b][a] {
                    return Err(Error::Naturality(format!("{a} and {b} are identified by the relations")));
                }
            }
        }
        Ok(FinitePoset { leq })
    }

    pub fn point() -> FinitePoset {
        FinitePoset { leq: vec![vec![true]] }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// All pairs `a ≤ b`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.leq(a, b)).collect()
    }
}

/// A pairing between a contravariant diagram `F` and a covariant diagram
/// `G` on a finite poset, with values in `k[−u]`.
///
/// For `a ≤ b`, `f_maps[(a, b)] : F(b) → F(a)` and `g_maps[(a, b)] : G(a) → G(b)`.
/// The pairing over `a ≤ b` is `F(b) ⊗ G(a) → k[−u]`, stored per degree `i`
/// as the matrix of a bilinear form on `F(b)^i × G(a)^{u−i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetPairing {
    pub poset: FinitePoset,
    pub f: Vec<Complex>,
    pub g: Vec<Complex>,
    pub f_maps: BTreeMap<(usize, usize), ChainMap>,
    pub g_maps: BTreeMap<(usize, usize), ChainMap>,
    pub u: i64,
    pub forms: BTreeMap<(usize, usize), BTreeMap<i64, Mat>>,
}

impl PosetPairing {
    /// Form over `a ≤ b` in degree `i` (zero where unset).
    pub fn form(&self, a: usize, b: usize, i: i64) -> Mat {
        let (fb, ga) = (&self.f[b], &self.g[a]);
        self.forms
            .get(&(a, b))
            .and_then(|m| m.get(&i))
            .cloned()
            .unwrap_or_else(|| Mat::zeros(fb.field(), fb.dim(i), ga.dim(self.u - i)))
    }

    fn f_map(&self, a: usize, b: usize) -> ChainMap {
        self.f_maps.get(&(a, b)).cloned().unwrap_or_else(|| ChainMap::identity(&self.f[a]))
    }

    fn g_map(&self, a: usize, b: usize) -> ChainMap {
        self.g_maps.get(&(a, b)).cloned().unwrap_or_else(|| ChainMap::identity(&self.g[a]))
    }

    fn degrees(&self, a: usize, b: usize) -> std::ops::RangeInclusive<i64> {
        let fb = &self.f[b];
        let ga = &self.g[a];
        let lo = fb.lo().min(self.u - ga.hi()) - 1;
        let hi = fb.hi().max(self.u - ga.lo()) + 1;
        lo..=hi
    }

    /// Functoriality of both diagrams, the chain condition
    /// `B_{i+1}(dx, y) = (−1)^{i+1} B_i(x, dy)` and naturality
    /// `B^{ab} = F_{b'b}^T B^{a'b'} G_{aa'}` for `a ≤ a' ≤ b' ≤ b`.
    pub fn validate(&self) -> Result<()> {
        let k = &self.poset;
        let n = k.len();
        if self.f.len() != n || self.g.len() != n {
            return Err(Error::Dimension("one complex per poset element on each side".into()));
        }
        for (a, b) in k.relations() {
            let (fm, gm) = (self.f_map(a, b), self.g_map(a, b));
            if fm.source() != &self.f[b] || fm.target() != &self.f[a] {
                return Err(Error::Naturality(format!("F map over {a} ≤ {b} has the wrong endpoints")));
            }
            if gm.source() != &self.g[a] || gm.target() != &self.g[b] {
                return Err(Error::Naturality(format!("G map over {a} ≤ {b} has the wrong endpoints")));
            }
            fm.verify()?;
            gm.verify()?;
            for c in (0..n).filter(|&c| k.leq(b, c)) {
                let lhs = self.f_map(a, c);
                let rhs = fm.compose(&self.f_map(b, c))?;
                if !same_components(&lhs, &rhs) {
                    return Err(Error::Naturality(format!("F is not functorial on {a} ≤ {b} ≤ {c}")));
                }
                let lhs = self.g_map(a, c);
                let rhs = self.g_map(b, c).compose(&gm)?;
                if !same_components(&lhs, &rhs) {
                    return Err(Error::Naturality(format!("G is not functorial on {a} ≤ {b} ≤ {c}")));
                }
            }
            let (fb, ga) = (&self.f[b], &self.g[a]);
            for i in self.degrees(a, b) {
                let form = self.form(a, b, i);
                if form.shape() != (fb.dim(i), ga.dim(self.u - i)) {
                    return Err(Error::Dimension(format!("form over {a} ≤ {b} in degree {i} has the wrong shape")));
                }
                let lhs = fb.d(i).transpose().mul(&self.form(a, b, i + 1));
                let rhs = form.mul(&ga.d(self.u - i - 1)).signed(i + 1);
                if lhs != rhs {
                    return Err(Error::Naturality(format!("form over {a} ≤ {b} is not a chain map in degree {i}")));
                }
            }
        }
        // The families a' = b' = a and a' = b' = b generate all the others
        // once both diagrams are functorial.
        for (a, b) in k.relations() {
            for (a2, b2) in [(a, a), (b, b)] {
                let (fm, gm) = (self.f_map(b2, b), self.g_map(a, a2));
                for i in self.degrees(a, b) {
                    let lhs = self.form(a, b, i);
                    let rhs = fm.f(i).transpose().mul(&self.form(a2, b2, i)).mul(&gm.f(self.u - i));
                    if lhs != rhs {
                        return Err(Error::Naturality(format!(
                            "restrictions from {a2} ≤ {b2} to {a} ≤ {b} disagree in degree {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The target `dual(G(a))[−u]` of the component at `a`.
    pub fn dual_target(&self, a: usize) -> Complex {
        shift(&dual(&self.g[a]), -self.u)
    }

    /// Components `φ_a : F(a) → dual(G(a))[−u]`, `φ_a = (B^{aa})^T`.
    pub fn pairing_to_dual_transformation(&self) -> Result<Vec<ChainMap>> {
        self.validate()?;
        (0..self.poset.len())
            .map(|a| {
                let src = &self.f[a];
                let tgt = self.dual_target(a);
                let (lo, hi) = crate::complexes::span(src, &tgt);
                let maps = (lo..=hi).map(|i| (i, self.form(a, a, i).transpose())).collect();
                ChainMap::new(src.clone(), tgt, maps)
            })
            .collect()
    }

    /// Rebuilds the forms from a transformation: `B^{ab}(x, y) = φ_a(F_{ab} x)(y)`.
    pub fn transformation_to_pairing(&self, phi: &[ChainMap]) -> BTreeMap<(usize, usize), BTreeMap<i64, Mat>> {
        let mut out = BTreeMap::new();
        for (a, b) in self.poset.relations() {
            let fm = self.f_map(a, b);
            let forms = self
                .degrees(a, b)
                .map(|i| (i, phi[a].compose(&fm).expect("composable").f(i).transpose()))
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                .collect();
            out.insert((a, b), forms);
        }
        out
    }

    /// Naturality of a family `φ_a`: `φ_a ∘ F_{ab} = G_{ab}^∨ ∘ φ_b`.
    pub fn is_natural(&self, phi: &[ChainMap]) -> bool {
        self.poset.relations().into_iter().all(|(a, b)| {
            let lhs = phi[a].compose(&self.f_map(a, b)).expect("composable");
            let gm = self.g_map(a, b);
            let (lo, hi) = crate::complexes::span(&self.f[b], &self.dual_target(a));
            (lo..=hi).all(|i| lhs.f(i) == gm.f(self.u - i).transpose().mul(&phi[b].f(i)))
        })
    }

    /// Every component of the transformation is a quasi-isomorphism.
    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.pairing_to_dual_transformation()?.iter().all(|m| m.is_quasi_iso()))
    }
}

fn same_components(a: &ChainMap, b: &ChainMap) -> bool {
    let (lo, hi) = crate::complexes::span(a.source(), a.target());
    (lo..=hi).all(|n| a.f(n) == b.f(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn q() -> Field {
        Field::Rationals
    }

    fn one_point(x: Complex, y: Complex, u: i64, forms: BTreeMap<i64, Mat>) -> PosetPairing {
        PosetPairing {
            poset: FinitePoset::point(),
            f: vec![x],
            g: vec![y],
            f_maps: BTreeMap::new(),
            g_maps: BTreeMap::new(),
            u,
            forms: [((0, 0), forms)].into(),
        }
    }

    #[test]
    fn perfect_pairing_on_a_point() {
        let f = q();
        let x = Complex::formal(f, 0, vec![1, 1]);
        let y = Complex::formal(f, 0, vec![1, 1]);
        // x^0 ⊗ y^1 and x^1 ⊗ y^0 land in degree 1
        let forms = [(0, Mat::from_i64(f, &[&[1]])), (1, Mat::from_i64(f, &[&[1]]))].into();
        let p = one_point(x, y, 1, forms);
        let phi = p.pairing_to_dual_transformation().unwrap();
        assert!(phi[0].is_quasi_iso());
        assert!(p.is_perfect().unwrap());
        assert!(p.is_natural(&phi));
        assert_eq!(p.transformation_to_pairing(&phi), p.forms);
    }

    #[test]
    fn zero_pairing_is_not_perfect() {
        let f = q();
        let x = Complex::concentrated(f, 0, 1);
        let p = one_point(x.clone(), x, 0, BTreeMap::new());
        assert!(!p.is_perfect().unwrap());
        let acyclic = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let p = one_point(acyclic.clone(), acyclic, 1, BTreeMap::new());
        assert!(p.is_perfect().unwrap());
    }

    #[test]
    fn chain_condition_enforced() {
        let f = q();
        let acyclic = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let p = one_point(acyclic.clone(), acyclic, 1, [(0, Mat::from_i64(f, &[&[1]]))].into());
        assert!(matches!(p.validate(), Err(Error::Naturality(_))));
    }

    #[test]
    fn two_element_chain() {
        // 0 ≤ 1; F(1) = F(0) = k, G(0) = G(1) = k, all maps and forms identity
        let f = q();
        let k = Complex::concentrated(f, 0, 1);
        let id = ChainMap::identity(&k);
        let poset = FinitePoset::from_relations(2, &[(0, 1)]).unwrap();
        let one = || -> BTreeMap<i64, Mat> { [(0, Mat::identity(f, 1))].into() };
        let mut p = PosetPairing {
            poset,
            f: vec![k.clone(), k.clone()],
            g: vec![k.clone(), k.clone()],
            f_maps: [((0, 1), id.clone())].into(),
            g_maps: [((0, 1), id.clone())].into(),
            u: 0,
            forms: [((0, 0), one()), ((0, 1), one()), ((1, 1), one())].into(),
        };
        assert!(p.is_perfect().unwrap());
        p.forms.insert((0, 1), [(0, Mat::from_i64(f, &[&[2]]))].into());
        assert!(matches!(p.validate(), Err(Error::Naturality(_))));
    }

    #[test]
    fn cyclic_relations_rejected() {
        assert!(FinitePoset::from_relations(2, &[(0, 1), (1, 0)]).is_err());
    }
}
