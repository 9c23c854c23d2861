use std::collections::BTreeMap;

use rand::Rng;

use crate::complexes::{dual, dual_map, hom_complex, hom_vector_to_map, shift, ChainMap, Complex, Subcomplex};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat, Subspace};
use crate::filtered::FilteredComplex;

/// Subsets of `{0, …, r−1}` as bitmasks.
pub type Vertex = u32;

pub fn popcount(s: Vertex) -> i64 {
    s.count_ones() as i64
}

/// A strictly commuting `r`-cube of complexes: `vertex(S)` for each subset
/// `S` and `edge(S, i) : P(S) → P(S ∪ {i})` for `i ∉ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDiagram {
    r: usize,
    vertices: Vec<Complex>,
    edges: BTreeMap<(Vertex, usize), ChainMap>,
}

impl CubeDiagram {
    pub fn new(r: usize, vertices: Vec<Complex>, edges: BTreeMap<(Vertex, usize), ChainMap>) -> Result<CubeDiagram> {
        let cube = CubeDiagram::new_unchecked(r, vertices, edges)?;
        cube.check_faces()?;
        Ok(cube)
    }

    pub(crate) fn new_unchecked(r: usize, vertices: Vec<Complex>, edges: BTreeMap<(Vertex, usize), ChainMap>) -> Result<CubeDiagram> {
        if vertices.len() != 1 << r {
            return Err(Error::Dimension(format!("{} vertices for a {r}-cube", vertices.len())));
        }
        for s in 0..(1u32 << r) {
            for i in 0..r {
                if s & (1 << i) != 0 {
                    continue;
                }
                let e = edges
                    .get(&(s, i))
                    .ok_or_else(|| Error::Dimension(format!("missing edge from {s:#b} along axis {i}")))?;
                let (src, tgt) = (&vertices[s as usize], &vertices[(s | 1 << i) as usize]);
                if !same_shape(e.source(), src) || !same_shape(e.target(), tgt) {
                    return Err(Error::Dimension(format!("edge from {s:#b} along axis {i} has the wrong endpoints")));
                }
            }
        }
        Ok(CubeDiagram { r, vertices, edges })
    }

    fn check_faces(&self) -> Result<()> {
        for s in 0..(1u32 << self.r) {
            for i in 0..self.r {
                for j in (i + 1)..self.r {
                    if s & (1 << i) != 0 || s & (1 << j) != 0 {
                        continue;
                    }
                    let a = self.edge(s | 1 << i, j).compose(self.edge(s, i)).map_err(|e| Error::NotCommuting(e.to_string()))?;
                    let b = self.edge(s | 1 << j, i).compose(self.edge(s, j)).map_err(|e| Error::NotCommuting(e.to_string()))?;
                    let (lo, hi) = crate::complexes::span(a.source(), a.target());
                    if (lo..=hi).any(|n| a.f(n) != b.f(n)) {
                        return Err(Error::NotCommuting(format!("face at {s:#b} spanned by axes {i} and {j}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// A single arrow `X → Y` as a 1-cube.
    pub fn arrow(f: &ChainMap) -> CubeDiagram {
        let edges = [((0, 0), f.clone())].into();
        CubeDiagram { r: 1, vertices: vec![f.source().clone(), f.target().clone()], edges }
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> Field {
        self.vertices[0].field()
    }

    pub fn full(&self) -> Vertex {
        (1u32 << self.r) - 1
    }

    pub fn vertex(&self, s: Vertex) -> &Complex {
        &self.vertices[s as usize]
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn edge(&self, s: Vertex, i: usize) -> &ChainMap {
        &self.edges[&(s, i)]
    }

    pub fn edges(&self) -> &BTreeMap<(Vertex, usize), ChainMap> {
        &self.edges
    }

    /// Composite `P(s) → P(t)` for `s ⊆ t`, adding axes in ascending order.
    pub fn map_between(&self, s: Vertex, t: Vertex) -> ChainMap {
        assert_eq!(s & !t, 0, "source must be a subset of target");
        let mut cur = ChainMap::identity(self.vertex(s));
        let mut at = s;
        for i in 0..self.r {
            if t & (1 << i) != 0 && at & (1 << i) == 0 {
                cur = self.edge(at, i).compose(&cur).expect("consecutive edges compose");
                at |= 1 << i;
            }
        }
        cur
    }

    /// Block offsets of `tcofib^n = ⊕_S P(S)^{n + r − |S|}` in ascending
    /// bitmask order.
    fn tcofib_blocks(&self, n: i64) -> (Vec<(Vertex, usize, usize)>, usize) {
        let r = self.r as i64;
        let mut out = Vec::new();
        let mut off = 0;
        for s in 0..(1u32 << self.r) {
            let deg = n + r - popcount(s);
            let size = self.vertex(s).dim(deg);
            out.push((s, off, size));
            off += size;
        }
        (out, off)
    }

    fn tcofib_range(&self) -> Option<(i64, i64)> {
        let r = self.r as i64;
        let mut range: Option<(i64, i64)> = None;
        for s in 0..(1u32 << self.r) {
            let v = self.vertex(s);
            if v.hi() < v.lo() {
                continue;
            }
            let shift = r - popcount(s);
            let (lo, hi) = (v.lo() - shift, v.hi() - shift);
            range = Some(match range {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
        range
    }

    /// Total cofiber, iterated cone along every axis:
    /// `d(x ∈ P(S)) = (−1)^{r−|S|} d_S x + Σ_{i∉S} ε(S,i) f_{S,i} x` with
    /// `ε(S,i) = (−1)^{#{j ∉ S, j < i}}`.
    pub fn total_cofiber(&self) -> Complex {
        let field = self.field();
        let Some((lo, hi)) = self.tcofib_range() else { return Complex::zero(field) };
        let r = self.r as i64;
        let dims: Vec<usize> = (lo..=hi).map(|n| self.tcofib_blocks(n).1).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let (src, sdim) = self.tcofib_blocks(n);
                let (tgt, tdim) = self.tcofib_blocks(n + 1);
                let mut m = Mat::zeros(field, tdim, sdim);
                for &(s, off, size) in &src {
                    if size == 0 {
                        continue;
                    }
                    let deg = n + r - popcount(s);
                    let (_, toff, tsize) = tgt[s as usize];
                    if tsize > 0 {
                        m.put(toff, off, &self.vertex(s).d(deg).signed(r - popcount(s)));
                    }
                    for i in 0..self.r {
                        if s & (1 << i) != 0 {
                            continue;
                        }
                        let t = s | 1 << i;
                        let (_, toff, tsize) = tgt[t as usize];
                        if tsize == 0 {
                            continue;
                        }
                        let below = (0..i).filter(|&j| s & (1 << j) == 0).count() as i64;
                        m.put(toff, off, &self.edge(s, i).f(deg).signed(below));
                    }
                }
                m
            })
            .collect();
        Complex::new(field, lo, dims, diffs).expect("total cofiber differential squares to zero")
    }

    /// Total fiber `tcofib[−r]`: degree `n` is `⊕_S P(S)^{n − |S|}`.
    pub fn total_fiber(&self) -> Complex {
        shift(&self.total_cofiber(), -(self.r as i64))
    }

    /// Vertexwise dual with arrows reversed, reindexed so that arrows again
    /// add elements: `Q(S) = P(S^c)^∨`.
    pub fn dual_cube(&self) -> CubeDiagram {
        let full = self.full();
        let vertices = (0..=full).map(|s| dual(self.vertex(full & !s))).collect();
        let mut edges = BTreeMap::new();
        for s in 0..=full {
            for i in 0..self.r {
                if s & (1 << i) != 0 {
                    continue;
                }
                let src = full & !(s | 1 << i);
                edges.insert((s, i), dual_map(self.edge(src, i)));
            }
        }
        CubeDiagram::new_unchecked(self.r, vertices, edges).expect("dual cube shapes")
    }

    /// Restriction to the face where the axes in `fixed_mask` take the values
    /// in `fixed_values`; the free axes keep their relative order.
    pub fn face(&self, fixed_mask: Vertex, fixed_values: Vertex) -> CubeDiagram {
        let free: Vec<usize> = (0..self.r).filter(|&i| fixed_mask & (1 << i) == 0).collect();
        let k = free.len();
        let embed = |t: Vertex| -> Vertex {
            let mut s = fixed_values & fixed_mask;
            for (a, &i) in free.iter().enumerate() {
                if t & (1 << a) != 0 {
                    s |= 1 << i;
                }
            }
            s
        };
        let vertices = (0..(1u32 << k)).map(|t| self.vertex(embed(t)).clone()).collect();
        let mut edges = BTreeMap::new();
        for t in 0..(1u32 << k) {
            for (a, &i) in free.iter().enumerate() {
                if t & (1 << a) == 0 {
                    edges.insert((t, a), self.edge(embed(t), i).clone());
                }
            }
        }
        CubeDiagram::new_unchecked(k, vertices, edges).expect("face shapes")
    }
}

pub(crate) fn same_shape(a: &Complex, b: &Complex) -> bool {
    let (lo, hi) = crate::complexes::span(a, b);
    (lo..=hi).all(|n| a.dim(n) == b.dim(n)) && (lo..hi).all(|n| a.d(n) == b.d(n))
}

/// A cube whose vertices carry filtrations preserved by the edges.
#[derive(Clone, Debug)]
pub struct FilteredCube {
    pub cube: CubeDiagram,
    pub filtrations: Vec<FilteredComplex>,
}

impl FilteredCube {
    pub fn new(cube: CubeDiagram, filtrations: Vec<FilteredComplex>) -> Result<FilteredCube> {
        if filtrations.len() != cube.vertices.len() {
            return Err(Error::Dimension("one filtration per vertex is required".into()));
        }
        for ((s, i), e) in &cube.edges {
            crate::filtered::check_filtered_map(e, &filtrations[*s as usize], &filtrations[(*s | 1 << *i) as usize])?;
        }
        Ok(FilteredCube { cube, filtrations })
    }

    /// Total cofiber filtered by the block sums of the vertex levels
    /// (increasing indexing).
    pub fn total_cofiber(&self) -> FilteredComplex {
        let c = self.cube.total_cofiber();
        let field = c.field();
        let r = self.cube.r as i64;
        let lo = self.filtrations.iter().map(|f| f.inc_window().0).min().unwrap_or(0);
        let hi = self.filtrations.iter().map(|f| f.inc_window().1).max().unwrap_or(0);
        let levels = (lo..=hi)
            .map(|p| {
                let spaces = c
                    .degrees()
                    .map(|n| {
                        let (blocks, total) = self.cube.tcofib_blocks(n);
                        let mut rows = Vec::new();
                        for (s, off, size) in blocks {
                            if size == 0 {
                                continue;
                            }
                            let deg = n + r - popcount(s);
                            let sub = self.filtrations[s as usize].inc_level(p).space(deg);
                            for v in sub.rows() {
                                let mut w = vec![field.zero(); total];
                                w[off..off + size].clone_from_slice(&v);
                                rows.push(w);
                            }
                        }
                        Subspace::span(field, total, rows)
                    })
                    .collect();
                Subcomplex::new(&c, spaces).expect("edges preserve the filtrations")
            })
            .collect();
        FilteredComplex::new(c, crate::filtered::Direction::Increasing, lo, levels).expect("block filtration is exhaustive")
    }

    /// Total fiber, the total cofiber shifted by `−r` with levels unchanged.
    pub fn total_fiber(&self) -> FilteredComplex {
        self.total_cofiber().shift(-(self.cube.r as i64))
    }
}

/// Random strictly commuting cube. Vertex complexes are random; the edges
/// into each vertex are drawn jointly from the solution space of the
/// chain-map and face-commutation equations.
pub fn random_cube<R: Rng + ?Sized>(field: Field, r: usize, max_dim: usize, amplitude: usize, rng: &mut R) -> CubeDiagram {
    let vertices: Vec<Complex> =
        (0..(1u32 << r)).map(|_| crate::random::random_complex(field, 0, amplitude, max_dim, rng)).collect();
    let mut edges: BTreeMap<(Vertex, usize), ChainMap> = BTreeMap::new();
    let mut order: Vec<Vertex> = (1..(1u32 << r)).collect();
    order.sort_by_key(|&t| popcount(t));
    for t in order {
        let incoming: Vec<usize> = (0..r).filter(|&i| t & (1 << i) != 0).collect();
        let homs: Vec<Complex> = incoming.iter().map(|&i| hom_complex(&vertices[(t & !(1 << i)) as usize], &vertices[t as usize])).collect();
        let sizes: Vec<usize> = homs.iter().map(|h| h.dim(0)).collect();
        let total: usize = sizes.iter().sum();
        let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        }).collect();
        let mut constraints: Vec<Mat> = Vec::new();
        for (k, h) in homs.iter().enumerate() {
            let d0 = h.d(0);
            if d0.rows() > 0 {
                let mut row = Mat::zeros(field, d0.rows(), total);
                row.put(0, offsets[k], &d0);
                constraints.push(row);
            }
        }
        for a in 0..incoming.len() {
            for b in (a + 1)..incoming.len() {
                let (i, j) = (incoming[a], incoming[b]);
                let base = t & !(1 << i) & !(1 << j);
                // f_{t−i, i} ∘ f_{base, j} = f_{t−j, j} ∘ f_{base, i}
                let g_j = &edges[&(base, j)];
                let g_i = &edges[&(base, i)];
                let src = &vertices[base as usize];
                let tgt = &vertices[t as usize];
                for n in src.degrees() {
                    let (rows, cols) = (tgt.dim(n), src.dim(n));
                    if rows * cols == 0 {
                        continue;
                    }
                    let mut row = Mat::zeros(field, rows * cols, total);
                    row.put(0, offsets[a] + hom_offset(&vertices[(t & !(1 << i)) as usize], tgt, n), &Mat::identity(field, rows).kron(&g_j.f(n).transpose()));
                    row.put(0, offsets[b] + hom_offset(&vertices[(t & !(1 << j)) as usize], tgt, n), &Mat::identity(field, rows).kron(&g_i.f(n).transpose()).neg());
                    constraints.push(row);
                }
            }
        }
        let space = if constraints.is_empty() {
            Subspace::full(field, total)
        } else {
            let refs: Vec<&Mat> = constraints.iter().collect();
            Mat::vstack(field, total, &refs).kernel()
        };
        let coeffs: Vec<_> = (0..space.dim()).map(|_| field.random(rng)).collect();
        let v = space.basis().vec_mul(&coeffs);
        for (k, &i) in incoming.iter().enumerate() {
            let s = t & !(1 << i);
            let piece = &v[offsets[k]..offsets[k] + sizes[k]];
            let map = hom_vector_to_map(&vertices[s as usize], &vertices[t as usize], piece);
            edges.insert((s, i), map);
        }
    }
    CubeDiagram::new(r, vertices, edges).expect("random cube commutes by construction")
}

fn hom_offset(src: &Complex, tgt: &Complex, n: i64) -> usize {
    src.degrees().filter(|&i| i < n).map(|i| src.dim(i) * tgt.dim(i)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn identity_arrow_has_zero_cofiber() {
        let c = Complex::formal(q(), 0, vec![1, 2]);
        let cube = CubeDiagram::arrow(&ChainMap::identity(&c));
        assert!(cube.total_cofiber().is_acyclic());
        let cone = ChainMap::identity(&c).cone();
        assert_eq!((cube.total_cofiber().lo(), cube.total_cofiber().hi()), (cone.lo(), cone.hi()));
    }

    #[test]
    fn square_with_only_terminal_vertex() {
        let f = q();
        let z = Complex::zero(f);
        let x = Complex::formal(f, 0, vec![1, 1]);
        let vertices = vec![z.clone(), z.clone(), z.clone(), x.clone()];
        let mut edges = BTreeMap::new();
        edges.insert((0, 0), ChainMap::zero(&z, &z));
        edges.insert((0, 1), ChainMap::zero(&z, &z));
        edges.insert((1, 1), ChainMap::zero(&z, &x));
        edges.insert((2, 0), ChainMap::zero(&z, &x));
        let cube = CubeDiagram::new(2, vertices, edges).unwrap();
        assert_eq!(cube.total_cofiber().cohomology_profile(), x.cohomology_profile());
    }

    #[test]
    fn non_commuting_square_rejected() {
        let f = q();
        let p = Complex::concentrated(f, 0, 1);
        let id = ChainMap::identity(&p);
        let two = ChainMap::new(p.clone(), p.clone(), [(0, Mat::from_i64(f, &[&[2]]))].into()).unwrap();
        let mut edges = BTreeMap::new();
        edges.insert((0, 0), id.clone());
        edges.insert((0, 1), id.clone());
        edges.insert((1, 1), id.clone());
        edges.insert((2, 0), two);
        let err = CubeDiagram::new(2, vec![p.clone(), p.clone(), p.clone(), p], edges).unwrap_err();
        assert!(matches!(err, Error::NotCommuting(_)));
    }

    #[test]
    fn random_cubes_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 1..=3 {
            let cube = random_cube(Field::Prime(3), r, 2, 2, &mut rng);
            cube.check_faces().unwrap();
        }
    }

    #[test]
    fn faces_and_composites() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cube = random_cube(q(), 3, 2, 2, &mut rng);
        let face = cube.face(0b010, 0b010);
        assert_eq!(face.arity(), 2);
        assert_eq!(face.vertex(0b11), cube.vertex(0b111));
        let m = cube.map_between(0, 0b101);
        assert_eq!(m, cube.edge(0b100, 0).compose(cube.edge(0, 2)).unwrap());
    }
}
