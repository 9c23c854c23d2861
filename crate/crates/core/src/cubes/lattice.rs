use std::collections::BTreeMap;

use super::cube::{CubeDiagram, Vertex};
use crate::complexes::{ChainMap, Complex, Subcomplex, SubquotientComplex};
use crate::error::{Error, Result};

/// Coordinates in `{−1, 0, 1}^r`.
pub type Point = Vec<i8>;

/// A diagram on the grid `{−1, 0, 1}^r` whose rows along every axis are
/// strict short exact sequences. The auxiliary `∗` vertices of the square
/// shape carry zero objects and are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDiagram {
    r: usize,
    vertices: BTreeMap<Point, Complex>,
    edges: BTreeMap<(Point, usize), ChainMap>,
}

fn step(x: &[i8], i: usize) -> Point {
    let mut y = x.to_vec();
    y[i] += 1;
    y
}

fn is_injective(f: &ChainMap) -> bool {
    f.source().degrees().all(|n| f.f(n).rank() == f.source().dim(n))
}

fn image_subcomplex(f: &ChainMap) -> Subcomplex {
    let t = f.target();
    let spaces = t.degrees().map(|n| f.f(n).image()).collect();
    Subcomplex::new(t, spaces).expect("image of a chain map is a subcomplex")
}

/// Cokernel of an injective map with the projection onto it.
fn cokernel(f: &ChainMap) -> (SubquotientComplex, ChainMap) {
    let y = f.target();
    let whole = y.restrict(&Subcomplex::full(y)).expect("full subcomplex");
    let q = y.quotient(&image_subcomplex(f)).expect("image is a subcomplex");
    let proj = SubquotientComplex::induced_map(&ChainMap::identity(y), &whole, &q).expect("projection");
    // `whole` is `y` in the standard basis, so the projection starts at `y`
    let proj = ChainMap::new(y.clone(), q.complex.clone(), (y.lo()..=y.hi()).map(|n| (n, proj.f(n))).collect())
        .expect("projection is a chain map");
    (q, proj)
}

impl LatticeDiagram {
    /// Places `a` on `{−1, 0}^r` and fills coordinate `1` with cokernels,
    /// one axis at a time. Every edge met along the way must be injective.
    pub fn extend_by_exact_rows(a: &CubeDiagram) -> Result<LatticeDiagram> {
        let r = a.arity();
        let to_point = |s: Vertex| -> Point { (0..r).map(|i| if s & (1 << i) != 0 { 0 } else { -1 }).collect() };
        let mut vertices: BTreeMap<Point, Complex> = BTreeMap::new();
        let mut edges: BTreeMap<(Point, usize), ChainMap> = BTreeMap::new();
        for s in 0..=a.full() {
            vertices.insert(to_point(s), a.vertex(s).clone());
            for i in 0..r {
                if s & (1 << i) == 0 {
                    edges.insert((to_point(s), i), a.edge(s, i).clone());
                }
            }
        }
        let mut quotients: BTreeMap<Point, SubquotientComplex> = BTreeMap::new();
        for i in 0..r {
            let starts: Vec<Point> = vertices.keys().filter(|x| x[i] == -1).cloned().collect();
            for x in &starts {
                let f = &edges[&(x.clone(), i)];
                if !is_injective(f) {
                    return Err(Error::NotExact(format!("edge at {x:?} along axis {i} is not injective")));
                }
                let (q, proj) = cokernel(f);
                let mid = step(x, i);
                let top = step(&mid, i);
                vertices.insert(top.clone(), q.complex.clone());
                edges.insert((mid, i), proj);
                quotients.insert(top, q);
            }
            // maps between the new cokernels along the other axes
            for x in &starts {
                let top = step(&step(x, i), i);
                for j in (0..r).filter(|&j| j != i) {
                    let next = step(x, j);
                    if !vertices.contains_key(&next) {
                        continue;
                    }
                    let g = &edges[&(step(x, i), j)];
                    let tgt = step(&step(&next, i), i);
                    let m = SubquotientComplex::induced_map(g, &quotients[&top], &quotients[&tgt])
                        .map_err(|e| Error::NotExact(e.to_string()))?;
                    edges.insert((top.clone(), j), m);
                }
            }
            quotients.clear();
        }
        Ok(LatticeDiagram { r, vertices, edges })
    }

    /// The lattice of a single short exact sequence `0 → a → b → c → 0`.
    pub fn from_short_exact(f: &ChainMap, g: &ChainMap) -> Result<LatticeDiagram> {
        if f.target() != g.source() {
            return Err(Error::Dimension("the sequence must share its middle term".into()));
        }
        let b = f.target();
        for n in b.degrees() {
            let (fm, gm) = (f.f(n), g.f(n));
            if fm.rank() != f.source().dim(n) {
                return Err(Error::NotExact(format!("first map not injective in degree {n}")));
            }
            if gm.rank() != g.target().dim(n) {
                return Err(Error::NotExact(format!("second map not surjective in degree {n}")));
            }
            if fm.image() != gm.kernel() {
                return Err(Error::NotExact(format!("image and kernel differ in degree {n}")));
            }
        }
        let vertices = [(vec![-1], f.source().clone()), (vec![0], b.clone()), (vec![1], g.target().clone())].into();
        let edges = [((vec![-1], 0), f.clone()), ((vec![0], 0), g.clone())].into();
        Ok(LatticeDiagram { r: 1, vertices, edges })
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn vertex(&self, x: &[i8]) -> &Complex {
        &self.vertices[x]
    }

    pub fn edge(&self, x: &[i8], i: usize) -> &ChainMap {
        &self.edges[&(x.to_vec(), i)]
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.vertices.keys()
    }

    /// Restriction to the cube `{low, low+1}^r`.
    pub fn restrict(&self, low: i8) -> CubeDiagram {
        let r = self.r;
        let to_point = |s: Vertex| -> Point { (0..r).map(|i| low + ((s >> i) & 1) as i8).collect() };
        let vertices = (0..(1u32 << r)).map(|s| self.vertices[&to_point(s)].clone()).collect();
        let mut edges = BTreeMap::new();
        for s in 0..(1u32 << r) {
            for i in 0..r {
                if s & (1 << i) == 0 {
                    edges.insert((s, i), self.edges[&(to_point(s), i)].clone());
                }
            }
        }
        CubeDiagram::new(r, vertices, edges).expect("lattice faces commute")
    }

    /// The `{−1, 0}` face, which is the cube the lattice was built from.
    pub fn restrict_original(&self) -> CubeDiagram {
        self.restrict(-1)
    }

    /// The `{0, 1}` face, quasi-isomorphic vertexwise to the unshifted cube.
    pub fn restrict_unshift(&self) -> CubeDiagram {
        self.restrict(0)
    }

    /// Every row `x → x+e_i → x+2e_i` is degreewise short exact.
    pub fn rows_exact(&self) -> bool {
        self.vertices.keys().all(|x| {
            (0..self.r).filter(|&i| x[i] == -1).all(|i| {
                let mid = step(x, i);
                let (f, g) = (self.edge(x, i), self.edge(&mid, i));
                f.target().degrees().all(|n| {
                    let (fm, gm) = (f.f(n), g.f(n));
                    fm.rank() == f.source().dim(n) && gm.rank() == g.target().dim(n) && fm.image() == gm.kernel()
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::cube_unshift;
    use crate::exactalg::{Field, Mat};

    fn q() -> Field {
        Field::Rationals
    }

    fn inclusion(f: Field, small: &Complex, big: &Complex, rows: &[&[i64]], n: i64) -> ChainMap {
        ChainMap::new(small.clone(), big.clone(), [(n, Mat::from_i64(f, rows))].into()).unwrap()
    }

    #[test]
    fn single_sequence_recovers_sub() {
        let f = q();
        let a = Complex::concentrated(f, 0, 1);
        let b = Complex::concentrated(f, 0, 2);
        let c = Complex::concentrated(f, 0, 1);
        let i = inclusion(f, &a, &b, &[&[1], &[0]], 0);
        let p = inclusion(f, &b, &c, &[&[0, 1]], 0);
        let l = LatticeDiagram::from_short_exact(&i, &p).unwrap();
        assert!(l.rows_exact());
        let fib = l.restrict_unshift().edge(0, 0).fiber();
        assert_eq!(fib.cohomology_profile(), a.cohomology_profile());
        let bad = LatticeDiagram::from_short_exact(&i, &ChainMap::zero(&b, &c));
        assert!(matches!(bad, Err(Error::NotExact(_))));
    }

    #[test]
    fn extension_of_free_square() {
        // P(S) = ⊕_{T ⊆ S} k in degree 0, edges the evident inclusions
        let f = q();
        let v = |n: usize| Complex::concentrated(f, 0, n);
        let vertices = vec![v(1), v(2), v(2), v(4)];
        let mut edges = BTreeMap::new();
        edges.insert((0, 0), inclusion(f, &v(1), &v(2), &[&[1], &[0]], 0));
        edges.insert((0, 1), inclusion(f, &v(1), &v(2), &[&[1], &[0]], 0));
        edges.insert((1, 1), inclusion(f, &v(2), &v(4), &[&[1, 0], &[0, 1], &[0, 0], &[0, 0]], 0));
        edges.insert((2, 0), inclusion(f, &v(2), &v(4), &[&[1, 0], &[0, 0], &[0, 1], &[0, 0]], 0));
        let a = CubeDiagram::new(2, vertices, edges).unwrap();
        let l = LatticeDiagram::extend_by_exact_rows(&a).unwrap();
        assert_eq!(l.points().count(), 9);
        assert!(l.rows_exact());
        assert_eq!(l.restrict_original(), a);
        assert_eq!(l.vertex(&[1, 1]).total_dim(), 1);
        let u = cube_unshift(&a);
        let lu = l.restrict_unshift();
        for s in 0..4 {
            assert_eq!(lu.vertex(s).cohomology_profile(), u.vertex(s).cohomology_profile());
        }
    }

    #[test]
    fn non_exact_square_rejected() {
        let f = q();
        let zero = Complex::zero(f);
        let line = Complex::concentrated(f, 0, 1);
        let plane = Complex::concentrated(f, 0, 2);
        let to_line = ChainMap::zero(&zero, &line);
        let l_in = inclusion(f, &line, &plane, &[&[1], &[0]], 0);
        let mut edges = BTreeMap::new();
        edges.insert((0, 0), to_line.clone());
        edges.insert((0, 1), to_line);
        edges.insert((1, 1), l_in.clone());
        edges.insert((2, 0), l_in);
        let a = CubeDiagram::new(2, vec![zero, line.clone(), line, plane], edges).unwrap();
        assert!(matches!(LatticeDiagram::extend_by_exact_rows(&a), Err(Error::NotExact(_))));
    }

    #[test]
    fn zero_rows_give_zero_lattice() {
        let f = q();
        let z = Complex::zero(f);
        let a = CubeDiagram::arrow(&ChainMap::zero(&z, &z));
        let l = LatticeDiagram::extend_by_exact_rows(&a).unwrap();
        assert!(l.points().all(|x| l.vertex(x).is_zero()));
    }
}
