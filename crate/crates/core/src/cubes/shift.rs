use std::collections::BTreeMap;

use super::cube::{CubeDiagram, Vertex};
use crate::complexes::{span, ChainMap, Complex};
use crate::exactalg::Mat;

/// Block diagonal map between fibers (or cones) of parallel arrows
/// `X → Y` and `X' → Y'`, from `b: Y → Y'` and `a: X → X'`. The shifts are
/// the degree offsets of the `Y` and `X` blocks.
fn diagonal(src: &Complex, tgt: &Complex, b: &ChainMap, a: &ChainMap, y_shift: i64, x_shift: i64) -> ChainMap {
    let field = src.field();
    let (lo, hi) = span(src, tgt);
    let maps: BTreeMap<i64, Mat> = (lo..=hi)
        .map(|n| {
            let bb = b.f(n + y_shift);
            let aa = a.f(n + x_shift);
            let mut m = Mat::zeros(field, tgt.dim(n), src.dim(n));
            if bb.rows() + aa.rows() == tgt.dim(n) && bb.cols() + aa.cols() == src.dim(n) {
                m.put(0, 0, &bb);
                m.put(bb.rows(), bb.cols(), &aa);
            }
            (n, m)
        })
        .collect();
    ChainMap::new(src.clone(), tgt.clone(), maps).expect("diagonal map of a commuting square")
}

/// Shift along axis `i`: each arrow `X → Y` in direction `i` becomes
/// `fib(X → Y) → X`.
pub fn cube_shift_axis(p: &CubeDiagram, i: usize) -> CubeDiagram {
    let r = p.arity();
    let bit: Vertex = 1 << i;
    let mut vertices: Vec<Complex> = Vec::with_capacity(1 << r);
    for s in 0..(1u32 << r) {
        if s & bit == 0 {
            vertices.push(p.edge(s, i).fiber());
        } else {
            vertices.push(p.vertex(s & !bit).clone());
        }
    }
    let mut edges = BTreeMap::new();
    for s in 0..(1u32 << r) {
        for j in 0..r {
            if s & (1 << j) != 0 {
                continue;
            }
            let t = s | 1 << j;
            let e = if j == i {
                p.edge(s, i).fiber_projection()
            } else if s & bit == 0 {
                // fib^n = Y^{n−1} ⊕ X^n
                diagonal(&vertices[s as usize], &vertices[t as usize], p.edge(s | bit, j), p.edge(s, j), -1, 0)
            } else {
                p.edge(s & !bit, j).clone()
            };
            edges.insert((s, j), e);
        }
    }
    CubeDiagram::new(r, vertices, edges).expect("shifted cube commutes")
}

/// Unshift along axis `i`: each arrow `X → Y` in direction `i` becomes
/// `Y → cone(X → Y)`.
pub fn cube_unshift_axis(p: &CubeDiagram, i: usize) -> CubeDiagram {
    let r = p.arity();
    let bit: Vertex = 1 << i;
    let mut vertices: Vec<Complex> = Vec::with_capacity(1 << r);
    for s in 0..(1u32 << r) {
        if s & bit == 0 {
            vertices.push(p.vertex(s | bit).clone());
        } else {
            vertices.push(p.edge(s & !bit, i).cone());
        }
    }
    let mut edges = BTreeMap::new();
    for s in 0..(1u32 << r) {
        for j in 0..r {
            if s & (1 << j) != 0 {
                continue;
            }
            let t = s | 1 << j;
            let e = if j == i {
                p.edge(s, i).cone_inclusion()
            } else if s & bit == 0 {
                p.edge(s | bit, j).clone()
            } else {
                // cone^n = Y^n ⊕ X^{n+1}
                let base = s & !bit;
                diagonal(&vertices[s as usize], &vertices[t as usize], p.edge(s, j), p.edge(base, j), 0, 1)
            };
            edges.insert((s, j), e);
        }
    }
    CubeDiagram::new(r, vertices, edges).expect("unshifted cube commutes")
}

/// Shift along every axis in turn.
pub fn cube_shift(p: &CubeDiagram) -> CubeDiagram {
    (0..p.arity()).fold(p.clone(), |acc, i| cube_shift_axis(&acc, i))
}

/// Unshift along every axis in turn.
pub fn cube_unshift(p: &CubeDiagram) -> CubeDiagram {
    (0..p.arity()).fold(p.clone(), |acc, i| cube_unshift_axis(&acc, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::random_cube;
    use crate::exactalg::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arrow_shift_and_unshift() {
        let f = Field::Rationals;
        let x = Complex::formal(f, 0, vec![1, 1]);
        let y = Complex::concentrated(f, 0, 2);
        let m = ChainMap::new(x.clone(), y.clone(), [(0, Mat::from_i64(f, &[&[1], &[0]]))].into()).unwrap();
        let p = CubeDiagram::arrow(&m);
        let s = cube_shift(&p);
        assert_eq!(s.vertex(0), &m.fiber());
        assert_eq!(s.vertex(1), &x);
        let u = cube_unshift(&p);
        assert_eq!(u.vertex(0), &y);
        assert_eq!(u.vertex(1), &m.cone());
    }

    #[test]
    fn shift_identities_on_random_cubes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=3 {
            let p = random_cube(Field::Prime(5), r, 2, 1, &mut rng);
            let s = cube_shift(&p);
            let u = cube_unshift(&p);
            assert_eq!(s.total_cofiber().cohomology_profile(), p.vertex(p.full()).cohomology_profile());
            let lhs = s.vertex(0).cohomology_profile();
            let rhs = crate::complexes::shift(u.vertex(u.full()), -(r as i64)).cohomology_profile();
            assert_eq!(lhs, rhs);
            assert_eq!(s.vertex(0).cohomology_profile(), p.total_fiber().cohomology_profile());
        }
    }
}
