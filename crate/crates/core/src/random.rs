//! Random generators for complexes, maps and filtrations, shared by the
//! property suites and the `selftest` command.

use rand::Rng;

use crate::complexes::{hom_complex, hom_vector_to_map, ChainMap, Complex, Subcomplex};
use crate::exactalg::{Field, Mat, Scalar, Subspace};
use crate::filtered::{Direction, FilteredComplex};

pub fn random_matrix<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
    let data = (0..rows * cols).map(|_| field.random(rng)).collect();
    Mat::from_vec(field, rows, cols, data)
}

fn random_vector<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vec<Scalar> {
    (0..n).map(|_| field.random(rng)).collect()
}

/// Random complex in degrees `lo..=lo+amplitude` with dimensions at most
/// `max_dim`. Each differential is a random matrix composed with the
/// projection onto a complement of the previous image, with a random rank.
pub fn random_complex<R: Rng + ?Sized>(field: Field, lo: i64, amplitude: usize, max_dim: usize, rng: &mut R) -> Complex {
    let dims: Vec<usize> = (0..=amplitude).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut diffs: Vec<Mat> = Vec::new();
    for k in 0..amplitude {
        let prev_image = match diffs.last() {
            Some(d) => d.image(),
            None => Subspace::zero(field, dims[k]),
        };
        let ann = prev_image.annihilator();
        let keep = if ann.dim() == 0 { 0 } else { rng.gen_range(0..=ann.dim()) };
        let sel: Vec<usize> = (0..keep).collect();
        let a = ann.basis().select_rows(&sel);
        let m = random_matrix(field, dims[k + 1], keep, rng);
        diffs.push(m.mul(&a));
    }
    Complex::new(field, lo, dims, diffs).expect("random differentials square to zero")
}

/// Random chain map `c → d`: a random cocycle of the degree-0 hom complex.
pub fn random_chain_map<R: Rng + ?Sized>(c: &Complex, d: &Complex, rng: &mut R) -> ChainMap {
    let field = c.field();
    let h = hom_complex(c, d);
    let z = h.cycles(0);
    let coeffs = random_vector(field, z.dim(), rng);
    let v = if z.dim() == 0 { vec![field.zero(); h.dim(0)] } else { z.basis().vec_mul(&coeffs) };
    hom_vector_to_map(c, d, &v)
}

/// Random subcomplex of `c` inside `within`: a few random vectors of
/// `within` together with their differentials.
pub fn random_subcomplex<R: Rng + ?Sized>(c: &Complex, within: &Subcomplex, rng: &mut R) -> Subcomplex {
    let field = c.field();
    let mut spaces: Vec<Vec<Vec<Scalar>>> = c.degrees().map(|_| Vec::new()).collect();
    for (k, n) in c.degrees().enumerate() {
        let w = within.space(n);
        if w.dim() == 0 {
            continue;
        }
        let picks = rng.gen_range(0..=w.dim());
        for _ in 0..picks {
            let coeffs = random_vector(field, w.dim(), rng);
            let v = w.basis().vec_mul(&coeffs);
            let dv = c.d(n).mul_vec(&v);
            spaces[k].push(v);
            if k + 1 < spaces.len() {
                spaces[k + 1].push(dv);
            }
        }
    }
    let spaces = c
        .degrees()
        .zip(spaces)
        .map(|(n, rows)| Subspace::span(field, c.dim(n), rows))
        .collect();
    Subcomplex::new(c, spaces).expect("closed under d by construction")
}

/// Random increasing filtration with `window` levels starting at `lo`.
pub fn random_filtration<R: Rng + ?Sized>(c: &Complex, lo: i64, window: usize, rng: &mut R) -> FilteredComplex {
    let mut levels = vec![Subcomplex::full(c)];
    for _ in 1..window.max(1) {
        let next = random_subcomplex(c, levels.last().unwrap(), rng);
        levels.push(next);
    }
    levels.reverse();
    FilteredComplex::new(c.clone(), Direction::Increasing, lo, levels).expect("nested by construction")
}

/// Random filtered complex with the given size limits.
pub fn random_filtered<R: Rng + ?Sized>(field: Field, max_dim: usize, amplitude: usize, window: usize, rng: &mut R) -> FilteredComplex {
    let lo = rng.gen_range(-2..=1);
    let c = random_complex(field, lo, amplitude, max_dim, rng);
    let flo = rng.gen_range(-2..=2);
    random_filtration(&c, flo, window, rng)
}
