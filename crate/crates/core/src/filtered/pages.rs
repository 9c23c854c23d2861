use std::collections::{BTreeMap, HashMap};

use super::filtration::FilteredComplex;
use crate::exactalg::{Mat, Subspace};

/// Pages `E_r^{p,q}` of the spectral sequence of a filtered complex, in the
/// decreasing convention (increasing filtrations are read as `F^p = F_{−p}`).
/// `d_r : E_r^{p,q} → E_r^{p+r, q−r+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiGradedPages {
    pub r_max: i64,
    /// Nonzero `dim E_r^{p,q}` keyed by `(r, p, q)`.
    pub dims: BTreeMap<(i64, i64, i64), usize>,
    /// Nonzero differentials keyed by the source `(r, p, q)`.
    pub differentials: BTreeMap<(i64, i64, i64), Mat>,
    /// `dim gr^p H^{p+q}` of the induced filtration, keyed by `(p, q)`.
    pub e_infinity: BTreeMap<(i64, i64), usize>,
}

impl BiGradedPages {
    pub fn dim(&self, r: i64, p: i64, q: i64) -> usize {
        self.dims.get(&(r, p, q)).copied().unwrap_or(0)
    }

    /// The page `r` as `(p, q) → dim`, nonzero entries only.
    pub fn page(&self, r: i64) -> BTreeMap<(i64, i64), usize> {
        self.dims.iter().filter(|((rr, _, _), _)| *rr == r).map(|(&(_, p, q), &d)| ((p, q), d)).collect()
    }

    pub fn rank_of_differential(&self, r: i64, p: i64, q: i64) -> usize {
        self.differentials.get(&(r, p, q)).map_or(0, |m| m.rank())
    }

    /// `d_r ∘ d_r = 0` and `dim E_{r+1} = dim H(E_r, d_r)` everywhere.
    pub fn is_consistent(&self) -> bool {
        for (&(r, p, q), m) in &self.differentials {
            if let Some(next) = self.differentials.get(&(r, p + r, q - r + 1)) {
                if !next.mul(m).is_zero() {
                    return false;
                }
            }
        }
        let mut keys: Vec<(i64, i64, i64)> = self.dims.keys().copied().collect();
        for &(r, p, q) in self.differentials.keys() {
            keys.push((r, p + r, q - r + 1));
        }
        for (r, p, q) in keys {
            if r >= self.r_max {
                continue;
            }
            let here = self.dim(r, p, q) as i64;
            let out = self.rank_of_differential(r, p, q) as i64;
            let inn = self.rank_of_differential(r, p - r, q + r - 1) as i64;
            if here - out - inn != self.dim(r + 1, p, q) as i64 {
                return false;
            }
        }
        true
    }

    /// Whether page `r_max` agrees with `E_∞`.
    pub fn converges(&self) -> bool {
        self.page(self.r_max) == self.e_infinity
    }
}

struct Engine<'a> {
    f: &'a FilteredComplex,
    z_cache: HashMap<(i64, i64, i64), Subspace>,
}

impl<'a> Engine<'a> {
    fn level(&self, p: i64, n: i64) -> Subspace {
        self.f.dec_level(p).space(n)
    }

    /// `Z_r^{p} C^n = F^p C^n ∩ d⁻¹(F^{p+r} C^{n+1})`.
    fn z(&mut self, r: i64, p: i64, n: i64) -> Subspace {
        if let Some(s) = self.z_cache.get(&(r, p, n)) {
            return s.clone();
        }
        let c = self.f.ambient();
        let here = self.level(p, n);
        let there = self.level(p + r, n + 1);
        let s = here.intersection(&there.preimage(&c.d(n)).expect("shapes")).expect("same ambient");
        self.z_cache.insert((r, p, n), s.clone());
        s
    }

    /// `Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1}` in degree `n`.
    fn denominator(&mut self, r: i64, p: i64, n: i64) -> Subspace {
        let c = self.f.ambient();
        let a = self.z(r - 1, p + 1, n);
        let b = self.z(r - 1, p - r + 1, n - 1);
        let db = b.image_under(&c.d(n - 1)).expect("shapes");
        a.sum(&db).expect("same ambient")
    }
}

/// Pages `E_0 … E_{r_max}` with their differentials.
pub fn spectral_sequence(f: &FilteredComplex, r_max: i64) -> BiGradedPages {
    let c = f.ambient();
    let (plo, phi) = {
        let (lo, hi) = f.inc_window();
        (-hi, -lo)
    };
    let mut eng = Engine { f, z_cache: HashMap::new() };
    let mut dims = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    let field = c.field();
    if c.hi() >= c.lo() {
        for r in 0..=r_max {
            let mut bases: HashMap<(i64, i64), (Subspace, Mat)> = HashMap::new();
            for p in plo..=phi {
                for n in c.degrees() {
                    let z = eng.z(r, p, n);
                    let den = eng.denominator(r, p, n);
                    let qb = den.quotient_basis(&z).expect("denominator lies in Z_r");
                    if qb.rows() > 0 {
                        dims.insert((r, p, n - p), qb.rows());
                    }
                    bases.insert((p, n), (den, qb));
                }
            }
            for p in plo..=phi {
                for n in c.degrees() {
                    let (_, src) = &bases[&(p, n)];
                    let Some((tden, tqb)) = bases.get(&(p + r, n + 1)) else { continue };
                    if src.rows() == 0 || tqb.rows() == 0 {
                        continue;
                    }
                    let d = c.d(n);
                    let mut m = Mat::zeros(field, tqb.rows(), src.rows());
                    for j in 0..src.rows() {
                        let img = d.mul_vec(src.row(j));
                        let coords = tden.quotient_coordinates(tqb, &img).expect("d maps Z_r^p into Z_r^{p+r}");
                        for (i, x) in coords.into_iter().enumerate() {
                            m.set(i, j, x);
                        }
                    }
                    if !m.is_zero() {
                        differentials.insert((r, p, n - p), m);
                    }
                }
            }
        }
    }
    let mut e_infinity = BTreeMap::new();
    for n in c.degrees() {
        for p in plo..=phi {
            let a = f.induced_level_dim(-p, n);
            let b = f.induced_level_dim(-p - 1, n);
            if a > b {
                e_infinity.insert((p, n - p), a - b);
            }
        }
    }
    BiGradedPages { r_max, dims, differentials, e_infinity }
}

/// A page count past which every filtration on `f`'s window has stabilised.
pub fn stable_page(f: &FilteredComplex) -> i64 {
    let (lo, hi) = f.inc_window();
    hi - lo + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{Complex, Subcomplex};
    use crate::exactalg::Field;
    use crate::filtered::{whitehead_tower, Direction};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn one_step_filtration_degenerates() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 2], vec![Mat::from_i64(f, &[&[1], &[0]])]).unwrap();
        let fil = FilteredComplex::trivial(&c, 0);
        let pages = spectral_sequence(&fil, 3);
        assert_eq!(pages.page(1), [((0, 1), 1)].into());
        assert!(pages.differentials.keys().all(|k| k.0 == 0));
        assert!(pages.converges());
        assert!(pages.is_consistent());
    }

    #[test]
    fn two_step_on_acyclic() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 1], vec![Mat::identity(f, 1)]).unwrap();
        let deg1 = Subcomplex::new(&c, vec![Subspace::zero(f, 1), Subspace::full(f, 1)]).unwrap();
        let fil = FilteredComplex::new(c.clone(), Direction::Increasing, 0, vec![deg1, Subcomplex::full(&c)]).unwrap();
        let pages = spectral_sequence(&fil, 3);
        // F^0 = deg-1 part, F^{-1} = everything: gr^{-1} = k in degree 0, gr^0 = k in degree 1
        assert_eq!(pages.page(1), [((-1, 1), 1), ((0, 1), 1)].into());
        assert_eq!(pages.rank_of_differential(1, -1, 1), 1);
        assert!(pages.page(2).is_empty());
        assert!(pages.is_consistent());
    }

    #[test]
    fn whitehead_e_infinity_is_diagonal() {
        let f = q();
        let c = Complex::formal(f, 0, vec![1, 0, 2]);
        let pages = spectral_sequence(&whitehead_tower(&c), 4);
        assert_eq!(pages.e_infinity, [((0, 0), 1), ((-2, 4), 2)].into());
        assert!(pages.converges());
    }
}
