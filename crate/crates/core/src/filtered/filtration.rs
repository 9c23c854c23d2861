use std::collections::BTreeMap;

use crate::complexes::{hom_complex, smart_truncate, ChainMap, Complex, Subcomplex, SubquotientComplex};
use crate::error::{Error, Result};
use crate::exactalg::{Mat, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The one place where the two indexing conventions meet:
/// `F_p = F^{−p}`.
pub fn convert_index(p: i64) -> i64 {
    -p
}

/// A strict, exhaustive, bounded filtration of a complex by subcomplexes.
///
/// Levels are stored increasingly over a window `[lo, hi]`: `F_p = 0` for
/// `p < lo` and `F_p = C` for `p ≥ hi`. A decreasing filtration is the
/// same data read through [`convert_index`].
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    ambient: Complex,
    direction: Direction,
    lo: i64,
    levels: Vec<Subcomplex>,
}

impl PartialEq for FilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        if self.ambient != other.ambient || self.direction != other.direction {
            return false;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo - 1..=hi).all(|p| self.inc_level(p) == other.inc_level(p))
    }
}

impl Eq for FilteredComplex {}

impl FilteredComplex {
    /// `levels[k]` is `F_{lo+k}` for increasing filtrations and `F^{lo+k}`
    /// for decreasing ones. The top (resp. bottom) stored level must be the
    /// whole complex.
    pub fn new(ambient: Complex, direction: Direction, lo: i64, levels: Vec<Subcomplex>) -> Result<FilteredComplex> {
        if levels.is_empty() {
            return Err(Error::Filtration("a filtration needs at least one level".into()));
        }
        for (k, l) in levels.iter().enumerate() {
            if !l.is_closed(&ambient) {
                return Err(Error::Filtration(format!("level {} is not a subcomplex", lo + k as i64)));
            }
        }
        let (inc_lo, inc_levels) = match direction {
            Direction::Increasing => (lo, levels),
            Direction::Decreasing => {
                let hi = lo + levels.len() as i64 - 1;
                (convert_index(hi), levels.into_iter().rev().collect())
            }
        };
        for w in inc_levels.windows(2) {
            if !w[1].contains(&w[0]) {
                return Err(Error::Filtration("levels are not nested".into()));
            }
        }
        if inc_levels.last().unwrap() != &Subcomplex::full(&ambient) {
            return Err(Error::Filtration("filtration is not exhaustive at the end of its window".into()));
        }
        Ok(FilteredComplex { ambient, direction, lo: inc_lo, levels: inc_levels })
    }

    pub(crate) fn from_increasing_unchecked(ambient: Complex, lo: i64, levels: Vec<Subcomplex>) -> FilteredComplex {
        FilteredComplex { ambient, direction: Direction::Increasing, lo, levels }
    }

    /// `0 ⊂ C` with `C` entering at level `p`.
    pub fn trivial(c: &Complex, p: i64) -> FilteredComplex {
        FilteredComplex { ambient: c.clone(), direction: Direction::Increasing, lo: p, levels: vec![Subcomplex::full(c)] }
    }

    pub fn ambient(&self) -> &Complex {
        &self.ambient
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Window in increasing indexing.
    pub fn inc_window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    fn hi(&self) -> i64 {
        self.lo + self.levels.len() as i64 - 1
    }

    /// Window in the filtration's own indexing.
    pub fn window(&self) -> (i64, i64) {
        match self.direction {
            Direction::Increasing => (self.lo, self.hi()),
            Direction::Decreasing => (convert_index(self.hi()), convert_index(self.lo)),
        }
    }

    /// `F_p` in increasing indexing.
    pub fn inc_level(&self, p: i64) -> Subcomplex {
        if p < self.lo {
            Subcomplex::zero(&self.ambient)
        } else if p >= self.hi() {
            Subcomplex::full(&self.ambient)
        } else {
            self.levels[(p - self.lo) as usize].clone()
        }
    }

    /// `F^p` in decreasing indexing.
    pub fn dec_level(&self, p: i64) -> Subcomplex {
        self.inc_level(convert_index(p))
    }

    /// Level `p` in the filtration's own indexing.
    pub fn level(&self, p: i64) -> Subcomplex {
        match self.direction {
            Direction::Increasing => self.inc_level(p),
            Direction::Decreasing => self.dec_level(p),
        }
    }

    /// Same levels, reinterpreted with the other direction tag.
    pub fn reversed_view(&self) -> FilteredComplex {
        let direction = match self.direction {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        };
        FilteredComplex { direction, ..self.clone() }
    }

    pub fn with_direction(&self, direction: Direction) -> FilteredComplex {
        FilteredComplex { direction, ..self.clone() }
    }

    /// `G_p = F_{p−k}` (increasing indexing).
    pub fn reindex(&self, k: i64) -> FilteredComplex {
        FilteredComplex { lo: self.lo + k, ..self.clone() }
    }

    /// Shifts the ambient complex; levels move along.
    pub fn shift(&self, m: i64) -> FilteredComplex {
        let ambient = crate::complexes::shift(&self.ambient, m);
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let spaces = ambient.degrees().map(|n| l.space(n + m)).collect();
                Subcomplex::new_unchecked(&ambient, spaces)
            })
            .collect();
        FilteredComplex { ambient, direction: self.direction, lo: self.lo, levels }
    }

    /// `gr_p = F_p / F_{p−1}` (increasing) or `F^p / F^{p+1}` (decreasing),
    /// keyed by the filtration's own index, over its window.
    pub fn graded_pieces(&self) -> Vec<(i64, SubquotientComplex)> {
        (self.lo..=self.hi())
            .map(|p| {
                let top = self.inc_level(p);
                let bottom = self.inc_level(p - 1);
                let piece = self.ambient.subquotient(&top, &bottom).expect("nested levels");
                let key = match self.direction {
                    Direction::Increasing => p,
                    Direction::Decreasing => convert_index(p),
                };
                (key, piece)
            })
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect()
    }

    /// Dimension of the image of `H^n(F_p) → H^n(C)` (increasing indexing).
    pub fn induced_level_dim(&self, p: i64, n: i64) -> usize {
        let level = self.inc_level(p).space(n);
        let cycles = self.ambient.cycles(n);
        let boundaries = self.ambient.boundaries(n);
        let z = level.intersection(&cycles).expect("same ambient");
        z.sum(&boundaries).expect("same ambient").dim() - boundaries.dim()
    }

    /// `dim gr_p H^n` of the filtration induced on cohomology, keyed by the
    /// filtration's own index; only nonzero entries.
    pub fn graded_cohomology(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for n in self.ambient.degrees() {
            for p in self.lo..=self.hi() {
                let d = self.induced_level_dim(p, n) - self.induced_level_dim(p - 1, n);
                if d > 0 {
                    let key = match self.direction {
                        Direction::Increasing => p,
                        Direction::Decreasing => convert_index(p),
                    };
                    out.insert((key, n), d);
                }
            }
        }
        out
    }
}

/// `W_j = τ^{≤ j} C`, over the support of `C`.
pub fn whitehead_tower(c: &Complex) -> FilteredComplex {
    if c.hi() < c.lo() {
        return FilteredComplex::trivial(c, 0);
    }
    let levels = c.degrees().map(|j| smart_truncate(c, j)).collect();
    FilteredComplex::from_increasing_unchecked(c.clone(), c.lo(), levels)
}

/// Deligne's décalage, pointwise:
/// `Dec_p C^n = F_{p−n} C^n ∩ d⁻¹(F_{p−n−1} C^{n+1})` for increasing
/// filtrations, and `Dec^p C^n = F^{p+n} ∩ d⁻¹(F^{p+n+1})` for decreasing
/// ones (the same formula through [`convert_index`]).
pub fn decalage(f: &FilteredComplex) -> FilteredComplex {
    let c = &f.ambient;
    if c.hi() < c.lo() {
        return FilteredComplex { lo: f.lo, levels: vec![Subcomplex::full(c)], ..f.clone() };
    }
    let (lo, hi) = f.inc_window();
    let new_lo = lo + c.lo();
    let new_hi = hi + c.hi() + 1;
    let levels = (new_lo..=new_hi)
        .map(|p| {
            let spaces = c
                .degrees()
                .map(|n| {
                    let here = f.inc_level(p - n).space(n);
                    let next = f.inc_level(p - n - 1).space(n + 1);
                    let pre = next.preimage(&c.d(n)).expect("shapes agree");
                    here.intersection(&pre).expect("same ambient")
                })
                .collect();
            Subcomplex::new_unchecked(c, spaces)
        })
        .collect();
    FilteredComplex { ambient: c.clone(), direction: f.direction, lo: new_lo, levels }
}

/// Checks that `f` maps `F_p` into `G_p` for every `p` (increasing indexing).
pub fn check_filtered_map(f: &ChainMap, src: &FilteredComplex, tgt: &FilteredComplex) -> Result<()> {
    let lo = src.lo.min(tgt.lo) - 1;
    let hi = src.hi().max(tgt.hi());
    for p in lo..=hi {
        let a = src.inc_level(p);
        let b = tgt.inc_level(p);
        for n in src.ambient.degrees() {
            let img = a.space(n).image_under(&f.f(n)).expect("shapes agree");
            let bn = b.space(n);
            if img.dim() > 0 && !bn.contains_subspace(&img) {
                let level = match src.direction {
                    Direction::Increasing => p,
                    Direction::Decreasing => convert_index(p),
                };
                return Err(Error::NotFiltered { level, degree: n });
            }
        }
    }
    Ok(())
}

/// Induced map on graded pieces `gr_p(src) → gr_p(tgt)` (increasing indexing).
pub fn graded_map(f: &ChainMap, src: &FilteredComplex, tgt: &FilteredComplex, p: i64) -> ChainMap {
    let a = src.ambient.subquotient(&src.inc_level(p), &src.inc_level(p - 1)).expect("nested levels");
    let b = tgt.ambient.subquotient(&tgt.inc_level(p), &tgt.inc_level(p - 1)).expect("nested levels");
    SubquotientComplex::induced_map(f, &a, &b).expect("filtered map induces a graded chain map")
}

/// True when `f` induces quasi-isomorphisms on every graded piece.
pub fn filtered_quasi_iso(f: &ChainMap, src: &FilteredComplex, tgt: &FilteredComplex) -> Result<bool> {
    check_filtered_map(f, src, tgt)?;
    let lo = src.lo.min(tgt.lo);
    let hi = src.hi().max(tgt.hi());
    Ok((lo..=hi).all(|p| graded_map(f, src, tgt, p).is_quasi_iso()))
}

/// The subcomplex of `hom_complex(C, D)` of degreewise filtration
/// preserving maps.
pub fn filtered_hom_subcomplex(f: &FilteredComplex, g: &FilteredComplex) -> (Complex, Subcomplex) {
    let (c, d) = (&f.ambient, &g.ambient);
    let h = hom_complex(c, d);
    let field = c.field();
    let lo = f.lo.min(g.lo) - 1;
    let hi = f.hi().max(g.hi());
    let spaces = h
        .degrees()
        .map(|n| {
            let mut constraints: Vec<Mat> = Vec::new();
            let mut off = 0;
            let mut blocks = Vec::new();
            for i in c.degrees() {
                let size = c.dim(i) * d.dim(i + n);
                if size > 0 {
                    blocks.push((i, off, size));
                    off += size;
                }
            }
            for &(i, o, size) in &blocks {
                for p in lo..=hi {
                    let src = f.inc_level(p).space(i);
                    let tgt = g.inc_level(p).space(i + n);
                    if src.dim() == 0 || tgt.is_full() {
                        continue;
                    }
                    let ann = tgt.annihilator();
                    let local = ann.basis().kron(src.basis());
                    let mut row = Mat::zeros(field, local.rows(), h.dim(n));
                    row.put(0, o, &local);
                    debug_assert_eq!(local.cols(), size);
                    constraints.push(row);
                }
            }
            if constraints.is_empty() {
                Subspace::full(field, h.dim(n))
            } else {
                let refs: Vec<&Mat> = constraints.iter().collect();
                Mat::vstack(field, h.dim(n), &refs).kernel()
            }
        })
        .collect();
    let sub = Subcomplex::new(&h, spaces).expect("filtration-preserving maps form a subcomplex");
    (h, sub)
}

/// Dimension of `H^0` of the filtered hom complex.
pub fn filtered_hom_classes(f: &FilteredComplex, g: &FilteredComplex) -> usize {
    let (h, sub) = filtered_hom_subcomplex(f, g);
    if h.hi() < h.lo() {
        return 0;
    }
    h.restrict(&sub).expect("subcomplex").complex.cohomology_dim(0)
}

/// Degreewise cover `G^q = τ^{≤ −q}(F^q)` of a decreasing filtration.
pub fn diagonal_connective_cover(f: &FilteredComplex) -> Result<FilteredComplex> {
    if f.direction != Direction::Decreasing {
        return Err(Error::Filtration("diagonal connective cover needs a decreasing filtration".into()));
    }
    let c = &f.ambient;
    if c.hi() < c.lo() {
        return Ok(f.clone());
    }
    let (dlo, dhi) = f.window();
    let lo = dlo.min(-c.hi());
    let levels = (lo..=dhi)
        .map(|q| {
            let level = f.dec_level(q);
            let spaces = c
                .degrees()
                .map(|k| {
                    let s = level.space(k);
                    if k < -q {
                        s
                    } else if k == -q {
                        s.intersection(&c.cycles(k)).expect("same ambient")
                    } else {
                        Subspace::zero(c.field(), c.dim(k))
                    }
                })
                .collect();
            Subcomplex::new_unchecked(c, spaces)
        })
        .collect();
    FilteredComplex::new(c.clone(), Direction::Decreasing, lo, levels)
}

/// Whether level `q` of a decreasing filtration is `q`-connective, i.e.
/// `H^n(F^q) = 0` for `n > −q`, at every `q` of its window.
pub fn is_diagonal_connective(f: &FilteredComplex) -> bool {
    let (lo, hi) = f.window();
    (lo..=hi).all(|q| {
        let level = f.ambient.restrict(&f.dec_level(q)).expect("subcomplex").complex;
        level.degrees().filter(|&n| n > -q).all(|n| level.cohomology_dim(n) == 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn q() -> Field {
        Field::Rationals
    }

    fn id_two_term() -> Complex {
        Complex::new(q(), 0, vec![1, 1], vec![Mat::identity(q(), 1)]).unwrap()
    }

    #[test]
    fn whitehead_of_formal_complex() {
        let c = Complex::formal(q(), 0, vec![1, 1]);
        let w = whitehead_tower(&c);
        assert_eq!(w.inc_level(0).dims(), vec![1, 0]);
        assert_eq!(w.inc_level(1), Subcomplex::full(&c));
        let gr = w.graded_pieces();
        assert_eq!(gr[0].1.complex.cohomology_dims(), vec![(0, 1), (1, 0)]);
        assert_eq!(gr[1].1.complex.cohomology_dims(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn whitehead_of_acyclic_has_acyclic_pieces() {
        let w = whitehead_tower(&id_two_term());
        assert!(w.graded_pieces().iter().all(|(_, g)| g.complex.is_acyclic()));
    }

    #[test]
    fn whitehead_gr_dims_of_sphere_like() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 2, 2], vec![Mat::from_i64(f, &[&[0], &[0]]), Mat::from_i64(f, &[&[1, 0], &[0, 0]])])
            .unwrap();
        assert_eq!(c.cohomology_dims(), vec![(0, 1), (1, 1), (2, 1)]);
        let c2 = Complex::new(f, 0, vec![1, 1, 2], vec![Mat::from_i64(f, &[&[0]]), Mat::from_i64(f, &[&[1], &[0]])]).unwrap();
        assert_eq!(c2.cohomology_dims(), vec![(0, 1), (1, 0), (2, 1)]);
        let gr: Vec<usize> = whitehead_tower(&c2)
            .graded_pieces()
            .iter()
            .map(|(_, g)| g.complex.cohomology_dims().iter().map(|x| x.1).sum())
            .collect();
        assert_eq!(gr, vec![1, 0, 1]);
    }

    #[test]
    fn decalage_of_inserted_filtration_is_whitehead() {
        let f = q();
        let c = Complex::new(f, -1, vec![2, 3, 1], vec![Mat::from_i64(f, &[&[1, 0], &[0, 0], &[0, 0]]), Mat::from_i64(f, &[&[0, 1, 0]])])
            .unwrap();
        let dec = decalage(&FilteredComplex::trivial(&c, 0));
        assert_eq!(dec, whitehead_tower(&c));
    }

    #[test]
    fn decalage_hand_example() {
        let c = id_two_term();
        let deg1 = Subcomplex::new(&c, vec![Subspace::zero(q(), 1), Subspace::full(q(), 1)]).unwrap();
        let fil = FilteredComplex::new(c.clone(), Direction::Increasing, 0, vec![deg1, Subcomplex::full(&c)]).unwrap();
        let dec = decalage(&fil);
        assert_eq!(dec.inc_level(0), Subcomplex::zero(&c));
        assert_eq!(dec.inc_level(1), Subcomplex::full(&c));
    }

    #[test]
    fn decalage_of_zero() {
        let z = Complex::zero(q());
        let dec = decalage(&FilteredComplex::trivial(&z, 0));
        assert!(dec.ambient().is_zero());
    }

    #[test]
    fn rejects_non_nested_levels() {
        let c = id_two_term();
        let deg1 = Subcomplex::new(&c, vec![Subspace::zero(q(), 1), Subspace::full(q(), 1)]).unwrap();
        let err = FilteredComplex::new(c.clone(), Direction::Increasing, 0, vec![Subcomplex::full(&c), deg1]);
        assert!(err.is_err());
    }

    #[test]
    fn filtered_hom_examples() {
        let pt = Complex::concentrated(q(), 0, 1);
        let w = whitehead_tower(&pt);
        assert_eq!(filtered_hom_classes(&w, &w), 1);
        let z = Complex::zero(q());
        assert_eq!(filtered_hom_classes(&w, &whitehead_tower(&z)), 0);
    }

    #[test]
    fn filtered_quasi_iso_examples() {
        let c = Complex::formal(q(), 0, vec![1, 1]);
        let w = whitehead_tower(&c);
        assert!(filtered_quasi_iso(&ChainMap::identity(&c), &w, &w).unwrap());
        // identity of k[0]: entering at level 1 maps into entering at level 0, not back
        let pt = Complex::concentrated(q(), 0, 1);
        let a = FilteredComplex::trivial(&pt, 0);
        let b = FilteredComplex::trivial(&pt, 1);
        assert!(!filtered_quasi_iso(&ChainMap::identity(&pt), &b, &a).unwrap());
        assert!(matches!(filtered_quasi_iso(&ChainMap::identity(&pt), &a, &b), Err(Error::NotFiltered { .. })));
    }

    #[test]
    fn truncation_inclusion_is_filtered_quasi_iso() {
        let f = q();
        let c = Complex::new(f, 0, vec![1, 2, 1], vec![Mat::from_i64(f, &[&[0], &[1]]), Mat::from_i64(f, &[&[1, 0]])]).unwrap();
        assert_eq!(c.cohomology_dim(2), 0);
        let t = c.restrict(&smart_truncate(&c, 1)).unwrap();
        let incl = ChainMap::new(t.complex.clone(), c.clone(), (0..=2).map(|n| (n, t.basis(n).unwrap().transpose())).collect()).unwrap();
        assert!(filtered_quasi_iso(&incl, &whitehead_tower(&t.complex), &whitehead_tower(&c)).unwrap());
    }

    #[test]
    fn connective_cover_of_constant_filtration() {
        let f = q();
        let c = Complex::new(f, -1, vec![1, 2, 1], vec![Mat::from_i64(f, &[&[1], &[0]]), Mat::from_i64(f, &[&[0, 1]])]).unwrap();
        let constant = FilteredComplex::new(c.clone(), Direction::Decreasing, 1, vec![Subcomplex::full(&c)]).unwrap();
        let cover = diagonal_connective_cover(&constant).unwrap();
        assert!(is_diagonal_connective(&cover));
        assert_eq!(cover.with_direction(Direction::Increasing), whitehead_tower(&c));
    }

    #[test]
    fn connective_cover_is_idempotent() {
        let c = Complex::formal(q(), -1, vec![1, 1, 1]);
        let w = whitehead_tower(&c).reversed_view();
        assert!(is_diagonal_connective(&w));
        assert_eq!(diagonal_connective_cover(&w).unwrap(), w);
    }
}
