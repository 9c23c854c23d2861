use std::collections::BTreeMap;

use super::scenario::SncdScenario;
use crate::complexes::Complex;
use crate::cubes::popcount;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};

/// `tfib_I Γ(D_I) ` in degree `m` corresponds to reduced cohomology of the
/// dual complex in degree `m − DUAL_COMPLEX_SHIFT`.
pub const DUAL_COMPLEX_SHIFT: i64 = 1;

/// A face: a connected component of the stratum `D_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub subset: u32,
    pub component: usize,
}

impl Face {
    pub fn dim(&self) -> i64 {
        popcount(self.subset) - 1
    }
}

/// The dual complex: one vertex per component of `D`, one face per
/// connected component of each nonempty `D_I`. Faces are glued along the
/// incidences `facets[(σ, i)] = τ` meaning `τ ⊃ σ` drops component `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: usize,
    pub faces: Vec<Face>,
    pub facets: BTreeMap<(Face, usize), Face>,
}

impl SimplicialComplex {
    /// Every face has exactly one facet in each direction.
    pub fn is_closed(&self) -> bool {
        self.faces.iter().all(|f| {
            (0..self.vertices)
                .filter(|&i| f.subset & (1 << i) != 0 && f.subset != 1 << i)
                .all(|i| self.facets.get(&(*f, i)).is_some_and(|t| self.faces.contains(t)))
        })
    }

    pub fn dim(&self) -> i64 {
        self.faces.iter().map(Face::dim).max().unwrap_or(-1)
    }

    /// Augmented simplicial cochain complex, `C^{−1} = k` for the empty face.
    pub fn reduced_cochains(&self, field: Field) -> Complex {
        let top = self.dim();
        let levels: Vec<Vec<Face>> = (-1..=top)
            .map(|m| if m < 0 { vec![] } else { self.faces.iter().filter(|f| f.dim() == m).copied().collect() })
            .collect();
        let dims: Vec<usize> = levels.iter().enumerate().map(|(k, l)| if k == 0 { 1 } else { l.len() }).collect();
        let mut diffs = Vec::new();
        for m in -1..top {
            let k = (m + 1) as usize;
            let (src, tgt) = (&levels[k], &levels[k + 1]);
            let mut d = Mat::zeros(field, tgt.len(), dims[k]);
            for (row, sigma) in tgt.iter().enumerate() {
                if m < 0 {
                    d.set(row, 0, field.one());
                    continue;
                }
                let members: Vec<usize> = (0..self.vertices).filter(|&i| sigma.subset & (1 << i) != 0).collect();
                for (t, &i) in members.iter().enumerate() {
                    let tau = self.facets[&(*sigma, i)];
                    let col = src.iter().position(|f| *f == tau).expect("facet is a face");
                    let sign = if t % 2 == 0 { field.one() } else { field.from_i64(-1) };
                    d.set(row, col, field.add(d.get(row, col), &sign));
                }
            }
            diffs.push(d);
        }
        Complex::new(field, -1, dims, diffs).expect("simplicial coboundary squares to zero")
    }
}

/// Reduced cohomology dims in degrees `−1 ..= dim Δ`.
pub fn reduced_cohomology(delta: &SimplicialComplex, field: Field) -> Vec<(i64, usize)> {
    delta.reduced_cochains(field).cohomology_dims()
}

/// Incidences come from the nonzero blocks of the `H^0(O)` pullbacks
/// between components.
pub fn dual_complex(scn: &SncdScenario) -> Result<SimplicialComplex> {
    scn.validate()?;
    let mut faces = Vec::new();
    let mut facets = BTreeMap::new();
    let offsets = |mask: u32| -> Vec<(usize, usize)> {
        let mut off = 0;
        scn.components(mask)
            .iter()
            .map(|t| {
                let d = t.dim(0, 0);
                let o = (off, d);
                off += d;
                o
            })
            .collect()
    };
    for mask in 1..=scn.full() {
        let comps = offsets(mask);
        for (c, &(off, size)) in comps.iter().enumerate() {
            let face = Face { subset: mask, component: c };
            if size == 0 {
                return Err(Error::scenario(
                    format!("strata(subset {mask:#b}).components[{c}]"),
                    "a component needs h^00 > 0",
                ));
            }
            faces.push(face);
            if popcount(mask) == 1 {
                continue;
            }
            for i in (0..scn.r).filter(|i| mask & (1 << i) != 0) {
                let sub = mask & !(1 << i);
                let pb = scn.pullback(sub, mask, 0, 0);
                let hits: Vec<usize> = offsets(sub)
                    .iter()
                    .enumerate()
                    .filter(|(_, &(soff, ssize))| !pb.submatrix(off..off + size, soff..soff + ssize).is_zero())
                    .map(|(k, _)| k)
                    .collect();
                if hits.len() != 1 {
                    return Err(Error::scenario(
                        "pullbacks",
                        format!("component {c} of stratum {mask:#b} meets {} components after dropping {i}", hits.len()),
                    ));
                }
                facets.insert((face, i), Face { subset: sub, component: hits[0] });
            }
        }
    }
    Ok(SimplicialComplex { vertices: scn.r, faces, facets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loggeom::scenario::HodgeTable;

    fn nerve(r: usize, present: &[u32]) -> SncdScenario {
        let field = Field::Rationals;
        let mut strata = BTreeMap::new();
        strata.insert(0, vec![HodgeTable::from_entries(&[(0, 0, 1)])]);
        for &m in present {
            strata.insert(m, vec![HodgeTable::from_entries(&[(0, 0, 1)])]);
        }
        let mut pullbacks = BTreeMap::new();
        for &m in present.iter().chain(std::iter::once(&0)) {
            for i in 0..r {
                let t = m | 1 << i;
                if t != m && (present.contains(&t)) {
                    pullbacks.insert((m, t, 0, 0), Mat::identity(field, 1));
                }
            }
        }
        SncdScenario {
            field,
            n: r as i64,
            r,
            mode: super::super::scenario::Mode::Tabulated,
            strata,
            pullbacks,
            arrangement: None,
        }
    }

    #[test]
    fn point_and_circle() {
        let d = dual_complex(&nerve(1, &[1])).unwrap();
        assert_eq!(reduced_cohomology(&d, Field::Rationals), vec![(-1, 0), (0, 0)]);
        let d = dual_complex(&nerve(3, &[1, 2, 4, 3, 5, 6])).unwrap();
        assert!(d.is_closed());
        assert_eq!(reduced_cohomology(&d, Field::Rationals), vec![(-1, 0), (0, 0), (1, 1)]);
        let d = dual_complex(&nerve(3, &[1, 2, 4, 3, 5, 6, 7])).unwrap();
        assert!(reduced_cohomology(&d, Field::Prime(2)).iter().all(|&(_, x)| x == 0));
    }
}
