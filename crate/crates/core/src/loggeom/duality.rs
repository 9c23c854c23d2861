use std::collections::BTreeMap;

use super::arrangement::P1Arrangement;
use super::cech::CechModel;
use crate::complexes::{ChainMap, SubquotientComplex};
use crate::cubes::{FinitePoset, PosetPairing};
use crate::error::Result;
use crate::exactalg::Mat;

/// Outcome of the wedge-and-trace duality check over the poset of
/// subdivisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingVerdict {
    pub elements: usize,
    pub natural: bool,
    pub perfect: bool,
    /// Rank of the induced pairing `H^1(log) × H^1(c) → k` for the full divisor.
    pub h1_rank: usize,
    pub h1_dims: (usize, usize),
    pub failure: Option<String>,
}

impl PairingVerdict {
    pub fn ok(&self) -> bool {
        self.natural && self.perfect
    }
}

/// The pairing `Ω^•(log D_T) ⊗ Ω^•_c(log D_T') → k[−2]` for `T' ⊇ T`, over
/// the poset of subsets of the marked points ordered by reverse inclusion.
pub fn wedge_trace_pairing(arr: &P1Arrangement) -> Result<PosetPairing> {
    let m = CechModel::new(arr);
    let a = m.ambient();
    let count = 1usize << arr.k();
    let mut relations = Vec::new();
    for x in 0..count {
        for y in 0..count {
            // x ≤ y when T_y ⊆ T_x
            if y & !x == 0 {
                relations.push((x, y));
            }
        }
    }
    let poset = FinitePoset::from_relations(count, &relations)?;
    let logs: Vec<SubquotientComplex> = (0..count).map(|t| a.restrict(&m.log_sub(t as u32))).collect::<Result<_>>()?;
    let compacts: Vec<SubquotientComplex> =
        (0..count).map(|t| a.restrict(&m.compact_sub(t as u32))).collect::<Result<_>>()?;
    let id = ChainMap::identity(a);
    let ambient_forms: Vec<Mat> = (0..=2).map(|i| m.pairing_form(i)).collect();
    let mut f_maps = BTreeMap::new();
    let mut g_maps = BTreeMap::new();
    let mut forms = BTreeMap::new();
    for (x, y) in poset.relations() {
        if x != y {
            f_maps.insert((x, y), SubquotientComplex::induced_map(&id, &logs[y], &logs[x])?);
            g_maps.insert((x, y), SubquotientComplex::induced_map(&id, &compacts[x], &compacts[y])?);
        }
        let mut per_degree = BTreeMap::new();
        for i in 0..=2i64 {
            let (Some(fb), Some(ga)) = (logs[y].basis(i), compacts[x].basis(2 - i)) else { continue };
            if fb.rows() == 0 || ga.rows() == 0 {
                continue;
            }
            per_degree.insert(i, fb.mul(&ambient_forms[i as usize]).mul(&ga.transpose()));
        }
        forms.insert((x, y), per_degree);
    }
    Ok(PosetPairing {
        poset,
        f: logs.into_iter().map(|s| s.complex).collect(),
        g: compacts.into_iter().map(|s| s.complex).collect(),
        f_maps,
        g_maps,
        u: 2,
        forms,
    })
}

pub fn poincare_pairing_check(arr: &P1Arrangement) -> Result<PairingVerdict> {
    let pairing = wedge_trace_pairing(arr)?;
    let elements = pairing.poset.len();
    let (natural, failure) = match pairing.validate() {
        Ok(()) => (true, None),
        Err(e) => (false, Some(e.to_string())),
    };
    let perfect = natural && pairing.is_perfect()?;
    // the full divisor is the bottom element
    let bottom = elements - 1;
    let (f, g) = (&pairing.f[bottom], &pairing.g[bottom]);
    let hf = f.cohomology(1).representatives;
    let hg = g.cohomology(1).representatives;
    let h1_rank = if hf.rows() == 0 || hg.rows() == 0 {
        0
    } else {
        hf.mul(&pairing.form(bottom, bottom, 1)).mul(&hg.transpose()).rank()
    };
    Ok(PairingVerdict { elements, natural, perfect, h1_rank, h1_dims: (hf.rows(), hg.rows()), failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn line(field: Field, k: usize) -> P1Arrangement {
        P1Arrangement::new(field, P1Arrangement::standard_points(field, k).unwrap()).unwrap()
    }

    #[test]
    fn empty_divisor_pairs_h0_with_h2() {
        let v = poincare_pairing_check(&line(Field::Rationals, 0)).unwrap();
        assert!(v.ok(), "{v:?}");
    }

    #[test]
    fn three_points_full_rank() {
        let v = poincare_pairing_check(&line(Field::Rationals, 3)).unwrap();
        assert!(v.ok(), "{v:?}");
        assert_eq!(v.h1_dims, (2, 2));
        assert_eq!(v.h1_rank, 2);
    }
}
