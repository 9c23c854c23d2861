//! Randomized property suites, shared by the `selftest` command and the
//! acceptance tests.

use rand::Rng;

use crate::complexes::{hom_complex, shift, Complex, Subcomplex};
use crate::cubes::{cube_shift, cube_unshift, random_cube};
use crate::exactalg::{Field, Subspace};
use crate::filtered::{
    decalage, diagonal_connective_cover, filtered_hom_classes, filtered_quasi_iso, is_diagonal_connective,
    spectral_sequence, stable_page, whitehead_tower, Direction, FilteredComplex,
};
use crate::random::{random_complex, random_filtered};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// Trial indices that failed, at most a handful.
    pub failures: Vec<usize>,
}

impl SuiteResult {
    fn run(name: &str, trials: usize, mut trial: impl FnMut(usize) -> bool) -> SuiteResult {
        let mut failures = Vec::new();
        let mut passed = 0;
        for t in 0..trials {
            if trial(t) {
                passed += 1;
            } else if failures.len() < 8 {
                failures.push(t);
            }
        }
        SuiteResult { name: name.into(), trials, passed, failures }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

fn field_for(t: usize) -> Field {
    if t.is_multiple_of(2) {
        Field::Rationals
    } else {
        Field::Prime(5)
    }
}

/// `dim E_r^{p,q}(Dec F) = dim E_{r+1}^{2p+q, −p}(F)` for every `r ≥ 1` up to
/// the stable page of both sides.
pub fn decalage_page_shift_holds(f: &FilteredComplex) -> bool {
    let dec = decalage(f);
    let r_max = stable_page(&dec).max(stable_page(f));
    let ss_f = spectral_sequence(f, r_max + 1);
    let ss_d = spectral_sequence(&dec, r_max);
    (1..=r_max).all(|r| {
        let lhs = ss_d.page(r);
        let rhs: std::collections::BTreeMap<(i64, i64), usize> =
            ss_f.page(r + 1).into_iter().map(|((pp, qq), d)| ((-qq, pp + 2 * qq), d)).collect();
        lhs == rhs
    })
}

pub fn decalage_page_shift<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> SuiteResult {
    SuiteResult::run("decalage-page-shift", trials, |t| {
        let window = rng.gen_range(1..=4);
        let amplitude = rng.gen_range(0..=4);
        let f = random_filtered(field_for(t), 6, amplitude, window, rng);
        decalage_page_shift_holds(&f)
    })
}

/// Filtered homs between Whitehead towers agree with plain homs on `H^0`.
pub fn whitehead_full_faithfulness<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> SuiteResult {
    SuiteResult::run("whitehead-fully-faithful", trials, |t| {
        let field = field_for(t);
        let c = random_complex(field, rng.gen_range(-2..=1), rng.gen_range(0..=3), 3, rng);
        let d = random_complex(field, rng.gen_range(-2..=1), rng.gen_range(0..=3), 3, rng);
        let plain = hom_complex(&c, &d).cohomology_dim(0);
        filtered_hom_classes(&whitehead_tower(&c), &whitehead_tower(&d)) == plain
    })
}

/// Whether each decreasing graded piece `gr^q` has cohomology only in
/// degree `−q`, the shape of a Whitehead tower.
pub fn has_whitehead_shape(f: &FilteredComplex) -> bool {
    let f = f.with_direction(Direction::Decreasing);
    f.graded_pieces().iter().all(|(q, g)| g.complex.cohomology_profile().keys().all(|&n| n == -q))
}

/// A connective-cover filtration that is not literally the Whitehead tower:
/// `τ^{≤ −q} C` plus an acyclic summand entering early. It must be
/// diagonal-connective, have Whitehead shape, and be filtered
/// quasi-isomorphic to the Whitehead tower through the identity.
pub fn essential_image_trial<R: Rng + ?Sized>(field: Field, rng: &mut R) -> bool {
    let c = random_complex(field, 0, rng.gen_range(1..=3), 3, rng);
    let a = rng.gen_range(c.lo()..=c.hi());
    let x = rng.gen_range(1..=2);
    let e = Complex::new(field, a, vec![x, x], vec![crate::exactalg::Mat::identity(field, x)]).expect("cone of id");
    let total = Complex::direct_sum(&[&c, &e.widened(c.lo(), c.hi().max(a + 1))]);
    let w = whitehead_tower(&total);
    let (lo, hi) = w.inc_window();
    let cdims: Vec<usize> = total.degrees().map(|n| c.dim(n)).collect();
    let levels: Vec<Subcomplex> = (lo..=hi)
        .map(|p| {
            let spaces = total
                .degrees()
                .enumerate()
                .map(|(k, n)| {
                    let base = crate::complexes::smart_truncate(&c.widened(total.lo(), total.hi()), p).space(n);
                    let mut rows: Vec<Vec<_>> = base
                        .rows()
                        .into_iter()
                        .map(|mut v| {
                            v.resize(total.dim(n), field.zero());
                            v
                        })
                        .collect();
                    if p > a {
                        for i in cdims[k]..total.dim(n) {
                            let mut v = vec![field.zero(); total.dim(n)];
                            v[i] = field.one();
                            rows.push(v);
                        }
                    }
                    Subspace::span(field, total.dim(n), rows)
                })
                .collect();
            Subcomplex::new(&total, spaces).expect("truncation plus acyclic summand")
        })
        .collect();
    let Ok(g) = FilteredComplex::new(total.clone(), Direction::Increasing, lo, levels) else { return false };
    let id = crate::complexes::ChainMap::identity(&total);
    let dec = g.with_direction(Direction::Decreasing);
    let cover = diagonal_connective_cover(&dec).expect("decreasing");
    is_diagonal_connective(&dec)
        && is_diagonal_connective(&cover)
        && has_whitehead_shape(&g)
        && filtered_quasi_iso(&id, &g, &w).unwrap_or(false)
        // negative control: the one-step filtration only has this shape when H is in degree 0
        && has_whitehead_shape(&FilteredComplex::trivial(&total, 0)) == total.cohomology_profile().keys().all(|&n| n == 0)
}

pub fn whitehead_essential_image<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> SuiteResult {
    SuiteResult::run("whitehead-essential-image", trials, |t| essential_image_trial(field_for(t), rng))
}

/// `tcofib(shift P) ≃ P([r])` and `shift(P)(∅) ≃ unshift(P)([r])[−r] ≃ tfib P`.
pub fn cube_identities<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> SuiteResult {
    SuiteResult::run("cube-shift-identities", trials, |t| {
        let r = 1 + t % 3;
        let p = random_cube(field_for(t), r, 2, rng.gen_range(0..=2), rng);
        let s = cube_shift(&p);
        let u = cube_unshift(&p);
        let terminal = s.total_cofiber().cohomology_profile() == p.vertex(p.full()).cohomology_profile();
        let initial = s.vertex(0).cohomology_profile();
        let desusp = shift(u.vertex(u.full()), -(r as i64)).cohomology_profile();
        terminal && initial == desusp && initial == p.total_fiber().cohomology_profile()
    })
}

/// Trial counts of the full suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSizes {
    pub decalage: usize,
    pub faithfulness: usize,
    pub essential_image: usize,
    pub cubes: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { decalage: 200, faithfulness: 100, essential_image: 20, cubes: 60 }
    }
}

pub fn run_all<R: Rng + ?Sized>(rng: &mut R, sizes: SuiteSizes) -> Vec<SuiteResult> {
    vec![
        decalage_page_shift(rng, sizes.decalage),
        whitehead_full_faithfulness(rng, sizes.faithfulness),
        whitehead_essential_image(rng, sizes.essential_image),
        cube_identities(rng, sizes.cubes),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_suites_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sizes = SuiteSizes { decalage: 12, faithfulness: 8, essential_image: 4, cubes: 6 };
        for s in run_all(&mut rng, sizes) {
            assert!(s.ok(), "{s:?}");
        }
    }
}
