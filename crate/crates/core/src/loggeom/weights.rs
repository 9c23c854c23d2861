use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::line::{p1_log_hodge_complexes, LogHodgeComplexes};
use super::scenario::{HodgeTable, SncdScenario};
use super::P1Arrangement;
use crate::complexes::{ChainMap, Complex};
use crate::cubes::{CubeDiagram, FilteredCube, Vertex};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::filtered::{decalage, spectral_sequence, whitehead_tower, FilteredComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Track {
    DeRham,
    HodgeGraded,
    HodgeFiltered,
}

impl Track {
    pub const ALL: [Track; 3] = [Track::DeRham, Track::HodgeGraded, Track::HodgeFiltered];

    pub fn name(&self) -> &'static str {
        match self {
            Track::DeRham => "de-rham",
            Track::HodgeGraded => "hodge-graded",
            Track::HodgeFiltered => "hodge-filtered",
        }
    }
}

/// Dimensions keyed by a pair of degrees.
pub type DimTable = BTreeMap<(i64, i64), usize>;

/// One weight-filtered complex with its invariants. `index` is the internal
/// Hodge degree `j` on the graded track and the level `a` of `F^a` on the
/// filtered track.
#[derive(Clone, Debug)]
pub struct TrackReport {
    pub track: Track,
    pub index: Option<i64>,
    pub filtered: FilteredComplex,
    /// `dim Gr^W_w H^m`, keyed by `(w, m)`, nonzero only.
    pub graded: BTreeMap<(i64, i64), usize>,
    /// `dim E_1^{p,q}` in the decreasing convention `p = −w`, nonzero only.
    pub e1: BTreeMap<(i64, i64), usize>,
    pub cohomology: BTreeMap<i64, usize>,
}

impl TrackReport {
    pub fn new(track: Track, index: Option<i64>, filtered: FilteredComplex) -> TrackReport {
        let graded = filtered.graded_cohomology();
        let e1 = spectral_sequence(&filtered, 1).page(1);
        let cohomology = filtered.ambient().cohomology_profile();
        TrackReport { track, index, filtered, graded, e1, cohomology }
    }

    /// `Σ_w dim Gr^W_w H^m = dim H^m` for every `m`.
    pub fn sums_match(&self) -> bool {
        let mut sums: BTreeMap<i64, usize> = BTreeMap::new();
        for (&(_, m), &d) in &self.graded {
            *sums.entry(m).or_default() += d;
        }
        sums == self.cohomology
    }

    /// `Σ (−1)^m dim Gr^W_w H^m` against the Euler characteristic.
    pub fn euler_conserved(&self) -> bool {
        let graded: i64 = self.graded.iter().map(|(&(_, m), &d)| if m % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        graded == self.filtered.ambient().euler_characteristic()
    }
}

#[derive(Clone, Debug, Default)]
pub struct WeightReport {
    pub tracks: Vec<TrackReport>,
}

impl WeightReport {
    pub fn track(&self, track: Track, index: Option<i64>) -> Option<&TrackReport> {
        self.tracks.iter().find(|t| t.track == track && t.index == index)
    }

    /// The dimension tables only, keyed by `(track, index)`.
    pub fn tables(&self) -> BTreeMap<(Track, Option<i64>), (DimTable, DimTable)> {
        self.tracks.iter().map(|t| ((t.track, t.index), (t.graded.clone(), t.e1.clone()))).collect()
    }

    pub fn sums_match(&self) -> bool {
        self.tracks.iter().all(|t| t.sums_match() && t.euler_conserved())
    }
}

/// One `(p, q)` summand placed in a fixed degree of every vertex.
#[derive(Clone, Copy, Debug)]
struct Block {
    p: i64,
    q: i64,
    degree: i64,
}

/// Formal complexes with the given block layout at every vertex of the
/// cube, and the block-diagonal edge maps produced by `edge`.
fn formal_cube(
    scn: &SncdScenario,
    blocks: &[Block],
    vertex_stratum: impl Fn(Vertex) -> u32,
    edge: impl Fn(Vertex, Vertex, i64, i64) -> Mat,
) -> Result<FilteredCube> {
    let field = scn.field;
    let r = scn.r;
    let lo = blocks.iter().map(|b| b.degree).min().unwrap_or(0);
    let hi = blocks.iter().map(|b| b.degree).max().unwrap_or(0);
    let layout = |s: Vertex, n: i64| -> Vec<(Block, usize)> {
        blocks.iter().filter(|b| b.degree == n).map(|&b| (b, scn.dim(vertex_stratum(s), b.p, b.q))).collect()
    };
    let vertices: Vec<Complex> = (0..(1u32 << r))
        .map(|s| Complex::formal(field, lo, (lo..=hi).map(|n| layout(s, n).iter().map(|x| x.1).sum()).collect()))
        .collect();
    let mut edges = BTreeMap::new();
    for s in 0..(1u32 << r) {
        for i in (0..r).filter(|i| s & (1 << i) == 0) {
            let t = s | 1 << i;
            let maps = (lo..=hi)
                .map(|n| {
                    let parts: Vec<Mat> = layout(s, n).iter().map(|(b, _)| edge(s, t, b.p, b.q)).collect();
                    let refs: Vec<&Mat> = parts.iter().collect();
                    (n, Mat::block_diag(field, &refs))
                })
                .collect();
            edges.insert((s, i), ChainMap::new(vertices[s as usize].clone(), vertices[t as usize].clone(), maps)?);
        }
    }
    let cube = CubeDiagram::new(r, vertices, edges)?;
    let filtrations = cube.vertices().iter().map(whitehead_tower).collect();
    FilteredCube::new(cube, filtrations)
}

/// `⊕_{j ∈ js} V_I^{(j)}` with `V_I^{(j)} = ⊕_q H^q(D_I, Ω^{n−j})^∨` in degree `n + j − q`.
fn log_blocks(n: i64, js: &[i64]) -> Vec<Block> {
    js.iter().flat_map(|&j| (0..=n).map(move |q| Block { p: n - j, q, degree: n + j - q })).collect()
}

/// `⊕_{p ∈ ps} H^q(D_I, Ω^p)` in degree `p + q`.
fn hodge_blocks(n: i64, ps: &[i64]) -> Vec<Block> {
    ps.iter().flat_map(|&p| (0..=n).map(move |q| Block { p, q, degree: p + q })).collect()
}

/// Weight-filtered log cohomology of `X − D` for the internal degrees `js`:
/// the cube `S ↦ V_{[r]−S}` of dualized Hodge pieces of the strata with
/// transposed pullbacks as edges, each vertex filtered by its Whitehead
/// tower, totalized by the total cofiber.
pub fn log_weight_complex(scn: &SncdScenario, js: &[i64]) -> Result<FilteredComplex> {
    let full = scn.full();
    let cube = formal_cube(scn, &log_blocks(scn.n, js), |s| full & !s, |s, t, p, q| {
        scn.pullback(full & !t, full & !s, p, q).transpose()
    })?;
    Ok(cube.total_cofiber())
}

/// Weight-filtered compactly supported cohomology of `X − D` for the Hodge
/// degrees `ps`: total fiber of `I ↦ ⊕_{p ∈ ps} H^•(D_I, Ω^p)` under pullback.
pub fn compact_weight_complex(scn: &SncdScenario, ps: &[i64]) -> Result<FilteredComplex> {
    let cube = formal_cube(scn, &hodge_blocks(scn.n, ps), |s| s, |s, t, p, q| scn.pullback(s, t, p, q))?;
    Ok(cube.total_fiber())
}

fn track_reports(
    n: i64,
    track: Track,
    mut build: impl FnMut(&[i64]) -> Result<FilteredComplex>,
) -> Result<Vec<TrackReport>> {
    let all: Vec<i64> = (0..=n).collect();
    match track {
        Track::DeRham => Ok(vec![TrackReport::new(track, None, build(&all)?)]),
        Track::HodgeGraded => all.iter().map(|&j| Ok(TrackReport::new(track, Some(j), build(&[j])?))).collect(),
        Track::HodgeFiltered => all
            .iter()
            .map(|&a| Ok(TrackReport::new(track, Some(a), build(&(a..=n).collect::<Vec<_>>())?)))
            .collect(),
    }
}

/// The weight side of the comparison, on any valid scenario.
pub fn weight_side(scn: &SncdScenario, tracks: &[Track]) -> Result<WeightReport> {
    scn.validate()?;
    let mut out = WeightReport::default();
    for &t in tracks {
        out.tracks.extend(track_reports(scn.n, t, |js| log_weight_complex(scn, js))?);
    }
    Ok(out)
}

/// Weight filtrations on compactly supported cohomology; on the graded
/// track the index is the Hodge degree `p`.
pub fn compact_weight_side(scn: &SncdScenario, tracks: &[Track]) -> Result<WeightReport> {
    scn.validate()?;
    let mut out = WeightReport::default();
    for &t in tracks {
        out.tracks.extend(track_reports(scn.n, t, |ps| compact_weight_complex(scn, ps))?);
    }
    Ok(out)
}

/// `Gr^W_0` of compactly supported cohomology: the total fiber of the cube
/// `I ↦ Γ(D_I, O) = H^0(D_I, O)` under pullback.
pub fn grw0_compactly_supported(scn: &SncdScenario, coefficients: Field) -> Result<Complex> {
    if coefficients != scn.field {
        return Err(Error::Unsupported(format!(
            "coefficients {coefficients} differ from the scenario field {}",
            scn.field
        )));
    }
    scn.validate()?;
    let blocks = [Block { p: 0, q: 0, degree: 0 }];
    let cube = formal_cube(scn, &blocks, |s| s, |s, t, p, q| scn.pullback(s, t, p, q))?;
    Ok(cube.cube.total_fiber())
}

/// The décalage of the pole-order filtration on the explicit model.
pub fn pole_order_side(arr: &P1Arrangement, tracks: &[Track]) -> Result<WeightReport> {
    let LogHodgeComplexes { de_rham, hodge } = p1_log_hodge_complexes(arr)?;
    let mut out = WeightReport::default();
    for &t in tracks {
        match t {
            Track::DeRham => out.tracks.push(TrackReport::new(t, None, decalage(&de_rham))),
            Track::HodgeGraded => {
                for (&j, f) in hodge.iter() {
                    out.tracks.push(TrackReport::new(t, Some(j), decalage(f)));
                }
            }
            Track::HodgeFiltered => {
                // F^0 is everything, F^1 the 1-forms
                out.tracks.push(TrackReport::new(t, Some(0), decalage(&de_rham)));
                let top = hodge.get(1).expect("internal degree 1");
                out.tracks.push(TrackReport::new(t, Some(1), decalage(top)));
            }
        }
    }
    Ok(out)
}

/// Pole-order side for a scenario; only explicit-mode scenarios carry the
/// geometry it needs.
pub fn pole_order_side_scenario(scn: &SncdScenario, tracks: &[Track]) -> Result<WeightReport> {
    let arr = scn
        .arrangement
        .as_ref()
        .ok_or_else(|| Error::Unsupported("the pole-order side needs an explicit-mode scenario".into()))?;
    pole_order_side(arr, tracks)
}

/// Dimensions of `Hod^j(X)[−shift]` over `lo..=hi`: `H^q(X, Ω^j)` in degree `j + q + shift`.
fn formal_hod(x: &HodgeTable, j: i64, shift: i64, lo: i64, hi: i64) -> Vec<usize> {
    (lo..=hi).map(|d| if j < 0 { 0 } else { x.dim(j, d - shift - j) }).collect()
}

/// Weight-graded Hodge cohomology of the projective cone over `X`, from the
/// abstract blowup square: `Hod^j(C) = fib(Hod^j(P) ⊕ Hod^j(pt) → Hod^j(X))`
/// with `P = P_X(L ⊕ O)`, `Hod^j(P) = Hod^j(X) ⊕ Hod^{j−1}(X)[−2]`.
///
/// Entries are keyed `(i, j, m)` with `i = w − j` and `m` the cohomological
/// degree; nonzero only.
pub fn cone_weights(x: &HodgeTable, base: Field) -> Result<BTreeMap<(i64, i64, i64), usize>> {
    let n = x.max_degree();
    if x.dim(0, 0) != 1 {
        return Err(Error::scenario("hodge", format!("h^00 must be 1, got {}", x.dim(0, 0))));
    }
    if n == 0 {
        return Err(Error::scenario("hodge", "X is a point; the cone would not be a cone over a positive-dimensional base"));
    }
    let mut out = BTreeMap::new();
    for j in 0..=n + 1 {
        let (lo, hi) = (0, 2 * n + 2);
        let own = formal_hod(x, j, 0, lo, hi);
        let twisted = formal_hod(x, j - 1, 2, lo, hi);
        let pt: Vec<usize> = (lo..=hi).map(|d| usize::from(j == 0 && d == 0)).collect();
        let src_dims: Vec<usize> = (0..own.len()).map(|k| own[k] + twisted[k] + pt[k]).collect();
        let src = Complex::formal(base, lo, src_dims);
        let tgt = Complex::formal(base, lo, own.clone());
        let maps = (lo..=hi)
            .map(|d| {
                let k = (d - lo) as usize;
                let mut m = Mat::zeros(base, own[k], own[k] + twisted[k] + pt[k]);
                m.put(0, 0, &Mat::identity(base, own[k]));
                if pt[k] == 1 {
                    // the unit lands on H^0(X, O), the first basis vector in degree 0
                    m.set(0, own[k] + twisted[k], base.one());
                }
                (d, m)
            })
            .collect();
        let f = ChainMap::new(src, tgt, maps)?;
        let cube = CubeDiagram::arrow(&f);
        let filtrations = cube.vertices().iter().map(whitehead_tower).collect();
        let fib = FilteredCube::new(cube, filtrations)?.total_fiber();
        for ((w, m), d) in fib.graded_cohomology() {
            *out.entry((w - j, j, m)).or_insert(0) += d;
        }
    }
    Ok(out)
}

/// The closed form: the base field at `(0, 0)` in degree `0`, and
/// `H^{i−1}(X, Ω^{j−1})` in degree `i + j` otherwise.
pub fn cone_closed_form(x: &HodgeTable) -> BTreeMap<(i64, i64, i64), usize> {
    let mut out = BTreeMap::new();
    out.insert((0, 0, 0), 1);
    for ((p, q), d) in x.entries() {
        out.insert((q + 1, p + 1, p + q + 2), d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(field: Field, k: usize) -> P1Arrangement {
        P1Arrangement::new(field, P1Arrangement::standard_points(field, k).unwrap()).unwrap()
    }

    #[test]
    fn empty_divisor_is_whitehead_of_the_line() {
        let scn = SncdScenario::from_arrangement(&line(Field::Rationals, 0));
        let rep = weight_side(&scn, &[Track::DeRham]).unwrap();
        assert_eq!(rep.tracks[0].graded, [((0, 0), 1), ((2, 2), 1)].into());
        assert!(rep.sums_match());
    }

    #[test]
    fn three_points_weight_side() {
        let scn = SncdScenario::from_arrangement(&line(Field::Rationals, 3));
        let rep = weight_side(&scn, &[Track::DeRham]).unwrap();
        assert_eq!(rep.tracks[0].graded, [((0, 0), 1), ((2, 1), 2)].into());
    }

    #[test]
    fn pole_side_agrees_on_small_lines() {
        for field in [Field::Rationals, Field::Prime(3)] {
            for k in 0..=3 {
                let arr = line(field, k);
                let w = weight_side(&SncdScenario::from_arrangement(&arr), &Track::ALL).unwrap();
                let p = pole_order_side(&arr, &Track::ALL).unwrap();
                assert_eq!(w.tables(), p.tables(), "k = {k} over {field}");
            }
        }
    }

    #[test]
    fn affine_line_has_only_weight_zero() {
        let p = pole_order_side(&line(Field::Prime(5), 1), &[Track::DeRham]).unwrap();
        assert_eq!(p.tracks[0].graded, [((0, 0), 1)].into());
    }

    #[test]
    fn cone_over_line_and_plane() {
        let q = Field::Rationals;
        for n in 1..=2 {
            let x = HodgeTable::projective_space(n);
            let got = cone_weights(&x, q).unwrap();
            assert_eq!(got, cone_closed_form(&x));
            assert_eq!(got.len(), n as usize + 2);
        }
        assert!(cone_weights(&HodgeTable::projective_space(0), q).is_err());
        assert!(cone_weights(&HodgeTable::from_entries(&[(0, 0, 2), (1, 1, 2)]), q).is_err());
    }
}
