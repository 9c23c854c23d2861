use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::arrangement::{P1Arrangement, ProjPoint};
use crate::cubes::popcount;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};

pub const SCHEMA_VERSION: u32 = 1;

/// `dim H^q(Z, Ω^p)` keyed by `(p, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgeTable {
    entries: BTreeMap<(i64, i64), usize>,
}

impl HodgeTable {
    pub fn new() -> HodgeTable {
        HodgeTable::default()
    }

    pub fn from_entries(entries: &[(i64, i64, usize)]) -> HodgeTable {
        let mut t = HodgeTable::new();
        for &(p, q, d) in entries {
            t.set(p, q, d);
        }
        t
    }

    /// Projective space `P^n`: `h^{pp} = 1`.
    pub fn projective_space(n: i64) -> HodgeTable {
        HodgeTable::from_entries(&(0..=n).map(|p| (p, p, 1)).collect::<Vec<_>>())
    }

    pub fn set(&mut self, p: i64, q: i64, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(p, q));
        } else {
            self.entries.insert((p, q), dim);
        }
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_degree(&self) -> i64 {
        self.entries.keys().map(|&(p, q)| p.max(q)).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tabulated,
    Explicit,
}

/// Tabulated Hodge data of the strata `D_I` of an snc pair, with the
/// restriction maps between them.
///
/// Subsets `I ⊆ [r]` are bitmasks; strata that are not listed are empty.
/// Pullbacks are stored for covering pairs `J ⊂ I`, `|I − J| = 1`, on the
/// direct sum over components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncdScenario {
    pub field: Field,
    pub n: i64,
    pub r: usize,
    pub mode: Mode,
    pub strata: BTreeMap<u32, Vec<HodgeTable>>,
    pub pullbacks: BTreeMap<(u32, u32, i64, i64), Mat>,
    pub arrangement: Option<P1Arrangement>,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawComponent {
    hodge: Vec<[i64; 3]>,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawStratum {
    subset: Vec<usize>,
    components: Vec<RawComponent>,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawPullback {
    from: Vec<usize>,
    to: Vec<usize>,
    p: i64,
    q: i64,
    matrix: Vec<Vec<Value>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    version: u32,
    field: String,
    mode: Mode,
    #[serde(default)]
    n: Option<i64>,
    #[serde(default)]
    components: Option<usize>,
    #[serde(default)]
    strata: Vec<RawStratum>,
    #[serde(default)]
    pullbacks: Vec<RawPullback>,
    #[serde(default)]
    points: Option<Vec<Value>>,
    #[serde(default)]
    expect: Option<Value>,
    #[serde(default)]
    name: Option<String>,
}

fn mask_of(subset: &[usize], r: usize, path: &str) -> Result<u32> {
    let mut m = 0u32;
    for (k, &i) in subset.iter().enumerate() {
        if i == 0 || i > r {
            return Err(Error::scenario(format!("{path}[{k}]"), format!("component label {i} outside 1..={r}")));
        }
        if m & (1 << (i - 1)) != 0 {
            return Err(Error::scenario(format!("{path}[{k}]"), format!("component {i} repeated")));
        }
        m |= 1 << (i - 1);
    }
    Ok(m)
}

fn labels(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

impl SncdScenario {
    /// Parses and validates a scenario file; the optional `expect` block is
    /// returned alongside.
    pub fn from_json(text: &str) -> Result<(SncdScenario, Option<Value>)> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.version != SCHEMA_VERSION {
            return Err(Error::scenario("version", format!("unsupported version {}", raw.version)));
        }
        let field: Field = raw.field.parse().map_err(|e: Error| Error::scenario("field", e.to_string()))?;
        let expect = raw.expect.clone();
        let scn = match raw.mode {
            Mode::Explicit => {
                let pts = raw.points.as_ref().ok_or_else(|| Error::scenario("points", "explicit mode needs points"))?;
                let mut points = Vec::new();
                for (i, v) in pts.iter().enumerate() {
                    let p = match v {
                        Value::String(s) => ProjPoint::parse(field, s),
                        other => field.scalar_from_json(other).map(ProjPoint::Affine),
                    }
                    .map_err(|e| Error::scenario(format!("points[{i}]"), e.to_string()))?;
                    points.push(p);
                }
                let arr = P1Arrangement::new(field, points)?;
                if raw.n.is_some_and(|n| n != 1) {
                    return Err(Error::scenario("n", "explicit mode is the projective line, n = 1"));
                }
                if raw.components.is_some_and(|r| r != arr.k()) {
                    return Err(Error::scenario("components", "must equal the number of points"));
                }
                SncdScenario::from_arrangement(&arr)
            }
            Mode::Tabulated => {
                let n = raw.n.ok_or_else(|| Error::scenario("n", "missing"))?;
                let r = raw.components.ok_or_else(|| Error::scenario("components", "missing"))?;
                if n < 0 {
                    return Err(Error::scenario("n", "must be nonnegative"));
                }
                if r > 16 {
                    return Err(Error::scenario("components", "at most 16 components are supported"));
                }
                let mut strata = BTreeMap::new();
                for (si, s) in raw.strata.iter().enumerate() {
                    let path = format!("strata[{si}]");
                    let mask = mask_of(&s.subset, r, &format!("{path}.subset"))?;
                    if strata.contains_key(&mask) {
                        return Err(Error::scenario(format!("{path}.subset"), "stratum listed twice"));
                    }
                    let mut comps = Vec::new();
                    for (ci, c) in s.components.iter().enumerate() {
                        let mut t = HodgeTable::new();
                        for (ei, &[p, q, d]) in c.hodge.iter().enumerate() {
                            let epath = format!("{path}.components[{ci}].hodge[{ei}]");
                            let dim = n - popcount(mask);
                            if p < 0 || q < 0 || d < 0 || p > dim || q > dim {
                                return Err(Error::scenario(epath, format!("entry out of range for a stratum of dimension {dim}")));
                            }
                            if t.dim(p, q) != 0 {
                                return Err(Error::scenario(epath, "repeated (p, q)"));
                            }
                            t.set(p, q, d as usize);
                        }
                        comps.push(t);
                    }
                    strata.insert(mask, comps);
                }
                if !strata.contains_key(&0) {
                    return Err(Error::scenario("strata", "the stratum for the empty subset (X itself) is required"));
                }
                let mut pullbacks = BTreeMap::new();
                let mut origin = BTreeMap::new();
                for (pi, pb) in raw.pullbacks.iter().enumerate() {
                    let path = format!("pullbacks[{pi}]");
                    let from = mask_of(&pb.from, r, &format!("{path}.from"))?;
                    let to = mask_of(&pb.to, r, &format!("{path}.to"))?;
                    if from & !to != 0 || popcount(to) != popcount(from) + 1 {
                        return Err(Error::scenario(
                            format!("{path}.to"),
                            "pullbacks go from J to I = J plus one component",
                        ));
                    }
                    let mut rows = Vec::new();
                    for (ri, row) in pb.matrix.iter().enumerate() {
                        let mut out = Vec::new();
                        for (ci, v) in row.iter().enumerate() {
                            out.push(field.scalar_from_json(v).map_err(|e| {
                                Error::scenario(format!("{path}.matrix[{ri}][{ci}]"), e.to_string())
                            })?);
                        }
                        rows.push(out);
                    }
                    let cols = rows.first().map_or(0, |r| r.len());
                    let m = Mat::from_rows(field, rows, cols)
                        .map_err(|e| Error::scenario(format!("{path}.matrix"), e.to_string()))?;
                    let key = (from, to, pb.p, pb.q);
                    if pullbacks.insert(key, m).is_some() {
                        return Err(Error::scenario(path, "pullback listed twice"));
                    }
                    origin.insert(key, pi);
                }
                let scn = SncdScenario { field, n, r, mode: Mode::Tabulated, strata, pullbacks, arrangement: None };
                scn.validate_with(&origin)?;
                scn
            }
        };
        Ok((scn, expect))
    }

    /// Tabulated data of the projective line with its marked points.
    pub fn from_arrangement(arr: &P1Arrangement) -> SncdScenario {
        let field = arr.field();
        let k = arr.k();
        let mut strata = BTreeMap::new();
        strata.insert(0, vec![HodgeTable::projective_space(1)]);
        let mut pullbacks = BTreeMap::new();
        for i in 0..k {
            strata.insert(1 << i, vec![HodgeTable::projective_space(0)]);
            pullbacks.insert((0, 1 << i, 0, 0), Mat::identity(field, 1));
        }
        SncdScenario { field, n: 1, r: k, mode: Mode::Explicit, strata, pullbacks, arrangement: Some(arr.clone()) }
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.r) - 1) as u32
    }

    pub fn components(&self, mask: u32) -> &[HodgeTable] {
        self.strata.get(&mask).map_or(&[], |v| v.as_slice())
    }

    /// `dim H^q(D_I, Ω^p)`, summed over components.
    pub fn dim(&self, mask: u32, p: i64, q: i64) -> usize {
        self.components(mask).iter().map(|t| t.dim(p, q)).sum()
    }

    /// `(p, q)` pairs with a nonzero entry somewhere.
    pub fn hodge_support(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> =
            self.strata.values().flatten().flat_map(|t| t.entries().map(|(k, _)| k)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Restriction `H^q(D_J, Ω^p) → H^q(D_I, Ω^p)` for `J ⊆ I`, composing
    /// covering pullbacks along the path adding components in increasing
    /// order.
    pub fn pullback(&self, from: u32, to: u32, p: i64, q: i64) -> Mat {
        let (a, b) = (self.dim(from, p, q), self.dim(to, p, q));
        if from == to {
            return Mat::identity(self.field, a);
        }
        if a == 0 || b == 0 {
            return Mat::zeros(self.field, b, a);
        }
        if popcount(to) == popcount(from) + 1 {
            return self.pullbacks.get(&(from, to, p, q)).cloned().unwrap_or_else(|| Mat::zeros(self.field, b, a));
        }
        let i = (0..self.r).find(|&i| to & !from & (1 << i) != 0).expect("J is a proper subset");
        let mid = from | 1 << i;
        self.pullback(mid, to, p, q).mul(&self.pullback(from, mid, p, q))
    }

    /// Checks shapes, presence of covering pullbacks and strict
    /// functoriality on every square face.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(&BTreeMap::new())
    }

    fn validate_with(&self, origin: &BTreeMap<(u32, u32, i64, i64), usize>) -> Result<()> {
        let path = |key: &(u32, u32, i64, i64)| match origin.get(key) {
            Some(i) => format!("pullbacks[{i}]"),
            None => format!("pullbacks(from {:?} to {:?}, p={}, q={})", labels(key.0), labels(key.1), key.2, key.3),
        };
        for (key, m) in &self.pullbacks {
            let (from, to, p, q) = *key;
            if m.shape() != (self.dim(to, p, q), self.dim(from, p, q)) && !(m.rows() == 0 || m.cols() == 0) {
                return Err(Error::scenario(
                    format!("{}.matrix", path(key)),
                    format!(
                        "expected a {}×{} matrix, got {}×{}",
                        self.dim(to, p, q),
                        self.dim(from, p, q),
                        m.rows(),
                        m.cols()
                    ),
                ));
            }
        }
        let support = self.hodge_support();
        for from in 0..=self.full() {
            for i in (0..self.r).filter(|i| from & (1 << i) == 0) {
                let to = from | 1 << i;
                for &(p, q) in &support {
                    if self.dim(from, p, q) > 0 && self.dim(to, p, q) > 0 && !self.pullbacks.contains_key(&(from, to, p, q)) {
                        return Err(Error::scenario(
                            "pullbacks",
                            format!("missing pullback from {:?} to {:?} for (p, q) = ({p}, {q})", labels(from), labels(to)),
                        ));
                    }
                }
                for j in (i + 1..self.r).filter(|j| from & (1 << j) == 0) {
                    let top = from | 1 << i | 1 << j;
                    let (mi, mj) = (from | 1 << i, from | 1 << j);
                    for &(p, q) in &support {
                        let via_i = self.pullback(mi, top, p, q).mul(&self.pullback(from, mi, p, q));
                        let via_j = self.pullback(mj, top, p, q).mul(&self.pullback(from, mj, p, q));
                        if via_i != via_j {
                            let key = (mj, top, p, q);
                            return Err(Error::scenario(
                                format!("{}.matrix", path(&key)),
                                format!(
                                    "restrictions from {:?} to {:?} do not commute for (p, q) = ({p}, {q})",
                                    labels(from),
                                    labels(top)
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabels components: component `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> SncdScenario {
        let map = |m: u32| (0..self.r).filter(|i| m & (1 << i) != 0).fold(0u32, |acc, i| acc | 1 << perm[i]);
        let strata = self.strata.iter().map(|(&m, c)| (map(m), c.clone())).collect();
        let pullbacks = self.pullbacks.iter().map(|(&(a, b, p, q), m)| ((map(a), map(b), p, q), m.clone())).collect();
        let arrangement = self.arrangement.as_ref().map(|arr| {
            let mut pts = arr.points().to_vec();
            for (i, p) in arr.points().iter().enumerate() {
                pts[perm[i]] = p.clone();
            }
            P1Arrangement::new(arr.field(), pts).expect("permuted points stay distinct")
        });
        SncdScenario { strata, pullbacks, arrangement, ..self.clone() }
    }

    /// Serializes back to the scenario file format.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("version".into(), SCHEMA_VERSION.into());
        obj.insert("field".into(), self.field.to_string().into());
        obj.insert("mode".into(), serde_json::to_value(self.mode).expect("mode"));
        if let (Mode::Explicit, Some(arr)) = (self.mode, &self.arrangement) {
            obj.insert("points".into(), arr.points().iter().map(|p| p.to_json(self.field)).collect());
            return Value::Object(obj);
        }
        obj.insert("n".into(), self.n.into());
        obj.insert("components".into(), self.r.into());
        let strata: Vec<Value> = self
            .strata
            .iter()
            .map(|(&m, comps)| {
                serde_json::json!({
                    "subset": labels(m),
                    "components": comps.iter().map(|t| serde_json::json!({
                        "hodge": t.entries().map(|((p, q), d)| vec![p, q, d as i64]).collect::<Vec<_>>()
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        obj.insert("strata".into(), strata.into());
        let pbs: Vec<Value> = self
            .pullbacks
            .iter()
            .map(|(&(a, b, p, q), m)| {
                let rows: Vec<Vec<Value>> =
                    m.row_list().iter().map(|r| r.iter().map(|x| self.field.scalar_to_json(x)).collect()).collect();
                serde_json::json!({"from": labels(a), "to": labels(b), "p": p, "q": q, "matrix": rows})
            })
            .collect();
        obj.insert("pullbacks".into(), pbs.into());
        Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = r#"{
        "version": 1, "field": "Q", "mode": "tabulated", "n": 2, "components": 2,
        "strata": [
            {"subset": [], "components": [{"hodge": [[0,0,1],[1,1,1],[2,2,1]]}]},
            {"subset": [1], "components": [{"hodge": [[0,0,1],[1,1,1]]}]},
            {"subset": [2], "components": [{"hodge": [[0,0,1],[1,1,1]]}]},
            {"subset": [1,2], "components": [{"hodge": [[0,0,1]]}]}
        ],
        "pullbacks": [
            {"from": [], "to": [1], "p": 0, "q": 0, "matrix": [[1]]},
            {"from": [], "to": [2], "p": 0, "q": 0, "matrix": [[1]]},
            {"from": [], "to": [1], "p": 1, "q": 1, "matrix": [[1]]},
            {"from": [], "to": [2], "p": 1, "q": 1, "matrix": [[1]]},
            {"from": [1], "to": [1,2], "p": 0, "q": 0, "matrix": [[1]]},
            {"from": [2], "to": [1,2], "p": 0, "q": 0, "matrix": [[MARK]]}
        ]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let (s, _) = SncdScenario::from_json(&TRIANGLE.replace("MARK", "1")).unwrap();
        assert_eq!(s.r, 2);
        assert_eq!(s.dim(0, 1, 1), 1);
        assert_eq!(s.pullback(0, 3, 0, 0), Mat::identity(Field::Rationals, 1));
        let (back, _) = SncdScenario::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn non_functorial_pullbacks_name_the_matrix() {
        let err = SncdScenario::from_json(&TRIANGLE.replace("MARK", "2")).unwrap_err();
        match err {
            Error::Scenario { path, .. } => assert_eq!(path, "pullbacks[5].matrix"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_pullback_is_rejected() {
        let text = TRIANGLE.replace("MARK", "1").replace(r#"{"from": [], "to": [2], "p": 1, "q": 1, "matrix": [[1]]},"#, "");
        assert!(matches!(SncdScenario::from_json(&text), Err(Error::Scenario { .. })));
    }

    #[test]
    fn explicit_mode_and_permutation() {
        let text = r#"{"version": 1, "field": "F5", "mode": "explicit", "points": [0, 3, "inf"]}"#;
        let (s, _) = SncdScenario::from_json(text).unwrap();
        assert_eq!(s.r, 3);
        let p = s.permute(&[2, 0, 1]);
        assert_eq!(p.arrangement.as_ref().unwrap().points()[0], ProjPoint::Affine(Field::Prime(5).from_i64(3)));
        let dup = r#"{"version": 1, "field": "F5", "mode": "explicit", "points": [0, 0]}"#;
        match SncdScenario::from_json(dup).unwrap_err() {
            Error::Scenario { path, .. } => assert_eq!(path, "points[1]"),
            e => panic!("unexpected {e:?}"),
        }
    }
}
