//! Scenario runner. Every command builds a structured report (a JSON value
//! with sorted keys, so output bytes depend only on the inputs); the human
//! format is rendered from it.

pub mod selftest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::loggeom::{
    compact_weight_side, cone_closed_form, cone_weights, dual_complex, grw0_compactly_supported, pole_order_side,
    reduced_cohomology, weight_side, SncdScenario, Track, WeightReport, DUAL_COMPLEX_SHIFT,
};

pub const REPORT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Compare,
    Weights,
    Ss,
    DualComplex,
    Cone,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum TrackSelector {
    Dr,
    Hodge,
    HodgeFiltered,
    #[default]
    All,
}

impl TrackSelector {
    pub fn tracks(&self) -> Vec<Track> {
        match self {
            TrackSelector::Dr => vec![Track::DeRham],
            TrackSelector::Hodge => vec![Track::HodgeGraded],
            TrackSelector::HodgeFiltered => vec![Track::HodgeFiltered],
            TrackSelector::All => Track::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Structured,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Option<PathBuf>,
    pub track: TrackSelector,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig { command, scenario: None, track: TrackSelector::All, format: Format::Human, seed: 0, out: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub rendered: String,
}

/// Runs one command. Invalid input yields exit code 2 and a report naming
/// the offending scenario field.
pub fn run(cfg: &RunConfig) -> Outcome {
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(e) => invalid_report(cfg, &e),
    };
    let code = match report["status"].as_str() {
        Some("ok") => EXIT_OK,
        Some("mismatch") => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    };
    let rendered = match cfg.format {
        Format::Structured => serde_json::to_string_pretty(&report).expect("json") + "\n",
        Format::Human => render_human(&report),
    };
    Outcome { code, report, rendered }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Compare => "compare",
        Command::Weights => "weights",
        Command::Ss => "ss",
        Command::DualComplex => "dual-complex",
        Command::Cone => "cone",
        Command::Selftest => "selftest",
    }
}

fn invalid_report(cfg: &RunConfig, e: &Error) -> Value {
    let (path, reason) = match e {
        Error::Scenario { path, reason } => (Value::from(path.clone()), reason.clone()),
        other => (Value::Null, other.to_string()),
    };
    json!({
        "version": REPORT_VERSION,
        "command": command_name(cfg.command),
        "status": "invalid",
        "error": {"path": path, "reason": reason},
    })
}

fn load(cfg: &RunConfig) -> Result<(SncdScenario, Option<Value>, String)> {
    let path = cfg.scenario.as_ref().ok_or_else(|| Error::scenario("--scenario", "this command needs a scenario file"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::scenario("--scenario", format!("cannot read {}: {e}", path.display())))?;
    let (scn, expect) = SncdScenario::from_json(&text)?;
    Ok((scn, expect, scenario_name(path)))
}

fn scenario_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn execute(cfg: &RunConfig) -> Result<Value> {
    if cfg.command == Command::Selftest {
        return Ok(selftest_report(cfg.seed));
    }
    let (scn, expect, name) = load(cfg)?;
    let mut mismatches: Vec<Value> = Vec::new();
    let mut body = match cfg.command {
        Command::Compare => compare(&scn, cfg, &mut mismatches)?,
        Command::Weights => weights(&scn, cfg, &mut mismatches)?,
        Command::Ss => pages(&scn, cfg)?,
        Command::DualComplex => dual(&scn, &mut mismatches)?,
        Command::Cone => cone(&scn, &mut mismatches)?,
        Command::Selftest => unreachable!("handled above"),
    };
    if let Some(expect) = expect {
        check_expectations(&scn, &expect, &mut mismatches)?;
    }
    let obj = body.as_object_mut().expect("object body");
    obj.insert("version".into(), REPORT_VERSION.into());
    obj.insert("command".into(), command_name(cfg.command).into());
    obj.insert("scenario".into(), name.into());
    obj.insert("field".into(), scn.field.to_string().into());
    obj.insert("status".into(), if mismatches.is_empty() { "ok" } else { "mismatch" }.into());
    obj.insert("mismatches".into(), mismatches.into());
    Ok(body)
}

fn table2(t: &BTreeMap<(i64, i64), usize>) -> Value {
    t.iter().map(|(&(a, b), &d)| json!([a, b, d])).collect()
}

fn table1(t: &BTreeMap<i64, usize>) -> Value {
    t.iter().map(|(&a, &d)| json!([a, d])).collect()
}

fn track_json(rep: &WeightReport) -> Value {
    rep.tracks
        .iter()
        .map(|t| {
            json!({
                "track": t.track.name(),
                "index": t.index,
                "graded": table2(&t.graded),
                "e1": table2(&t.e1),
                "cohomology": table1(&t.cohomology),
                "sums_match": t.sums_match() && t.euler_conserved(),
            })
        })
        .collect()
}

/// Entrywise differences between two dimension tables.
fn diff2(label: &str, a: &BTreeMap<(i64, i64), usize>, b: &BTreeMap<(i64, i64), usize>) -> Vec<Value> {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (a.get(k).copied().unwrap_or(0), b.get(k).copied().unwrap_or(0));
            (x != y).then(|| json!({"table": label, "key": [k.0, k.1], "left": x, "right": y}))
        })
        .collect()
}

fn compare(scn: &SncdScenario, cfg: &RunConfig, mismatches: &mut Vec<Value>) -> Result<Value> {
    let arr = scn
        .arrangement
        .as_ref()
        .ok_or_else(|| Error::scenario("mode", "compare needs an explicit-mode scenario"))?;
    let tracks = cfg.track.tracks();
    let w = weight_side(scn, &tracks)?;
    let p = pole_order_side(arr, &tracks)?;
    let mut rows = Vec::new();
    for (a, b) in w.tracks.iter().zip(&p.tracks) {
        let mut diffs = diff2("graded", &a.graded, &b.graded);
        diffs.extend(diff2("e1", &a.e1, &b.e1));
        let label = json!({"track": a.track.name(), "index": a.index});
        for d in &diffs {
            let mut d = d.clone();
            d["track"] = label.clone();
            mismatches.push(d);
        }
        rows.push(json!({
            "track": a.track.name(),
            "index": a.index,
            "graded": table2(&a.graded),
            "e1": table2(&a.e1),
            "pole_side": {"graded": table2(&b.graded), "e1": table2(&b.e1)},
            "match": diffs.is_empty(),
        }));
    }
    if w.tracks.len() != p.tracks.len() {
        mismatches.push(json!({"table": "tracks", "left": w.tracks.len(), "right": p.tracks.len()}));
    }
    let points: Vec<Value> = arr.points().iter().map(|x| x.to_json(arr.field())).collect();
    Ok(json!({"k": arr.k(), "points": points, "tracks": rows}))
}

fn weights(scn: &SncdScenario, cfg: &RunConfig, mismatches: &mut Vec<Value>) -> Result<Value> {
    let tracks = cfg.track.tracks();
    let log = weight_side(scn, &tracks)?;
    let compact = compact_weight_side(scn, &tracks)?;
    let grw0 = grw0_compactly_supported(scn, scn.field)?;
    for t in log.tracks.iter().chain(&compact.tracks) {
        if !(t.sums_match() && t.euler_conserved()) {
            mismatches.push(json!({"table": "sums", "track": t.track.name(), "index": t.index}));
        }
    }
    Ok(json!({
        "n": scn.n,
        "components": scn.r,
        "log": track_json(&log),
        "compact": track_json(&compact),
        "grw0_compact": table1(&grw0.cohomology_profile()),
    }))
}

fn pages(scn: &SncdScenario, cfg: &RunConfig) -> Result<Value> {
    let tracks = cfg.track.tracks();
    let mut sides = vec![("weight_side", weight_side(scn, &tracks)?)];
    if let Some(arr) = &scn.arrangement {
        sides.push(("pole_side", pole_order_side(arr, &tracks)?));
    }
    let mut out = serde_json::Map::new();
    for (label, rep) in sides {
        let rows: Vec<Value> = rep
            .tracks
            .iter()
            .map(|t| {
                let r_max = crate::filtered::stable_page(&t.filtered);
                let ss = crate::filtered::spectral_sequence(&t.filtered, r_max);
                let pages: Vec<Value> = (0..=r_max).map(|r| json!({"r": r, "dims": table2(&ss.page(r))})).collect();
                json!({
                    "track": t.track.name(),
                    "index": t.index,
                    "pages": pages,
                    "e_infinity": table2(&ss.e_infinity),
                    "converges": ss.converges(),
                    "consistent": ss.is_consistent(),
                })
            })
            .collect();
        out.insert(label.into(), rows.into());
    }
    Ok(Value::Object(out))
}

fn dual(scn: &SncdScenario, mismatches: &mut Vec<Value>) -> Result<Value> {
    let delta = dual_complex(scn)?;
    let reduced = reduced_cohomology(&delta, scn.field);
    let grw0 = grw0_compactly_supported(scn, scn.field)?.cohomology_profile();
    // the comparison applies when every stratum component has constants = the field
    let comparable = scn.strata.values().flatten().all(|t| t.dim(0, 0) == 1);
    let shifted: BTreeMap<i64, usize> =
        reduced.iter().filter(|(_, d)| *d > 0).map(|&(m, d)| (m + DUAL_COMPLEX_SHIFT, d)).collect();
    let agree = shifted == grw0;
    if comparable && !agree {
        mismatches.push(json!({"table": "dual-complex", "left": table1(&shifted), "right": table1(&grw0)}));
    }
    let faces: Vec<Value> = delta
        .faces
        .iter()
        .map(|f| {
            let subset: Vec<usize> = (0..scn.r).filter(|i| f.subset & (1 << i) != 0).map(|i| i + 1).collect();
            json!({"subset": subset, "component": f.component})
        })
        .collect();
    Ok(json!({
        "faces": faces,
        "reduced_cohomology": reduced.iter().map(|&(m, d)| json!([m, d])).collect::<Vec<_>>(),
        "grw0_compact": table1(&grw0),
        "shift": DUAL_COMPLEX_SHIFT,
        "comparable": comparable,
        "agree": agree,
    }))
}

fn cone(scn: &SncdScenario, mismatches: &mut Vec<Value>) -> Result<Value> {
    let x = scn
        .components(0)
        .first()
        .ok_or_else(|| Error::scenario("strata", "cone needs the Hodge table of X"))?;
    let got = cone_weights(x, scn.field)?;
    let want = cone_closed_form(x);
    let entries = |t: &BTreeMap<(i64, i64, i64), usize>| -> Value {
        t.iter().map(|(&(i, j, m), &d)| json!([i, j, m, d])).collect()
    };
    if got != want {
        mismatches.push(json!({"table": "cone", "left": entries(&got), "right": entries(&want)}));
    }
    Ok(json!({"entries": entries(&got), "closed_form": entries(&want), "match": got == want}))
}

fn selftest_report(seed: u64) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = selftest::run_all(&mut rng, selftest::SuiteSizes::default());
    let ok = suites.iter().all(|s| s.ok());
    json!({
        "version": REPORT_VERSION,
        "command": "selftest",
        "seed": seed,
        "suites": serde_json::to_value(&suites).expect("json"),
        "status": if ok { "ok" } else { "mismatch" },
    })
}

fn expect_table(v: &Value, path: &str) -> Result<BTreeMap<Vec<i64>, usize>> {
    let rows = v.as_array().ok_or_else(|| Error::scenario(path, "expected a list of rows"))?;
    let mut out = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        let nums: Option<Vec<i64>> = r.as_array().map(|a| a.iter().filter_map(Value::as_i64).collect());
        match nums {
            Some(mut n) if n.len() >= 2 && n.len() == r.as_array().map_or(0, |a| a.len()) => {
                let d = n.pop().expect("nonempty");
                if d < 0 {
                    return Err(Error::scenario(format!("{path}[{i}]"), "negative dimension"));
                }
                if d > 0 {
                    out.insert(n, d as usize);
                }
            }
            _ => return Err(Error::scenario(format!("{path}[{i}]"), "expected a row of integers")),
        }
    }
    Ok(out)
}

/// Checks the optional `expect` block of a scenario file.
fn check_expectations(scn: &SncdScenario, expect: &Value, mismatches: &mut Vec<Value>) -> Result<()> {
    let obj = expect.as_object().ok_or_else(|| Error::scenario("expect", "expected an object"))?;
    for (key, v) in obj {
        let path = format!("expect.{key}");
        let want = expect_table(v, &path)?;
        let got: BTreeMap<Vec<i64>, usize> = match key.as_str() {
            "grw0_compact" => grw0_compactly_supported(scn, scn.field)?
                .cohomology_profile()
                .into_iter()
                .map(|(m, d)| (vec![m], d))
                .collect(),
            "log_weights" => weight_side(scn, &[Track::DeRham])?.tracks[0]
                .graded
                .iter()
                .map(|(&(w, m), &d)| (vec![w, m], d))
                .collect(),
            "compact_weights" => compact_weight_side(scn, &[Track::DeRham])?.tracks[0]
                .graded
                .iter()
                .map(|(&(w, m), &d)| (vec![w, m], d))
                .collect(),
            "reduced_cohomology" => reduced_cohomology(&dual_complex(scn)?, scn.field)
                .into_iter()
                .filter(|&(_, d)| d > 0)
                .map(|(m, d)| (vec![m], d))
                .collect(),
            "cone" => {
                let x = scn.components(0).first().ok_or_else(|| Error::scenario("strata", "missing X"))?;
                cone_weights(x, scn.field)?.into_iter().map(|((i, j, m), d)| (vec![i, j, m], d)).collect()
            }
            _ => return Err(Error::scenario(path, "unknown expectation")),
        };
        if got != want {
            let rows = |t: &BTreeMap<Vec<i64>, usize>| -> Value {
                t.iter().map(|(k, &d)| k.iter().copied().chain([d as i64]).collect::<Vec<_>>()).collect()
            };
            mismatches.push(json!({"table": path, "left": rows(&got), "right": rows(&want)}));
        }
    }
    Ok(())
}

/// Indented plain-text rendering of a report.
pub fn render_human(report: &Value) -> String {
    let mut out = String::new();
    render_value(&mut out, report, 0, None);
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && (!x.is_array() || is_flat(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.iter().all(|x| x.is_array()) && !a.is_empty() => {
            a.iter().map(inline).collect::<Vec<_>>().join("  ")
        }
        Value::Array(a) => format!("({})", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize, key: Option<&str>) {
    let pad = "  ".repeat(depth);
    let label = key.map(|k| format!("{pad}{k}:")).unwrap_or_else(|| pad.clone());
    if is_flat(v) {
        if let Value::Array(a) = v {
            if a.is_empty() {
                out.push_str(&format!("{label} none\n"));
                return;
            }
        }
        out.push_str(&format!("{label} {}\n", inline(v)));
        return;
    }
    if key.is_some() {
        out.push_str(&format!("{label}\n"));
    }
    let inner = if key.is_some() { depth + 1 } else { depth };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                render_value(out, x, inner, Some(k));
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(&format!("{}--\n", "  ".repeat(inner)));
                }
                render_value(out, x, inner, None);
            }
        }
        _ => unreachable!("flat values handled above"),
    }
}
