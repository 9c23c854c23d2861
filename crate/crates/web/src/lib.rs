//! Browser bindings. Every export takes plain strings and returns a JSON
//! string, so the page needs no glue beyond the generated module.

use logweight::exactalg::Field;
use logweight::filtered::{decalage, spectral_sequence, stable_page, FilteredComplex};
use logweight::loggeom::{
    cone_closed_form, cone_weights, p1_log_hodge_complexes, pole_order_side, weight_side, HodgeTable,
    P1Arrangement, ProjPoint, SncdScenario, Track,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn arrangement(field: &str, points: &str) -> Result<P1Arrangement, String> {
    let field: Field = field.trim().parse().map_err(|e: logweight::Error| e.to_string())?;
    let pts = points
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| ProjPoint::parse(field, s).map_err(|e| format!("point {}: {e}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    P1Arrangement::new(field, pts).map_err(|e| e.to_string())
}

fn rows(t: &std::collections::BTreeMap<(i64, i64), usize>) -> Value {
    t.iter().map(|(&(a, b), &d)| json!([a, b, d])).collect()
}

fn track(name: &str) -> Result<Track, String> {
    Track::ALL.into_iter().find(|t| t.name() == name).ok_or_else(|| format!("unknown track {name}"))
}

fn respond(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

pub fn line_weights_json(field: &str, points: &str, track_name: &str) -> Result<Value, String> {
    let arr = arrangement(field, points)?;
    let t = track(track_name)?;
    let scn = SncdScenario::from_arrangement(&arr);
    let w = weight_side(&scn, &[t]).map_err(|e| e.to_string())?;
    let p = pole_order_side(&arr, &[t]).map_err(|e| e.to_string())?;
    let tracks: Vec<Value> = w
        .tracks
        .iter()
        .zip(&p.tracks)
        .map(|(a, b)| {
            json!({
                "index": a.index,
                "weight_side": {"graded": rows(&a.graded), "e1": rows(&a.e1)},
                "pole_side": {"graded": rows(&b.graded), "e1": rows(&b.e1)},
                "match": a.graded == b.graded && a.e1 == b.e1,
            })
        })
        .collect();
    Ok(json!({"k": arr.k(), "track": t.name(), "tracks": tracks}))
}

fn pages(f: &FilteredComplex) -> Value {
    let r_max = stable_page(f).max(1);
    let ss = spectral_sequence(f, r_max);
    (0..=r_max).map(|r| json!({"r": r, "dims": rows(&ss.page(r))})).collect()
}

pub fn decalage_pages_json(field: &str, points: &str) -> Result<Value, String> {
    let arr = arrangement(field, points)?;
    let pole = p1_log_hodge_complexes(&arr).map_err(|e| e.to_string())?.de_rham;
    let dec = decalage(&pole);
    Ok(json!({"pole_order": pages(&pole), "decalage": pages(&dec), "weights": rows(&dec.graded_cohomology())}))
}

/// `hodge` lists `p,q,h` triples separated by semicolons.
pub fn cone_json(field: &str, hodge: &str) -> Result<Value, String> {
    let field: Field = field.trim().parse().map_err(|e: logweight::Error| e.to_string())?;
    let mut entries = Vec::new();
    for (i, part) in hodge.split(';').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let nums: Vec<i64> = part
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("entry {}: expected integers", i + 1))?;
        let [p, q, d] = nums[..] else { return Err(format!("entry {}: expected p,q,h", i + 1)) };
        if p < 0 || q < 0 || d < 0 {
            return Err(format!("entry {}: negative value", i + 1));
        }
        entries.push((p, q, d as usize));
    }
    let x = HodgeTable::from_entries(&entries);
    let got = cone_weights(&x, field).map_err(|e| e.to_string())?;
    let want = cone_closed_form(&x);
    let list = |t: &std::collections::BTreeMap<(i64, i64, i64), usize>| -> Value {
        t.iter().map(|(&(i, j, m), &d)| json!([i, j, m, d])).collect()
    };
    Ok(json!({"entries": list(&got), "closed_form": list(&want), "match": got == want}))
}

#[wasm_bindgen]
pub fn line_weights(field: &str, points: &str, track: &str) -> Result<String, JsValue> {
    respond(line_weights_json(field, points, track))
}

#[wasm_bindgen]
pub fn decalage_pages(field: &str, points: &str) -> Result<String, JsValue> {
    respond(decalage_pages_json(field, points))
}

#[wasm_bindgen]
pub fn cone(field: &str, hodge: &str) -> Result<String, JsValue> {
    respond(cone_json(field, hodge))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_agree() {
        let v = line_weights_json("F5", "0, 1, inf", "de-rham").unwrap();
        assert_eq!(v["tracks"][0]["match"], json!(true));
    }

    #[test]
    fn pages_and_cone() {
        let v = decalage_pages_json("Q", "0,1").unwrap();
        assert_eq!(v["weights"], json!([[0, 0, 1], [2, 1, 1]]));
        let c = cone_json("Q", "0,0,1;1,1,1").unwrap();
        assert_eq!(c["match"], json!(true));
        assert!(cone_json("Q", "0,0").is_err());
        assert!(line_weights_json("F2", "0,1,inf,0", "de-rham").is_err());
    }
}
