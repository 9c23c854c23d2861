//! End-to-end acceptance run over the bundled scenarios and the randomized
//! suites. Prints one line per criterion and fails if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use logweight::cli::selftest;
use logweight::exactalg::Field;
use logweight::loggeom::{
    check_sequences, cone_closed_form, cone_weights, dual_complex, grw0_compactly_supported, poincare_pairing_check,
    pole_order_side, reduced_cohomology, weight_side, P1Arrangement, ProjPoint, SncdScenario, Track,
    DUAL_COMPLEX_SHIFT,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn load(name: &str) -> SncdScenario {
    let text = std::fs::read_to_string(scenario_dir().join(format!("{name}.json"))).expect("bundled scenario");
    SncdScenario::from_json(&text).expect("valid scenario").0
}

fn line_scenarios() -> Vec<(String, SncdScenario)> {
    let mut names: Vec<String> = std::fs::read_dir(scenario_dir())
        .expect("scenario dir")
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(str::to_owned))
        .filter(|n| n.starts_with("line-"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, pass: String, fail: String) -> Verdict {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn c1_f5_example() -> Verdict {
    let scn = load("f5-conic-line");
    let g = grw0_compactly_supported(&scn, Field::Prime(5)).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = (0..=2).map(|m| g.cohomology_dim(m)).collect();
    let total: usize = g.cohomology_profile().values().sum();
    check(dims == [0, 0, 1] && total == 1, format!("dims {dims:?}"), format!("dims {dims:?}, total {total}"))
}

fn c2_two_sides_agree() -> Verdict {
    let mut checked = 0;
    for (name, scn) in line_scenarios() {
        let arr = scn.arrangement.as_ref().ok_or(format!("{name} is not explicit"))?;
        let w = weight_side(&scn, &Track::ALL).map_err(|e| format!("{name}: {e}"))?;
        let p = pole_order_side(arr, &Track::ALL).map_err(|e| format!("{name}: {e}"))?;
        if w.tables() != p.tables() {
            return Err(format!("{name}: tables differ"));
        }
        checked += w.tracks.len();
    }
    let fields = ["q", "f2", "f3", "f5"];
    let count = line_scenarios().len();
    check(count == 6 + 4 + 5 + 6, format!("{count} scenarios over {fields:?}, {checked} track tables"), format!("found {count} line scenarios"))
}

fn point_pool(field: Field) -> Vec<ProjPoint> {
    let mut pool = vec![ProjPoint::Infinity];
    match field {
        Field::Prime(p) => pool.extend((0..p as i64).map(|a| ProjPoint::Affine(field.from_i64(a)))),
        Field::Rationals => {
            for (a, b) in [(0, 1), (1, 1), (-1, 1), (1, 2), (-3, 7), (5, 3), (2, 1), (-4, 1)] {
                pool.push(ProjPoint::Affine(field.fraction(a, b)));
            }
        }
    }
    pool
}

fn c3_point_set_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut configurations = 0;
    for field in [Field::Rationals, Field::Prime(5)] {
        for k in 0..=5 {
            let reference = weight_side(&load(&format!("line-k{k}-{}", field.to_string().to_lowercase())), &Track::ALL)
                .map_err(|e| e.to_string())?
                .tables();
            for _ in 0..4 {
                let mut pool = point_pool(field);
                pool.shuffle(&mut rng);
                pool.truncate(k);
                let arr = P1Arrangement::new(field, pool).map_err(|e| e.to_string())?;
                let scn = SncdScenario::from_arrangement(&arr);
                let mut perm: Vec<usize> = (0..k).collect();
                perm.shuffle(&mut rng);
                let permuted = scn.permute(&perm);
                for s in [&scn, &permuted] {
                    if weight_side(s, &Track::ALL).map_err(|e| e.to_string())?.tables() != reference {
                        return Err(format!("weight side differs for k={k} over {field}"));
                    }
                }
                if pole_order_side(&arr, &Track::ALL).map_err(|e| e.to_string())?.tables() != reference {
                    return Err(format!("pole side differs for k={k} over {field}"));
                }
                configurations += 1;
            }
        }
    }
    Ok(format!("{configurations} point sets, each also reordered"))
}

fn c4_triangle() -> Verdict {
    let scn = load("triangle");
    let g = grw0_compactly_supported(&scn, scn.field).map_err(|e| e.to_string())?.cohomology_profile();
    let delta = dual_complex(&scn).map_err(|e| e.to_string())?;
    let reduced = reduced_cohomology(&delta, scn.field);
    let circle = reduced.iter().filter(|&&(m, _)| m >= 0).map(|&(_, d)| d).collect::<Vec<_>>();
    let agree = reduced.iter().all(|&(m, d)| g.get(&(m + DUAL_COMPLEX_SHIFT)).copied().unwrap_or(0) == d)
        && g.values().sum::<usize>() == reduced.iter().map(|&(_, d)| d).sum::<usize>();
    let ok = g.len() == 1 && g.get(&2) == Some(&1) && circle == [0, 1] && agree;
    check(ok, format!("Gr^W_0 {g:?}, reduced {circle:?}, shift {DUAL_COMPLEX_SHIFT}"), format!("Gr^W_0 {g:?}, reduced {reduced:?}"))
}

fn c5_cone() -> Verdict {
    let mut entries = 0;
    for name in ["cone-line", "cone-plane"] {
        let scn = load(name);
        let x = &scn.components(0)[0];
        let got = cone_weights(x, scn.field).map_err(|e| e.to_string())?;
        if got != cone_closed_form(x) {
            return Err(format!("{name}: {got:?}"));
        }
        entries += got.len();
    }
    Ok(format!("{entries} entries"))
}

fn suite(s: selftest::SuiteResult) -> Verdict {
    check(s.ok(), format!("{}: {}/{}", s.name, s.passed, s.trials), format!("{}: {}/{} failed at {:?}", s.name, s.passed, s.trials, s.failures))
}

fn c6_decalage() -> Verdict {
    suite(selftest::decalage_page_shift(&mut ChaCha8Rng::seed_from_u64(6), 200))
}

fn c7_whitehead() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = suite(selftest::whitehead_full_faithfulness(&mut rng, 100))?;
    let b = suite(selftest::whitehead_essential_image(&mut rng, 20))?;
    Ok(format!("{a}; {b}"))
}

fn c8_cubes() -> Verdict {
    suite(selftest::cube_identities(&mut ChaCha8Rng::seed_from_u64(8), 60))
}

fn c9_pairing() -> Verdict {
    let mut checked = 0;
    for field in [Field::Rationals, Field::Prime(5)] {
        for k in 0..=4 {
            let pts = P1Arrangement::standard_points(field, k).ok_or("not enough points")?;
            let v = poincare_pairing_check(&P1Arrangement::new(field, pts).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let expected_rank = k.saturating_sub(1);
            if !v.ok() || v.h1_rank != expected_rank {
                return Err(format!("k={k} over {field}: {v:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} arrangements natural and perfect"))
}

fn c10_sequences() -> Verdict {
    let mut sequences = 0;
    for (name, scn) in line_scenarios() {
        let arr = scn.arrangement.as_ref().ok_or(format!("{name} is not explicit"))?;
        for v in check_sequences(arr).map_err(|e| format!("{name}: {e}"))? {
            if !v.ok() {
                return Err(format!("{name}: {v:?}"));
            }
            sequences += 1;
        }
    }
    Ok(format!("{sequences} point sequences exact, residue gr-split"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("f5 conic and line: Gr^W_0 of compact support", c1_f5_example),
        ("pole-order side equals weight side on lines", c2_two_sides_agree),
        ("independence of point set and ordering", c3_point_set_invariance),
        ("triangle against its dual complex", c4_triangle),
        ("cone weights against the closed form", c5_cone),
        ("decalage page shift", c6_decalage),
        ("whitehead tower fully faithful, essential image", c7_whitehead),
        ("cube shift identities", c8_cubes),
        ("wedge and trace pairing natural and perfect", c9_pairing),
        ("residue and localization sequences", c10_sequences),
    ];
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {label} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label} ({detail}) [{secs:.1}s]", i + 1)
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
