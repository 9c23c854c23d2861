use std::collections::BTreeMap;

use logweight::complexes::{dual, hom_complex, shift, Complex};
use logweight::cubes::random_cube;
use logweight::exactalg::{Field, Mat};
use logweight::filtered::{decalage, spectral_sequence, stable_page};
use logweight::loggeom::{weight_side, P1Arrangement, SncdScenario, Track};
use logweight::random::{random_complex, random_filtered, random_matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(5))]
}

fn euler(profile: &BTreeMap<i64, usize>) -> i64 {
    profile.iter().map(|(&n, &d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn chain_euler(c: &Complex) -> i64 {
    c.degrees().map(|n| if n.rem_euclid(2) == 0 { c.dim(n) as i64 } else { -(c.dim(n) as i64) }).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(field in fields(), rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
        let a = random_matrix(field, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(a.rank() + a.kernel().dim(), cols);
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(a.image().dim(), a.rank());
    }

    #[test]
    fn inverse_when_square_full_rank(field in fields(), n in 1usize..5, seed in any::<u64>()) {
        let a = random_matrix(field, n, n, &mut ChaCha8Rng::seed_from_u64(seed));
        match a.inverse() {
            Some(b) => {
                prop_assert_eq!(a.rank(), n);
                prop_assert_eq!(a.mul(&b), Mat::identity(field, n));
            }
            None => prop_assert!(a.rank() < n),
        }
    }

    #[test]
    fn euler_characteristic_of_cohomology(field in fields(), amp in 0usize..4, seed in any::<u64>()) {
        let c = random_complex(field, -1, amp, 4, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(euler(&c.cohomology_profile()), chain_euler(&c));
        let d = dual(&c);
        prop_assert_eq!(c.cohomology_profile().values().sum::<usize>(), d.cohomology_profile().values().sum::<usize>());
    }

    #[test]
    fn hom_complex_counts(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(field, 0, 1, 2, &mut rng);
        let d = random_complex(field, 0, 1, 2, &mut rng);
        // over a field, H^n Hom(C, D) = ⊕ Hom(H^i C, H^{i+n} D)
        let hc = c.cohomology_profile();
        let hd = d.cohomology_profile();
        let h = hom_complex(&c, &d);
        for n in -2..=2 {
            let want: usize = hc.iter().map(|(&i, &a)| a * hd.get(&(i + n)).copied().unwrap_or(0)).sum();
            prop_assert_eq!(h.cohomology_dim(n), want);
        }
    }

    #[test]
    fn spectral_sequence_converges(field in fields(), amp in 0usize..4, window in 1usize..4, seed in any::<u64>()) {
        let f = random_filtered(field, 4, amp, window, &mut ChaCha8Rng::seed_from_u64(seed));
        let ss = spectral_sequence(&f, stable_page(&f));
        prop_assert!(ss.is_consistent());
        prop_assert!(ss.converges());
        let graded: usize = f.graded_cohomology().values().sum();
        let total: usize = f.ambient().cohomology_profile().values().sum();
        prop_assert_eq!(graded, total);
    }

    #[test]
    fn decalage_keeps_ambient(field in fields(), amp in 0usize..4, window in 1usize..4, seed in any::<u64>()) {
        let f = random_filtered(field, 4, amp, window, &mut ChaCha8Rng::seed_from_u64(seed));
        let dec = decalage(&f);
        prop_assert_eq!(dec.ambient(), f.ambient());
        let graded: usize = dec.graded_cohomology().values().sum();
        prop_assert_eq!(graded, f.ambient().cohomology_profile().values().sum::<usize>());
    }

    #[test]
    fn total_cofiber_is_shifted_total_fiber(field in fields(), r in 1usize..4, seed in any::<u64>()) {
        let p = random_cube(field, r, 2, 1, &mut ChaCha8Rng::seed_from_u64(seed));
        let cof = p.total_cofiber().cohomology_profile();
        let fib = shift(&p.total_fiber(), r as i64).cohomology_profile();
        prop_assert_eq!(cof, fib);
        // alternating sum over the vertices
        let alt: i64 = (0..=p.full())
            .map(|s| {
                let sign = if (r as i64 - logweight::cubes::popcount(s)) % 2 == 0 { 1 } else { -1 };
                sign * chain_euler(p.vertex(s))
            })
            .sum();
        prop_assert_eq!(chain_euler(&p.total_fiber()).abs(), alt.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weights_ignore_component_order(k in 0usize..4, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let field = Field::Prime(5);
        let arr = P1Arrangement::new(field, P1Arrangement::standard_points(field, k).unwrap()).unwrap();
        let scn = SncdScenario::from_arrangement(&arr);
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = weight_side(&scn, &Track::ALL).unwrap();
        let b = weight_side(&scn.permute(&perm), &Track::ALL).unwrap();
        prop_assert_eq!(a.tables(), b.tables());
        prop_assert!(a.tracks.iter().all(|t| t.sums_match() && t.euler_conserved()));
    }

    #[test]
    fn scenario_json_round_trip(k in 0usize..5, q in any::<bool>()) {
        let field = if q { Field::Rationals } else { Field::Prime(5) };
        let arr = P1Arrangement::new(field, P1Arrangement::standard_points(field, k).unwrap()).unwrap();
        let scn = SncdScenario::from_arrangement(&arr);
        let (back, _) = SncdScenario::from_json(&scn.to_json().to_string()).unwrap();
        prop_assert_eq!(back, scn);
    }
}
