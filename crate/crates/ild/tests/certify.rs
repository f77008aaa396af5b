mod common;

use ild::certify::{
    check_leo_cert, check_leo_witness, check_long_zigzag, check_raines, check_zigzag, leo_certify, long_zigzag_certify,
    raines_property_probe, zigzag_candidates, zigzag_scan,
};
use ild::gallery;
use ild::numeric::{rat, RatInterval};
use ild::plmap::{PLMap, DEFAULT_LAP_BUDGET};
use ild::verdict::Verdict;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64) -> PLMap {
    common::random_map(&mut ChaCha8Rng::seed_from_u64(seed), 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_iterate_scan_matches_brute_force(seed in any::<u64>()) {
        let f = map_from(seed);
        let oracle = common::brute_force_min_zigzag(&f);
        match zigzag_scan(&f, 1, DEFAULT_LAP_BUDGET) {
            Verdict::Refuted { witness } => {
                prop_assert!(oracle.is_some());
                check_zigzag(&f, &witness, DEFAULT_LAP_BUDGET).unwrap();
                prop_assert!(witness.image.len() > oracle.unwrap());
            }
            Verdict::Proven { .. } => prop_assert!(oracle.is_none()),
            Verdict::Unknown { .. } => prop_assert!(false, "scan at n = 1 is always decided"),
        }
    }

    #[test]
    fn pruning_keeps_every_pattern(seed in any::<u64>()) {
        let g = map_from(seed).power(2, DEFAULT_LAP_BUDGET).unwrap();
        prop_assert_eq!(zigzag_candidates(&g, 2, true).is_empty(), zigzag_candidates(&g, 2, false).is_empty());
    }

    #[test]
    fn certificates_revalidate(seed in any::<u64>()) {
        let f = map_from(seed);
        if let Some(c) = long_zigzag_certify(&f, 16).proven() {
            check_long_zigzag(&f, c).unwrap();
        }
        match leo_certify(&f, 16) {
            Verdict::Proven { certificate } => check_leo_cert(&f, &certificate, 16).unwrap(),
            Verdict::Refuted { witness } => check_leo_witness(&f, &witness).unwrap(),
            Verdict::Unknown { .. } => {}
        }
        check_raines(&f, &raines_property_probe(&f, 16)).unwrap();
    }
}

#[test]
fn invariant_middle() {
    let f = gallery::invariant_middle();
    assert!(zigzag_scan(&f, 4, DEFAULT_LAP_BUDGET).is_refuted());
    assert_eq!(leo_certify(&f, 64).refuted().unwrap().interval, RatInterval::new(rat(1, 3), rat(2, 3)));
    assert!(long_zigzag_certify(&f, 64).is_proven());
}

#[test]
fn minc_zigzag_witness() {
    let m = gallery::minc();
    let z = zigzag_scan(&m, 1, DEFAULT_LAP_BUDGET).refuted().cloned().unwrap();
    assert_eq!(z.n, 1);
    let eps = long_zigzag_certify(&m, 64).proven().unwrap().epsilon.clone();
    assert!(z.image.len() >= eps);
}

#[test]
fn tampered_certificates_fail() {
    let m = gallery::minc();
    let mut z = zigzag_scan(&m, 1, DEFAULT_LAP_BUDGET).refuted().cloned().unwrap();
    z.a = &z.a - rat(1, 1000);
    assert!(check_zigzag(&m, &z, DEFAULT_LAP_BUDGET).is_err());

    let mut c = long_zigzag_certify(&m, 64).proven().cloned().unwrap();
    c.epsilon = rat(1, 2);
    assert!(check_long_zigzag(&m, &c).is_err());

    let k = gallery::knaster_triple();
    let mut w = leo_certify(&k, 64).refuted().cloned().unwrap();
    w.interval = RatInterval::new(rat(0, 1), rat(1, 2));
    assert!(check_leo_witness(&k, &w).is_err());
}

#[test]
fn tent_is_markov_leo() {
    let t = gallery::tent();
    let v = leo_certify(&t, 64);
    check_leo_cert(&t, v.proven().unwrap(), 64).unwrap();
    assert!(zigzag_scan(&t, 4, DEFAULT_LAP_BUDGET).proven().unwrap().all_iterates);
}
