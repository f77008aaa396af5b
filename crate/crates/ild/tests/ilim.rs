mod common;

use ild::asymptotics::omega_approx;
use ild::gallery;
use ild::ilim::{
    arc_check, b_endpoint_test, basic_arc, check_arc, check_b_endpoint, check_point_class, check_vi, endpoint_classify_with,
    endpoint_construct, folding_test, virtually_increasing_preimage, DoubleSpiralWitness,
};
use ild::mapspec::{parse_orbit, OrbitSpec};
use ild::numeric::{half, rat, zero, RatInterval};
use ild::plmap::PLMap;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64) -> PLMap {
    common::random_map(&mut ChaCha8Rng::seed_from_u64(seed), 5)
}

fn classify(name: &str, orbit: &str) -> ild::ilim::PointClass {
    let f = gallery::entry(name).unwrap().map;
    let o = parse_orbit(orbit, &f).unwrap();
    let om = omega_approx(&f, 64, 512, &zero());
    let pc = endpoint_classify_with(&f, &o, &om, 32);
    check_point_class(&f, &om, &pc, 32).unwrap();
    pc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constructed_endpoints_are_b_endpoints(seed in any::<u64>()) {
        let f = map_from(seed);
        let om = omega_approx(&f, 16, 96, &zero());
        for c in f.critical_set() {
            if let Ok(e) = endpoint_construct(&f, &c, 8) {
                prop_assert!(e.orbit.validate(&f).is_ok());
                prop_assert!(b_endpoint_test(&f, &e.orbit, 16).is_proven());
                prop_assert!(!folding_test(&f, &e.orbit, &om, 16).is_refuted());
            }
        }
    }

    #[test]
    fn arc_decisions_revalidate(seed in any::<u64>()) {
        let f = map_from(seed);
        check_arc(&f, &arc_check(&f, 8)).unwrap();
    }

    #[test]
    fn vi_postconditions(seed in any::<u64>(), lo in 0i64..30, w in 1i64..30) {
        let f = map_from(seed);
        let hi = (lo + w).min(30);
        prop_assume!(lo < hi);
        let v = virtually_increasing_preimage(&f, &RatInterval::new(rat(lo, 30), rat(hi, 30)));
        check_vi(&f, &v).unwrap();
    }

    #[test]
    fn basic_arc_windows_nest(seed in any::<u64>()) {
        let f = map_from(seed);
        let Some(p) = f.fixed_points_of_self().into_iter().find_map(|fp| match fp {
            ild::plmap::FixedPoint::Point(x) => Some(x),
            _ => None,
        }) else { return Ok(()) };
        let trace = basic_arc(&f, &OrbitSpec::constant(p), 0, 6).unwrap();
        for w in trace.windows.windows(2) {
            prop_assert!(w[0].window.contains_interval(&w[1].window));
            prop_assert!(w[1].left_reach <= w[0].left_reach && w[1].right_reach <= w[0].right_reach);
        }
    }
}

#[test]
fn tent_points() {
    let pc = classify("tent", "0 | cycle: 0");
    assert!(pc.folding.is_proven() && pc.b_endpoint.is_proven() && pc.endpoint.is_proven());
    assert!(matches!(pc.double_spiral.refuted(), Some(DoubleSpiralWitness::LongZigzag { .. })));
    let pc = classify("tent", "2/7 | cycle: 6/7, 4/7, 2/7");
    assert!(pc.folding.is_refuted() && pc.b_endpoint.is_refuted());
}

#[test]
fn double_spiral_point() {
    let pc = classify("fig4", "1/2 | cycle: 1/2");
    assert!(pc.b_endpoint.is_proven());
    assert!(pc.double_spiral.is_proven());
    assert!(pc.endpoint.is_unknown());
}

#[test]
fn knaster_triple_folding_point() {
    let pc = classify("fig8", "1/3 | cycle: 1/3");
    assert!(pc.folding.is_proven());
    assert!(pc.b_endpoint.is_refuted());
}

#[test]
fn b_endpoint_certificates() {
    let f = gallery::period_two();
    let o = OrbitSpec::periodic(vec![half(), rat(1, 1)], vec![half(), rat(1, 1)]);
    let v = b_endpoint_test(&f, &o, 16);
    assert!(v.is_proven());
    check_b_endpoint(&f, &o, &v).unwrap();
    let other = OrbitSpec::constant(zero());
    assert!(check_b_endpoint(&f, &other, &v).is_err());
}

#[test]
fn arcs_on_gallery() {
    let ends = |name: &str| {
        let f = gallery::entry(name).unwrap().map;
        let d = arc_check(&f, 16);
        check_arc(&f, &d).unwrap();
        d.verdict.proven().map(|c| c.ends.clone())
    };
    assert_eq!(ends("fig7"), Some(vec![rat(1, 9), rat(8, 9)]));
    assert_eq!(ends("fig4"), Some(vec![zero(), rat(1, 1)]));
    assert_eq!(ends("fig8"), None);
    let id = PLMap::identity();
    assert!(arc_check(&id, 16).verdict.is_proven());
}

#[test]
fn tampered_arc_witness_fails() {
    let f = gallery::knaster_triple();
    let mut d = arc_check(&f, 16);
    if let ild::verdict::Verdict::Refuted { witness } = &mut d.verdict {
        witness.point = rat(1, 50);
    }
    assert!(check_arc(&f, &d).is_err());
}

#[test]
fn construction_requires_recurrence() {
    assert!(endpoint_construct(&gallery::tent(), &half(), 16).is_err());
    let e = endpoint_construct(&gallery::period_two(), &half(), 16).unwrap();
    assert_eq!(e.orbit.to_text(), "1/2, 1 | cycle: 1/2, 1");
}

#[test]
fn vi_examples() {
    for (name, lo, hi) in [("tent", rat(1, 4), rat(3, 4)), ("fig7", rat(1, 3), rat(2, 3)), ("minc", rat(1, 5), rat(4, 5))] {
        let f = gallery::entry(name).unwrap().map;
        let v = virtually_increasing_preimage(&f, &RatInterval::new(lo, hi));
        check_vi(&f, &v).unwrap();
    }
    let id = PLMap::identity();
    let t = RatInterval::new(rat(1, 5), rat(2, 5));
    assert_eq!(virtually_increasing_preimage(&id, &t).result, t);
}
