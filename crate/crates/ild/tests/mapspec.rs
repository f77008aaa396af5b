mod common;

use ild::gallery;
use ild::mapspec::{parse_map, parse_orbit, parse_orbit_text, MapSpecDocument, OrbitError, OrbitSpec, SpecError};
use ild::numeric::rat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let f = common::random_map(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let doc = MapSpecDocument::from_map("random", &f);
        let text = doc.serialize();
        let back = parse_map(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back.map(), f);
    }

    #[test]
    fn orbit_text_round_trip(prefix in proptest::collection::vec((0i64..50, 1i64..50), 0..4), cycle in proptest::collection::vec((0i64..50, 1i64..50), 0..3)) {
        let conv = |v: &Vec<(i64, i64)>| v.iter().map(|(n, d)| rat(*n.min(d), *d)).collect::<Vec<_>>();
        let o = if cycle.is_empty() {
            if prefix.is_empty() { return Ok(()); }
            OrbitSpec::finite(conv(&prefix))
        } else {
            OrbitSpec::periodic(conv(&prefix), conv(&cycle))
        };
        prop_assert_eq!(parse_orbit_text(&o.to_text()).unwrap(), o);
    }
}

#[test]
fn gallery_documents_parse() {
    for e in gallery::gallery() {
        let text = MapSpecDocument::from_map(&e.name, &e.map).serialize();
        assert_eq!(parse_map(&text).unwrap().map(), e.map, "{}", e.name);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_map("map bad\npoint 0 0\npoint 1/2 x\npoint 1 0\n").unwrap_err();
    match err {
        SpecError::Parse(p) => {
            assert_eq!(p.line, 3);
            assert_eq!(p.column, 11);
        }
        other => panic!("unexpected {other:?}"),
    }
    let err = parse_map("map flat\npoint 0 0\npoint 1/2 1\npoint 1 1\n").unwrap_err();
    assert!(matches!(err, SpecError::Map { .. }));
}

#[test]
fn orbit_consistency() {
    let t = gallery::tent();
    assert_eq!(parse_orbit("1/2, 1/3", &t).unwrap_err(), OrbitError::Consistency(1));
    let o = parse_orbit("0 | cycle: 0", &t).unwrap();
    assert_eq!(o.unrolled(3), vec![rat(0, 1); 3]);
    assert_eq!(parse_orbit_text(&o.to_text()).unwrap(), o);
}

#[test]
fn periodic_orbits_unroll() {
    let o = parse_orbit_text("1/2, 1 | cycle: 1/2, 1").unwrap();
    assert_eq!(o.unrolled(5), vec![rat(1, 2), rat(1, 1), rat(1, 2), rat(1, 1), rat(1, 2)]);
    assert!(o.validate(&gallery::period_two()).is_ok());
}
