use ild::numeric::{decimal, fmt_rat, parse_rat, rat, RatParseError, to_f64, IntervalSet, Rat, RatInterval};
use proptest::prelude::*;

fn any_rat() -> impl Strategy<Value = Rat> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| rat(n, d))
}

fn unit_rat() -> impl Strategy<Value = Rat> {
    (1i64..200).prop_flat_map(|d| (0..=d, Just(d))).prop_map(|(n, d)| rat(n, d))
}

fn interval() -> impl Strategy<Value = RatInterval> {
    (unit_rat(), unit_rat()).prop_map(|(a, b)| RatInterval::spanning(a, b))
}

proptest! {
    #[test]
    fn text_round_trip(r in any_rat()) {
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn decimal_close_to_float(r in any_rat(), digits in 0usize..10) {
        let d: f64 = decimal(&r, digits).parse().unwrap();
        prop_assert!((d - to_f64(&r)).abs() <= 0.5 * 10f64.powi(-(digits as i32)) + 1e-9);
    }

    #[test]
    fn intersection_is_inside_both(a in interval(), b in interval()) {
        if let Some(c) = a.intersect(&b) {
            prop_assert!(a.contains_interval(&c) && b.contains_interval(&c));
        } else {
            prop_assert!(a.hi() < b.lo() || b.hi() < a.lo());
        }
        let h = a.hull(&b);
        prop_assert!(h.contains_interval(&a) && h.contains_interval(&b));
    }

    #[test]
    fn interval_sets_stay_disjoint_and_sorted(parts in proptest::collection::vec(interval(), 0..8), probe in unit_rat()) {
        let set = IntervalSet::from_parts(parts.clone());
        for w in set.parts().windows(2) {
            prop_assert!(w[0].hi() < w[1].lo());
        }
        prop_assert_eq!(set.contains(&probe), parts.iter().any(|p| p.contains(&probe)));
    }

    #[test]
    fn fattening_covers_neighbourhood(parts in proptest::collection::vec(interval(), 1..5), eps in (1i64..50).prop_map(|d| rat(1, d))) {
        let set = IntervalSet::from_parts(parts.clone());
        let fat = set.fattened(&eps);
        prop_assert!(fat.contains_set(&set));
        for p in &parts {
            let lo = p.lo() - &eps;
            let hi = p.hi() + &eps;
            let zero = rat(0, 1);
            let one = rat(1, 1);
            let lo = if lo < zero { zero } else { lo };
            let hi = if hi > one { one } else { hi };
            prop_assert!(fat.contains_interval(&RatInterval::new(lo, hi)));
        }
    }
}

#[test]
fn parse_forms() {
    assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
    assert_eq!(parse_rat("-2").unwrap(), rat(-2, 1));
    assert!(parse_rat("1/0").is_err());
    match parse_rat("0.5") {
        Err(RatParseError::Decimal { hint, .. }) => assert_eq!(hint, "1/2"),
        other => panic!("decimals must be rejected, got {other:?}"),
    }
    assert!(parse_rat("abc").is_err());
}

#[test]
fn decimal_rounds_half_away() {
    assert_eq!(decimal(&rat(1, 8), 2), "0.13");
    assert_eq!(decimal(&rat(-1, 8), 2), "-0.13");
    assert_eq!(decimal(&rat(2, 3), 0), "1");
    assert_eq!(decimal(&rat(1, 3), 9), "0.333333333");
}
