mod common;

use ild::numeric::{rat, Rat, RatInterval};
use ild::plmap::{FixedPoint, MapError, PLMap, DEFAULT_LAP_BUDGET};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64) -> PLMap {
    common::random_map(&mut ChaCha8Rng::seed_from_u64(seed), 6)
}

fn point() -> impl Strategy<Value = Rat> {
    (0i64..=97).prop_map(|n| rat(n, 97))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_agrees_pointwise(s1 in any::<u64>(), s2 in any::<u64>(), x in point()) {
        let (f, g) = (map_from(s1), map_from(s2));
        let h = f.compose_after(&g, DEFAULT_LAP_BUDGET).unwrap();
        prop_assert_eq!(h.at(&x), f.at(&g.at(&x)));
    }

    #[test]
    fn powers_agree_with_orbits(s in any::<u64>(), n in 1usize..4, x in point()) {
        let f = map_from(s);
        let g = f.power(n, DEFAULT_LAP_BUDGET).unwrap();
        let orbit = f.orbit(&x, n);
        prop_assert_eq!(&g.at(&x), orbit.last().unwrap());
    }

    #[test]
    fn fixed_points_are_fixed(s in any::<u64>()) {
        let f = map_from(s);
        for fp in f.fixed_points_of_self() {
            match fp {
                FixedPoint::Point(x) => prop_assert_eq!(f.at(&x), x),
                other => prop_assert_eq!(f.at(other.lo()), other.lo().clone()),
            }
        }
    }

    #[test]
    fn preimages_hit_the_value(s in any::<u64>(), y in point()) {
        let f = map_from(s);
        let pre = f.preimages(&y);
        prop_assert!(!pre.is_empty(), "maps are surjective");
        for x in pre {
            prop_assert_eq!(f.at(&x), y.clone());
        }
    }

    #[test]
    fn image_is_exact(s in any::<u64>(), a in point(), b in point()) {
        let f = map_from(s);
        let iv = RatInterval::spanning(a, b);
        let img = f.image(&iv);
        let mut vals: Vec<Rat> = f.points().iter().filter(|(x, _)| iv.contains(x)).map(|(_, y)| y.clone()).collect();
        vals.push(f.at(iv.lo()));
        vals.push(f.at(iv.hi()));
        prop_assert_eq!(img.lo(), vals.iter().min().unwrap());
        prop_assert_eq!(img.hi(), vals.iter().max().unwrap());
    }

    #[test]
    fn turning_points_change_direction(s in any::<u64>()) {
        let f = map_from(s);
        let slopes = f.slopes();
        let turning = f.turning_points();
        let expected = slopes.windows(2).filter(|w| (w[0] > rat(0, 1)) != (w[1] > rat(0, 1))).count();
        prop_assert_eq!(turning.len(), expected);
    }
}

#[test]
fn rejects_bad_maps() {
    let r = |a, b| rat(a, b);
    assert_eq!(PLMap::new(vec![(r(0, 1), r(0, 1))]).unwrap_err(), MapError::TooFew);
    assert!(PLMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 2)), (r(1, 2), r(1, 1)), (r(1, 1), r(0, 1))]).is_err());
    assert!(PLMap::new(vec![(r(0, 1), r(1, 2)), (r(1, 2), r(1, 2)), (r(1, 1), r(1, 1))]).is_err());
    assert!(PLMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 2))]).is_err());
    assert!(PLMap::new_strict(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 2)), (r(1, 1), r(1, 1))]).is_err());
}

#[test]
fn lap_budget_is_enforced() {
    let t = ild::gallery::tent();
    assert_eq!(t.power(3, DEFAULT_LAP_BUDGET).unwrap().lap_count(), 8);
    let err = t.power(6, 10).unwrap_err();
    assert_eq!(err.budget, 10);
}

#[test]
fn minc_breakpoints() {
    let m = ild::gallery::minc();
    let xs: Vec<Rat> = m.points().iter().map(|p| p.0.clone()).collect();
    assert_eq!(xs, vec![rat(0, 1), rat(1, 3), rat(5, 12), rat(7, 12), rat(2, 3), rat(1, 1)]);
}
