mod common;

use ild::asymptotics::{
    attraction_traps, branch_stats, check_branch_series, check_non_contraction, check_omega, check_retract, check_trap,
    non_contraction_check, omega_approx, pull_back, recurrence_check, retract_probe, rn_limit_classifier, NonRetractWitness,
    OrbitFate,
};
use ild::gallery;
use ild::mapspec::OrbitSpec;
use ild::numeric::{half, rat, to_f64, zero, IntervalSet, Rat, RatInterval};
use ild::plmap::{FixedPoint, PLMap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64) -> PLMap {
    common::random_map(&mut ChaCha8Rng::seed_from_u64(seed), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn omega_covers_are_invariant(seed in any::<u64>()) {
        let f = map_from(seed);
        let o = omega_approx(&f, 16, 96, &zero());
        check_omega(&f, &o).unwrap();
    }

    #[test]
    fn traps_contract_numerically(seed in any::<u64>()) {
        let f = map_from(seed);
        for t in attraction_traps(&f, 4) {
            check_trap(&f, &t, "trap").unwrap();
            let iv = t.interval();
            let cyc: Vec<f64> = t.cycle(&f).iter().map(to_f64).collect();
            let x = to_f64(&iv.mid());
            let y = common::iterate_f64(&f, x, 2000 * t.period);
            prop_assert!(cyc.iter().any(|q| (q - y).abs() < 1e-6), "{x} ended at {y}, cycle {cyc:?}");
        }
    }

    #[test]
    fn pull_backs_nest(seed in any::<u64>(), w in 1i64..20) {
        let f = map_from(seed);
        let Some(FixedPoint::Point(p)) = f.fixed_points_of_self().into_iter().find(|fp| matches!(fp, FixedPoint::Point(_))) else {
            return Ok(());
        };
        let r = rat(1, w);
        let lo = if &p - &r < zero() { zero() } else { &p - &r };
        let hi = if &p + &r > rat(1, 1) { rat(1, 1) } else { &p + &r };
        let pb = pull_back(&f, &RatInterval::new(lo, hi), &OrbitSpec::constant(p.clone()), 6).unwrap();
        for (k, w) in pb.intervals.windows(2).enumerate() {
            prop_assert!(w[0].contains_interval(&f.image(&w[1])), "step {k}");
            prop_assert!(w[1].contains(&p));
        }
    }

    #[test]
    fn non_contraction_verdicts_revalidate(seed in any::<u64>()) {
        let f = map_from(seed);
        check_non_contraction(&f, &non_contraction_check(&f, &rat(1, 32))).unwrap();
    }

    #[test]
    fn retract_verdicts_revalidate(seed in any::<u64>()) {
        let f = map_from(seed);
        let o = omega_approx(&f, 16, 96, &zero());
        check_retract(&f, &o, &retract_probe(&f, &o, 8, 8)).unwrap();
    }
}

#[test]
fn gallery_omega_sets() {
    let exact = |name: &str| omega_approx(&gallery::entry(name).unwrap().map, 64, 512, &zero()).exact_points();
    assert_eq!(exact("tent"), Some(vec![zero()]));
    assert_eq!(exact("fig7"), Some(vec![rat(1, 9), rat(8, 9)]));
    assert_eq!(exact("u2"), Some(vec![zero(), half(), rat(1, 1)]));
    let f8 = exact("fig8").unwrap();
    assert!(f8.contains(&rat(4, 9)) && f8.contains(&rat(5, 9)));
    for e in gallery::gallery() {
        let o = omega_approx(&e.map, 32, 256, &zero());
        check_omega(&e.map, &o).unwrap();
    }
}

#[test]
fn tampered_omega_fails() {
    let f = gallery::two_sided_spiral();
    let mut o = omega_approx(&f, 64, 512, &zero());
    o.cover = IntervalSet::from_points([rat(1, 9), rat(7, 9)].iter());
    assert!(check_omega(&f, &o).is_err());
}

#[test]
fn spiral_attracts() {
    let f = gallery::two_sided_spiral();
    let o = omega_approx(&f, 64, 512, &zero());
    assert!(o.orbits.iter().any(|c| matches!(c.fate, OrbitFate::Attracted { .. })));
    assert_eq!(o.meets_critical(&f), Some(false));
}

#[test]
fn retraction_on_the_knaster_triple() {
    let f = gallery::knaster_triple();
    let o = omega_approx(&f, 64, 512, &zero());
    let v = retract_probe(&f, &o, 16, 16);
    let c = v.proven().unwrap();
    assert_eq!(c.orbit, OrbitSpec::periodic(vec![], vec![rat(1, 3)]));
    check_retract(&f, &o, &v).unwrap();
}

#[test]
fn non_retractable_maps() {
    for name in ["tent", "u2", "fig4", "fig7"] {
        let f = gallery::entry(name).unwrap().map;
        let o = omega_approx(&f, 64, 512, &zero());
        let v = retract_probe(&f, &o, 16, 16);
        assert!(v.is_refuted(), "{name}");
        check_retract(&f, &o, &v).unwrap();
    }
    let t = gallery::tent();
    let o = omega_approx(&t, 64, 512, &zero());
    assert!(matches!(retract_probe(&t, &o, 8, 8).refuted(), Some(NonRetractWitness::BoundaryOnly { .. })));
}

#[test]
fn recurrence() {
    assert_eq!(recurrence_check(&gallery::period_two(), &half(), 64).proven().unwrap().cycle, vec![half(), rat(1, 1)]);
    let w = recurrence_check(&gallery::tent(), &half(), 64);
    assert!(w.is_refuted());
    assert_eq!(w.refuted().unwrap().distance, half());
}

#[test]
fn branch_statistics_on_period_two() {
    let f = gallery::period_two();
    let s = branch_stats(&f, &half(), 16).unwrap();
    check_branch_series(&f, &s, "series").unwrap();
    for b in &s.stats {
        assert!(b.r <= b.big_r);
        assert!(b.m.contains(&f.orbit(&s.reference, b.n + 1 - s.shift).pop().unwrap()) || b.ambiguous);
    }
    let rn = rn_limit_classifier(&f, 32, &rat(1, 1000));
    let c = rn.iter().find(|c| c.c == half()).unwrap();
    assert!(c.r_to_zero.is_proven());
    assert!(c.big_r_to_zero.is_refuted());
    assert!(branch_stats(&gallery::tent(), &half(), 8).is_err());
}

#[test]
fn non_contraction_on_gallery() {
    for e in gallery::gallery() {
        let v = non_contraction_check(&e.map, &rat(1, 64));
        check_non_contraction(&e.map, &v).unwrap();
        if let Some(w) = v.refuted() {
            let j: &RatInterval = &w.j;
            let image_len: Rat = w.image.len();
            assert!(image_len <= j.len() * rat(2, 1), "{}", e.name);
        }
    }
}
