//! Forward and backward orbit machinery: omega-limit covers, recurrence,
//! pull-backs, retractability and the branch-image statistics `r_n`, `R_n`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::image_set;
use crate::mapspec::OrbitSpec;
use crate::numeric::{fmt_rat, int, max_rat, min_rat, one, rat, rat_serde, rat_vec_serde, zero, IntervalSet, Rat, RatInterval};
use crate::plmap::{PLMap, Side};
use crate::verdict::{ensure, CertError, NoPayload, Verdict};

pub const DEFAULT_TRANSIENT: usize = 64;
pub const DEFAULT_HORIZON: usize = 1024;
pub const TRAP_MAX_PERIOD: usize = 8;
const TRAP_LAP_BUDGET: usize = 20_000;

// ---------------------------------------------------------------- attraction traps

/// `J = [q - radius, q + radius] ∩ [0,1]` with `f^period(q) = q` and every slope of
/// `f^period` on `J` at most `lipschitz < 1` in magnitude, so `J` is carried into itself
/// and every orbit entering `J` converges to the cycle of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trap {
    #[serde(with = "rat_serde")]
    pub q: Rat,
    pub period: usize,
    #[serde(with = "rat_serde")]
    pub radius: Rat,
    #[serde(with = "rat_serde")]
    pub lipschitz: Rat,
}

impl Trap {
    pub fn interval(&self) -> RatInterval {
        RatInterval::new(
            max_rat(&(&self.q - &self.radius), &zero()).clone(),
            min_rat(&(&self.q + &self.radius), &one()).clone(),
        )
    }

    pub fn cycle(&self, f: &PLMap) -> Vec<Rat> {
        let mut c = f.orbit(&self.q, self.period - 1);
        c.sort();
        c.dedup();
        c
    }
}

fn slopes_on(g: &PLMap, iv: &RatInterval) -> Vec<Rat> {
    let pts = g.points();
    (0..pts.len() - 1)
        .filter(|&i| &pts[i].0 < iv.hi() && &pts[i + 1].0 > iv.lo())
        .map(|i| g.slope(i).abs())
        .collect()
}

/// Contracting neighbourhoods of periodic points up to `max_period`.
pub fn attraction_traps(f: &PLMap, max_period: usize) -> Vec<Trap> {
    let mut out: Vec<Trap> = Vec::new();
    let mut g = PLMap::identity();
    for p in 1..=max_period {
        g = match f.compose_after(&g, TRAP_LAP_BUDGET) {
            Ok(g) => g,
            Err(_) => break,
        };
        for fp in g.fixed_points_of_self() {
            let crate::plmap::FixedPoint::Point(q) = fp else { continue };
            if out.iter().any(|t| t.cycle(f).contains(&q)) {
                continue;
            }
            let left = linear_zone(&g, &q, Side::Left);
            let right = linear_zone(&g, &q, Side::Right);
            let sl = g.slope_on_side(&q, Side::Left).map(|s| s.abs());
            let sr = g.slope_on_side(&q, Side::Right).map(|s| s.abs());
            let radius = match (&left, &right) {
                (Some(a), Some(b)) => min_rat(a, b).clone(),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            let lipschitz = match (sl, sr) {
                (Some(a), Some(b)) => max_rat(&a, &b).clone(),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => continue,
            };
            if lipschitz < Rat::one() {
                out.push(Trap { q, period: p, radius, lipschitz });
            }
        }
    }
    out
}

pub fn check_trap(f: &PLMap, t: &Trap, path: &str) -> Result<(), CertError> {
    ensure(t.period >= 1 && t.radius.is_positive(), path, || "degenerate trap".into())?;
    ensure(t.lipschitz < Rat::one(), path, || "trap constant is not below 1".into())?;
    let g = f.power(t.period, TRAP_LAP_BUDGET).map_err(|e| CertError::new(path, e.to_string()))?;
    ensure(g.at(&t.q) == t.q, path, || format!("{} is not periodic with period {}", fmt_rat(&t.q), t.period))?;
    let j = t.interval();
    ensure(slopes_on(&g, &j).iter().all(|s| s <= &t.lipschitz), path, || "slope exceeds the trap constant".into())
}

// ---------------------------------------------------------------- omega(C)

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fate", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrbitFate {
    Periodic {
        preperiod: usize,
        #[serde(with = "rat_vec_serde")]
        cycle: Vec<Rat>,
    },
    Attracted {
        steps: usize,
        #[serde(with = "rat_serde")]
        point: Rat,
        trap: Trap,
        #[serde(with = "rat_vec_serde")]
        cycle: Vec<Rat>,
    },
    Unresolved {
        steps: usize,
    },
}

impl OrbitFate {
    /// Exact omega-limit set, when known.
    pub fn limit(&self) -> Option<&[Rat]> {
        match self {
            OrbitFate::Periodic { cycle, .. } | OrbitFate::Attracted { cycle, .. } => Some(cycle),
            OrbitFate::Unresolved { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalOrbit {
    #[serde(with = "rat_serde")]
    pub c: Rat,
    pub fate: OrbitFate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaApprox {
    pub transient: usize,
    pub horizon: usize,
    pub cover: IntervalSet,
    #[serde(with = "rat_serde")]
    pub fattening: Rat,
    pub exact_flag: bool,
    pub enlarged: bool,
    pub orbits: Vec<CriticalOrbit>,
}

impl OmegaApprox {
    /// The points of omega(C) when it is known exactly.
    pub fn exact_points(&self) -> Option<Vec<Rat>> {
        if self.exact_flag {
            self.cover.as_points()
        } else {
            None
        }
    }

    /// Distinct cycles making up an exact omega(C).
    pub fn cycles(&self, f: &PLMap) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for o in &self.orbits {
            if let Some(c) = o.fate.limit() {
                let mut ordered = vec![c[0].clone()];
                while ordered.len() < c.len() {
                    ordered.push(f.at(ordered.last().unwrap()));
                }
                if !out.iter().any(|e| e.contains(&ordered[0])) {
                    out.push(ordered);
                }
            }
        }
        out
    }

    /// Whether omega(C) meets C; `None` when only an outer cover is known and it meets C.
    pub fn meets_critical(&self, f: &PLMap) -> Option<bool> {
        let hit = f.critical_set().iter().any(|c| self.cover.contains(c));
        if self.exact_flag || !hit {
            Some(hit)
        } else {
            None
        }
    }
}

/// Exact forward orbit of `c`, classified as periodic, trapped or unresolved.
pub fn critical_orbit(f: &PLMap, c: &Rat, horizon: usize, traps: &[Trap]) -> OrbitFate {
    // Keyed on the reduced pair: hashing a big rational walks its continued fraction.
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut cur = c.clone();
    for k in 0..=horizon {
        let key = (cur.numer().clone(), cur.denom().clone());
        if let Some(&first) = seen.get(&key) {
            let cycle = f.orbit(&cur, k - first - 1);
            let mut cycle = cycle;
            cycle.sort();
            return OrbitFate::Periodic { preperiod: first, cycle };
        }
        seen.insert(key, k);
        if let Some(t) = traps.iter().find(|t| t.interval().contains(&cur)) {
            // A trapped point that is itself on the cycle is reported as periodic.
            let cyc = t.cycle(f);
            if !cyc.contains(&cur) {
                return OrbitFate::Attracted { steps: k, point: cur, trap: t.clone(), cycle: cyc };
            }
        }
        cur = f.at(&cur);
    }
    OrbitFate::Unresolved { steps: horizon }
}

pub fn omega_approx(f: &PLMap, transient: usize, horizon: usize, fattening: &Rat) -> OmegaApprox {
    assert!(transient < horizon, "transient must be below the horizon");
    let traps = attraction_traps(f, TRAP_MAX_PERIOD);
    let orbits: Vec<CriticalOrbit> = f
        .critical_set()
        .into_iter()
        .map(|c| {
            let fate = critical_orbit(f, &c, horizon, &traps);
            CriticalOrbit { c, fate }
        })
        .collect();
    let mut exact = IntervalSet::new();
    let mut loose: Vec<Rat> = Vec::new();
    for o in &orbits {
        match o.fate.limit() {
            Some(cyc) => cyc.iter().for_each(|x| exact.insert(RatInterval::point(x.clone()))),
            None => loose.extend(f.orbit(&o.c, horizon).into_iter().skip(transient)),
        }
    }
    if loose.is_empty() {
        return OmegaApprox { transient, horizon, cover: exact, fattening: zero(), exact_flag: true, enlarged: false, orbits };
    }
    let mut eps = if fattening.is_positive() { fattening.clone() } else { rat(1, 1024) };
    let mut enlarged = false;
    let base = IntervalSet::from_points(loose.iter());
    loop {
        let cover = exact.union(&base.fattened(&eps));
        if cover.contains_set(&image_set(f, &cover)) {
            return OmegaApprox { transient, horizon, cover, fattening: eps, exact_flag: false, enlarged, orbits };
        }
        if eps >= Rat::one() {
            let cover = IntervalSet::from_parts([RatInterval::unit()]);
            return OmegaApprox { transient, horizon, cover, fattening: eps, exact_flag: false, enlarged: true, orbits };
        }
        eps = &eps * int(2);
        enlarged = true;
    }
}

pub fn check_omega(f: &PLMap, o: &OmegaApprox) -> Result<(), CertError> {
    let path = "omega";
    let crit = f.critical_set();
    ensure(o.orbits.len() == crit.len(), path, || "critical orbit count".into())?;
    for (i, (orb, c)) in o.orbits.iter().zip(&crit).enumerate() {
        let p = format!("omega.orbits[{i}]");
        ensure(&orb.c == c, &p, || "critical point mismatch".into())?;
        match &orb.fate {
            OrbitFate::Periodic { preperiod, cycle } => {
                let start = f.orbit(c, *preperiod).pop().unwrap();
                let mut cyc = f.orbit(&start, cycle.len() - 1);
                ensure(f.at(cyc.last().unwrap()) == start, &p, || "cycle does not close".into())?;
                cyc.sort();
                ensure(&cyc == cycle, &p, || "cycle mismatch".into())?;
            }
            OrbitFate::Attracted { steps, point, trap, cycle } => {
                ensure(&f.orbit(c, *steps).pop().unwrap() == point, &p, || "orbit point mismatch".into())?;
                check_trap(f, trap, &p)?;
                ensure(trap.interval().contains(point), &p, || "point outside trap".into())?;
                ensure(&trap.cycle(f) == cycle, &p, || "cycle mismatch".into())?;
            }
            OrbitFate::Unresolved { .. } => {
                ensure(!o.exact_flag, &p, || "unresolved orbit in an exact cover".into())?;
                let tail = f.orbit(c, o.horizon).pop().unwrap();
                ensure(o.cover.contains(&tail), &p, || "orbit tail outside the cover".into())?;
            }
        }
    }
    if o.exact_flag {
        let mut pts = IntervalSet::new();
        for orb in &o.orbits {
            for x in orb.fate.limit().unwrap_or(&[]) {
                pts.insert(RatInterval::point(x.clone()));
            }
        }
        ensure(pts == o.cover, path, || "exact cover is not the union of the limit cycles".into())?;
    }
    ensure(o.cover.contains_set(&image_set(f, &o.cover)), path, || "cover is not forward invariant".into())
}

// ---------------------------------------------------------------- recurrence

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceCert {
    #[serde(with = "rat_vec_serde")]
    pub cycle: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceWitness {
    pub fate: OrbitFate,
    #[serde(with = "rat_serde")]
    pub distance: Rat,
}

pub fn recurrence_check(f: &PLMap, c: &Rat, depth: usize) -> Verdict<RecurrenceCert, RecurrenceWitness> {
    let mut cur = f.at(c);
    for p in 1..=depth {
        if &cur == c {
            let mut cycle = f.orbit(c, p - 1);
            cycle.sort();
            return Verdict::Proven { certificate: RecurrenceCert { cycle } };
        }
        cur = f.at(&cur);
    }
    let traps = attraction_traps(f, TRAP_MAX_PERIOD);
    let fate = critical_orbit(f, c, depth, &traps);
    match fate.limit() {
        Some(cyc) if cyc.contains(c) => Verdict::Proven { certificate: RecurrenceCert { cycle: cyc.to_vec() } },
        Some(cyc) => {
            let distance = cyc.iter().map(|x| (x - c).abs()).min().unwrap();
            Verdict::Refuted { witness: RecurrenceWitness { fate: fate.clone(), distance } }
        }
        None => {
            let orbit = f.orbit(c, depth);
            let closest = orbit[1..].iter().map(|x| (x - c).abs()).min().unwrap_or_else(one);
            Verdict::unknown(depth, format!("orbit unresolved; closest return distance {}", fmt_rat(&closest)))
        }
    }
}

// ---------------------------------------------------------------- pull-backs

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullBack {
    pub orbit: OrbitSpec,
    pub j0: RatInterval,
    pub intervals: Vec<RatInterval>,
    pub monotone_up_to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PullBackError {
    #[error("orbit has only {have} coordinates, {need} needed")]
    OrbitTooShort { have: usize, need: usize },
    #[error("x_0 = {0} is not in the starting interval")]
    StartOutside(String),
}

/// Pulls `j0` back along `orbit` for `k` steps.
pub fn pull_back(f: &PLMap, j0: &RatInterval, orbit: &OrbitSpec, k: usize) -> Result<PullBack, PullBackError> {
    let xs = orbit.unrolled(k + 1);
    if xs.len() < k + 1 {
        return Err(PullBackError::OrbitTooShort { have: xs.len(), need: k + 1 });
    }
    if !j0.contains(&xs[0]) {
        return Err(PullBackError::StartOutside(fmt_rat(&xs[0])));
    }
    let turning = f.turning_points();
    let mut intervals = vec![j0.clone()];
    let mut monotone_up_to = k + 1;
    for i in 1..=k {
        let prev = intervals.last().unwrap();
        let next = f
            .preimage_component_at(prev, &xs[i])
            .expect("orbit coordinate maps into the previous interval");
        if monotone_up_to == k + 1 && turning.iter().any(|t| next.contains_open(t)) {
            monotone_up_to = i;
        }
        intervals.push(next);
    }
    Ok(PullBack { orbit: orbit.clone(), j0: j0.clone(), intervals, monotone_up_to })
}

// ---------------------------------------------------------------- retractability

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetractCert {
    /// Backward orbit through an interior point of omega(C), periodic with `period`.
    pub orbit: OrbitSpec,
    pub period: usize,
    #[serde(with = "rat_serde")]
    pub delta: Rat,
    /// Pull-back over two periods; the last interval nests inside the first.
    pub pullback: PullBack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CycleObstruction {
    /// A turning point sits on the cycle, so every pull-back folds there.
    CriticalOnCycle {
        #[serde(with = "rat_vec_serde")]
        cycle: Vec<Rat>,
        #[serde(with = "rat_serde")]
        critical: Rat,
    },
    /// The return map contracts on one side; the one-sided window pulls back non-monotonically
    /// and every neighbourhood eventually contains its pull-back.
    ContractingSide {
        #[serde(with = "rat_vec_serde")]
        cycle: Vec<Rat>,
        side: Side,
        #[serde(with = "rat_serde")]
        slope: Rat,
        pullback: PullBack,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonRetractWitness {
    /// omega(C) lies in {0, 1}, so no open interval of (0,1) meets it.
    BoundaryOnly {
        #[serde(with = "rat_vec_serde")]
        omega: Vec<Rat>,
    },
    Cycles {
        #[serde(with = "rat_vec_serde")]
        omega: Vec<Rat>,
        obstructions: Vec<CycleObstruction>,
    },
}

/// Backward orbit along a cycle starting at `x0`: `x0, f^{p-1}(x0), ..., f(x0)` repeated.
pub fn cycle_backward_orbit(f: &PLMap, x0: &Rat, period: usize) -> OrbitSpec {
    let fwd = f.orbit(x0, period - 1);
    let mut back = vec![x0.clone()];
    for k in (1..period).rev() {
        back.push(fwd[k].clone());
    }
    OrbitSpec::periodic(Vec::new(), back)
}

fn interior_cycle_point(cycle: &[Rat]) -> Option<&Rat> {
    cycle.iter().find(|x| x.is_positive() && *x < &one())
}

fn expanding_certificate(f: &PLMap, x0: &Rat, period: usize, tries: usize) -> Option<RetractCert> {
    let orbit = cycle_backward_orbit(f, x0, period);
    let bound = min_rat(x0, &(one() - x0)).clone();
    let mut delta = bound / int(2);
    for _ in 0..tries.max(1) {
        let j0 = RatInterval::new(x0 - &delta, x0 + &delta);
        if let Ok(pb) = pull_back(f, &j0, &orbit, 2 * period) {
            if pb.monotone_up_to > 2 * period && j0.contains_interval(&pb.intervals[2 * period]) {
                return Some(RetractCert { orbit, period, delta, pullback: pb });
            }
        }
        delta = &delta / int(2);
    }
    None
}

/// Length of the piece of `g` adjacent to `x` on `side`.
fn linear_zone(g: &PLMap, x: &Rat, side: Side) -> Option<Rat> {
    let pts = g.points();
    match side {
        Side::Left => {
            let k = pts.partition_point(|p| &p.0 < x);
            (k > 0).then(|| x - &pts[k - 1].0)
        }
        Side::Right => {
            let k = pts.partition_point(|p| &p.0 <= x);
            (k < pts.len()).then(|| &pts[k].0 - x)
        }
    }
}

fn contracting_obstruction(f: &PLMap, cycle: &[Rat], x0: &Rat, period: usize, depth: usize) -> Option<CycleObstruction> {
    let h = f.power(2 * period, TRAP_LAP_BUDGET).ok()?;
    let orbit = cycle_backward_orbit(f, x0, period);
    for side in [Side::Left, Side::Right] {
        let Some(slope) = h.slope_on_side(x0, side) else { continue };
        if slope.abs() >= Rat::one() {
            continue;
        }
        let r = linear_zone(&h, x0, side)?;
        let w = match side {
            Side::Left => RatInterval::new(x0 - &r, x0.clone()),
            Side::Right => RatInterval::new(x0.clone(), x0 + &r),
        };
        let pb = pull_back(f, &w, &orbit, depth).ok()?;
        if pb.monotone_up_to <= depth {
            let mut pb = pb;
            pb.intervals.truncate(pb.monotone_up_to + 1);
            return Some(CycleObstruction::ContractingSide { cycle: cycle.to_vec(), side, slope: slope.abs(), pullback: pb });
        }
    }
    None
}

pub fn retract_probe(f: &PLMap, omega: &OmegaApprox, k: usize, seeds: usize) -> Verdict<RetractCert, NonRetractWitness> {
    let Some(points) = omega.exact_points() else {
        return Verdict::unknown(k, "omega(C) is only known through an outer cover; no exact backward orbit to test");
    };
    if points.iter().all(|x| x.is_zero() || x == &one()) {
        return Verdict::Refuted { witness: NonRetractWitness::BoundaryOnly { omega: points } };
    }
    let turning = f.turning_points();
    let mut obstructions = Vec::new();
    let mut open = Vec::new();
    for cycle in omega.cycles(f) {
        let Some(x0) = interior_cycle_point(&cycle) else { continue };
        let period = cycle.len();
        if let Some(c) = cycle.iter().find(|x| turning.contains(x)) {
            obstructions.push(CycleObstruction::CriticalOnCycle { cycle: cycle.clone(), critical: c.clone() });
            continue;
        }
        if let Some(cert) = expanding_certificate(f, x0, period, seeds) {
            return Verdict::Proven { certificate: cert };
        }
        match contracting_obstruction(f, &cycle, x0, period, k) {
            Some(ob) => obstructions.push(ob),
            None => open.push(fmt_rat(x0)),
        }
    }
    if open.is_empty() {
        Verdict::Refuted { witness: NonRetractWitness::Cycles { omega: points, obstructions } }
    } else {
        Verdict::unknown(k, format!("no monotone pull-back and no obstruction found at {}", open.join(", ")))
    }
}

fn check_pullback(f: &PLMap, pb: &PullBack, path: &str) -> Result<(), CertError> {
    pb.orbit.validate(f).map_err(|k| CertError::new(path, format!("orbit link {k} fails")))?;
    let k = pb.intervals.len() - 1;
    let again = pull_back(f, &pb.j0, &pb.orbit, k).map_err(|e| CertError::new(path, e.to_string()))?;
    ensure(again.intervals == pb.intervals, path, || "pull-back intervals mismatch".into())?;
    ensure(again.monotone_up_to == pb.monotone_up_to, path, || "monotonicity index mismatch".into())
}

pub fn check_retract(f: &PLMap, omega: &OmegaApprox, v: &Verdict<RetractCert, NonRetractWitness>) -> Result<(), CertError> {
    match v {
        Verdict::Proven { certificate: c } => {
            let path = "retract.certificate";
            let pts = omega.exact_points().ok_or_else(|| CertError::new(path, "omega(C) is not exact".to_string()))?;
            check_omega(f, omega)?;
            check_pullback(f, &c.pullback, path)?;
            let two_p = 2 * c.period;
            ensure(c.pullback.orbit.values().iter().all(|x| pts.contains(x)), path, || "orbit leaves omega(C)".into())?;
            let x0 = c.pullback.orbit.coord(0).unwrap();
            ensure(c.pullback.j0 == RatInterval::new(x0 - &c.delta, x0 + &c.delta), path, || "window".into())?;
            ensure(c.pullback.j0.lo().is_positive() && c.pullback.j0.hi() < &one(), path, || "window leaves (0,1)".into())?;
            ensure(c.pullback.intervals.len() == two_p + 1, path, || "pull-back length".into())?;
            ensure(c.pullback.orbit.coord(two_p) == Some(x0), path, || "orbit period".into())?;
            ensure(c.pullback.monotone_up_to > two_p, path, || "pull-back is not monotone".into())?;
            ensure(c.pullback.j0.contains_interval(&c.pullback.intervals[two_p]), path, || "no nesting".into())
        }
        Verdict::Refuted { witness } => {
            let path = "retract.witness";
            check_omega(f, omega)?;
            let pts = omega.exact_points().ok_or_else(|| CertError::new(path, "omega(C) is not exact".to_string()))?;
            match witness {
                NonRetractWitness::BoundaryOnly { omega: w } => {
                    ensure(w == &pts, path, || "omega mismatch".into())?;
                    ensure(pts.iter().all(|x| x.is_zero() || x == &one()), path, || "interior omega point".into())
                }
                NonRetractWitness::Cycles { omega: w, obstructions } => {
                    ensure(w == &pts, path, || "omega mismatch".into())?;
                    let turning = f.turning_points();
                    let cycles: Vec<Vec<Rat>> =
                        omega.cycles(f).into_iter().filter(|c| interior_cycle_point(c).is_some()).collect();
                    ensure(cycles.len() == obstructions.len(), path, || "every interior cycle needs an obstruction".into())?;
                    for (cyc, ob) in cycles.iter().zip(obstructions) {
                        match ob {
                            CycleObstruction::CriticalOnCycle { cycle, critical } => {
                                ensure(cycle == cyc && cycle.contains(critical) && turning.contains(critical), path, || {
                                    "critical point not on the cycle".into()
                                })?;
                            }
                            CycleObstruction::ContractingSide { cycle, side, slope, pullback } => {
                                ensure(cycle == cyc, path, || "cycle mismatch".into())?;
                                let period = cycle.len();
                                check_pullback(f, pullback, path)?;
                                let x0 = pullback.orbit.coord(0).unwrap().clone();
                                ensure(cycle.contains(&x0), path, || "base point not on the cycle".into())?;
                                ensure(pullback.orbit == cycle_backward_orbit(f, &x0, period), path, || "orbit".into())?;
                                let h = f.power(2 * period, TRAP_LAP_BUDGET).map_err(|e| CertError::new(path, e.to_string()))?;
                                let s = h.slope_on_side(&x0, *side).map(|s| s.abs());
                                ensure(s.as_ref() == Some(slope) && slope < &Rat::one(), path, || "side slope".into())?;
                                let r = linear_zone(&h, &x0, *side).unwrap_or_else(zero);
                                let w = match side {
                                    Side::Left => RatInterval::new(&x0 - &r, x0.clone()),
                                    Side::Right => RatInterval::new(x0.clone(), &x0 + &r),
                                };
                                ensure(pullback.j0 == w, path, || "window is not the linear zone".into())?;
                                ensure(pullback.monotone_up_to < pullback.intervals.len(), path, || {
                                    "pull-back never folds".into()
                                })?;
                            }
                        }
                    }
                    Ok(())
                }
            }
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------- branch images

/// Images of the two one-sided maximal monotone intervals at a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct SideState {
    y: Rat,
    a: RatInterval,
    b: RatInterval,
}

fn side_of(iv: &RatInterval, y: &Rat) -> Option<Side> {
    if iv.is_degenerate() {
        None
    } else if iv.hi() == y {
        Some(Side::Left)
    } else {
        Some(Side::Right)
    }
}

fn step_side(f: &PLMap, y: &Rat, iv: &RatInterval) -> RatInterval {
    match side_of(iv, y) {
        None => RatInterval::point(f.at(y)),
        Some(side) => {
            let lap = f.lap_on_side(y, side).expect("one-sided interval has a lap");
            let part = iv.intersect(&lap).expect("lap meets the interval at y");
            f.image(&part)
        }
    }
}

impl SideState {
    fn start(x: &Rat) -> Self {
        SideState { y: x.clone(), a: RatInterval::new(zero(), x.clone()), b: RatInterval::new(x.clone(), one()) }
    }

    fn step(&self, f: &PLMap) -> Self {
        SideState { y: f.at(&self.y), a: step_side(f, &self.y, &self.a), b: step_side(f, &self.y, &self.b) }
    }

    /// `M`, and whether the two laps were on the same side (two admissible choices).
    fn image(&self) -> (RatInterval, bool) {
        let (sa, sb) = (side_of(&self.a, &self.y), side_of(&self.b, &self.y));
        match (sa, sb) {
            (Some(p), Some(q)) if p == q => {
                let m = if self.a.len() >= self.b.len() { self.a.clone() } else { self.b.clone() };
                (m, true)
            }
            _ => (self.a.hull(&self.b), false),
        }
    }

    fn hull(&self) -> RatInterval {
        self.a.hull(&self.b)
    }
}

/// Images under `f^steps` of the maximal one-sided monotone intervals at `x`:
/// returns `f^steps(x)` and the left and right images (degenerate when a side is absent).
pub fn one_sided_images(f: &PLMap, x: &Rat, steps: usize) -> (Rat, RatInterval, RatInterval) {
    let mut s = SideState::start(x);
    for _ in 0..steps {
        s = s.step(f);
    }
    (s.y, s.a, s.b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchStats {
    pub n: usize,
    pub m: RatInterval,
    #[serde(with = "rat_serde")]
    pub r: Rat,
    #[serde(with = "rat_serde")]
    pub big_r: Rat,
    /// The reference point is critical for this iterate; `r` would be 0 for either lap.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LimitEvidence {
    /// The exact lap-image state repeats: the sequences are eventually periodic from `start`.
    StateCycle { start: usize, period: usize },
    /// From iterate `at` on, all lap images sit inside a contracting trap.
    Trapped { at: usize, trap: Trap },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSeries {
    #[serde(with = "rat_serde")]
    pub c: Rat,
    /// Smallest `k` with `f^k(c)` interior; statistics are reported for `n ≥ shift`.
    pub shift: usize,
    #[serde(with = "rat_serde")]
    pub reference: Rat,
    pub stats: Vec<BranchStats>,
    pub evidence: Option<LimitEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("the orbit of {0} stays in {{0, 1}} for three steps, so the shifted reference point is undefined")]
pub struct UndefinedTilde(pub String);

fn tilde_shift(f: &PLMap, c: &Rat) -> Option<(usize, Rat)> {
    let mut cur = c.clone();
    for k in 1..=3 {
        cur = f.at(&cur);
        if cur.is_positive() && cur < one() {
            return Some((k, cur));
        }
    }
    None
}

pub fn branch_stats(f: &PLMap, c: &Rat, n_max: usize) -> Result<BranchSeries, UndefinedTilde> {
    branch_stats_with(f, c, n_max, &attraction_traps(f, TRAP_MAX_PERIOD))
}

fn branch_stats_with(f: &PLMap, c: &Rat, n_max: usize, traps: &[Trap]) -> Result<BranchSeries, UndefinedTilde> {
    let (shift, reference) = tilde_shift(f, c).ok_or_else(|| UndefinedTilde(fmt_rat(c)))?;
    let mut state = SideState::start(&reference);
    let mut seen: HashMap<SideState, usize> = HashMap::new();
    let mut stats = Vec::new();
    let mut evidence = None;
    // Iterate index j counts steps of the reference; reported n = j + shift - 1.
    let last_j = (n_max + 1).saturating_sub(shift);
    for j in 1..=last_j {
        state = state.step(f);
        let (m, ambiguous) = state.image();
        let d1 = (&state.y - m.lo()).abs();
        let d2 = (m.hi() - &state.y).abs();
        let (r, big_r) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        stats.push(BranchStats { n: j + shift - 1, m, r, big_r, ambiguous });
        if evidence.is_none() {
            if let Some(&first) = seen.get(&state) {
                evidence = Some(LimitEvidence::StateCycle { start: first + shift - 1, period: j - first });
            } else if let Some(t) = traps.iter().find(|t| t.interval().contains_interval(&state.hull())) {
                evidence = Some(LimitEvidence::Trapped { at: j + shift - 1, trap: t.clone() });
            }
            seen.insert(state.clone(), j);
        }
    }
    Ok(BranchSeries { c: c.clone(), shift, reference, stats, evidence })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RnClassification {
    #[serde(with = "rat_serde")]
    pub c: Rat,
    pub series: Option<BranchSeries>,
    pub note: Option<String>,
    /// `r_n(f(c)) → 0`.
    pub r_to_zero: Verdict<LimitEvidence, LimitEvidence>,
    /// `lim sup R_n(f(c)) = 0`.
    pub big_r_to_zero: Verdict<LimitEvidence, LimitEvidence>,
    /// The last half of the computed `r_n` lies below the threshold.
    pub r_tail_below_threshold: bool,
}

fn limit_verdict(
    series: &BranchSeries,
    pick: impl Fn(&BranchStats) -> &Rat,
    n_max: usize,
) -> Verdict<LimitEvidence, LimitEvidence> {
    match &series.evidence {
        Some(ev @ LimitEvidence::Trapped { .. }) => Verdict::Proven { certificate: ev.clone() },
        Some(ev @ LimitEvidence::StateCycle { start, period }) => {
            let window: Vec<&BranchStats> =
                series.stats.iter().filter(|s| s.n >= *start && s.n < start + period).collect();
            if window.len() < *period {
                return Verdict::unknown(n_max, "cycle window not fully computed");
            }
            if window.iter().all(|s| pick(s).is_zero()) {
                Verdict::Proven { certificate: ev.clone() }
            } else {
                Verdict::Refuted { witness: ev.clone() }
            }
        }
        None => Verdict::unknown(n_max, "no exact repetition or contracting trap within depth"),
    }
}

pub fn rn_limit_classifier(f: &PLMap, n_max: usize, threshold: &Rat) -> Vec<RnClassification> {
    let traps = attraction_traps(f, TRAP_MAX_PERIOD);
    f.critical_set()
        .into_iter()
        .map(|c| match branch_stats_with(f, &c, n_max, &traps) {
            Ok(series) => {
                let r_to_zero = limit_verdict(&series, |s| &s.r, n_max);
                let big_r_to_zero = limit_verdict(&series, |s| &s.big_r, n_max);
                let half = series.stats.len() / 2;
                let r_tail_below_threshold = series.stats[half..].iter().all(|s| &s.r < threshold);
                RnClassification { c, series: Some(series), note: None, r_to_zero, big_r_to_zero, r_tail_below_threshold }
            }
            Err(e) => RnClassification {
                c,
                series: None,
                note: Some(e.to_string()),
                r_to_zero: Verdict::unknown(0, "undefined reference point"),
                big_r_to_zero: Verdict::unknown(0, "undefined reference point"),
                r_tail_below_threshold: false,
            },
        })
        .collect()
}

pub fn check_branch_series(f: &PLMap, s: &BranchSeries, path: &str) -> Result<(), CertError> {
    let n_max = s.stats.last().map(|x| x.n).unwrap_or(s.shift);
    let again = branch_stats(f, &s.c, n_max).map_err(|e| CertError::new(path, e.to_string()))?;
    ensure(&again == s, path, || "branch statistics mismatch".into())?;
    if let Some(LimitEvidence::Trapped { trap, .. }) = &s.evidence {
        check_trap(f, trap, path)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- non-contraction

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonContractionCert {
    #[serde(with = "rat_serde")]
    pub delta0: Rat,
    pub zones: Vec<RatInterval>,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionWitness {
    #[serde(with = "rat_serde")]
    pub delta0: Rat,
    pub j: RatInterval,
    pub steps: usize,
    pub image: RatInterval,
}

const NC_MAX_DEPTH: usize = 128;
const NC_MAX_NODES: usize = 200_000;

/// Open components of `B(C, delta0) \ C`, stored by their closures.
pub fn side_zones(f: &PLMap, delta0: &Rat) -> Vec<RatInterval> {
    let c = f.critical_set();
    let mut out = Vec::new();
    for w in c.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if &(b - a) <= &(delta0 * int(2)) {
            out.push(RatInterval::new(a.clone(), b.clone()));
        } else {
            out.push(RatInterval::new(a.clone(), a + delta0));
            out.push(RatInterval::new(b - delta0, b.clone()));
        }
    }
    out
}

fn min_slope_on(f: &PLMap, iv: &RatInterval) -> Rat {
    slopes_on(f, iv).into_iter().min().unwrap_or_else(one)
}

struct NcSearch<'a> {
    f: &'a PLMap,
    turning: Vec<Rat>,
    global_min_ge_one: bool,
    nodes: usize,
    failure: Option<(RatInterval, usize, Vec<RatInterval>)>,
}

#[derive(Debug)]
enum NcOutcome {
    Ok,
    Fail,
    Exhausted,
}

impl<'a> NcSearch<'a> {
    /// `path` holds the open pieces (as closures) since the zone, with expansion bounds.
    fn explore(&mut self, path: &mut Vec<(RatInterval, Rat, bool)>) -> NcOutcome {
        self.nodes += 1;
        if self.nodes > NC_MAX_NODES || path.len() > NC_MAX_DEPTH {
            return NcOutcome::Exhausted;
        }
        let (piece, e, _) = path.last().unwrap().clone();
        let img = self.f.image(&piece);
        let e2 = &e * min_slope_on(self.f, &piece);
        let hits: Vec<Rat> = self.turning.iter().filter(|t| img.contains_open(t)).cloned().collect();
        if !hits.is_empty() {
            if e2 <= int(2) {
                self.failure = Some((img.clone(), path.len(), path.iter().map(|p| p.0.clone()).collect()));
                return NcOutcome::Fail;
            }
            if self.global_min_ge_one {
                return NcOutcome::Ok;
            }
        }
        // Split the image at the critical points it contains.
        let mut cuts = vec![img.lo().clone()];
        cuts.extend(hits.iter().cloned());
        cuts.push(img.hi().clone());
        for w in cuts.windows(2) {
            let next = RatInterval::new(w[0].clone(), w[1].clone());
            if next.is_degenerate() {
                continue;
            }
            // Dominated by an ancestor, or trapped in a critical-free invariant hull.
            if self.closed(path, &next, &e2, !hits.is_empty()) {
                continue;
            }
            path.push((next, e2.clone(), !hits.is_empty()));
            let out = self.explore(path);
            path.pop();
            match out {
                NcOutcome::Ok => {}
                other => return other,
            }
        }
        NcOutcome::Ok
    }

    fn closed(&self, path: &[(RatInterval, Rat, bool)], next: &RatInterval, e: &Rat, hit_now: bool) -> bool {
        for (p, pe, _) in path.iter() {
            if p.contains_interval(next) && e >= pe {
                return true;
            }
        }
        if hit_now {
            return false;
        }
        let last_hit = path.iter().rposition(|p| p.2).unwrap_or(0);
        let mut hull = next.clone();
        for (p, _, _) in path[last_hit..].iter().rev() {
            hull = hull.hull(p);
            if self.turning.iter().all(|t| !hull.contains_open(t)) && hull.contains_interval(&self.f.image(&hull)) {
                return true;
            }
        }
        false
    }
}

fn contraction_witness(f: &PLMap, zone: &RatInterval, chain: &[RatInterval], delta0: &Rat) -> Option<ContractionWitness> {
    let turning = f.turning_points();
    let steps = chain.len();
    let target = f.image(chain.last().unwrap());
    for c in turning.iter().filter(|t| target.contains_open(t)) {
        // Pull c back through the chain of monotone pieces.
        let mut x = c.clone();
        let mut ok = true;
        for piece in chain.iter().rev() {
            match f.preimages(&x).into_iter().find(|p| piece.contains_open(p)) {
                Some(p) => x = p,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !zone.contains_open(&x) {
            continue;
        }
        let mut eta = min_rat(&(&x - zone.lo()), &(zone.hi() - &x)).clone() / int(2);
        for _ in 0..60 {
            let j = RatInterval::new(&x - &eta, &x + &eta);
            let mut cur = j.clone();
            let mut clean = true;
            for _ in 0..steps - 1 {
                cur = f.image(&cur);
                if f.critical_set().iter().any(|t| cur.contains(t)) {
                    clean = false;
                    break;
                }
            }
            if clean {
                let last = f.image(&cur);
                if f.critical_set().iter().any(|t| last.contains(t)) && last.len() <= j.len() * int(2) {
                    return Some(ContractionWitness { delta0: delta0.clone(), j, steps, image: last });
                }
            }
            eta = eta / int(2);
        }
    }
    None
}

/// Decides the non-contraction property for the given `delta0`.
pub fn non_contraction_check(f: &PLMap, delta0: &Rat) -> Verdict<NonContractionCert, ContractionWitness> {
    assert!(delta0.is_positive(), "delta0 must be positive");
    let zones = side_zones(f, delta0);
    let mut search = NcSearch {
        f,
        turning: f.turning_points(),
        global_min_ge_one: f.min_abs_slope() >= Rat::one(),
        nodes: 0,
        failure: None,
    };
    for z in &zones {
        let mut path = vec![(z.clone(), one(), false)];
        match search.explore(&mut path) {
            NcOutcome::Ok => {}
            NcOutcome::Exhausted => return Verdict::unknown(NC_MAX_DEPTH, format!("search budget exhausted in zone {z}")),
            NcOutcome::Fail => {
                let (_, _, chain) = search.failure.clone().unwrap();
                return match contraction_witness(f, z, &chain, delta0) {
                    Some(w) => Verdict::Refuted { witness: w },
                    None => Verdict::unknown(chain.len(), format!("expansion bound fails in zone {z} but no exact contracting interval was isolated")),
                };
            }
        }
    }
    Verdict::Proven { certificate: NonContractionCert { delta0: delta0.clone(), zones, nodes: search.nodes } }
}

pub fn check_non_contraction(f: &PLMap, v: &Verdict<NonContractionCert, ContractionWitness>) -> Result<(), CertError> {
    match v {
        Verdict::Proven { certificate } => {
            let again = non_contraction_check(f, &certificate.delta0);
            ensure(again.proven() == Some(certificate), "non_contraction.certificate", || "recomputation differs".into())
        }
        Verdict::Refuted { witness: w } => {
            let path = "non_contraction.witness";
            let crit = f.critical_set();
            let zones = side_zones(f, &w.delta0);
            ensure(zones.iter().any(|z| z.contains_open(w.j.lo()) && z.contains_open(w.j.hi())), path, || "J outside the zones".into())?;
            let mut cur = w.j.clone();
            for _ in 0..w.steps - 1 {
                cur = f.image(&cur);
                ensure(crit.iter().all(|t| !cur.contains(t)), path, || "earlier return to C".into())?;
            }
            cur = f.image(&cur);
            ensure(cur == w.image, path, || "image mismatch".into())?;
            ensure(crit.iter().any(|t| cur.contains(t)), path, || "no return to C".into())?;
            ensure(cur.len() <= w.j.len() * int(2), path, || "image more than doubles".into())
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

/// Convenience for reports that only need the status.
pub type Plain = Verdict<NoPayload, NoPayload>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn omega_of_gallery_maps() {
        let pts = |f: PLMap| omega_approx(&f, 64, 4096, &zero()).exact_points().unwrap();
        assert_eq!(pts(gallery::tent()), vec![zero()]);
        assert_eq!(pts(gallery::two_sided_spiral()), vec![rat(1, 9), rat(8, 9)]);
        assert_eq!(pts(gallery::double_spiral_arc()), vec![zero(), rat(1, 2), one()]);
        assert_eq!(pts(gallery::knaster_triple()), vec![rat(1, 3), rat(4, 9), rat(5, 9), rat(2, 3)]);
    }

    #[test]
    fn tent_pullback_halves() {
        let t = gallery::tent();
        let pb = pull_back(&t, &RatInterval::new(zero(), rat(1, 4)), &OrbitSpec::constant(zero()), 3).unwrap();
        for (k, j) in pb.intervals.iter().enumerate() {
            assert_eq!(j, &RatInterval::new(zero(), rat(1, 1 << (2 + k))));
        }
        assert_eq!(pb.monotone_up_to, 4);
    }
}
