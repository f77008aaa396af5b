//! Map-level properties: zigzags, long-zigzag bounds, leo and the preimage-length property.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{fmt_rat, int, rat_serde, rat_vec_serde, IntervalSet, Rat, RatInterval};
use crate::plmap::{FixedPoint, PLMap, DEFAULT_LAP_BUDGET};
use crate::verdict::{ensure, CertError, Verdict};

/// Image of a finite union of intervals.
pub fn image_set(f: &PLMap, s: &IntervalSet) -> IntervalSet {
    IntervalSet::from_parts(s.parts().iter().map(|p| f.image(p)))
}

fn covers_unit(s: &IntervalSet) -> bool {
    s.contains_interval(&RatInterval::unit())
}

// ---------------------------------------------------------------- zigzags

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Zigzag {
    pub n: usize,
    #[serde(with = "rat_serde")]
    pub a: Rat,
    #[serde(with = "rat_serde")]
    pub b: Rat,
    pub image: RatInterval,
    #[serde(with = "rat_serde")]
    pub magnitude: Rat,
    /// Infimum of magnitudes over all zigzags with the same lap pattern (never attained).
    #[serde(with = "rat_serde")]
    pub infimum: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZigzagFreeCert {
    pub checked_up_to: usize,
    /// A clean first iterate forces every iterate to be clean.
    pub all_iterates: bool,
}

/// All zigzag patterns of `g`, one representative each.
///
/// With `prune` the inner loop stops as soon as no wider pattern from the same
/// left lap can qualify; without it every lap pair is examined.
pub fn zigzag_candidates(g: &PLMap, n: usize, prune: bool) -> Vec<Zigzag> {
    let laps = g.laps();
    let m = laps.len();
    // Values at lap boundaries d_0 = 0, d_1, ..., d_m = 1.
    let mut vals: Vec<Rat> = laps.iter().map(|l| g.at(l.domain.lo())).collect();
    vals.push(g.at(laps[m - 1].domain.hi()));
    let mut out = Vec::new();
    for i in 0..m {
        let up = laps[i].direction > 0;
        let mut mn = vals[i + 1].clone();
        let mut mx = mn.clone();
        let mut j = i;
        // Lap j shares the direction of lap i, so j - i is even; the turning
        // values strictly between them are vals[i+1..=j].
        while j + 2 < m {
            for t in [&vals[j + 1], &vals[j + 2]] {
                if t < &mn {
                    mn = t.clone();
                }
                if t > &mx {
                    mx = t.clone();
                }
            }
            j += 2;
            let (start, end) = (&vals[i], &vals[j + 1]);
            if up {
                if prune && start >= &mn {
                    break;
                }
                if start < &mn && end > &mx {
                    out.push(witness(g, n, i, j, &laps, start, end, &mn, &mx, true));
                }
            } else {
                if prune && start <= &mx {
                    break;
                }
                if start > &mx && end < &mn {
                    out.push(witness(g, n, i, j, &laps, start, end, &mn, &mx, false));
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn witness(
    g: &PLMap,
    n: usize,
    i: usize,
    j: usize,
    laps: &[crate::plmap::Lap],
    start: &Rat,
    end: &Rat,
    lo_t: &Rat,
    hi_t: &Rat,
    up: bool,
) -> Zigzag {
    let (va, vb) = if up {
        ((start + lo_t) / int(2), (hi_t + end) / int(2))
    } else {
        ((start + hi_t) / int(2), (lo_t + end) / int(2))
    };
    let solve = |lap: &crate::plmap::Lap, v: &Rat| -> Rat {
        let (x0, x1) = (lap.domain.lo(), lap.domain.hi());
        // Laps may contain corners, so solve piece by piece.
        let pts: Vec<&(Rat, Rat)> = g.points().iter().filter(|p| x0 <= &p.0 && &p.0 <= x1).collect();
        for w in pts.windows(2) {
            let (a, fa) = (&w[0].0, &w[0].1);
            let (b, fb) = (&w[1].0, &w[1].1);
            if (fa <= v && v <= fb) || (fb <= v && v <= fa) {
                return a + (v - fa) * (b - a) / (fb - fa);
            }
        }
        unreachable!("value inside lap image")
    };
    let a = solve(&laps[i], &va);
    let b = solve(&laps[j], &vb);
    let magnitude = (&vb - &va).abs();
    Zigzag { n, a, b, image: RatInterval::spanning(va, vb), magnitude, infimum: hi_t - lo_t }
}

fn zigzag_key(z: &Zigzag) -> (Rat, usize, Rat) {
    (z.infimum.clone(), z.n, z.a.clone())
}

pub fn zigzag_scan(f: &PLMap, n: usize, budget: usize) -> Verdict<ZigzagFreeCert, Zigzag> {
    assert!(n >= 1, "scan depth must be at least 1");
    let mut best: Option<Zigzag> = None;
    let mut g = PLMap::identity();
    for m in 1..=n {
        g = match f.compose_after(&g, budget) {
            Ok(g) => g,
            Err(e) => {
                return match best {
                    Some(z) => Verdict::Refuted { witness: z },
                    None => Verdict::unknown(m - 1, e.to_string()),
                }
            }
        };
        for z in zigzag_candidates(&g, m, true) {
            if best.as_ref().is_none_or(|b| zigzag_key(&z) < zigzag_key(b)) {
                best = Some(z);
            }
        }
    }
    match best {
        Some(z) => Verdict::Refuted { witness: z },
        None => Verdict::Proven { certificate: ZigzagFreeCert { checked_up_to: n, all_iterates: true } },
    }
}

/// Checks the three defining conditions of a zigzag exactly.
pub fn check_zigzag(f: &PLMap, z: &Zigzag, budget: usize) -> Result<(), CertError> {
    let path = "zigzag";
    ensure(z.a < z.b, path, || "a must be below b".into())?;
    let g = f.power(z.n, budget).map_err(|e| CertError::new(path, e.to_string()))?;
    let (ga, gb) = (g.at(&z.a), g.at(&z.b));
    ensure(ga != gb, path, || "endpoint images coincide".into())?;
    let hull = RatInterval::spanning(ga.clone(), gb.clone());
    ensure(hull == z.image, path, || format!("image is {hull}, payload says {}", z.image))?;
    let dom = RatInterval::new(z.a.clone(), z.b.clone());
    ensure(g.image(&dom) == hull, path, || "image of [a,b] exceeds the endpoint hull".into())?;
    for v in [&ga, &gb] {
        ensure(g.preimages(v).iter().all(|x| !dom.contains_open(x)), path, || {
            format!("an interior point maps to {}", fmt_rat(v))
        })?;
    }
    ensure(!g.injective_on(&dom), path, || "iterate is injective on [a,b]".into())?;
    ensure(z.magnitude == hull.len(), path, || "magnitude mismatch".into())?;
    ensure(z.infimum.is_positive() && z.infimum <= z.magnitude, path, || "infimum out of range".into())
}

// ---------------------------------------------------------------- long-zigzag

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BranchBound {
    /// Some image of the open branch meets a critical point; `images` are `J_1..J_k`.
    Hitting {
        branch: RatInterval,
        k: usize,
        images: Vec<RatInterval>,
        #[serde(with = "rat_serde")]
        bound: Rat,
    },
    /// Images stay monotone and repeat exactly: `J_k = J_{repeat_of}`.
    Periodic {
        branch: RatInterval,
        repeat_of: usize,
        images: Vec<RatInterval>,
        #[serde(with = "rat_serde")]
        bound: Rat,
    },
    /// No slope of the map is below 1 in magnitude, so monotone images never shrink below the branch.
    Expanding {
        branch: RatInterval,
        #[serde(with = "rat_serde")]
        min_slope: Rat,
        #[serde(with = "rat_serde")]
        bound: Rat,
    },
}

impl BranchBound {
    pub fn bound(&self) -> &Rat {
        match self {
            BranchBound::Hitting { bound, .. } | BranchBound::Periodic { bound, .. } | BranchBound::Expanding { bound, .. } => bound,
        }
    }

    pub fn branch(&self) -> &RatInterval {
        match self {
            BranchBound::Hitting { branch, .. } | BranchBound::Periodic { branch, .. } | BranchBound::Expanding { branch, .. } => branch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongZigzagCert {
    #[serde(with = "rat_serde")]
    pub epsilon: Rat,
    pub per_branch: Vec<BranchBound>,
}

fn has_turning_inside(turning: &[Rat], iv: &RatInterval) -> bool {
    turning.iter().any(|t| iv.contains_open(t))
}

fn branch_bound(f: &PLMap, branch: &RatInterval, depth: usize, turning: &[Rat]) -> Option<BranchBound> {
    let mut images: Vec<RatInterval> = Vec::new();
    let mut cur = branch.clone();
    for k in 1..=depth {
        cur = f.image(&cur);
        if let Some(p) = images.iter().position(|j| j == &cur) {
            let bound = images.iter().map(|j| j.len()).min().unwrap();
            images.push(cur);
            return Some(BranchBound::Periodic { branch: branch.clone(), repeat_of: p + 1, images, bound });
        }
        images.push(cur.clone());
        if has_turning_inside(turning, &cur) {
            let bound = images.iter().map(|j| j.len()).min().unwrap();
            return Some(BranchBound::Hitting { branch: branch.clone(), k, images, bound });
        }
    }
    let min_slope = f.min_abs_slope();
    (min_slope >= Rat::one()).then(|| BranchBound::Expanding { branch: branch.clone(), min_slope, bound: branch.len() })
}

pub fn long_zigzag_certify(f: &PLMap, depth: usize) -> Verdict<LongZigzagCert, crate::verdict::NoPayload> {
    let c = f.critical_set();
    let turning = f.turning_points();
    let mut per_branch = Vec::new();
    for w in c.windows(2) {
        let branch = RatInterval::new(w[0].clone(), w[1].clone());
        match branch_bound(f, &branch, depth, &turning) {
            Some(b) => per_branch.push(b),
            None => {
                return Verdict::unknown(
                    depth,
                    format!("branch {branch}: images neither meet a critical point nor repeat, and the map contracts somewhere"),
                )
            }
        }
    }
    let epsilon = per_branch.iter().map(|b| b.bound().clone()).min().unwrap();
    Verdict::Proven { certificate: LongZigzagCert { epsilon, per_branch } }
}

pub fn check_long_zigzag(f: &PLMap, cert: &LongZigzagCert) -> Result<(), CertError> {
    let c = f.critical_set();
    let turning = f.turning_points();
    ensure(cert.per_branch.len() + 1 == c.len(), "long_zigzag", || "branch count mismatch".into())?;
    for (i, (w, b)) in c.windows(2).zip(&cert.per_branch).enumerate() {
        let path = format!("long_zigzag.per_branch[{i}]");
        let branch = RatInterval::new(w[0].clone(), w[1].clone());
        ensure(b.branch() == &branch, &path, || "branch mismatch".into())?;
        match b {
            BranchBound::Hitting { k, images, bound, .. } => {
                ensure(*k >= 1 && images.len() == *k, &path, || "image list length".into())?;
                let mut cur = branch.clone();
                for (j, im) in images.iter().enumerate() {
                    cur = f.image(&cur);
                    ensure(&cur == im, &path, || format!("image {} is {cur}", j + 1))?;
                    let inside = has_turning_inside(&turning, &cur);
                    ensure(inside == (j + 1 == *k), &path, || "first hitting time mismatch".into())?;
                }
                let m = images.iter().map(|j| j.len()).min().unwrap();
                ensure(&m == bound, &path, || "bound mismatch".into())?;
            }
            BranchBound::Periodic { repeat_of, images, bound, .. } => {
                let k = images.len();
                ensure(*repeat_of >= 1 && *repeat_of < k, &path, || "repeat index".into())?;
                let mut cur = branch.clone();
                for (j, im) in images.iter().enumerate() {
                    cur = f.image(&cur);
                    ensure(&cur == im, &path, || format!("image {} is {cur}", j + 1))?;
                    ensure(!has_turning_inside(&turning, &cur), &path, || "image meets a critical point".into())?;
                }
                ensure(images[k - 1] == images[repeat_of - 1], &path, || "images do not repeat".into())?;
                let m = images.iter().map(|j| j.len()).min().unwrap();
                ensure(&m == bound, &path, || "bound mismatch".into())?;
            }
            BranchBound::Expanding { min_slope, bound, .. } => {
                ensure(&f.min_abs_slope() == min_slope && min_slope >= &Rat::one(), &path, || "slope bound fails".into())?;
                ensure(bound == &branch.len(), &path, || "bound mismatch".into())?;
            }
        }
    }
    let eps = cert.per_branch.iter().map(|b| b.bound().clone()).min().unwrap();
    ensure(eps == cert.epsilon && eps.is_positive(), "long_zigzag.epsilon", || "epsilon mismatch".into())
}

// ---------------------------------------------------------------- leo

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LeoCert {
    /// Finite post-critical partition with a primitive covering relation and expansion.
    Markov {
        #[serde(with = "rat_vec_serde")]
        points: Vec<Rat>,
        rows: Vec<Vec<usize>>,
        exponent: usize,
        #[serde(with = "rat_serde")]
        min_slope: Rat,
    },
    /// Every lap reaches `[0,1]` and the map expands; weaker than an exact proof.
    UpToExpansion {
        #[serde(with = "rat_serde")]
        min_slope: Rat,
        lap_times: Vec<usize>,
    },
}

/// Sets with `f(cycle[r]) ⊆ cycle[r+1 mod d]`, all proper, and `interval ⊆ cycle[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeoWitness {
    pub interval: RatInterval,
    pub cycle: Vec<IntervalSet>,
}

fn leo_point_pool(f: &PLMap, budget: usize) -> Vec<Rat> {
    let mut pool: Vec<Rat> = f.critical_set();
    pool.extend(f.breakpoints_x().cloned());
    for k in [1, 2] {
        if let Ok(fps) = f.fixed_points(k, budget) {
            for fp in fps {
                pool.push(fp.lo().clone());
                pool.push(fp.hi().clone());
            }
        }
    }
    for c in f.critical_set() {
        pool.extend(f.orbit(&c, 8));
    }
    pool.sort();
    pool.dedup();
    pool
}

fn minimal_invariant(f: &PLMap, pool: &[Rat]) -> Option<RatInterval> {
    let unit = RatInterval::unit();
    let mut found: Vec<RatInterval> = Vec::new();
    for lap in f.laps() {
        let mut k = lap.domain.clone();
        for _ in 0..64 {
            let next = k.hull(&f.image(&k));
            if next == k {
                break;
            }
            k = next;
        }
        if f.image(&k).intersect(&k).as_ref() == Some(&f.image(&k)) && k != unit && !k.is_degenerate() {
            found.push(k);
        }
    }
    for (i, u) in pool.iter().enumerate() {
        for v in &pool[i + 1..] {
            let j = RatInterval::new(u.clone(), v.clone());
            if j != unit && j.contains_interval(&f.image(&j)) {
                found.push(j);
            }
        }
    }
    found.sort();
    found.dedup();
    let minimal: Vec<&RatInterval> =
        found.iter().filter(|j| !found.iter().any(|o| o != *j && j.contains_interval(o))).collect();
    minimal.first().map(|j| (*j).clone())
}

fn period_two_trap(f: &PLMap, pool: &[Rat]) -> Option<(RatInterval, RatInterval)> {
    let unit = RatInterval::unit();
    for (i, u) in pool.iter().enumerate() {
        for v in &pool[i + 1..] {
            let j = RatInterval::new(u.clone(), v.clone());
            let fj = f.image(&j);
            if j != unit && fj != unit && j.contains_interval(&f.image(&fj)) {
                return Some((j, fj));
            }
        }
    }
    None
}

/// Post-critical set, if every critical orbit repeats within `depth` steps.
pub fn post_critical_set(f: &PLMap, depth: usize) -> Option<Vec<Rat>> {
    let mut all = Vec::new();
    for c in f.critical_set() {
        let mut seen: Vec<Rat> = vec![c.clone()];
        let mut cur = c;
        let mut closed = false;
        for _ in 0..depth {
            cur = f.at(&cur);
            if seen.contains(&cur) {
                closed = true;
                break;
            }
            seen.push(cur.clone());
        }
        if !closed {
            return None;
        }
        all.extend(seen);
    }
    all.sort();
    all.dedup();
    Some(all)
}

/// Covering relation of a Markov partition: `rows[a]` lists the `b` with `I_b ⊆ f(I_a)`.
pub fn covering_rows(f: &PLMap, points: &[Rat]) -> Vec<Vec<usize>> {
    let parts: Vec<RatInterval> = points.windows(2).map(|w| RatInterval::new(w[0].clone(), w[1].clone())).collect();
    parts
        .iter()
        .map(|p| {
            let im = f.image(p);
            parts.iter().enumerate().filter(|(_, q)| im.contains_interval(q)).map(|(b, _)| b).collect()
        })
        .collect()
}

/// Smallest `k` with every entry of `M^k` positive, searched up to the Wielandt bound.
pub fn primitive_exponent(rows: &[Vec<usize>]) -> Option<usize> {
    let m = rows.len();
    let bound = (m - 1) * (m - 1) + 1;
    let mut cur: Vec<Vec<bool>> = rows.iter().map(|r| {
        let mut v = vec![false; m];
        r.iter().for_each(|&b| v[b] = true);
        v
    }).collect();
    for k in 1..=bound {
        if cur.iter().all(|r| r.iter().all(|&x| x)) {
            return Some(k);
        }
        cur = cur
            .iter()
            .map(|r| {
                let mut v = vec![false; m];
                for (j, _) in r.iter().enumerate().filter(|(_, &x)| x) {
                    rows[j].iter().for_each(|&b| v[b] = true);
                }
                v
            })
            .collect();
    }
    None
}

/// Classes of elements reachable from `start`, cycled with the period of the covering graph.
fn markov_trap(points: &[Rat], rows: &[Vec<usize>]) -> Option<(RatInterval, Vec<IntervalSet>)> {
    let m = rows.len();
    let parts: Vec<RatInterval> = points.windows(2).map(|w| RatInterval::new(w[0].clone(), w[1].clone())).collect();
    for start in 0..m {
        // Breadth-first levels from `start`.
        let mut level = vec![usize::MAX; m];
        level[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &b in &rows[a] {
                if level[b] == usize::MAX {
                    level[b] = level[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        let mut period = 0usize;
        for a in 0..m {
            if level[a] == usize::MAX {
                continue;
            }
            for &b in &rows[a] {
                let d = (level[a] + 1).abs_diff(level[b]);
                period = num_integer::gcd(period, d);
            }
        }
        if period == 0 {
            continue;
        }
        let classes: Vec<IntervalSet> = (0..period)
            .map(|r| {
                IntervalSet::from_parts(
                    (0..m).filter(|&a| level[a] != usize::MAX && level[a] % period == r).map(|a| parts[a].clone()),
                )
            })
            .collect();
        if classes.iter().all(|c| !covers_unit(c)) {
            return Some((parts[start].clone(), classes));
        }
    }
    None
}

pub fn leo_certify(f: &PLMap, depth: usize) -> Verdict<LeoCert, LeoWitness> {
    let pool = leo_point_pool(f, DEFAULT_LAP_BUDGET);
    if let Some(j) = minimal_invariant(f, &pool) {
        let cycle = vec![IntervalSet::from_parts([j.clone()])];
        return Verdict::Refuted { witness: LeoWitness { interval: j, cycle } };
    }
    if let Some((j, fj)) = period_two_trap(f, &pool) {
        let cycle = vec![IntervalSet::from_parts([j.clone()]), IntervalSet::from_parts([fj])];
        return Verdict::Refuted { witness: LeoWitness { interval: j, cycle } };
    }
    let min_slope = f.min_abs_slope();
    if let Some(points) = post_critical_set(f, depth) {
        let rows = covering_rows(f, &points);
        match primitive_exponent(&rows) {
            Some(exponent) if min_slope > Rat::one() => {
                return Verdict::Proven { certificate: LeoCert::Markov { points, rows, exponent, min_slope } };
            }
            Some(_) => {}
            None => {
                if let Some((interval, cycle)) = markov_trap(&points, &rows) {
                    return Verdict::Refuted { witness: LeoWitness { interval, cycle } };
                }
            }
        }
    }
    if min_slope > Rat::one() {
        let mut lap_times = Vec::new();
        for lap in f.laps() {
            let mut cur = lap.domain.clone();
            let mut hit = None;
            for k in 1..=depth {
                cur = f.image(&cur);
                if cur == RatInterval::unit() {
                    hit = Some(k);
                    break;
                }
            }
            match hit {
                Some(k) => lap_times.push(k),
                None => return Verdict::unknown(depth, format!("lap {} does not cover [0,1] within depth", lap.domain)),
            }
        }
        return Verdict::Proven { certificate: LeoCert::UpToExpansion { min_slope, lap_times } };
    }
    Verdict::unknown(depth, "no invariant interval found and the map is not uniformly expanding")
}

pub fn check_leo_witness(f: &PLMap, w: &LeoWitness) -> Result<(), CertError> {
    let path = "leo.witness";
    ensure(!w.interval.is_degenerate(), path, || "degenerate interval".into())?;
    ensure(!w.cycle.is_empty(), path, || "empty cycle".into())?;
    ensure(w.cycle[0].contains_interval(&w.interval), path, || "interval not inside the first set".into())?;
    let d = w.cycle.len();
    for r in 0..d {
        ensure(!covers_unit(&w.cycle[r]), path, || format!("set {r} is all of [0,1]"))?;
        let im = image_set(f, &w.cycle[r]);
        ensure(w.cycle[(r + 1) % d].contains_set(&im), path, || format!("image of set {r} escapes"))?;
    }
    Ok(())
}

pub fn check_leo_cert(f: &PLMap, c: &LeoCert, depth: usize) -> Result<(), CertError> {
    let path = "leo.certificate";
    match c {
        LeoCert::Markov { points, rows, exponent, min_slope } => {
            ensure(min_slope == &f.min_abs_slope() && min_slope > &Rat::one(), path, || "slope".into())?;
            ensure(points.windows(2).all(|w| w[0] < w[1]), path, || "points unsorted".into())?;
            for c in f.critical_set() {
                ensure(points.binary_search(&c).is_ok(), path, || format!("critical point {} missing", fmt_rat(&c)))?;
            }
            for p in points {
                ensure(points.binary_search(&f.at(p)).is_ok(), path, || "points not forward invariant".into())?;
            }
            ensure(&covering_rows(f, points) == rows, path, || "covering relation mismatch".into())?;
            ensure(primitive_exponent(rows) == Some(*exponent), path, || "primitivity exponent mismatch".into())
        }
        LeoCert::UpToExpansion { min_slope, lap_times } => {
            ensure(min_slope == &f.min_abs_slope() && min_slope > &Rat::one(), path, || "slope".into())?;
            let laps = f.laps();
            ensure(laps.len() == lap_times.len(), path, || "lap count".into())?;
            for (lap, &t) in laps.iter().zip(lap_times) {
                ensure(t <= depth.max(t), path, || "time".into())?;
                let mut cur = lap.domain.clone();
                for _ in 0..t {
                    cur = f.image(&cur);
                }
                ensure(cur == RatInterval::unit(), path, || format!("lap {} does not cover", lap.domain))?;
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- preimage lengths

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RainesCert {
    #[serde(with = "rat_vec_serde")]
    pub values: Vec<Rat>,
    pub pairs_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RainesWitness {
    pub j: RatInterval,
    pub component: RatInterval,
}

fn raines_values(f: &PLMap) -> Vec<Rat> {
    let mut v: Vec<Rat> = f.points().iter().map(|p| p.1.clone()).collect();
    v.push(Rat::zero());
    v.push(Rat::one());
    v.sort();
    v.dedup();
    v
}

/// Checks `|A| ≤ |J|` for every component `A` of `f^{-1}(J)`.
///
/// The excess `|A| - |J|` is piecewise linear in the endpoints of `J` with
/// pieces cut at breakpoint values, so its maximum sits on pairs of those values.
pub fn raines_property_probe(f: &PLMap, resolution: usize) -> Verdict<RainesCert, RainesWitness> {
    let values = raines_values(f);
    if values.len() > resolution {
        return Verdict::unknown(resolution, format!("{} candidate values exceed the resolution", values.len()));
    }
    let mut best: Option<(Rat, RainesWitness)> = None;
    let mut pairs = 0;
    for (i, u) in values.iter().enumerate() {
        for v in &values[i + 1..] {
            pairs += 1;
            let j = RatInterval::new(u.clone(), v.clone());
            for a in f.preimage_components(&j) {
                let excess = a.len() - j.len();
                if excess.is_positive() && best.as_ref().is_none_or(|(e, _)| &excess > e) {
                    best = Some((excess, RainesWitness { j: j.clone(), component: a }));
                }
            }
        }
    }
    match best {
        Some((_, w)) => Verdict::Refuted { witness: w },
        None => Verdict::Proven { certificate: RainesCert { values, pairs_checked: pairs } },
    }
}

pub fn check_raines(f: &PLMap, v: &Verdict<RainesCert, RainesWitness>) -> Result<(), CertError> {
    match v {
        Verdict::Refuted { witness } => {
            let comps = f.preimage_components(&witness.j);
            ensure(comps.contains(&witness.component), "raines.witness", || "not a preimage component".into())?;
            ensure(witness.component.len() > witness.j.len(), "raines.witness", || "component not longer".into())
        }
        Verdict::Proven { certificate } => {
            ensure(certificate.values == raines_values(f), "raines.certificate", || "value set mismatch".into())?;
            let again = raines_property_probe(f, usize::MAX);
            ensure(again.is_proven(), "raines.certificate", || "recomputation found a longer component".into())
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

/// Fixed points of `f^k` as plain numbers, with segment ends included.
pub fn fixed_point_values(fps: &[FixedPoint]) -> Vec<Rat> {
    let mut out = Vec::new();
    for fp in fps {
        out.push(fp.lo().clone());
        if fp.hi() != fp.lo() {
            out.push(fp.hi().clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::numeric::rat;

    #[test]
    fn invariant_middle_zigzag() {
        let z = zigzag_scan(&gallery::invariant_middle(), 1, 1000);
        let w = z.refuted().unwrap();
        assert_eq!((w.a.clone(), w.b.clone()), (rat(1, 12), rat(11, 12)));
        assert_eq!(w.magnitude, rat(2, 3));
        check_zigzag(&gallery::invariant_middle(), w, 1000).unwrap();
    }

    #[test]
    fn tent_is_zigzag_free() {
        assert!(zigzag_scan(&gallery::tent(), 4, 1000).is_proven());
    }

    #[test]
    fn epsilon_values() {
        let eps = |f: PLMap| long_zigzag_certify(&f, 64).proven().unwrap().epsilon.clone();
        assert_eq!(eps(gallery::minc()), rat(1, 3));
        assert_eq!(eps(gallery::invariant_middle()), rat(1, 3));
        assert_eq!(eps(gallery::knaster_triple()), rat(1, 9));
        assert_eq!(eps(PLMap::identity()), rat(1, 1));
    }
}
