//! Points of the inverse limit, represented by backward orbits: basic arcs,
//! endpoint and folding tests, and the arc decision.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{omega_approx, one_sided_images, recurrence_check, OmegaApprox, RecurrenceWitness};
use crate::asymptotics::{DEFAULT_HORIZON, DEFAULT_TRANSIENT};
use crate::certify::{leo_certify, long_zigzag_certify, zigzag_scan, LeoCert};
use crate::mapspec::OrbitSpec;
use crate::numeric::{fmt_rat, int, max_rat, min_rat, one, rat_serde, rat_vec_serde, zero, IntervalSet, Rat, RatInterval};
use crate::plmap::{FixedPoint, PLMap, Side, DEFAULT_LAP_BUDGET};
use crate::verdict::{ensure, CertError, NoPayload, Verdict};

const POWER_BUDGET: usize = 50_000;

// ---------------------------------------------------------------- basic arcs

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcWindow {
    pub k: usize,
    /// Hull of the images of the maximal monotone one-sided laps at `x_{i+k}`.
    pub window: RatInterval,
    /// How far the basic arc can extend left and right of `x_i` at this depth.
    #[serde(with = "rat_serde")]
    pub left_reach: Rat,
    #[serde(with = "rat_serde")]
    pub right_reach: Rat,
    /// `x_{i+k}` is a turning point of `f^k`: arcs through the point extend to one side only.
    pub pinched: bool,
}

impl ArcWindow {
    pub fn interior(&self) -> bool {
        !self.pinched && self.left_reach.is_positive() && self.right_reach.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasicArcTrace {
    pub orbit: OrbitSpec,
    pub i: usize,
    pub windows: Vec<ArcWindow>,
}

impl BasicArcTrace {
    /// Window at the deepest computed level.
    pub fn deepest(&self) -> &ArcWindow {
        self.windows.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IlimError {
    #[error("orbit has only {have} coordinates, {need} needed")]
    OrbitTooShort { have: usize, need: usize },
}

fn window_at(f: &PLMap, x_deep: &Rat, k: usize) -> ArcWindow {
    let (y, a, b) = one_sided_images(f, x_deep, k);
    let reach = |iv: &RatInterval| -> (Rat, Rat) {
        if iv.is_degenerate() {
            (zero(), zero())
        } else if iv.hi() == &y {
            (iv.len(), zero())
        } else {
            (zero(), iv.len())
        }
    };
    let (la, ra) = reach(&a);
    let (lb, rb) = reach(&b);
    let pinched = !a.is_degenerate() && !b.is_degenerate() && (la.is_positive() == lb.is_positive());
    ArcWindow {
        k,
        window: a.hull(&b),
        left_reach: max_rat(&la, &lb).clone(),
        right_reach: max_rat(&ra, &rb).clone(),
        pinched,
    }
}

pub fn basic_arc(f: &PLMap, orbit: &OrbitSpec, i: usize, depth: usize) -> Result<BasicArcTrace, IlimError> {
    let xs = orbit.unrolled(i + depth + 1);
    if xs.len() < i + depth + 1 {
        return Err(IlimError::OrbitTooShort { have: xs.len(), need: i + depth + 1 });
    }
    let windows = (0..=depth).map(|k| window_at(f, &xs[i + k], k)).collect();
    Ok(BasicArcTrace { orbit: orbit.clone(), i, windows })
}

// ---------------------------------------------------------------- B-endpoints

/// Position of `x_i` in its basic arc, decided exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoordinateStatus {
    /// `x_j ∈ {0,1}` for some `j ≥ i`, so one side of the arc is empty.
    Edge { i: usize, j: usize },
    /// `x_j` is a turning point for some `j > i`, so arcs extend to one side only.
    Pinched { i: usize, j: usize },
    /// Limits of the one-sided reaches, from the fixed points of the period-doubled return map.
    Limit {
        i: usize,
        #[serde(with = "rat_serde")]
        left: Rat,
        #[serde(with = "rat_serde")]
        right: Rat,
    },
    /// A prefix coordinate carried monotonically onto coordinate `from`, sharing its position.
    Inherited { i: usize, from: usize, boundary: bool },
}

impl CoordinateStatus {
    pub fn at_boundary(&self) -> bool {
        match self {
            CoordinateStatus::Limit { left, right, .. } => left.is_zero() || right.is_zero(),
            CoordinateStatus::Inherited { boundary, .. } => *boundary,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BEndpointCert {
    pub coordinates: Vec<CoordinateStatus>,
}

/// Largest `t ≤ t0` with `G(t) = t`, where `G` is the one-sided reach map of `h` at `x`.
fn limit_reach(h: &PLMap, x: &Rat, side: Side, t0: &Rat) -> Rat {
    if t0.is_zero() {
        return zero();
    }
    let Some(lap) = h.lap_on_side(x, side) else { return zero() };
    let n = match side {
        Side::Left => x - lap.lo(),
        Side::Right => lap.hi() - x,
    };
    let reach_of = |t: &Rat| -> Rat {
        match side {
            Side::Left => x - h.at(&(x - t)),
            Side::Right => h.at(&(x + t)) - x,
        }
    };
    // Beyond the lap the map is constant.
    if &n < t0 {
        let g_n = reach_of(&n);
        if &g_n > &n && &g_n <= t0 {
            return g_n;
        }
    }
    let span = min_rat(&n, t0).clone();
    let window = match side {
        Side::Left => RatInterval::new(x - &span, x.clone()),
        Side::Right => RatInterval::new(x.clone(), x + &span),
    };
    let mut best = zero();
    for fp in h.fixed_points_of_self() {
        let cand = match (&fp, side) {
            (_, Side::Left) if fp.hi() >= window.lo() && fp.lo() < x => x - max_rat(fp.lo(), window.lo()),
            (_, Side::Right) if fp.lo() <= window.hi() && fp.hi() > x => min_rat(fp.hi(), window.hi()) - x,
            _ => continue,
        };
        if cand > best {
            best = cand;
        }
    }
    best
}

fn coordinate_statuses(f: &PLMap, orbit: &OrbitSpec) -> Option<Vec<CoordinateStatus>> {
    let (m, p) = orbit.tail()?;
    let xs = orbit.unrolled(m + 2 * p);
    let turning = f.turning_points();
    let edge = |x: &Rat| x.is_zero() || x == &one();
    // Cycle coordinates first, then the prefix which inherits from coordinate m.
    let mut cyc = Vec::new();
    let h = f.power(2 * p, POWER_BUDGET).ok();
    for i in m..m + p {
        let st = if let Some(j) = (i..i + p).find(|&j| edge(&xs[j])) {
            CoordinateStatus::Edge { i, j }
        } else if let Some(j) = (i + 1..=i + p).find(|&j| turning.contains(&xs[j])) {
            CoordinateStatus::Pinched { i, j }
        } else {
            let h = h.as_ref()?;
            let x = &xs[i];
            CoordinateStatus::Limit {
                i,
                left: limit_reach(h, x, Side::Left, x),
                right: limit_reach(h, x, Side::Right, &(one() - x)),
            }
        };
        cyc.push(st);
    }
    let mut out = Vec::new();
    for i in 0..m {
        let st = if let Some(j) = (i..m + p).find(|&j| edge(&xs[j])) {
            CoordinateStatus::Edge { i, j }
        } else if let Some(j) = (i + 1..m + p + 1).find(|&j| turning.contains(&xs[j])) {
            CoordinateStatus::Pinched { i, j }
        } else {
            // A monotone image of a neighbourhood is a neighbourhood, and of a one-sided one is one-sided.
            CoordinateStatus::Inherited { i, from: m, boundary: cyc[0].at_boundary() }
        };
        out.push(st);
    }
    out.extend(cyc);
    Some(out)
}

pub fn b_endpoint_test(f: &PLMap, orbit: &OrbitSpec, depth: usize) -> Verdict<BEndpointCert, CoordinateStatus> {
    if !orbit.is_periodic() {
        return Verdict::unknown(depth, "finite orbit: no periodic regime to make the window limits exact");
    }
    let Some(coordinates) = coordinate_statuses(f, orbit) else {
        return Verdict::unknown(depth, "return map exceeds the lap budget");
    };
    match coordinates.iter().find(|c| !c.at_boundary()) {
        Some(c) => Verdict::Refuted { witness: c.clone() },
        None => Verdict::Proven { certificate: BEndpointCert { coordinates } },
    }
}

pub fn check_b_endpoint(f: &PLMap, orbit: &OrbitSpec, v: &Verdict<BEndpointCert, CoordinateStatus>) -> Result<(), CertError> {
    let path = "b_endpoint";
    orbit.validate(f).map_err(|k| CertError::new(path, format!("orbit link {k} fails")))?;
    let again = coordinate_statuses(f, orbit);
    match v {
        Verdict::Proven { certificate } => {
            ensure(again.as_ref() == Some(&certificate.coordinates), path, || "coordinate statuses differ".into())?;
            ensure(certificate.coordinates.iter().all(|c| c.at_boundary()), path, || "interior coordinate".into())
        }
        Verdict::Refuted { witness } => {
            ensure(again.is_some_and(|a| a.contains(witness)), path, || "witness not reproduced".into())?;
            ensure(!witness.at_boundary(), path, || "witness is on the boundary".into())
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------- folding points

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldingCert {
    #[serde(with = "rat_vec_serde")]
    pub coordinates: Vec<Rat>,
    #[serde(with = "rat_vec_serde")]
    pub omega: Vec<Rat>,
    #[serde(with = "rat_serde")]
    pub long_zigzag_epsilon: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldingWitness {
    pub n: usize,
    #[serde(with = "rat_serde")]
    pub x: Rat,
    /// Distance from `x_n` to the forward-invariant cover of omega(C).
    #[serde(with = "rat_serde")]
    pub delta: Rat,
}

pub fn folding_test(f: &PLMap, orbit: &OrbitSpec, omega: &OmegaApprox, depth: usize) -> Verdict<FoldingCert, FoldingWitness> {
    let n = orbit.len().unwrap_or(orbit.prefix.len() + orbit.cycle.as_ref().map_or(0, |c| c.len()));
    for (k, x) in orbit.unrolled(n).iter().enumerate() {
        if let Some(d) = omega.cover.distance(x) {
            if d.is_positive() {
                return Verdict::Refuted { witness: FoldingWitness { n: k, x: x.clone(), delta: d } };
            }
        }
    }
    if !orbit.is_periodic() {
        return Verdict::unknown(depth, "finite orbit: coordinates beyond the prefix are unconstrained");
    }
    let Some(points) = omega.exact_points() else {
        return Verdict::unknown(depth, "omega(C) is only known through an outer cover");
    };
    match long_zigzag_certify(f, depth) {
        Verdict::Proven { certificate } => Verdict::Proven {
            certificate: FoldingCert { coordinates: orbit.values(), omega: points, long_zigzag_epsilon: certificate.epsilon },
        },
        _ => Verdict::unknown(depth, "coordinates lie in omega(C) but long-zigzag is not proven"),
    }
}

pub fn check_folding(f: &PLMap, orbit: &OrbitSpec, omega: &OmegaApprox, v: &Verdict<FoldingCert, FoldingWitness>) -> Result<(), CertError> {
    let path = "folding";
    match v {
        Verdict::Proven { certificate: c } => {
            crate::asymptotics::check_omega(f, omega)?;
            orbit.validate(f).map_err(|k| CertError::new(path, format!("orbit link {k} fails")))?;
            ensure(orbit.is_periodic() && c.coordinates == orbit.values(), path, || "coordinates".into())?;
            ensure(omega.exact_points().as_ref() == Some(&c.omega), path, || "omega mismatch".into())?;
            ensure(c.coordinates.iter().all(|x| c.omega.contains(x)), path, || "coordinate outside omega(C)".into())?;
            let lz = long_zigzag_certify(f, DEFAULT_TRANSIENT);
            ensure(lz.proven().is_some_and(|l| l.epsilon == c.long_zigzag_epsilon), path, || "long-zigzag".into())
        }
        Verdict::Refuted { witness: w } => {
            crate::asymptotics::check_omega(f, omega)?;
            ensure(orbit.coord(w.n) == Some(&w.x), path, || "coordinate mismatch".into())?;
            ensure(omega.cover.distance(&w.x) == Some(w.delta.clone()) && w.delta.is_positive(), path, || {
                "coordinate is not separated from the cover".into()
            })
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------- endpoints

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisChain {
    pub hypotheses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DoubleSpiralCert {
    /// The inverse limit is an arc and the point is not one of its two ends.
    ArcInterior {
        #[serde(with = "rat_vec_serde")]
        arc_ends: Vec<Rat>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DoubleSpiralWitness {
    /// Long-zigzag maps have no double spiral points.
    LongZigzag {
        #[serde(with = "rat_serde")]
        epsilon: Rat,
    },
    NotBEndpoint { coordinate: CoordinateStatus },
    /// The inverse limit is an arc and the point is one of its ends.
    ArcEnd {
        #[serde(with = "rat_vec_serde")]
        arc_ends: Vec<Rat>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointClass {
    pub orbit: OrbitSpec,
    pub folding: Verdict<FoldingCert, FoldingWitness>,
    pub b_endpoint: Verdict<BEndpointCert, CoordinateStatus>,
    pub endpoint: Verdict<HypothesisChain, HypothesisChain>,
    pub double_spiral: Verdict<DoubleSpiralCert, DoubleSpiralWitness>,
    pub hypotheses_used: Vec<String>,
}

/// Hypotheses under which B-endpoints and endpoints coincide, or the missing one.
fn endpoint_hypotheses(f: &PLMap, depth: usize) -> Result<Vec<String>, String> {
    if let Verdict::Proven { certificate } = zigzag_scan(f, 4, DEFAULT_LAP_BUDGET) {
        if certificate.all_iterates {
            return Ok(vec!["zigzag-free Proven".into()]);
        }
    }
    let lz = long_zigzag_certify(f, depth);
    if !lz.is_proven() {
        return Err("endpoint undecided: neither zigzag-free nor long-zigzag is proven".into());
    }
    match leo_certify(f, depth) {
        Verdict::Proven { certificate: LeoCert::Markov { .. } } => {
            Ok(vec!["long-zigzag Proven".into(), "leo Proven(Markov)".into()])
        }
        Verdict::Proven { certificate: LeoCert::UpToExpansion { .. } } => {
            Ok(vec!["long-zigzag Proven".into(), "leo Proven-up-to-expansion".into()])
        }
        _ => Err("endpoint undecided: long-zigzag holds but leo is not proven".into()),
    }
}

pub fn double_spiral_probe(f: &PLMap, orbit: &OrbitSpec, depth: usize) -> Verdict<DoubleSpiralCert, DoubleSpiralWitness> {
    let b = b_endpoint_test(f, orbit, depth);
    double_spiral_given(f, orbit, &b, depth)
}

fn double_spiral_given(
    f: &PLMap,
    orbit: &OrbitSpec,
    b: &Verdict<BEndpointCert, CoordinateStatus>,
    depth: usize,
) -> Verdict<DoubleSpiralCert, DoubleSpiralWitness> {
    if let Verdict::Refuted { witness } = b {
        return Verdict::Refuted { witness: DoubleSpiralWitness::NotBEndpoint { coordinate: witness.clone() } };
    }
    if let Verdict::Proven { certificate } = long_zigzag_certify(f, depth) {
        return Verdict::Refuted { witness: DoubleSpiralWitness::LongZigzag { epsilon: certificate.epsilon } };
    }
    if !b.is_proven() {
        return Verdict::unknown(depth, "B-endpoint status undecided");
    }
    let arc = arc_check(f, depth);
    let Verdict::Proven { certificate } = &arc.verdict else {
        return Verdict::unknown(depth, "no arc structure to place the point in");
    };
    let ends = vec![certificate.ends[0].clone(), certificate.ends[1].clone()];
    let at_end = ends.iter().any(|e| normalize(&arc_end_orbit(f, e)) == normalize(orbit));
    if at_end {
        Verdict::Refuted { witness: DoubleSpiralWitness::ArcEnd { arc_ends: ends } }
    } else {
        Verdict::Proven { certificate: DoubleSpiralCert::ArcInterior { arc_ends: ends } }
    }
}

/// Backward orbit through the `f²`-fixed point `y`: `y, f(y), y, f(y), ...`.
pub fn arc_end_orbit(f: &PLMap, y: &Rat) -> OrbitSpec {
    let fy = f.at(y);
    if &fy == y {
        OrbitSpec::periodic(Vec::new(), vec![y.clone()])
    } else {
        OrbitSpec::periodic(Vec::new(), vec![y.clone(), fy])
    }
}

/// Shortest repeating block of a purely periodic orbit; `None` for other orbits.
fn normalize(o: &OrbitSpec) -> Option<Vec<Rat>> {
    let (m, p) = o.tail()?;
    let all = o.unrolled(2 * (m + p) + p);
    let q = (1..=p).find(|&q| (0..all.len()).all(|k| all[k] == all[k % q]))?;
    Some(all[..q].to_vec())
}

pub fn endpoint_classify(f: &PLMap, orbit: &OrbitSpec, depth: usize) -> PointClass {
    let omega = omega_approx(f, DEFAULT_TRANSIENT, DEFAULT_HORIZON, &zero());
    endpoint_classify_with(f, orbit, &omega, depth)
}

pub fn endpoint_classify_with(f: &PLMap, orbit: &OrbitSpec, omega: &OmegaApprox, depth: usize) -> PointClass {
    let b_endpoint = b_endpoint_test(f, orbit, depth);
    let folding = folding_test(f, orbit, omega, depth);
    let hyp = endpoint_hypotheses(f, depth);
    let (endpoint, hypotheses_used) = match (&hyp, &b_endpoint) {
        (Ok(h), Verdict::Proven { .. }) => (Verdict::Proven { certificate: HypothesisChain { hypotheses: h.clone() } }, h.clone()),
        (Ok(h), Verdict::Refuted { .. }) => (Verdict::Refuted { witness: HypothesisChain { hypotheses: h.clone() } }, h.clone()),
        (Ok(h), Verdict::Unknown { .. }) => (Verdict::unknown(depth, "B-endpoint status undecided"), h.clone()),
        (Err(missing), _) => (Verdict::unknown(depth, missing.clone()), Vec::new()),
    };
    let double_spiral = double_spiral_given(f, orbit, &b_endpoint, depth);
    PointClass { orbit: orbit.clone(), folding, b_endpoint, endpoint, double_spiral, hypotheses_used }
}

pub fn check_point_class(f: &PLMap, omega: &OmegaApprox, pc: &PointClass, depth: usize) -> Result<(), CertError> {
    check_b_endpoint(f, &pc.orbit, &pc.b_endpoint).map_err(|e| e.under("point"))?;
    check_folding(f, &pc.orbit, omega, &pc.folding).map_err(|e| e.under("point"))?;
    let path = "point.endpoint";
    match &pc.endpoint {
        Verdict::Proven { certificate: h } | Verdict::Refuted { witness: h } => {
            let again = endpoint_hypotheses(f, depth).map_err(|m| CertError::new(path, m))?;
            ensure(again == h.hypotheses, path, || "hypothesis chain not reproduced".into())?;
            ensure(pc.endpoint.status() == pc.b_endpoint.status(), path, || "endpoint disagrees with B-endpoint".into())?;
        }
        Verdict::Unknown { .. } => {}
    }
    let path = "point.double_spiral";
    match &pc.double_spiral {
        Verdict::Proven { certificate: DoubleSpiralCert::ArcInterior { arc_ends } } => {
            ensure(pc.b_endpoint.is_proven(), path, || "not a B-endpoint".into())?;
            let arc = arc_check(f, depth);
            check_arc(f, &arc).map_err(|e| e.under("point"))?;
            let ends = arc.verdict.proven().map(|c| c.ends.to_vec());
            ensure(ends.as_ref() == Some(arc_ends), path, || "arc ends".into())?;
            ensure(arc_ends.iter().all(|e| normalize(&arc_end_orbit(f, e)) != normalize(&pc.orbit)), path, || {
                "point is an arc end".into()
            })
        }
        Verdict::Refuted { witness } => match witness {
            DoubleSpiralWitness::LongZigzag { epsilon } => {
                let lz = long_zigzag_certify(f, depth);
                ensure(lz.proven().is_some_and(|c| &c.epsilon == epsilon), path, || "long-zigzag".into())
            }
            DoubleSpiralWitness::NotBEndpoint { coordinate } => {
                ensure(pc.b_endpoint.refuted() == Some(coordinate), path, || "B-endpoint witness".into())
            }
            DoubleSpiralWitness::ArcEnd { arc_ends } => {
                let arc = arc_check(f, depth);
                check_arc(f, &arc).map_err(|e| e.under("point"))?;
                ensure(arc.verdict.proven().map(|c| c.ends.to_vec()).as_ref() == Some(arc_ends), path, || "arc ends".into())?;
                ensure(arc_ends.iter().any(|e| normalize(&arc_end_orbit(f, e)) == normalize(&pc.orbit)), path, || {
                    "point is not an arc end".into()
                })
            }
        },
        Verdict::Unknown { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------- endpoint construction

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReturnStep {
    pub j: usize,
    pub return_time: usize,
    /// Coordinate index at which the orbit passes through `c` again.
    pub coordinate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConstruction {
    #[serde(with = "rat_serde")]
    pub c: Rat,
    pub orbit: OrbitSpec,
    pub log: Vec<ReturnStep>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("NotRecurrent: {0} does not return to itself")]
    NotRecurrent(String, Box<RecurrenceWitness>),
    #[error("recurrence of {0} is undecided: {1}")]
    Undecided(String, String),
}

pub fn endpoint_construct(f: &PLMap, c: &Rat, depth: usize) -> Result<EndpointConstruction, ConstructError> {
    match recurrence_check(f, c, depth.max(DEFAULT_TRANSIENT)) {
        Verdict::Proven { certificate } => {
            let p = certificate.cycle.len();
            let fwd = f.orbit(c, p - 1);
            let mut back = vec![c.clone()];
            back.extend(fwd[1..].iter().rev().cloned());
            let log = (1..=depth.max(1)).map(|j| ReturnStep { j, return_time: p, coordinate: j * p }).collect();
            Ok(EndpointConstruction {
                c: c.clone(),
                orbit: OrbitSpec::periodic(back.clone(), back),
                log,
                notes: vec!["the variant assuming every critical point lies in omega(C) is not implemented".into()],
            })
        }
        Verdict::Refuted { witness } => Err(ConstructError::NotRecurrent(fmt_rat(c), Box::new(witness))),
        Verdict::Unknown { reason, .. } => Err(ConstructError::Undecided(fmt_rat(c), reason)),
    }
}

// ---------------------------------------------------------------- arc decision

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrapPiece {
    /// `f²` increases on the interval and moves every point towards `target` on `side`.
    OneSided { interval: RatInterval, side: Side },
    /// `f²` fixes `target` and has slopes of magnitude at most `lipschitz < 1` on the interval.
    Lipschitz {
        interval: RatInterval,
        #[serde(with = "rat_serde")]
        lipschitz: Rat,
    },
}

impl TrapPiece {
    pub fn interval(&self) -> &RatInterval {
        match self {
            TrapPiece::OneSided { interval, .. } | TrapPiece::Lipschitz { interval, .. } => interval,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverPiece {
    pub piece: RatInterval,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractionCert {
    #[serde(with = "rat_serde")]
    pub target: Rat,
    pub traps: Vec<TrapPiece>,
    /// `[a+η, f²(a+η)]` (or its mirror) next to a repelling fixed end `a`.
    pub fundamental: Option<RatInterval>,
    pub cover: Vec<CoverPiece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentResult {
    /// Closure of the component of `I \ Fix(f²)`.
    pub component: RatInterval,
    pub open_lo: bool,
    pub open_hi: bool,
    /// +1 when `f²(x) > x` on the component.
    pub direction: i8,
    pub attraction: Option<AttractionCert>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcCert {
    /// Base points of the two ends of the arc: the extreme points of `Fix(f²)`.
    #[serde(with = "rat_vec_serde")]
    pub ends: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicWitness {
    #[serde(with = "rat_serde")]
    pub point: Rat,
    /// `f^{2m}(point) = point` while `f²(point) ≠ point`.
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDecision {
    pub fix2: Vec<FixedPointRecord>,
    pub components: Vec<ComponentResult>,
    pub verdict: Verdict<ArcCert, PeriodicWitness>,
}

/// Serializable form of a fixed point or a diagonal segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointRecord {
    #[serde(with = "rat_serde")]
    pub lo: Rat,
    #[serde(with = "rat_serde")]
    pub hi: Rat,
}

const ARC_MAX_STEPS: usize = 24;
const ARC_MAX_PIECES: usize = 4096;
const ARC_MAX_PERIOD: usize = 8;

fn slopes_in(g: &PLMap, iv: &RatInterval) -> Vec<Rat> {
    let pts = g.points();
    (0..pts.len() - 1).filter(|&i| &pts[i].0 < iv.hi() && &pts[i + 1].0 > iv.lo()).map(|i| g.slope(i)).collect()
}

fn increasing_on(g: &PLMap, iv: &RatInterval) -> bool {
    slopes_in(g, iv).iter().all(|s| s.is_positive())
}

fn components_of(fix: &[FixedPoint]) -> Vec<(RatInterval, bool, bool)> {
    let mut out = Vec::new();
    let first = fix.first().expect("a continuous self-map has a fixed point");
    if first.lo().is_positive() {
        out.push((RatInterval::new(zero(), first.lo().clone()), false, true));
    }
    for w in fix.windows(2) {
        out.push((RatInterval::new(w[0].hi().clone(), w[1].lo().clone()), true, true));
    }
    let last = fix.last().unwrap();
    if last.hi() < &one() {
        out.push((RatInterval::new(last.hi().clone(), one()), true, false));
    }
    out
}

fn traps_at(g: &PLMap, y: &Rat, comps: &[(RatInterval, i8)]) -> Vec<TrapPiece> {
    let mut out = Vec::new();
    let turning = g.turning_points();
    // One-sided traps on whichever sides move towards y.
    for (comp, dir) in comps {
        let (side, ok) = if comp.hi() == y { (Side::Left, *dir > 0) } else if comp.lo() == y { (Side::Right, *dir < 0) } else { continue };
        if !ok {
            continue;
        }
        let reach = match side {
            Side::Left => turning.iter().filter(|t| *t < y).map(|t| y - t).min(),
            Side::Right => turning.iter().filter(|t| *t > y).map(|t| t - y).min(),
        };
        // The far end must stay strictly inside the component so that it moves.
        let half = comp.len() / int(2);
        let t = match reach {
            Some(r) => min_rat(&r, &half).clone(),
            None => half,
        };
        let interval = match side {
            Side::Left => RatInterval::new(y - &t, y.clone()),
            Side::Right => RatInterval::new(y.clone(), y + &t),
        };
        if increasing_on(g, &interval) {
            out.push(TrapPiece::OneSided { interval, side });
        }
    }
    // Two-sided contraction when both one-sided slopes are small.
    let xs = g.points();
    let k = xs.partition_point(|p| &p.0 < y);
    let left = (k > 0).then(|| y - &xs[k - 1].0);
    let kr = xs.partition_point(|p| &p.0 <= y);
    let right = (kr < xs.len()).then(|| &xs[kr].0 - y);
    let r = match (&left, &right) {
        (Some(a), Some(b)) => Some(min_rat(a, b).clone()),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        _ => None,
    };
    if let Some(r) = r {
        let interval = RatInterval::new(max_rat(&(y - &r), &zero()).clone(), min_rat(&(y + &r), &one()).clone());
        let l = slopes_in(g, &interval).into_iter().map(|s| s.abs()).max().unwrap_or_else(one);
        if l < Rat::one() {
            out.push(TrapPiece::Lipschitz { interval, lipschitz: l });
        }
    }
    out
}

fn trap_set(traps: &[TrapPiece]) -> IntervalSet {
    IntervalSet::from_parts(traps.iter().map(|t| t.interval().clone()))
}

fn land_steps(g: &PLMap, piece: &RatInterval, target: &IntervalSet) -> Option<usize> {
    let mut cur = piece.clone();
    for s in 0..=ARC_MAX_STEPS {
        if target.contains_interval(&cur) {
            return Some(s);
        }
        cur = g.image(&cur);
    }
    None
}

fn cover_compact(g: &PLMap, k: &RatInterval, target: &IntervalSet, depth: usize) -> Option<Vec<CoverPiece>> {
    let mut out = Vec::new();
    let mut stack = vec![(k.clone(), 0usize)];
    while let Some((p, d)) = stack.pop() {
        match land_steps(g, &p, target) {
            Some(steps) => out.push(CoverPiece { piece: p, steps }),
            None if d < depth && out.len() + stack.len() < ARC_MAX_PIECES => {
                let m = p.mid();
                stack.push((RatInterval::new(m.clone(), p.hi().clone()), d + 1));
                stack.push((RatInterval::new(p.lo().clone(), m), d + 1));
            }
            None => return None,
        }
    }
    out.sort_by(|a, b| a.piece.cmp(&b.piece));
    Some(out)
}

fn attraction(
    g: &PLMap,
    comp: &RatInterval,
    open_lo: bool,
    open_hi: bool,
    dir: i8,
    traps: &[TrapPiece],
    depth: usize,
) -> Option<AttractionCert> {
    let target = if dir > 0 { comp.hi().clone() } else { comp.lo().clone() };
    if traps.is_empty() {
        return None;
    }
    let tset = trap_set(traps);
    let turning = g.turning_points();
    // Region that still has to be covered, with the fundamental domain next to a repelling end.
    let (fundamental, region) = if dir > 0 {
        let near = tset.parts().iter().filter(|p| p.contains(&target)).map(|p| p.lo().clone()).min()?;
        if open_lo {
            let a = comp.lo();
            let eta = turning.iter().filter(|t| *t > a).map(|t| t - a).min().unwrap_or_else(|| comp.len());
            let eta = min_rat(&eta, &comp.len()).clone() / crate::numeric::int(2);
            let probe = RatInterval::new(a.clone(), a + &eta);
            if !increasing_on(g, &probe) {
                return None;
            }
            let start = a + &eta;
            let fd = RatInterval::new(start.clone(), g.at(&start));
            let hi = max_rat(&near, fd.hi()).clone();
            (Some(fd), RatInterval::new(start, hi))
        } else {
            (None, RatInterval::new(comp.lo().clone(), max_rat(&near, comp.lo()).clone()))
        }
    } else {
        let near = tset.parts().iter().filter(|p| p.contains(&target)).map(|p| p.hi().clone()).max()?;
        if open_hi {
            let b = comp.hi();
            let eta = turning.iter().filter(|t| *t < b).map(|t| b - t).min().unwrap_or_else(|| comp.len());
            let eta = min_rat(&eta, &comp.len()).clone() / crate::numeric::int(2);
            let probe = RatInterval::new(b - &eta, b.clone());
            if !increasing_on(g, &probe) {
                return None;
            }
            let start = b - &eta;
            let fd = RatInterval::new(g.at(&start), start.clone());
            let lo = min_rat(&near, fd.lo()).clone();
            (Some(fd), RatInterval::new(lo, start))
        } else {
            (None, RatInterval::new(min_rat(&near, comp.hi()).clone(), comp.hi().clone()))
        }
    };
    let cover = cover_compact(g, &region, &tset, depth)?;
    Some(AttractionCert { target, traps: traps.to_vec(), fundamental, cover })
}

fn fixed_records(fix: &[FixedPoint]) -> Vec<FixedPointRecord> {
    fix.iter().map(|f| FixedPointRecord { lo: f.lo().clone(), hi: f.hi().clone() }).collect()
}

fn sign_on(g: &PLMap, comp: &RatInterval) -> i8 {
    let m = comp.mid();
    if g.at(&m) > m {
        1
    } else {
        -1
    }
}

pub fn arc_check(f: &PLMap, depth: usize) -> ArcDecision {
    let g = match f.power(2, POWER_BUDGET) {
        Ok(g) => g,
        Err(e) => {
            return ArcDecision { fix2: Vec::new(), components: Vec::new(), verdict: Verdict::unknown(0, e.to_string()) }
        }
    };
    let fix = g.fixed_points_of_self();
    let comps: Vec<(RatInterval, bool, bool, i8)> =
        components_of(&fix).into_iter().map(|(c, lo, hi)| {
            let s = sign_on(&g, &c);
            (c, lo, hi, s)
        }).collect();
    let dirs: Vec<(RatInterval, i8)> = comps.iter().map(|(c, _, _, s)| (c.clone(), *s)).collect();
    let mut components = Vec::new();
    let mut all = true;
    for (c, lo, hi, s) in &comps {
        let target = if *s > 0 { c.hi() } else { c.lo() };
        let traps = traps_at(&g, target, &dirs);
        let att = attraction(&g, c, *lo, *hi, *s, &traps, depth.max(8));
        all &= att.is_some();
        components.push(ComponentResult { component: c.clone(), open_lo: *lo, open_hi: *hi, direction: *s, attraction: att });
    }
    let fix2 = fixed_records(&fix);
    if all {
        let ends = vec![fix.first().unwrap().lo().clone(), fix.last().unwrap().hi().clone()];
        return ArcDecision { fix2, components, verdict: Verdict::Proven { certificate: ArcCert { ends } } };
    }
    let verdict = match periodic_witness(f, &g) {
        Some(w) => Verdict::Refuted { witness: w },
        None => Verdict::unknown(depth, "some component has neither an attraction certificate nor a periodic witness"),
    };
    ArcDecision { fix2, components, verdict }
}

fn periodic_witness(f: &PLMap, g: &PLMap) -> Option<PeriodicWitness> {
    for m in 2..=ARC_MAX_PERIOD {
        let Ok(gm) = f.power(2 * m, POWER_BUDGET) else { return None };
        for fp in gm.fixed_points_of_self() {
            let cands = match &fp {
                FixedPoint::Point(p) => vec![p.clone()],
                FixedPoint::Segment(s) => vec![s.lo().clone(), s.mid(), s.hi().clone()],
            };
            if let Some(p) = cands.into_iter().find(|p| &g.at(p) != p) {
                return Some(PeriodicWitness { point: p, m });
            }
        }
    }
    None
}

fn check_trap_piece(g: &PLMap, fix: &[FixedPoint], target: &Rat, t: &TrapPiece, path: &str) -> Result<(), CertError> {
    let iv = t.interval();
    match t {
        TrapPiece::OneSided { side, .. } => {
            let (end, other) = match side {
                Side::Left => (iv.hi(), iv.lo()),
                Side::Right => (iv.lo(), iv.hi()),
            };
            ensure(end == target && !iv.is_degenerate(), path, || "one-sided trap does not end at the target".into())?;
            ensure(increasing_on(g, iv), path, || "map is not increasing on the trap".into())?;
            let moves = match side {
                Side::Left => g.at(other) > *other,
                Side::Right => g.at(other) < *other,
            };
            ensure(moves, path, || "trap end does not move towards the target".into())?;
            ensure(fix.iter().all(|fp| !(iv.contains(fp.hi()) || iv.contains(fp.lo())) || fp.lo() == target || fp.hi() == target), path, || {
                "fixed point inside the trap".into()
            })?;
            ensure(fix.iter().all(|fp| !matches!(fp, FixedPoint::Segment(s) if s.intersect(iv).is_some_and(|x| !x.is_degenerate()))), path, || {
                "fixed segment inside the trap".into()
            })
        }
        TrapPiece::Lipschitz { lipschitz, .. } => {
            ensure(&g.at(target) == target && iv.contains(target), path, || "target is not fixed".into())?;
            ensure(lipschitz < &Rat::one(), path, || "trap constant".into())?;
            ensure(slopes_in(g, iv).iter().all(|s| &s.abs() <= lipschitz), path, || "slope exceeds the trap constant".into())?;
            let d_lo = target - iv.lo();
            let d_hi = iv.hi() - target;
            ensure(iv.lo().is_zero() || iv.hi() == &one() || d_lo == d_hi, path, || "trap is not centred".into())?;
            // Clipped at 0 or 1 the interval is still mapped into itself.
            ensure(iv.contains_interval(&g.image(iv)), path, || "trap is not invariant".into())
        }
    }
}

pub fn check_arc(f: &PLMap, d: &ArcDecision) -> Result<(), CertError> {
    let path = "arc";
    let g = f.power(2, POWER_BUDGET).map_err(|e| CertError::new(path, e.to_string()))?;
    let fix = g.fixed_points_of_self();
    ensure(fixed_records(&fix) == d.fix2, path, || "Fix(f^2) mismatch".into())?;
    let comps = components_of(&fix);
    ensure(comps.len() == d.components.len(), path, || "component count".into())?;
    for (i, ((c, lo, hi), r)) in comps.iter().zip(&d.components).enumerate() {
        let p = format!("arc.components[{i}]");
        ensure(c == &r.component && *lo == r.open_lo && *hi == r.open_hi, &p, || "component mismatch".into())?;
        ensure(sign_on(&g, c) == r.direction, &p, || "direction mismatch".into())?;
    }
    match &d.verdict {
        Verdict::Proven { certificate } => {
            let ends = vec![fix.first().unwrap().lo().clone(), fix.last().unwrap().hi().clone()];
            ensure(certificate.ends == ends, path, || "arc ends".into())?;
            for (i, r) in d.components.iter().enumerate() {
                let p = format!("arc.components[{i}]");
                let att = r.attraction.as_ref().ok_or_else(|| CertError::new(&p, "missing attraction certificate"))?;
                let target = if r.direction > 0 { r.component.hi() } else { r.component.lo() };
                ensure(&att.target == target, &p, || "target".into())?;
                for t in &att.traps {
                    check_trap_piece(&g, &fix, target, t, &p)?;
                }
                let tset = trap_set(&att.traps);
                for cp in &att.cover {
                    let mut cur = cp.piece.clone();
                    for _ in 0..cp.steps {
                        cur = g.image(&cur);
                    }
                    ensure(tset.contains_interval(&cur), &p, || format!("piece {} does not land in a trap", cp.piece))?;
                }
                let mut covered = tset.clone();
                for cp in &att.cover {
                    covered.insert(cp.piece.clone());
                }
                let rest = match (&att.fundamental, r.direction > 0) {
                    (Some(fd), true) => {
                        let a = r.component.lo();
                        let probe = RatInterval::new(a.clone(), fd.lo().clone());
                        ensure(r.open_lo && fd.lo() > a && &g.at(fd.lo()) == fd.hi(), &p, || "fundamental domain".into())?;
                        ensure(increasing_on(&g, &probe), &p, || "not increasing near the repelling end".into())?;
                        ensure(covered.contains_interval(fd), &p, || "fundamental domain not covered".into())?;
                        RatInterval::new(fd.lo().clone(), r.component.hi().clone())
                    }
                    (Some(fd), false) => {
                        let b = r.component.hi();
                        let probe = RatInterval::new(fd.hi().clone(), b.clone());
                        ensure(r.open_hi && fd.hi() < b && &g.at(fd.hi()) == fd.lo(), &p, || "fundamental domain".into())?;
                        ensure(increasing_on(&g, &probe), &p, || "not increasing near the repelling end".into())?;
                        ensure(covered.contains_interval(fd), &p, || "fundamental domain not covered".into())?;
                        RatInterval::new(r.component.lo().clone(), fd.hi().clone())
                    }
                    (None, true) => {
                        ensure(!r.open_lo, &p, || "repelling end without a fundamental domain".into())?;
                        r.component.clone()
                    }
                    (None, false) => {
                        ensure(!r.open_hi, &p, || "repelling end without a fundamental domain".into())?;
                        r.component.clone()
                    }
                };
                ensure(covered.contains_interval(&rest), &p, || "component not covered".into())?;
            }
            Ok(())
        }
        Verdict::Refuted { witness: w } => {
            let gm = f.power(2 * w.m, POWER_BUDGET).map_err(|e| CertError::new(path, e.to_string()))?;
            ensure(gm.at(&w.point) == w.point, path, || "witness is not periodic".into())?;
            ensure(g.at(&w.point) != w.point, path, || "witness is fixed by f^2".into())
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------- virtually increasing preimages

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViPreimage {
    pub target: RatInterval,
    pub result: RatInterval,
    /// "f,f" when built by two single steps, "f2" when built directly on the second iterate.
    pub route: String,
}

/// First adjacent pair `c < d` among the preimages of 0 and 1 with `g(c) = 0`, `g(d) = 1`.
fn zero_one_pair(g: &PLMap) -> Option<(Rat, Rat)> {
    let mut hits: Vec<(Rat, bool)> = g.preimages(&zero()).into_iter().map(|x| (x, false)).collect();
    hits.extend(g.preimages(&one()).into_iter().map(|x| (x, true)));
    hits.sort();
    hits.windows(2).find(|w| !w[0].1 && w[1].1).map(|w| (w[0].0.clone(), w[1].0.clone()))
}

fn vi_step(g: &PLMap, c: &Rat, d: &Rat, x: &Rat, y: &Rat) -> RatInterval {
    let b = g.preimages(y).into_iter().find(|z| z >= c && z <= d).expect("y is attained on [c, d]");
    let a = g.preimages(x).into_iter().filter(|z| z >= c && z <= &b).max().expect("x is attained on [c, b]");
    RatInterval::new(a, b)
}

/// `[x', y']` with `f²([x', y']) = [x, y]`, `f²(x') = x < y = f²(y')` and no interior point
/// mapped to `x` or `y`.
pub fn virtually_increasing_preimage(f: &PLMap, target: &RatInterval) -> ViPreimage {
    assert!(!target.is_degenerate(), "target must be nondegenerate");
    let (x, y) = (target.lo().clone(), target.hi().clone());
    let (result, route) = match zero_one_pair(f) {
        Some((c, d)) => {
            let first = vi_step(f, &c, &d, &x, &y);
            (vi_step(f, &c, &d, first.lo(), first.hi()), "f,f")
        }
        None => {
            let g = f.power(2, POWER_BUDGET).expect("second iterate fits the budget");
            let (c, d) = zero_one_pair(&g).expect("the second iterate of a surjection has an increasing zero-one pair");
            (vi_step(&g, &c, &d, &x, &y), "f2")
        }
    };
    let out = ViPreimage { target: target.clone(), result, route: route.into() };
    debug_assert!(check_vi(f, &out).is_ok());
    out
}

fn second_preimages(f: &PLMap, v: &Rat) -> Vec<Rat> {
    let mut out: Vec<Rat> = f.preimages(v).iter().flat_map(|w| f.preimages(w)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn check_vi(f: &PLMap, v: &ViPreimage) -> Result<(), CertError> {
    let path = "virtually_increasing";
    let (x, y) = (v.target.lo(), v.target.hi());
    let r = &v.result;
    let g = |z: &Rat| f.at(&f.at(z));
    ensure(!r.is_degenerate(), path, || "degenerate result".into())?;
    ensure(&g(r.lo()) == x && &g(r.hi()) == y, path, || "endpoints do not map to the target ends".into())?;
    ensure(f.image(&f.image(r)) == v.target, path, || "image is not the target".into())?;
    let inner = |z: &Rat| r.contains_open(z);
    ensure(!second_preimages(f, x).iter().any(inner) && !second_preimages(f, y).iter().any(inner), path, || {
        "an interior point reaches a target end".into()
    })
}

/// Convenience for verdicts with no payload.
pub type Plain = Verdict<NoPayload, NoPayload>;
