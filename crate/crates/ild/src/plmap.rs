//! Piecewise-linear surjections of `[0,1]`, their iterates and lap partitions.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{fmt_rat, one, rat_serde, zero, Rat, RatInterval};

pub const DEFAULT_LAP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("a map needs at least two breakpoints")]
    TooFew,
    #[error("breakpoints must start at x = 0 and end at x = 1")]
    Ends,
    #[error("breakpoints must have strictly increasing x (problem at x = {0})")]
    Unsorted(String),
    #[error("duplicate breakpoint at x = {0}")]
    DuplicateX(String),
    #[error("breakpoint x = {0} lies outside [0,1]")]
    XRange(String),
    #[error("value y = {0} lies outside [0,1]")]
    YRange(String),
    #[error("flat segment on [{0}, {1}]; intervals of constancy are not supported")]
    Flat(String, String),
    #[error("breakpoint at x = {0} is collinear with its neighbours")]
    Collinear(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("x = {0} lies outside [0,1]")]
pub struct DomainError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("lap budget exceeded: {laps} laps against a budget of {budget}")]
pub struct BudgetExceeded {
    pub laps: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A maximal monotone piece of some iterate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lap {
    pub domain: RatInterval,
    pub image: RatInterval,
    pub direction: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPartition {
    pub n: usize,
    pub laps: Vec<Lap>,
}

impl BranchPartition {
    pub fn lap_containing(&self, x: &Rat) -> Vec<&Lap> {
        self.laps.iter().filter(|l| l.domain.contains(x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPoint {
    Point(#[serde(with = "rat_serde")] Rat),
    Segment(RatInterval),
}

impl FixedPoint {
    pub fn lo(&self) -> &Rat {
        match self {
            FixedPoint::Point(p) => p,
            FixedPoint::Segment(s) => s.lo(),
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            FixedPoint::Point(p) => p,
            FixedPoint::Segment(s) => s.hi(),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo() <= x && x <= self.hi()
    }
}

/// Continuous surjective piecewise-linear self-map of `[0,1]` without flat pieces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    pts: Vec<(Rat, Rat)>,
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PLMap{")?;
        for (i, (x, y)) in self.pts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {})", fmt_rat(x), fmt_rat(y))?;
        }
        f.write_str("}")
    }
}

fn collinear(a: &(Rat, Rat), b: &(Rat, Rat), c: &(Rat, Rat)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

fn push_normalized(out: &mut Vec<(Rat, Rat)>, p: (Rat, Rat)) {
    if let Some(last) = out.last() {
        if last.0 == p.0 {
            return;
        }
    }
    while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
        out.pop();
    }
    out.push(p);
}

impl PLMap {
    /// Builds a map from breakpoints sorted by `x`; collinear interior points are dropped.
    pub fn new(points: Vec<(Rat, Rat)>) -> Result<PLMap, MapError> {
        Self::validate(&points)?;
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            push_normalized(&mut out, p);
        }
        Ok(PLMap { pts: out })
    }

    /// Like [`PLMap::new`] but rejects collinear interior breakpoints.
    pub fn new_strict(points: Vec<(Rat, Rat)>) -> Result<PLMap, MapError> {
        Self::validate(&points)?;
        for w in points.windows(3) {
            if collinear(&w[0], &w[1], &w[2]) {
                return Err(MapError::Collinear(fmt_rat(&w[1].0)));
            }
        }
        Ok(PLMap { pts: points })
    }

    pub fn from_i64(points: &[(i64, i64, i64, i64)]) -> Result<PLMap, MapError> {
        PLMap::new(
            points
                .iter()
                .map(|&(a, b, c, d)| (crate::numeric::rat(a, b), crate::numeric::rat(c, d)))
                .collect(),
        )
    }

    fn validate(points: &[(Rat, Rat)]) -> Result<(), MapError> {
        if points.len() < 2 {
            return Err(MapError::TooFew);
        }
        for (x, y) in points {
            if x < &zero() || x > &one() {
                return Err(MapError::XRange(fmt_rat(x)));
            }
            if y < &zero() || y > &one() {
                return Err(MapError::YRange(fmt_rat(y)));
            }
        }
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(MapError::DuplicateX(fmt_rat(&w[0].0)));
            }
            if w[0].0 > w[1].0 {
                return Err(MapError::Unsorted(fmt_rat(&w[1].0)));
            }
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != one() {
            return Err(MapError::Ends);
        }
        for w in points.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(MapError::Flat(fmt_rat(&w[0].0), fmt_rat(&w[1].0)));
            }
        }
        let min = points.iter().map(|p| &p.1).min().unwrap();
        let max = points.iter().map(|p| &p.1).max().unwrap();
        if !min.is_zero() {
            return Err(MapError::NotSurjective(format!("minimum value {} is not 0", fmt_rat(min))));
        }
        if max != &one() {
            return Err(MapError::NotSurjective(format!(
                "maximum value {} is not 1, so 1 is never attained",
                fmt_rat(max)
            )));
        }
        Ok(())
    }

    pub fn identity() -> PLMap {
        PLMap { pts: vec![(zero(), zero()), (one(), one())] }
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    pub fn breakpoints_x(&self) -> impl Iterator<Item = &Rat> {
        self.pts.iter().map(|p| &p.0)
    }

    pub fn piece_count(&self) -> usize {
        self.pts.len() - 1
    }

    /// Index of a piece whose closed domain contains `x`.
    fn piece_index(&self, x: &Rat) -> usize {
        let k = self.pts.partition_point(|p| &p.0 <= x);
        k.saturating_sub(1).min(self.pts.len() - 2)
    }

    fn eval_piece(&self, i: usize, x: &Rat) -> Rat {
        let (x0, y0) = &self.pts[i];
        let (x1, y1) = &self.pts[i + 1];
        if x == x0 {
            return y0.clone();
        }
        if x == x1 {
            return y1.clone();
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Evaluates inside `[0,1]`; panics elsewhere. See [`PLMap::eval`].
    pub fn at(&self, x: &Rat) -> Rat {
        assert!(x >= &zero() && x <= &one(), "argument {} outside [0,1]", fmt_rat(x));
        self.eval_piece(self.piece_index(x), x)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, DomainError> {
        if x < &zero() || x > &one() {
            return Err(DomainError(fmt_rat(x)));
        }
        Ok(self.at(x))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let xs: Vec<f64> = self.pts.iter().map(|p| crate::numeric::to_f64(&p.0)).collect();
        let k = xs.partition_point(|&v| v <= x).saturating_sub(1).min(xs.len() - 2);
        let (x0, x1) = (xs[k], xs[k + 1]);
        let y0 = crate::numeric::to_f64(&self.pts[k].1);
        let y1 = crate::numeric::to_f64(&self.pts[k + 1].1);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn orbit(&self, x: &Rat, steps: usize) -> Vec<Rat> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut cur = x.clone();
        out.push(cur.clone());
        for _ in 0..steps {
            cur = self.at(&cur);
            out.push(cur.clone());
        }
        out
    }

    pub fn slope(&self, i: usize) -> Rat {
        let (x0, y0) = &self.pts[i];
        let (x1, y1) = &self.pts[i + 1];
        (y1 - y0) / (x1 - x0)
    }

    pub fn slopes(&self) -> Vec<Rat> {
        (0..self.piece_count()).map(|i| self.slope(i)).collect()
    }

    pub fn min_abs_slope(&self) -> Rat {
        self.slopes().into_iter().map(|s| s.abs()).min().unwrap()
    }

    pub fn max_abs_slope(&self) -> Rat {
        self.slopes().into_iter().map(|s| s.abs()).max().unwrap()
    }

    /// Slope of the piece adjacent to `x` on `side`, `None` at the matching end of `[0,1]`.
    pub fn slope_on_side(&self, x: &Rat, side: Side) -> Option<Rat> {
        let k = self.pts.partition_point(|p| &p.0 < x);
        match side {
            Side::Left => (k > 0).then(|| self.slope(k - 1)),
            Side::Right => {
                let k = if k < self.pts.len() && &self.pts[k].0 == x { k } else { k - 1 };
                (k + 1 < self.pts.len()).then(|| self.slope(k))
            }
        }
    }

    /// Interior breakpoints where the slope changes sign.
    pub fn turning_points(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for i in 1..self.pts.len() - 1 {
            let a = &self.pts[i].1 - &self.pts[i - 1].1;
            let b = &self.pts[i + 1].1 - &self.pts[i].1;
            if a.is_positive() != b.is_positive() {
                out.push(self.pts[i].0.clone());
            }
        }
        out
    }

    pub fn is_turning(&self, x: &Rat) -> bool {
        self.turning_points().binary_search(x).is_ok()
    }

    /// `{0, 1}` together with the turning points, ascending.
    pub fn critical_set(&self) -> Vec<Rat> {
        let mut c = vec![zero()];
        c.extend(self.turning_points());
        c.push(one());
        c
    }

    pub fn laps(&self) -> Vec<Lap> {
        let c = self.critical_set();
        c.windows(2)
            .map(|w| {
                let (a, b) = (self.at(&w[0]), self.at(&w[1]));
                let direction = if b > a { 1 } else { -1 };
                Lap { domain: RatInterval::new(w[0].clone(), w[1].clone()), image: RatInterval::spanning(a, b), direction }
            })
            .collect()
    }

    pub fn lap_count(&self) -> usize {
        self.turning_points().len() + 1
    }

    /// Domain of the lap adjacent to `x` on `side`; `None` when `x` is the matching end of `[0,1]`.
    pub fn lap_on_side(&self, x: &Rat, side: Side) -> Option<RatInterval> {
        let c = self.critical_set();
        match side {
            Side::Left => {
                if x.is_zero() {
                    return None;
                }
                let k = c.partition_point(|v| v < x);
                Some(RatInterval::new(c[k - 1].clone(), c[k].clone()))
            }
            Side::Right => {
                if x == &one() {
                    return None;
                }
                let k = c.partition_point(|v| v <= x);
                Some(RatInterval::new(c[k - 1].clone(), c[k].clone()))
            }
        }
    }

    /// Exact image of an interval.
    pub fn image(&self, iv: &RatInterval) -> RatInterval {
        let mut lo = self.at(iv.lo());
        let mut hi = lo.clone();
        let mut take = |v: Rat| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        take(self.at(iv.hi()));
        let start = self.pts.partition_point(|p| &p.0 <= iv.lo());
        for p in &self.pts[start..] {
            if &p.0 >= iv.hi() {
                break;
            }
            take(p.1.clone());
        }
        RatInterval::new(lo, hi)
    }

    /// True when no turning point lies in the open interior of `iv`.
    pub fn injective_on(&self, iv: &RatInterval) -> bool {
        self.turning_points().iter().all(|t| !iv.contains_open(t))
    }

    /// `self ∘ inner`, exact.
    pub fn compose_after(&self, inner: &PLMap, budget: usize) -> Result<PLMap, BudgetExceeded> {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(inner.pts.len() * 2);
        for w in inner.pts.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            push_normalized(&mut out, (x0.clone(), self.at(y0)));
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            let a = self.pts.partition_point(|p| &p.0 <= lo);
            let b = self.pts.partition_point(|p| &p.0 < hi);
            let inner_pts = &self.pts[a..b.max(a)];
            let dx = x1 - x0;
            let dy = y1 - y0;
            let mut emit = |u: &(Rat, Rat)| {
                let x = x0 + (&u.0 - y0) * &dx / &dy;
                push_normalized(&mut out, (x, u.1.clone()));
            };
            if y0 < y1 {
                inner_pts.iter().for_each(&mut emit);
            } else {
                inner_pts.iter().rev().for_each(&mut emit);
            }
            if out.len() > budget.saturating_mul(4).max(16) {
                return Err(BudgetExceeded { laps: out.len(), budget });
            }
        }
        let last = inner.pts.last().unwrap();
        push_normalized(&mut out, (last.0.clone(), self.at(&last.1)));
        let g = PLMap { pts: out };
        let laps = g.lap_count();
        if laps > budget {
            return Err(BudgetExceeded { laps, budget });
        }
        Ok(g)
    }

    pub fn power(&self, n: usize, budget: usize) -> Result<PLMap, BudgetExceeded> {
        let mut g = PLMap::identity();
        for _ in 0..n {
            g = self.compose_after(&g, budget)?;
        }
        Ok(g)
    }

    pub fn iterate_partition(&self, n: usize, budget: usize) -> Result<BranchPartition, BudgetExceeded> {
        assert!(n >= 1, "iterate count must be at least 1");
        Ok(BranchPartition { n, laps: self.power(n, budget)?.laps() })
    }

    /// Solutions of `f^k(x) = x`, with diagonal pieces reported as segments.
    pub fn fixed_points(&self, k: usize, budget: usize) -> Result<Vec<FixedPoint>, BudgetExceeded> {
        Ok(self.power(k, budget)?.fixed_points_of_self())
    }

    pub fn fixed_points_of_self(&self) -> Vec<FixedPoint> {
        let mut out: Vec<FixedPoint> = Vec::new();
        let mut push = |fp: FixedPoint| {
            if let Some(last) = out.last_mut() {
                if last.contains(fp.lo()) {
                    if let FixedPoint::Segment(s) = &fp {
                        let merged = RatInterval::new(last.lo().clone(), s.hi().clone());
                        *last = FixedPoint::Segment(merged);
                    }
                    return;
                }
            }
            out.push(fp);
        };
        for w in self.pts.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let h0 = y0 - x0;
            let h1 = y1 - x1;
            if h0.is_zero() && h1.is_zero() {
                push(FixedPoint::Segment(RatInterval::new(x0.clone(), x1.clone())));
            } else if h0.is_zero() {
                push(FixedPoint::Point(x0.clone()));
            } else if h1.is_zero() {
                push(FixedPoint::Point(x1.clone()));
            } else if h0.is_positive() != h1.is_positive() {
                push(FixedPoint::Point(x0 + &h0 * (x1 - x0) / (&h0 - &h1)));
            }
        }
        out
    }

    /// All `x` with `f(x) = y`, ascending.
    pub fn preimages(&self, y: &Rat) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::new();
        for w in self.pts.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let inside = (y0 <= y && y <= y1) || (y1 <= y && y <= y0);
            if inside {
                let x = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
                if out.last() != Some(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Connected components of `f^{-1}(j)`, ascending.
    pub fn preimage_components(&self, j: &RatInterval) -> Vec<RatInterval> {
        let mut set = crate::numeric::IntervalSet::new();
        for w in self.pts.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let vals = RatInterval::spanning(y0.clone(), y1.clone());
            if let Some(hit) = vals.intersect(j) {
                let inv = |v: &Rat| x0 + (v - y0) * (x1 - x0) / (y1 - y0);
                set.insert(RatInterval::spanning(inv(hit.lo()), inv(hit.hi())));
            }
        }
        set.parts().to_vec()
    }

    /// Component of `f^{-1}(j)` containing `x`, if `f(x) ∈ j`.
    pub fn preimage_component_at(&self, j: &RatInterval, x: &Rat) -> Option<RatInterval> {
        self.preimage_components(j).into_iter().find(|c| c.contains(x))
    }
}

/// Memoized iterates `f^0 = id, f^1, f^2, ...` under a lap budget.
pub struct Iterates<'a> {
    f: &'a PLMap,
    budget: usize,
    cache: Vec<PLMap>,
}

impl<'a> Iterates<'a> {
    pub fn new(f: &'a PLMap, budget: usize) -> Self {
        Iterates { f, budget, cache: vec![PLMap::identity()] }
    }

    pub fn get(&mut self, n: usize) -> Result<&PLMap, BudgetExceeded> {
        while self.cache.len() <= n {
            let next = self.f.compose_after(self.cache.last().unwrap(), self.budget)?;
            self.cache.push(next);
        }
        Ok(&self.cache[n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn t2() -> PLMap {
        PLMap::from_i64(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)]).unwrap()
    }

    #[test]
    fn tent_square_has_four_laps() {
        let p = t2().iterate_partition(2, 100).unwrap();
        assert_eq!(p.laps.len(), 4);
        for l in &p.laps {
            assert_eq!(l.image, RatInterval::unit());
        }
        assert_eq!(p.laps[1].domain, RatInterval::new(rat(1, 4), rat(1, 2)));
    }

    #[test]
    fn side_slopes() {
        let f = t2();
        assert_eq!(f.slope_on_side(&rat(1, 2), Side::Left), Some(rat(2, 1)));
        assert_eq!(f.slope_on_side(&rat(1, 2), Side::Right), Some(rat(-2, 1)));
        assert_eq!(f.slope_on_side(&rat(0, 1), Side::Left), None);
        assert_eq!(f.slope_on_side(&rat(1, 1), Side::Right), None);
        assert_eq!(f.slope_on_side(&rat(1, 4), Side::Right), Some(rat(2, 1)));
    }

    #[test]
    fn collinear_points_are_normalized() {
        let f = PLMap::from_i64(&[(0, 1, 0, 1), (1, 2, 1, 2), (1, 1, 1, 1)]).unwrap();
        assert_eq!(f, PLMap::identity());
        assert!(matches!(
            PLMap::new_strict(f.points().iter().cloned().chain([]).collect::<Vec<_>>()),
            Ok(_)
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let err = t2().power(12, 1000).unwrap_err();
        assert!(err.laps > 1000);
    }
}
