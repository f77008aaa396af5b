//! Exact rationals, closed intervals and finite unions of intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn half() -> Rat {
    rat(1, 2)
}

pub fn mid(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest representable-by-us rational close to a float, for tests and plotting only.
pub fn from_f64_approx(v: f64, den: i64) -> Rat {
    rat((v * den as f64).round() as i64, den)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal `{literal}` is not allowed; write {hint}")]
    Decimal { literal: String, hint: String },
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
}

fn is_int_literal(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_nat_literal(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `p/q` or `p`. Decimals are rejected with a fractional hint.
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((p, q)) = s.split_once('/') {
        if !is_int_literal(p) || !is_nat_literal(q) {
            return Err(RatParseError::Malformed(s.to_string()));
        }
        let num: BigInt = p.parse().map_err(|_| RatParseError::Malformed(s.to_string()))?;
        let den: BigInt = q.parse().map_err(|_| RatParseError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(RatParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rat::new(num, den));
    }
    if is_int_literal(s) {
        let num: BigInt = s.parse().map_err(|_| RatParseError::Malformed(s.to_string()))?;
        return Ok(Rat::from_integer(num));
    }
    if let Some(hint) = decimal_hint(s) {
        return Err(RatParseError::Decimal { literal: s.to_string(), hint });
    }
    Err(RatParseError::Malformed(s.to_string()))
}

fn decimal_hint(s: &str) -> Option<String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.')?;
    if !(ip.is_empty() || is_nat_literal(ip)) || !is_nat_literal(fp) {
        return None;
    }
    let digits = format!("{}{}", ip, fp);
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let mut r = Rat::new(num, den);
    if neg {
        r = -r;
    }
    Some(fmt_rat(&r))
}

/// Canonical text form: `p/q`, or `p` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `digits` fractional digits, rounding half away from zero.
pub fn decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rat::from_integer(scale.clone());
    let fl = scaled.floor();
    let frac = &scaled - &fl;
    let mut n = fl.to_integer();
    if frac >= half() {
        n += 1;
    }
    let (q, rem) = n.div_rem(&scale);
    let neg = r.is_negative() && !n.is_zero();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&q.to_string());
    if digits > 0 {
        let rs = rem.to_string();
        out.push('.');
        for _ in rs.len()..digits {
            out.push('0');
        }
        out.push_str(&rs);
    }
    out
}

pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

pub mod rat_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(fmt_rat).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect()
    }
}

pub mod opt_rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(fmt_rat).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rat(&s).map_err(D::Error::custom)).transpose()
    }
}

pub mod point_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[(Rat, Rat)], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<[String; 2]> = v.iter().map(|(x, y)| [fmt_rat(x), fmt_rat(y)]).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rat, Rat)>, D::Error> {
        let strs = Vec::<[String; 2]>::deserialize(d)?;
        strs.iter()
            .map(|[x, y]| {
                Ok((
                    parse_rat(x).map_err(D::Error::custom)?,
                    parse_rat(y).map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

/// Closed interval `[lo, hi]`, possibly degenerate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Containment {
    pub lo: bool,
    pub interior: bool,
    pub hi: bool,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval with lo {} > hi {}", fmt_rat(&lo), fmt_rat(&hi));
        RatInterval { lo, hi }
    }

    pub fn try_new(lo: Rat, hi: Rat) -> Option<Self> {
        (lo <= hi).then_some(RatInterval { lo, hi })
    }

    /// Hull of two endpoints in either order.
    pub fn spanning(a: Rat, b: Rat) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn unit() -> Self {
        RatInterval { lo: zero(), hi: one() }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        mid(&self.lo, &self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Strict interior membership, `lo < x < hi`.
    pub fn contains_open(&self, x: &Rat) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_interval(&self, o: &RatInterval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn containment(&self, x: &Rat) -> Containment {
        Containment { lo: &self.lo == x, interior: self.contains_open(x), hi: &self.hi == x }
    }

    pub fn intersect(&self, o: &RatInterval) -> Option<RatInterval> {
        let lo = max_rat(&self.lo, &o.lo).clone();
        let hi = min_rat(&self.hi, &o.hi).clone();
        RatInterval::try_new(lo, hi)
    }

    pub fn hull(&self, o: &RatInterval) -> RatInterval {
        RatInterval {
            lo: min_rat(&self.lo, &o.lo).clone(),
            hi: max_rat(&self.hi, &o.hi).clone(),
        }
    }

    pub fn hull_point(&self, x: &Rat) -> RatInterval {
        self.hull(&RatInterval::point(x.clone()))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for RatInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.lo, &self.hi).cmp(&(&other.lo, &other.hi))
    }
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rat(&self.lo), fmt_rat(&self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = parse_rat(&lo).map_err(D::Error::custom)?;
        let hi = parse_rat(&hi).map_err(D::Error::custom)?;
        RatInterval::try_new(lo, hi).ok_or_else(|| D::Error::custom("interval with lo > hi"))
    }
}

/// Finite union of closed intervals kept sorted, disjoint and non-adjacent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    parts: Vec<RatInterval>,
}

impl IntervalSet {
    pub fn new() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn from_parts<I: IntoIterator<Item = RatInterval>>(it: I) -> Self {
        let mut s = IntervalSet::new();
        for p in it {
            s.insert(p);
        }
        s
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Self {
        IntervalSet::from_parts(it.into_iter().map(|x| RatInterval::point(x.clone())))
    }

    pub fn parts(&self) -> &[RatInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Inserts `a`, merging every part that overlaps or touches it.
    pub fn insert(&mut self, a: RatInterval) {
        let start = self.parts.partition_point(|p| p.hi < a.lo);
        let mut end = start;
        let mut merged = a;
        while end < self.parts.len() && self.parts[end].lo <= merged.hi {
            merged = merged.hull(&self.parts[end]);
            end += 1;
        }
        self.parts.splice(start..end, std::iter::once(merged));
    }

    pub fn union(&self, o: &IntervalSet) -> IntervalSet {
        let mut s = self.clone();
        for p in &o.parts {
            s.insert(p.clone());
        }
        s
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let i = self.parts.partition_point(|p| &p.hi < x);
        i < self.parts.len() && self.parts[i].contains(x)
    }

    pub fn contains_interval(&self, iv: &RatInterval) -> bool {
        let i = self.parts.partition_point(|p| p.hi < iv.lo);
        i < self.parts.len() && self.parts[i].contains_interval(iv)
    }

    pub fn contains_set(&self, o: &IntervalSet) -> bool {
        o.parts.iter().all(|p| self.contains_interval(p))
    }

    pub fn intersects(&self, iv: &RatInterval) -> bool {
        let i = self.parts.partition_point(|p| p.hi < iv.lo);
        i < self.parts.len() && self.parts[i].lo <= iv.hi
    }

    /// Distance from `x` to the set, `None` when the set is empty.
    pub fn distance(&self, x: &Rat) -> Option<Rat> {
        self.parts
            .iter()
            .map(|p| {
                if p.contains(x) {
                    zero()
                } else if x < &p.lo {
                    &p.lo - x
                } else {
                    x - &p.hi
                }
            })
            .min()
    }

    /// Points of the set, when every part is degenerate.
    pub fn as_points(&self) -> Option<Vec<Rat>> {
        self.parts.iter().map(|p| p.is_degenerate().then(|| p.lo.clone())).collect()
    }

    /// Each part widened by `eps` on both sides and clipped to `[0,1]`.
    pub fn fattened(&self, eps: &Rat) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().map(|p| {
            RatInterval::new(
                max_rat(&(&p.lo - eps), &zero()).clone(),
                min_rat(&(&p.hi + eps), &one()).clone(),
            )
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(fmt_rat(&rat(6, 3)), "2");
        assert_eq!(fmt_rat(&rat(-1, 3)), "-1/3");
        assert!(matches!(parse_rat("1/0"), Err(RatParseError::ZeroDenominator(_))));
        match parse_rat("0.5") {
            Err(RatParseError::Decimal { hint, .. }) => assert_eq!(hint, "1/2"),
            other => panic!("{other:?}"),
        }
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal(&rat(1, 2), 0), "1");
        assert_eq!(decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&int(460), 3), "460.000");
    }

    #[test]
    fn set_merges_adjacent() {
        let mut s = IntervalSet::new();
        s.insert(RatInterval::new(zero(), rat(1, 4)));
        s.insert(RatInterval::new(rat(1, 2), one()));
        s.insert(RatInterval::new(rat(1, 4), rat(1, 2)));
        assert_eq!(s.parts(), &[RatInterval::unit()]);
    }
}
