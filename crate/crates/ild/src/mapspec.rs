//! Text formats: map documents (`.ildmap`) and backward orbits (`.ildorbit`).
//!
//! A map document is line oriented:
//!
//! ```text
//! # comment
//! map tent
//! meta source hand-entered
//! point 0 0
//! point 1/2 1
//! point 1 0
//! ```
//!
//! An orbit is a comma separated list `x_0, x_1, ..., x_m` with an optional
//! periodic tail `| cycle: a, b, ...` continuing the backward orbit.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numeric::{fmt_rat, parse_rat, Rat};
use crate::plmap::{MapError, PLMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}{error}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Map { line: Option<usize>, error: MapError },
}

impl SpecError {
    pub fn line(&self) -> Option<usize> {
        match self {
            SpecError::Parse(p) => Some(p.line),
            SpecError::Map { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpecDocument {
    pub name: String,
    pub breakpoints: Vec<(Rat, Rat)>,
    pub metadata: BTreeMap<String, String>,
}

impl MapSpecDocument {
    pub fn from_map(name: &str, f: &PLMap) -> Self {
        MapSpecDocument { name: name.to_string(), breakpoints: f.points().to_vec(), metadata: BTreeMap::new() }
    }

    pub fn map(&self) -> PLMap {
        PLMap::new_strict(self.breakpoints.clone()).expect("document was validated at parse time")
    }

    /// Canonical text, always LF terminated.
    pub fn serialize(&self) -> String {
        let mut out = format!("map {}\n", self.name);
        for (k, v) in &self.metadata {
            out.push_str(&format!("meta {k} {v}\n"));
        }
        for (x, y) in &self.breakpoints {
            out.push_str(&format!("point {} {}\n", fmt_rat(x), fmt_rat(y)));
        }
        out
    }
}

/// Whitespace separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.@".contains(c))
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn rat_at(line: usize, column: usize, tok: &str) -> Result<Rat, ParseError> {
    parse_rat(tok).map_err(|e| perr(line, column, e.to_string()))
}

pub fn parse_map(text: &str) -> Result<MapSpecDocument, SpecError> {
    let mut name: Option<String> = None;
    let mut metadata = BTreeMap::new();
    let mut points: Vec<(Rat, Rat, usize)> = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let ln = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks = tokens(body);
        let Some(&(col, head)) = toks.first() else { continue };
        match head {
            "map" => {
                if name.is_some() {
                    return Err(perr(ln, col, "duplicate `map` header").into());
                }
                match toks.get(1) {
                    Some(&(c, n)) if valid_name(n) => {
                        if let Some(&(c2, _)) = toks.get(2) {
                            return Err(perr(ln, c2, "unexpected token after map name").into());
                        }
                        let _ = c;
                        name = Some(n.to_string());
                    }
                    Some(&(c, n)) => return Err(perr(ln, c, format!("invalid map name `{n}`")).into()),
                    None => return Err(perr(ln, col + head.len(), "missing map name").into()),
                }
            }
            "point" => {
                if toks.len() < 3 {
                    return Err(perr(ln, col + head.len(), "expected `point <x> <y>`").into());
                }
                if let Some(&(c, _)) = toks.get(3) {
                    return Err(perr(ln, c, "unexpected token after point coordinates").into());
                }
                let x = rat_at(ln, toks[1].0, toks[1].1)?;
                let y = rat_at(ln, toks[2].0, toks[2].1)?;
                if x < crate::numeric::zero() || x > crate::numeric::one() {
                    return Err(SpecError::Map { line: Some(ln), error: MapError::XRange(fmt_rat(&x)) });
                }
                if y < crate::numeric::zero() || y > crate::numeric::one() {
                    return Err(SpecError::Map { line: Some(ln), error: MapError::YRange(fmt_rat(&y)) });
                }
                if points.iter().any(|p| p.0 == x) {
                    return Err(SpecError::Map { line: Some(ln), error: MapError::DuplicateX(fmt_rat(&x)) });
                }
                points.push((x, y, ln));
            }
            "meta" => {
                let Some(&(kc, key)) = toks.get(1) else {
                    return Err(perr(ln, col + head.len(), "expected `meta <key> <value>`").into());
                };
                if !valid_name(key) {
                    return Err(perr(ln, kc, format!("invalid meta key `{key}`")).into());
                }
                let Some(&(vc, _)) = toks.get(2) else {
                    return Err(perr(ln, kc + key.chars().count(), "missing meta value").into());
                };
                let byte = body.char_indices().nth(vc - 1).map(|(b, _)| b).unwrap_or(body.len());
                metadata.insert(key.to_string(), body[byte..].trim_end().to_string());
            }
            other => return Err(perr(ln, col, format!("unknown directive `{other}`")).into()),
        }
    }
    let Some(name) = name else {
        return Err(perr(1, 1, "missing `map <name>` header").into());
    };
    points.sort_by(|a, b| a.0.cmp(&b.0));
    let line_of = |x: &str| points.iter().find(|p| fmt_rat(&p.0) == x).map(|p| p.2);
    let bps: Vec<(Rat, Rat)> = points.iter().map(|p| (p.0.clone(), p.1.clone())).collect();
    if let Err(error) = PLMap::new_strict(bps.clone()) {
        let line = match &error {
            MapError::Flat(_, b) => line_of(b),
            MapError::Collinear(x) | MapError::DuplicateX(x) | MapError::XRange(x) => line_of(x),
            _ => None,
        };
        return Err(SpecError::Map { line, error });
    }
    Ok(MapSpecDocument { name, breakpoints: bps, metadata })
}

/// A point of the inverse limit given by finitely many coordinates and an optional periodic tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitSpec {
    pub prefix: Vec<Rat>,
    pub cycle: Option<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("ConsistencyError({0}): f(x_{0}) != x_{prev}", prev = .0 - 1)]
    Consistency(usize),
}

impl OrbitSpec {
    pub fn finite(prefix: Vec<Rat>) -> Self {
        OrbitSpec { prefix, cycle: None }
    }

    pub fn periodic(prefix: Vec<Rat>, cycle: Vec<Rat>) -> Self {
        assert!(!cycle.is_empty(), "empty cycle");
        OrbitSpec { prefix, cycle: Some(cycle) }
    }

    /// Constant orbit at a fixed point.
    pub fn constant(x: Rat) -> Self {
        OrbitSpec { prefix: vec![x.clone()], cycle: Some(vec![x]) }
    }

    /// Number of coordinates available; `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match self.cycle {
            Some(_) => None,
            None => Some(self.prefix.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.cycle.is_none()
    }

    pub fn is_periodic(&self) -> bool {
        self.cycle.is_some()
    }

    pub fn coord(&self, k: usize) -> Option<&Rat> {
        if k < self.prefix.len() {
            return self.prefix.get(k);
        }
        let c = self.cycle.as_ref()?;
        Some(&c[(k - self.prefix.len()) % c.len()])
    }

    /// Index where periodic behaviour starts and the period, for tails.
    pub fn tail(&self) -> Option<(usize, usize)> {
        self.cycle.as_ref().map(|c| (self.prefix.len(), c.len()))
    }

    pub fn unrolled(&self, n: usize) -> Vec<Rat> {
        (0..n).map_while(|k| self.coord(k).cloned()).collect()
    }

    /// Distinct coordinate values that occur anywhere in the orbit.
    pub fn values(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.prefix.iter().chain(self.cycle.iter().flatten()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Checks `f(x_k) = x_{k-1}` along the prefix, across the seam and around the cycle.
    pub fn validate(&self, f: &PLMap) -> Result<(), usize> {
        let n = self.prefix.len() + 2 * self.cycle.as_ref().map_or(0, |c| c.len()) + 1;
        let xs = self.unrolled(n);
        for (k, x) in xs.iter().enumerate() {
            if x < &crate::numeric::zero() || x > &crate::numeric::one() {
                return Err(k.max(1));
            }
        }
        for k in 1..xs.len() {
            if f.at(&xs[k]) != xs[k - 1] {
                return Err(k);
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[Rat]| v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ");
        match &self.cycle {
            Some(c) if self.prefix.is_empty() => format!("| cycle: {}", join(c)),
            Some(c) => format!("{} | cycle: {}", join(&self.prefix), join(c)),
            None => join(&self.prefix),
        }
    }
}

impl fmt::Display for OrbitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for OrbitSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for OrbitSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_orbit_text(&s).map_err(D::Error::custom)
    }
}

fn parse_rat_list(text: &str, offset: usize, allow_empty: bool) -> Result<Vec<Rat>, ParseError> {
    let mut out = Vec::new();
    if text.trim().is_empty() {
        if allow_empty {
            return Ok(out);
        }
        return Err(perr(1, offset + 1, "expected at least one rational"));
    }
    let mut pos = 0;
    for piece in text.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let col = offset + text[..pos + lead].chars().count() + 1;
        let tok = piece.trim();
        if tok.is_empty() {
            return Err(perr(1, col, "empty entry in list"));
        }
        out.push(parse_rat(tok).map_err(|e| perr(1, col, e.to_string()))?);
        pos += piece.len() + 1;
    }
    Ok(out)
}

/// Parses orbit syntax without checking it against a map.
pub fn parse_orbit_text(text: &str) -> Result<OrbitSpec, ParseError> {
    let text = text.trim_end_matches(['\n', '\r']);
    if text.contains('\n') {
        let col = text.find('\n').unwrap() + 1;
        return Err(perr(1, col, "orbit must fit on one line"));
    }
    match text.split_once('|') {
        None => Ok(OrbitSpec::finite(parse_rat_list(text, 0, false)?)),
        Some((head, tail)) => {
            let prefix = parse_rat_list(head, 0, true)?;
            let off = head.chars().count() + 1;
            let lead = tail.len() - tail.trim_start().len();
            let rest = tail.trim_start();
            let Some(body) = rest.strip_prefix("cycle:") else {
                return Err(perr(1, off + lead + 1, "expected `cycle:` after `|`"));
            };
            let cycle = parse_rat_list(body, off + lead + "cycle:".len(), false)?;
            Ok(OrbitSpec { prefix, cycle: Some(cycle) })
        }
    }
}

/// Parses and validates an orbit against `f`.
pub fn parse_orbit(text: &str, f: &PLMap) -> Result<OrbitSpec, OrbitError> {
    let o = parse_orbit_text(text)?;
    o.validate(f).map_err(OrbitError::Consistency)?;
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn tent_document_roundtrips() {
        let doc = parse_map("map t2\npoint 0 0\npoint 1/2 1\npoint 1 0").unwrap();
        assert_eq!(doc.map(), gallery::tent());
        let text = doc.serialize();
        assert_eq!(parse_map(&text).unwrap(), doc);
        assert_eq!(parse_map(&text).unwrap().serialize(), text);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_map("map z\npoint 1/0 0").unwrap_err();
        match e {
            SpecError::Parse(p) => {
                assert_eq!((p.line, p.column), (2, 7));
                assert!(p.message.contains("zero denominator"));
            }
            other => panic!("{other:?}"),
        }
        let e = parse_map("map z\npoint 0.5 0").unwrap_err();
        assert!(e.to_string().contains("1/2"));
        let e = parse_map("map bad\npoint 0 0\npoint 1 1/2").unwrap_err();
        assert!(matches!(e, SpecError::Map { error: MapError::NotSurjective(_), .. }));
    }

    #[test]
    fn orbit_links() {
        let t = gallery::tent();
        let o = parse_orbit("0 | cycle: 0", &t).unwrap();
        assert_eq!(o.coord(7), Some(&crate::numeric::zero()));
        assert_eq!(parse_orbit("1/2, 1/3", &t), Err(OrbitError::Consistency(1)));
        let u = gallery::period_two();
        let o = parse_orbit("1/2, 1 | cycle: 1/2, 1", &u).unwrap();
        assert_eq!(o.to_text(), "1/2, 1 | cycle: 1/2, 1");
    }
}
