//! Built-in example maps with their recorded claims.

use serde::{Deserialize, Serialize};

use crate::numeric::{int, rat, Rat};
use crate::plmap::PLMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated for this map in the literature.
    Literature,
    /// Recomputed by an independent exact procedure, described in the string.
    Derived(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub property: String,
    pub expected: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub map: PLMap,
    pub claims: Vec<Claim>,
}

/// Alternative names accepted on the command line.
pub const ALIASES: &[(&str, &str)] = &[
    ("t2", "tent"),
    ("u2", "period-two"),
    ("fig4", "double-spiral-arc"),
    ("fig6", "invariant-middle"),
    ("fig7", "two-sided-spiral"),
    ("fig8", "knaster-triple"),
    ("fig5", "spiral-leo"),
    ("fig9", "countable-endpoints"),
];

const TRUNCATED: &str = "truncation - qualitative only";

fn lit(property: &str, expected: &str) -> Claim {
    Claim { property: property.into(), expected: expected.into(), provenance: Provenance::Literature }
}

fn derived(property: &str, expected: &str, how: &str) -> Claim {
    Claim { property: property.into(), expected: expected.into(), provenance: Provenance::Derived(how.into()) }
}

fn truncated(property: &str, expected: &str) -> Claim {
    Claim {
        property: property.into(),
        expected: format!("{expected} ({TRUNCATED})"),
        provenance: Provenance::Derived(TRUNCATED.into()),
    }
}

fn build(pts: &[(i64, i64, i64, i64)]) -> PLMap {
    PLMap::from_i64(pts).expect("gallery map is valid")
}

pub fn tent() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)])
}

pub fn minc() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 3, 1, 1), (5, 12, 1, 3), (7, 12, 2, 3), (2, 3, 0, 1), (1, 1, 1, 1)])
}

pub fn double_spiral_arc() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 3, 5, 9), (2, 3, 4, 9), (1, 1, 1, 1)])
}

pub fn invariant_middle() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 3, 2, 3), (2, 3, 1, 3), (1, 1, 1, 1)])
}

pub fn two_sided_spiral() -> PLMap {
    build(&[(0, 1, 1, 6), (1, 3, 0, 1), (2, 3, 1, 1), (1, 1, 5, 6)])
}

/// Three invariant thirds, each carrying a full tent; the middle one has a swapped wiggle.
pub fn knaster_triple() -> PLMap {
    build(&[(0, 1, 1, 3), (1, 6, 0, 1), (4, 9, 5, 9), (5, 9, 4, 9), (5, 6, 1, 1), (1, 1, 2, 3)])
}

pub fn period_two() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 1, 2)])
}

const SPIRAL_LEO_TAIL: &[(i64, i64, i64, i64)] = &[
    (77, 100, 91, 100),
    (71, 100, 99, 100),
    (17, 25, 9, 10),
    (3, 5, 4, 5),
    (57, 100, 143, 200),
    (53, 100, 153, 200),
    (1, 2, 17, 25),
    (43, 100, 3, 5),
    (2, 5, 27, 50),
    (19, 50, 113, 200),
    (7, 20, 1, 2),
    (29, 100, 43, 100),
    (13, 50, 77, 200),
    (1, 4, 79, 200),
    (11, 50, 7, 20),
    (9, 50, 29, 100),
    (4, 25, 63, 250),
    (31, 200, 129, 500),
    (7, 50, 11, 50),
    (23, 200, 9, 50),
];

pub const SPIRAL_LEO_MAX_DEPTH: usize = 5;

/// Truncation of the self-similar spiral map after `k` blocks of four turns.
pub fn spiral_leo(k: usize) -> PLMap {
    let k = k.clamp(1, SPIRAL_LEO_MAX_DEPTH);
    let mut pts: Vec<(Rat, Rat)> = vec![(int(1), int(1)), (rat(9, 10), int(0)), (rat(4, 5), int(1))];
    for &(a, b, c, d) in &SPIRAL_LEO_TAIL[..4 * k] {
        pts.push((rat(a, b), rat(c, d)));
    }
    pts.push((int(0), int(0)));
    pts.reverse();
    PLMap::new(pts).expect("spiral truncation is valid")
}

/// Truncation of the countable-endpoint map after `k` spikes; the tail is a diagonal piece.
pub fn countable_endpoints(k: usize) -> PLMap {
    let k = k.clamp(1, 40);
    let mut pts: Vec<(Rat, Rat)> = vec![(int(1), int(0))];
    for j in 1..=k as u32 {
        let p = Rat::from_integer(num_bigint::BigInt::from(2u32).pow(j));
        let spike = int(1) / &p;
        let foot = int(5) / (&p * int(8));
        pts.push((spike.clone(), &spike * int(2)));
        pts.push((foot.clone(), foot));
    }
    pts.push((int(0), int(0)));
    pts.reverse();
    PLMap::new(pts).expect("countable-endpoint truncation is valid")
}

fn canonical(name: &str) -> (&str, Option<usize>) {
    let (base, depth) = match name.split_once('@') {
        Some((b, d)) => (b, d.parse::<usize>().ok()),
        None => (name, None),
    };
    let base = ALIASES.iter().find(|(a, _)| *a == base).map(|(_, c)| *c).unwrap_or(base);
    (base, depth)
}

pub const DEFAULT_TRUNCATION: usize = 3;

pub fn entry(name: &str) -> Option<GalleryEntry> {
    let (base, depth) = canonical(name);
    let k = depth.unwrap_or(DEFAULT_TRUNCATION);
    let (name, map, claims) = match base {
        "tent" => (
            "tent".to_string(),
            tent(),
            vec![
                lit("zigzag_free", "proven"),
                lit("leo", "proven"),
                lit("retractable", "refuted"),
                derived("omega", "{0}", "exact critical orbit 1/2, 1, 0"),
                lit("recurrence(1/2)", "refuted"),
            ],
        ),
        "minc" => (
            "minc".to_string(),
            minc(),
            vec![lit("long_zigzag", "proven, epsilon >= 1/3"), lit("zigzag_free", "refuted")],
        ),
        "double-spiral-arc" => (
            "double-spiral-arc".to_string(),
            double_spiral_arc(),
            vec![
                lit("arc", "proven"),
                lit("b_endpoint(1/2 | cycle: 1/2)", "proven"),
                derived("fixed_points", "{0, 1/2, 1}", "per-lap linear solve"),
            ],
        ),
        "invariant-middle" => (
            "invariant-middle".to_string(),
            invariant_middle(),
            vec![
                lit("zigzag_free", "refuted"),
                derived("leo", "refuted, witness [1/3, 2/3]", "middle lap maps onto itself"),
                derived("long_zigzag", "proven", "middle lap is an invariant homeomorphism"),
            ],
        ),
        "two-sided-spiral" => (
            "two-sided-spiral".to_string(),
            two_sided_spiral(),
            vec![
                lit("omega_meets_critical", "refuted"),
                lit("arc", "proven"),
                derived("fixed_points", "{1/9, 1/2, 8/9}", "per-lap linear solve"),
            ],
        ),
        "knaster-triple" => (
            "knaster-triple".to_string(),
            knaster_triple(),
            vec![
                lit("leo", "refuted, witness [0, 1/3]"),
                lit("arc", "refuted"),
                derived("omega_meets_critical", "proven", "exact 2-cycle {4/9, 5/9}"),
            ],
        ),
        "period-two" => (
            "period-two".to_string(),
            period_two(),
            vec![derived("recurrence(1/2)", "proven", "orbit 1/2, 1, 1/2 is periodic")],
        ),
        "spiral-leo" => (
            format!("spiral-leo@{}", k.clamp(1, SPIRAL_LEO_MAX_DEPTH)),
            spiral_leo(k),
            vec![truncated("leo", "holds for the untruncated map")],
        ),
        "countable-endpoints" => (
            format!("countable-endpoints@{}", k.clamp(1, 40)),
            countable_endpoints(k),
            vec![truncated("endpoints", "countably many for the untruncated map")],
        ),
        _ => return None,
    };
    Some(GalleryEntry { name, map, claims })
}

/// Every built-in map, with truncated families at their default depth.
pub fn gallery() -> Vec<GalleryEntry> {
    [
        "tent",
        "minc",
        "double-spiral-arc",
        "invariant-middle",
        "two-sided-spiral",
        "knaster-triple",
        "period-two",
        "spiral-leo",
        "countable-endpoints",
    ]
    .iter()
    .map(|n| entry(n).expect("known gallery name"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_resolve() {
        for (alias, name) in ALIASES {
            let e = entry(alias).unwrap();
            assert!(e.name.starts_with(name));
        }
        assert_eq!(entry("fig5@2").unwrap().name, "spiral-leo@2");
        assert!(entry("nope").is_none());
    }

    #[test]
    fn truncations_build() {
        for k in 1..=5 {
            spiral_leo(k);
            countable_endpoints(k);
        }
    }
}
