//! JSON analysis reports and their offline re-validation.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::asymptotics::{
    check_non_contraction, check_omega, check_retract, non_contraction_check, omega_approx, OrbitFate, retract_probe, rn_limit_classifier,
    ContractionWitness, NonContractionCert, NonRetractWitness, OmegaApprox, RetractCert, RnClassification,
};
use crate::certify::{
    check_leo_cert, check_leo_witness, check_long_zigzag, check_raines, check_zigzag, leo_certify, long_zigzag_certify,
    raines_property_probe, zigzag_scan, LeoCert, LeoWitness, LongZigzagCert, RainesCert, RainesWitness, Zigzag, ZigzagFreeCert,
};
use crate::ilim::{arc_check, check_arc, check_point_class, endpoint_classify_with, endpoint_construct, ArcDecision, PointClass};
use crate::mapspec::OrbitSpec;
use crate::numeric::{fmt_rat, point_vec_serde, rat_serde, Rat};
use crate::plmap::{FixedPoint, PLMap, DEFAULT_LAP_BUDGET};
use crate::verdict::{ensure, CertError, NoPayload, Verdict};

pub const SCHEMA: &str = "ild-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Zigzag scans stop at this iterate; the lap count grows geometrically beyond it.
pub const SCAN_DEPTH: usize = 4;
const MAX_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub depth: usize,
    pub retract_depth: usize,
    pub transient: usize,
    pub horizon: usize,
    pub budget: usize,
    #[serde(with = "rat_serde")]
    pub fattening: Rat,
    #[serde(with = "rat_serde")]
    pub rn_threshold: Rat,
    #[serde(with = "rat_serde")]
    pub delta0: Rat,
    pub svg_precision: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            depth: 64,
            retract_depth: 32,
            transient: crate::asymptotics::DEFAULT_TRANSIENT,
            horizon: crate::asymptotics::DEFAULT_HORIZON,
            budget: DEFAULT_LAP_BUDGET,
            fattening: crate::numeric::zero(),
            rn_threshold: crate::numeric::rat(1, 1000),
            delta0: crate::numeric::rat(1, 64),
            svg_precision: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapIdentity {
    pub name: String,
    pub digest: String,
    #[serde(with = "point_vec_serde")]
    pub breakpoints: Vec<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Properties {
    pub zigzag_free: Verdict<ZigzagFreeCert, Zigzag>,
    pub long_zigzag: Verdict<LongZigzagCert, NoPayload>,
    pub leo: Verdict<LeoCert, LeoWitness>,
    pub raines: Verdict<RainesCert, RainesWitness>,
    pub omega: OmegaApprox,
    pub rn: Vec<RnClassification>,
    pub retract: Verdict<RetractCert, NonRetractWitness>,
    pub arc: ArcDecision,
    pub non_contraction: Verdict<NonContractionCert, ContractionWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: String,
    pub tool_version: String,
    pub map: MapIdentity,
    pub settings: Settings,
    pub properties: Properties,
    pub points: Vec<PointClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// SHA-256 of the breakpoint list written as `x y` lines.
pub fn map_digest(f: &PLMap) -> String {
    let mut h = Sha256::new();
    for (x, y) in f.points() {
        h.update(format!("{} {}\n", fmt_rat(x), fmt_rat(y)).as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Orbits worth classifying: constant orbits at fixed points and constructed endpoints.
pub fn sample_orbits(f: &PLMap, omega: &OmegaApprox, depth: usize) -> Vec<OrbitSpec> {
    let mut out: Vec<OrbitSpec> = Vec::new();
    for fp in f.fixed_points_of_self() {
        if let FixedPoint::Point(x) = fp {
            out.push(OrbitSpec::constant(x));
        }
    }
    // Only critical points lying on their own cycle can be recurrent.
    let recurrent = omega.orbits.iter().filter(|o| matches!(&o.fate, OrbitFate::Periodic { preperiod: 0, .. }));
    for o in recurrent {
        if let Ok(e) = endpoint_construct(f, &o.c, depth.min(8)) {
            if !out.contains(&e.orbit) {
                out.push(e.orbit);
            }
        }
    }
    out.truncate(MAX_POINTS);
    out
}

pub fn analyze(name: &str, f: &PLMap, s: &Settings) -> AnalysisReport {
    let omega = omega_approx(f, s.transient, s.horizon, &s.fattening);
    let properties = Properties {
        zigzag_free: zigzag_scan(f, SCAN_DEPTH, s.budget),
        long_zigzag: long_zigzag_certify(f, s.depth),
        leo: leo_certify(f, s.depth),
        raines: raines_property_probe(f, s.depth),
        rn: rn_limit_classifier(f, s.depth, &s.rn_threshold),
        retract: retract_probe(f, &omega, s.retract_depth, s.depth),
        arc: arc_check(f, s.depth),
        non_contraction: non_contraction_check(f, &s.delta0),
        omega,
    };
    let points = sample_orbits(f, &properties.omega, s.depth)
        .iter()
        .map(|o| endpoint_classify_with(f, o, &properties.omega, s.depth))
        .collect();
    AnalysisReport {
        schema: SCHEMA.into(),
        tool_version: TOOL_VERSION.into(),
        map: MapIdentity { name: name.into(), digest: map_digest(f), breakpoints: f.points().to_vec() },
        settings: s.clone(),
        properties,
        points,
        timing_ms: None,
    }
}

/// Re-validates every embedded certificate against the map stored in the report.
pub fn check_report(r: &AnalysisReport) -> Result<(), CertError> {
    ensure(r.schema == SCHEMA, "schema", || format!("unsupported schema {}", r.schema))?;
    let f = PLMap::new_strict(r.map.breakpoints.clone()).map_err(|e| CertError::new("map.breakpoints", e.to_string()))?;
    ensure(map_digest(&f) == r.map.digest, "map.digest", || "breakpoints do not match the digest".into())?;
    let s = &r.settings;
    let p = &r.properties;
    let under = |e: CertError, at: &str| {
        if e.path.starts_with(at) {
            e.under("properties")
        } else {
            e.under(&format!("properties.{at}"))
        }
    };

    match &p.zigzag_free {
        Verdict::Proven { certificate } => {
            let again = zigzag_scan(&f, certificate.checked_up_to, s.budget);
            ensure(again.proven() == Some(certificate), "properties.zigzag_free", || "a zigzag exists".into())?;
        }
        Verdict::Refuted { witness } => check_zigzag(&f, witness, s.budget).map_err(|e| under(e, "zigzag_free"))?,
        Verdict::Unknown { .. } => {}
    }
    if let Verdict::Proven { certificate } = &p.long_zigzag {
        check_long_zigzag(&f, certificate).map_err(|e| under(e, "long_zigzag"))?;
    }
    match &p.leo {
        Verdict::Proven { certificate } => check_leo_cert(&f, certificate, s.depth).map_err(|e| under(e, "leo"))?,
        Verdict::Refuted { witness } => check_leo_witness(&f, witness).map_err(|e| under(e, "leo"))?,
        Verdict::Unknown { .. } => {}
    }
    check_raines(&f, &p.raines).map_err(|e| under(e, "raines"))?;
    check_omega(&f, &p.omega).map_err(|e| under(e, "omega"))?;
    ensure(p.omega.transient == s.transient && p.omega.horizon == s.horizon, "properties.omega", || "settings mismatch".into())?;
    let rn = rn_limit_classifier(&f, s.depth, &s.rn_threshold);
    ensure(rn == p.rn, "properties.rn", || "branch statistics are not reproduced".into())?;
    for (i, c) in p.rn.iter().enumerate() {
        if let Some(series) = &c.series {
            crate::asymptotics::check_branch_series(&f, series, &format!("properties.rn[{i}]"))?;
        }
    }
    check_retract(&f, &p.omega, &p.retract).map_err(|e| under(e, "retract"))?;
    check_arc(&f, &p.arc).map_err(|e| under(e, "arc"))?;
    check_non_contraction(&f, &p.non_contraction).map_err(|e| under(e, "non_contraction"))?;
    for (i, pc) in r.points.iter().enumerate() {
        check_point_class(&f, &p.omega, pc, s.depth).map_err(|e| e.under(&format!("points[{i}]")))?;
    }
    Ok(())
}

/// The analyses that must agree with a fresh run for the report to be reproducible.
pub fn reproduces(r: &AnalysisReport) -> bool {
    let Ok(f) = PLMap::new_strict(r.map.breakpoints.clone()) else { return false };
    let again = analyze(&r.map.name, &f, &r.settings);
    again.properties == r.properties && again.points == r.points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn tent_report_checks() {
        let s = Settings { depth: 16, retract_depth: 8, horizon: 256, ..Settings::default() };
        let r = analyze("tent", &gallery::tent(), &s);
        check_report(&r).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
