//! The `ild` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{non_contraction_check, omega_approx, pull_back, recurrence_check, retract_probe, rn_limit_classifier};
use crate::certify::{leo_certify, long_zigzag_certify, raines_property_probe, zigzag_scan};
use crate::gallery;
use crate::ilim::{arc_check, endpoint_classify_with, endpoint_construct, virtually_increasing_preimage};
use crate::mapspec::{parse_map, parse_orbit, OrbitSpec};
use crate::numeric::{parse_rat, Rat, RatInterval};
use crate::plmap::{PLMap, DEFAULT_LAP_BUDGET};
use crate::report::{analyze, check_report, AnalysisReport, Settings, SCAN_DEPTH};
use crate::svg::{render, RenderOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ild", version, about = "Exact analysis of piecewise-linear interval maps and their inverse limits")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Search depth for certificates and orbit classification.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Number of critical-orbit steps used for the omega-limit cover.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Lap budget for iterates (overrides ILD_BUDGET).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Decimal digits for SVG coordinates.
    #[arg(long, global = true)]
    svg_precision: Option<usize>,
    /// Fattening radius for the omega-limit cover, as p/q.
    #[arg(long, global = true)]
    fattening: Option<String>,
    /// Record wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    ZigzagFree,
    LongZigzag,
    Leo,
    Raines,
    Omega,
    Rn,
    Recurrence,
    NonContraction,
    Vi,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every analysis and emit a JSON report.
    Analyze { source: String },
    /// Classify one backward orbit.
    Classify {
        source: String,
        /// Orbit text such as "1/2 | cycle: 1/2", or a file containing it.
        #[arg(long)]
        orbit: String,
    },
    /// Run a single certifier and print its verdict.
    Certify {
        property: Property,
        source: String,
        /// Critical point for `recurrence`, or `lo,hi` target for `vi`.
        #[arg(long)]
        at: Option<String>,
    },
    ArcCheck { source: String },
    RetractProbe { source: String },
    ConstructEndpoint {
        source: String,
        /// Critical point to build the endpoint from.
        critical: String,
    },
    /// Draw the graph of an iterate as SVG.
    Render {
        source: String,
        #[arg(long)]
        iterate: Option<usize>,
        /// `lo,hi;orbit`, pulled back --depth steps (default 8).
        #[arg(long)]
        pullback: Option<String>,
        /// Seed point for a cobweb.
        #[arg(long)]
        cobweb: Option<String>,
        #[arg(long, default_value_t = 24)]
        cobweb_steps: usize,
    },
    /// Re-validate every certificate in a report.
    CheckCert { report: PathBuf },
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Cert(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Cert(_) => EXIT_CERT,
            Failure::Budget(_) => EXIT_BUDGET,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cert(m) | Failure::Budget(m) => m,
        }
    }
}

fn input(msg: impl std::fmt::Display) -> Failure {
    Failure::Input(msg.to_string())
}

/// Lap budget: the flag wins, then ILD_BUDGET, then the default.
pub fn lap_budget(flag: Option<usize>, env: Option<&str>) -> Result<usize, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match env {
        Some(v) => v.trim().parse().map_err(|_| input(format!("ILD_BUDGET must be a positive integer, got {v:?}"))),
        None => Ok(DEFAULT_LAP_BUDGET),
    }
}

/// `gallery:<name>` or a path to a map document.
pub fn load_map(source: &str) -> Result<(String, PLMap), Failure> {
    if let Some(name) = source.strip_prefix("gallery:") {
        let e = gallery::entry(name).ok_or_else(|| input(format!("unknown gallery map {name:?}")))?;
        return Ok((e.name, e.map));
    }
    let text = std::fs::read_to_string(source).map_err(|e| input(format!("{source}: {e}")))?;
    let doc = parse_map(&text).map_err(|e| input(format!("{source}: {e}")))?;
    let map = doc.map();
    Ok((doc.name, map))
}

fn read_arg_or_file(s: &str) -> Result<String, Failure> {
    if Path::new(s).is_file() {
        std::fs::read_to_string(s).map_err(|e| input(format!("{s}: {e}")))
    } else {
        Ok(s.to_string())
    }
}

fn rat_arg(name: &str, s: &str) -> Result<Rat, Failure> {
    parse_rat(s.trim()).map_err(|e| input(format!("{name}: {e}")))
}

fn interval_arg(name: &str, s: &str) -> Result<RatInterval, Failure> {
    let (a, b) = s.split_once(',').ok_or_else(|| input(format!("{name}: expected lo,hi")))?;
    let (lo, hi) = (rat_arg(name, a)?, rat_arg(name, b)?);
    RatInterval::try_new(lo, hi).ok_or_else(|| input(format!("{name}: lo must not exceed hi")))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

struct Ctx {
    settings: Settings,
    depth_flag: Option<usize>,
    timing: bool,
}

fn report_for(source: &str, ctx: &Ctx) -> Result<AnalysisReport, Failure> {
    let (name, f) = load_map(source)?;
    Ok(timed_analysis(&name, &f, ctx))
}

fn timed_analysis(name: &str, f: &PLMap, ctx: &Ctx) -> AnalysisReport {
    let start = Instant::now();
    let mut r = analyze(name, f, &ctx.settings);
    if ctx.timing {
        r.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn check_cert(path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let reports: Vec<AnalysisReport> = if value.is_array() {
        serde_json::from_value(value).map_err(|e| input(format!("{}: {e}", path.display())))?
    } else {
        vec![serde_json::from_value(value).map_err(|e| input(format!("{}: {e}", path.display())))?]
    };
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        let prefix = if reports.len() > 1 { format!("[{i}].") } else { String::new() };
        check_report(r).map_err(|e| Failure::Cert(format!("{} {prefix}{}: {}", r.map.name, e.path, e.message)))?;
        out.push_str(&format!("ok {}\n", r.map.name));
    }
    Ok(out)
}

fn certify(property: Property, source: &str, at: Option<&str>, ctx: &Ctx) -> Result<String, Failure> {
    let (_, f) = load_map(source)?;
    let s = &ctx.settings;
    Ok(match property {
        Property::ZigzagFree => json(&zigzag_scan(&f, ctx.depth_flag.unwrap_or(SCAN_DEPTH), s.budget)),
        Property::LongZigzag => json(&long_zigzag_certify(&f, s.depth)),
        Property::Leo => json(&leo_certify(&f, s.depth)),
        Property::Raines => json(&raines_property_probe(&f, s.depth)),
        Property::Omega => json(&omega_approx(&f, s.transient, s.horizon, &s.fattening)),
        Property::Rn => json(&rn_limit_classifier(&f, s.depth, &s.rn_threshold)),
        Property::NonContraction => json(&non_contraction_check(&f, &s.delta0)),
        Property::Recurrence => {
            let c = rat_arg("--at", at.ok_or_else(|| input("recurrence needs --at <critical point>"))?)?;
            json(&recurrence_check(&f, &c, s.depth))
        }
        Property::Vi => {
            let target = interval_arg("--at", at.ok_or_else(|| input("vi needs --at lo,hi"))?)?;
            json(&virtually_increasing_preimage(&f, &target))
        }
    })
}

fn run_command(cli: Cli) -> Result<String, Failure> {
    let budget = lap_budget(cli.budget, std::env::var("ILD_BUDGET").ok().as_deref())?;
    let mut settings = Settings { budget, ..Settings::default() };
    if let Some(d) = cli.depth {
        settings.depth = d;
        settings.retract_depth = (d / 2).max(1);
    }
    if let Some(h) = cli.horizon {
        if h <= settings.transient {
            settings.transient = h / 2;
        }
        settings.horizon = h.max(2);
    }
    if let Some(p) = cli.svg_precision {
        settings.svg_precision = p;
    }
    if let Some(e) = &cli.fattening {
        settings.fattening = rat_arg("--fattening", e)?;
    }
    let ctx = Ctx { settings, depth_flag: cli.depth, timing: cli.timing };
    let s = &ctx.settings;

    match cli.command {
        Command::Analyze { source } => {
            if source == "gallery:*" {
                let entries = gallery::gallery();
                let reports: Vec<AnalysisReport> = entries.par_iter().map(|e| timed_analysis(&e.name, &e.map, &ctx)).collect();
                Ok(json(&reports))
            } else {
                Ok(json(&report_for(&source, &ctx)?))
            }
        }
        Command::Classify { source, orbit } => {
            let (_, f) = load_map(&source)?;
            let text = read_arg_or_file(&orbit)?;
            let o = parse_orbit(text.trim(), &f).map_err(input)?;
            let omega = omega_approx(&f, s.transient, s.horizon, &s.fattening);
            Ok(json(&endpoint_classify_with(&f, &o, &omega, s.depth)))
        }
        Command::Certify { property, source, at } => certify(property, &source, at.as_deref(), &ctx),
        Command::ArcCheck { source } => {
            let (_, f) = load_map(&source)?;
            Ok(json(&arc_check(&f, s.depth)))
        }
        Command::RetractProbe { source } => {
            let (_, f) = load_map(&source)?;
            let omega = omega_approx(&f, s.transient, s.horizon, &s.fattening);
            Ok(json(&retract_probe(&f, &omega, s.retract_depth, s.depth)))
        }
        Command::ConstructEndpoint { source, critical } => {
            let (_, f) = load_map(&source)?;
            let c = rat_arg("critical", &critical)?;
            if !f.critical_set().contains(&c) {
                return Err(input(format!("{critical} is not a critical point")));
            }
            match endpoint_construct(&f, &c, s.depth) {
                Ok(e) => Ok(json(&e)),
                Err(e) => Err(Failure::Cert(e.to_string())),
            }
        }
        Command::Render { source, iterate, pullback, cobweb, cobweb_steps } => {
            let (_, f) = load_map(&source)?;
            let mut opts = RenderOptions { iterate: iterate.unwrap_or(1), precision: s.svg_precision, budget: s.budget, ..Default::default() };
            if let Some(seed) = cobweb {
                opts.cobweb = Some((rat_arg("--cobweb", &seed)?, cobweb_steps));
            }
            if let Some(spec) = pullback {
                let (iv, orbit) = spec.split_once(';').ok_or_else(|| input("--pullback: expected lo,hi;orbit"))?;
                let j0 = interval_arg("--pullback", iv)?;
                let o: OrbitSpec = parse_orbit(orbit.trim(), &f).map_err(input)?;
                let pb = pull_back(&f, &j0, &o, ctx.depth_flag.unwrap_or(8)).map_err(input)?;
                opts.pullback = Some(pb);
            }
            render(&f, &opts).map_err(|e| Failure::Budget(e.to_string()))
        }
        Command::CheckCert { report } => check_cert(&report),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = cli.out.clone();
    match run_command(cli) {
        Ok(text) => match out {
            Some(path) => match std::fs::write(&path, text) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("ild: {}: {e}", path.display());
                    EXIT_INPUT
                }
            },
            None => {
                print!("{text}");
                EXIT_OK
            }
        },
        Err(f) => {
            eprintln!("ild: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_precedence() {
        assert_eq!(lap_budget(Some(5), Some("7")).unwrap(), 5);
        assert_eq!(lap_budget(None, Some("7")).unwrap(), 7);
        assert_eq!(lap_budget(None, None).unwrap(), DEFAULT_LAP_BUDGET);
        assert!(lap_budget(None, Some("x")).is_err());
    }
}
