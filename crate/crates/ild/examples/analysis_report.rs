//! Full report for one map, re-validated from its JSON.
use ild::gallery;
use ild::report::{analyze, check_report, AnalysisReport, Settings};

fn main() {
    let s = Settings { horizon: 256, ..Settings::default() };
    let r = analyze("tent", &gallery::tent(), &s);
    let json = serde_json::to_string_pretty(&r).unwrap();
    let back: AnalysisReport = serde_json::from_str(&json).unwrap();
    check_report(&back).unwrap();
    println!("{} bytes, digest {}", json.len(), back.map.digest);
}
