use std::path::Path;
use std::process::{Command, Output};

fn ild(args: &[&str]) -> Output {
    ild_env(args, None)
}

fn ild_env(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ild"));
    cmd.args(args).env_remove("ILD_BUDGET");
    if let Some(b) = budget {
        cmd.env("ILD_BUDGET", b);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const SMALL: [&str; 4] = ["--depth", "16", "--horizon", "128"];

fn analyze_to(source: &str, out: &Path) {
    let p = out.to_str().unwrap();
    let o = ild(&[&SMALL[..], &["analyze", source, "--out", p]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn analyze_and_check_cert() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("minc.json");
    analyze_to("gallery:minc", &path);
    let o = ild(&["check-cert", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok minc\n");

    let text = std::fs::read_to_string(&path).unwrap();
    let again = dir.path().join("again.json");
    analyze_to("gallery:minc", &again);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn tampered_reports_fail() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("minc.json");
    analyze_to("gallery:minc", &path);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["properties"]["long_zigzag"]["certificate"]["epsilon"] = "1/2".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = ild(&["check-cert", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("long_zigzag"));

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&bad, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&ild(&["check-cert", bad.to_str().unwrap()])), 2);

    v = serde_json::from_str(&text).unwrap();
    v["extra"] = 1.into();
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&ild(&["check-cert", bad.to_str().unwrap()])), 2);
}

#[test]
fn analyze_map_file() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("skew.map");
    std::fs::write(&map, "# skew tent\nmap skew\npoint 0 0\npoint 1/3 1\npoint 1 0\n").unwrap();
    let v = json(&ild(&[&SMALL[..], &["analyze", map.to_str().unwrap()]].concat()));
    assert_eq!(v["schema"], "ild-report/1");
    assert_eq!(v["map"]["name"], "skew");
    assert_eq!(v["map"]["breakpoints"][1], serde_json::json!(["1/3", "1"]));

    std::fs::write(&map, "map bad\npoint 0 0\npoint 0.5 1\npoint 1 0\n").unwrap();
    let o = ild(&["analyze", map.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/2"));
    assert_eq!(code(&ild(&["analyze", dir.path().join("missing.map").to_str().unwrap()])), 2);
    assert_eq!(code(&ild(&["analyze", "gallery:nope"])), 2);
}

#[test]
fn certify_verbs() {
    let v = json(&ild(&["certify", "long-zigzag", "gallery:minc"]));
    assert_eq!(v["status"], "proven");
    assert_eq!(v["certificate"]["epsilon"], "1/3");
    assert_eq!(json(&ild(&["certify", "zigzag-free", "gallery:minc"]))["status"], "refuted");
    assert_eq!(json(&ild(&["certify", "leo", "gallery:fig8"]))["status"], "refuted");
    assert_eq!(json(&ild(&["certify", "recurrence", "gallery:u2", "--at", "1/2"]))["status"], "proven");
    assert_eq!(json(&ild(&["certify", "recurrence", "gallery:t2", "--at", "1/2"]))["status"], "refuted");
    assert_eq!(code(&ild(&["certify", "recurrence", "gallery:t2"])), 2);
    let v = json(&ild(&["certify", "vi", "gallery:t2", "--at", "1/4,3/4"]));
    assert!(v.is_object());
    assert_eq!(code(&ild(&["certify", "vi", "gallery:t2", "--at", "3/4"])), 2);
    assert_eq!(code(&ild(&["certify", "bogus", "gallery:t2"])), 2);
}

#[test]
fn classify_orbits() {
    let v = json(&ild(&["classify", "gallery:t2", "--orbit", "0 | cycle: 0"]));
    assert_eq!(v["endpoint"]["status"], "proven");
    let o = ild(&["classify", "gallery:t2", "--orbit", "1/2, 1/3"]);
    assert_eq!(code(&o), 2);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("orbit.txt");
    std::fs::write(&file, "1/2 | cycle: 1/2\n").unwrap();
    let v = json(&ild(&["classify", "gallery:fig4", "--orbit", file.to_str().unwrap()]));
    assert_eq!(v["double_spiral"]["status"], "proven");
}

#[test]
fn arc_and_retract() {
    let v = json(&ild(&["arc-check", "gallery:fig7"]));
    assert_eq!(v["verdict"]["status"], "proven");
    assert_eq!(v["verdict"]["certificate"]["ends"], serde_json::json!(["1/9", "8/9"]));
    assert_eq!(json(&ild(&["arc-check", "gallery:fig8"]))["verdict"]["status"], "refuted");
    assert_eq!(json(&ild(&["--depth", "16", "retract-probe", "gallery:fig4"]))["status"], "refuted");
}

#[test]
fn construct_endpoint_exits() {
    let v = json(&ild(&["construct-endpoint", "gallery:u2", "1/2"]));
    assert_eq!(v["orbit"], "1/2, 1 | cycle: 1/2, 1");
    assert_eq!(code(&ild(&["construct-endpoint", "gallery:u2", "1/3"])), 2);
    assert_eq!(code(&ild(&["construct-endpoint", "gallery:t2", "1/2"])), 1);
}

#[test]
fn render_is_deterministic() {
    let args = ["render", "gallery:minc", "--svg-precision", "3"];
    let a = stdout(&ild(&args));
    assert_eq!(a, stdout(&ild(&args)));
    assert!(a.starts_with("<svg") && a.contains("211.667,326.667"));

    let o = ild(&["render", "gallery:fig7", "--cobweb", "1/3", "--cobweb-steps", "40"]);
    assert!(stdout(&o).contains(r#"class="cobweb""#));
    let o = ild(&["render", "gallery:t2", "--iterate", "3", "--pullback", "0,1/4;0 | cycle: 0", "--depth", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(r#"class="pullback"#));
    assert_eq!(code(&ild(&["render", "gallery:t2", "--pullback", "1/4,1/2"])), 2);
}

#[test]
fn budget_exit_and_environment() {
    assert_eq!(code(&ild(&["render", "gallery:t2", "--iterate", "8", "--budget", "10"])), 3);
    assert_eq!(code(&ild_env(&["render", "gallery:t2", "--iterate", "8"], Some("10"))), 3);
    assert_eq!(code(&ild_env(&["render", "gallery:t2", "--iterate", "8", "--budget", "1000"], Some("10"))), 0);
    assert_eq!(code(&ild_env(&["render", "gallery:t2"], Some("lots"))), 2);
}
