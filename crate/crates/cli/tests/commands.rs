use rcvv::suites;
use rcvv_cli::format::{self, Form};
use std::path::Path;
use std::process::{Command, Output};

fn rcvv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcvv")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_form(p: &Path) -> Form {
    format::parse_str(&std::fs::read_to_string(p).unwrap()).unwrap().0
}

fn write_form(p: &Path, form: &Form) {
    std::fs::write(p, format::to_string(&format::to_file(form).unwrap()).unwrap()).unwrap();
}

#[test]
fn fixtures_then_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(rcvv(&["fixtures", "--emit", path(d), "--precision", "12"]).status.success());
    let out = d.join("b.json");
    let o = rcvv(&["bracket", path(&d.join("E4.json")), path(&d.join("E6.json")), "--nu", "1", "-o", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"sha256\""));
    let got = read_form(&out).into_vector().unwrap();
    // The bracket output carries tensor factors; the fixture does not.
    assert!(got.meta().tensor().is_some());
    assert!(got.agrees_with(&read_form(&d.join("Delta3456.json")).into_vector().unwrap()));
}

#[test]
fn theta_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = Form::Jacobi(suites::random_jacobi(&mut suites::rng(5), 2, 6));
    write_form(&d.join("j.json"), &f);
    let v = d.join("v.json");
    let back = d.join("back.json");
    assert!(rcvv(&["theta-decompose", path(&d.join("j.json")), "-o", path(&v)]).status.success());
    assert_eq!(read_form(&v).kind(), "vvform");
    assert!(rcvv(&["theta-recompose", path(&v), "--kind", "jacobi", "-o", path(&back)]).status.success());
    assert_eq!(read_form(&back), f);
}

#[test]
fn pairing_report_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(rcvv(&["fixtures", "--emit", path(d)]).status.success());
    let o = rcvv(&["pair", "--formula", "thm2", "--g", path(&d.join("Delta.json")), "--k", "12", "--s", "1"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["schema"], "rcvv-pairing/1");
    assert!(report["value"].as_str().unwrap().contains("pi"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(rcvv(&["fixtures", "--emit", path(d)]).status.success());
    let e4 = d.join("E4.json");
    let out = d.join("x.json");
    assert_eq!(rcvv(&["bracket", path(&e4), path(&e4), "--nu", "0", "-o", path(&out)]).status.code(), Some(2));
    assert_eq!(rcvv(&["bracket", path(&d.join("none.json")), path(&e4), "--nu", "1", "-o", path(&out)]).status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(rcvv(&["verify", "--suite", "thm8", "--cases", "1"]).status.code(), Some(3));
    assert_eq!(rcvv(&["verify", "--suite", "thm8", "--cases", "1", "--skew-scaling", "signed"]).status.code(), Some(0));
}
