use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lechkit::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lechkit"))
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_case(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = "\
[ring]
vars = x, y
relations = x^2

[ideal]
generators = x, y

[gamma]
num_vars = 2
complement = T1^2

[options]
i_max = 2
t_max = 6
";

#[test]
fn corpus_case_passes_with_exit_zero() {
    let o = run(&["check", corpus("ex3_23.case").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("overall: pass"));
    // one line per verdict, with both sides printed exactly
    assert!(text.contains("PASS  e_n_le_upper"));
    assert!(text.lines().any(|l| l.contains("sandwich_upper") && l.contains("4  vs  4")));
}

#[test]
fn expectation_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_case(&dir, "wrong.case", &format!("{SMALL}\n[expect]\ne_n = 3\n"));
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISS  e_n = 3 (got 2)"));
}

#[test]
fn missing_fact_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_case(&dir, "nofact.case", &format!("{SMALL}\n[expect]\nno.such.fact = 1\n"));
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("got nothing"));
}

#[test]
fn infrastructure_errors_exit_two() {
    let o = run(&["check", "/nonexistent/case.case"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));

    let dir = tempfile::tempdir().unwrap();
    let p = write_case(&dir, "inhom.case", &SMALL.replace("relations = x^2", "relations = x^2 - y"));
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["check", corpus("ex3_23.case").to_str().unwrap(), "--field", "Fp:12"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["check", corpus("ex3_23.case").to_str().unwrap(), "--skip", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_gamma_section_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("num_vars = 2\ncomplement = T1^2\n", "");
    let p = write_case(&dir, "gamma.case", &text);
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma num_vars mismatch"), "{}", stderr(&o));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_case(&dir, "bad.case", "[ring]\nvars = x\nthis line has no equals sign\n");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at 3:1"), "{}", stderr(&o));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let case = corpus("rem4_8.case");
    let args = ["check", case.to_str().unwrap(), "--format", "json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let report: Report = serde_json::from_str(&a).unwrap();
    assert_eq!(report.to_json(), a);
    assert!(report.pass);
    assert_eq!(report.fact("upper_bound"), Some("4"));
    // rationals are strings
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let t45 = v["stages"].as_array().unwrap().iter().find(|s| s["name"] == "theorem45").unwrap();
    assert_eq!(t45["data"]["upper_bound"], "4");
}

#[test]
fn out_flag_selects_destination() {
    let case = corpus("ex3_21.case");
    let o = run(&["check", case.to_str().unwrap(), "--out", "-"]);
    assert!(stdout(&o).contains("overall: pass"));

    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("report.json");
    let o = run(&["check", case.to_str().unwrap(), "--format", "json", "--out", dest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&dest).unwrap();
    assert!(written.ends_with("}\n"));
    let report: Report = serde_json::from_str(&written).unwrap();
    assert_eq!(report.case, "ex3_21");
}

#[test]
fn prime_field_override_matches_rationals() {
    let case = corpus("ex3_21.case");
    let q: Report = serde_json::from_str(&stdout(&run(&["check", case.to_str().unwrap(), "--format", "json"]))).unwrap();
    let p: Report = serde_json::from_str(&stdout(&run(&[
        "check",
        case.to_str().unwrap(),
        "--format",
        "json",
        "--field",
        "Fp:32003",
    ])))
    .unwrap();
    assert_eq!(p.field, "Fp:32003");
    assert_eq!(q.facts, p.facts);
}

#[test]
fn overrides_and_skips_apply() {
    let case = corpus("ex3_23.case");
    let o = run(&["check", case.to_str().unwrap(), "--i-max", "3", "--skip", "samuel,annihilators", "--format", "json"]);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.fact("free_through"), Some("3"));
    assert_eq!(r.fact("stage.samuel"), Some("skipped"));
    assert!(r.stage("samuel").unwrap().reason.is_some());
}

#[test]
fn check_all_orders_by_name_and_ignores_thread_cap() {
    let dir = corpus("");
    let one = bin()
        .args(["check-all", dir.to_str().unwrap(), "--format", "json"])
        .env("LECHKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0), "{}", stdout(&one));
    let many = bin()
        .args(["check-all", dir.to_str().unwrap(), "--format", "json"])
        .env("LECHKIT_THREADS", "8")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["case"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.contains(&"rem3_31") && names.len() >= 6);
}

#[test]
fn check_all_reports_mismatch_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_case(&dir, "a.case", SMALL);
    write_case(&dir, "b.case", &format!("{SMALL}\n[expect]\ncolength = 7\n"));
    let o = run(&["check-all", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("summary: 2 cases, mismatches"));
    write_case(&dir, "c.case", "[ring]\nvars = x\n");
    let o = run(&["check-all", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn utility_subcommands() {
    let o = run(&["stanley", "T1^2", "--num-vars", "2"]);
    let text = stdout(&o);
    assert!(text.contains("dimension 1") && text.contains("multiplicity 2"), "{text}");

    let o = run(&["stanley", "T1*T2", "--highest-pivot"]);
    assert!(stdout(&o).contains("multiplicity 2"));

    let o = run(&["series", "(1+z)^2/(1-z)", "--residue", "--expand", "4"]);
    let text = stdout(&o);
    assert!(text.contains("residue 4") && text.contains("coeffs  1 3 4 4 4"), "{text}");

    let o = run(&["series", "1/(1-z)(1-z^2)", "--poles"]);
    assert!(stdout(&o).contains("order at 1 = 2, max elsewhere = 1"), "{}", stdout(&o));

    let o = run(&["filtration", "2,2"]);
    let text = stdout(&o);
    assert!(text.contains("witness T1*T2, T2, T1, 1"), "{text}");
    assert!(text.contains("length 4"));

    let o = run(&["filtration", "2,0"]);
    assert_eq!(o.status.code(), Some(2));
}
