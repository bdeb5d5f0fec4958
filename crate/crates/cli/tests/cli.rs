use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclodescent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn analyze_genus2() {
    let o = run(&["analyze", &path("genus2.curve")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# analyze seed=1 prime_budget=20"), "{s}");
    assert!(
        s.contains("genus: 2, factors: x^2+1, x^4+1, |mu_p(L)| = 4\n"),
        "{s}"
    );
    assert!(s.contains("f0: x^6+x^4+x^2+1\n"));
}

#[test]
fn analyze_multiplicities() {
    let o = run(&["analyze", &path("trigonal.curve")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("parts: (x^3-x)^2\n"), "{s}");
    assert!(s.contains("genus: 1,"), "{s}");
}

#[test]
fn bad_degree_exits_2() {
    let o = run(&["analyze", &path("bad_degree.curve")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("DegreeNotDivisible"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn non_prime_field_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("q4.curve");
    fs::write(&f, "base: Fq 4\np: 2\nf: 1 0 1 0 1 0 1\n").unwrap();
    let o = run(&["oracle", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("parse error at line 1"));
}

#[test]
fn missing_file_exits_2() {
    let o = run(&["analyze", "/nonexistent/curve"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn descend_worked_divisor() {
    let o = run(&["descend", &path("genus2.curve"), &path("worked.div")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D1: delta = T^2-T ; n = 2 ;"));
}

#[test]
fn descend_sheet_difference() {
    let o = run(&["descend", &path("genus2.curve"), &path("sheets.div")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let d1 = s.lines().find(|l| l.starts_with("D1:")).unwrap();
    assert!(
        d1.starts_with("D1: delta = 1 ; n = -1 ; fake: trivial ; explicit: trivial("),
        "{d1}"
    );
    assert!(d1.contains("c = -1)"), "{d1}");
    assert!(d1.contains("mod chi: nontrivial("), "{d1}");
    assert!(s.contains("D3: delta = 1 ; n = 1 ;"), "{s}");
    assert!(s.contains("class_eq D1 D2: equal("), "{s}");
}

#[test]
fn descend_empty_file_gives_identity() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.div");
    fs::write(&f, "# nothing\n").unwrap();
    let o = run(&["descend", &path("genus2.curve"), f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o)
        .contains("D1: delta = 1 ; n = 1 ; fake: trivial ; explicit: trivial(theta = 1, c = 1)"));
}

#[test]
fn descend_bad_divisor_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.div");
    fs::write(&f, "H 0 -1 1 ; 1 2 ; 1\n").unwrap();
    let o = run(&["descend", &path("genus2.curve"), f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 1"));
}

#[test]
fn oracle_genus2_over_f5() {
    let o = run(&["oracle", &path("genus2_f5.curve")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("CHECK prop31_order F5:p2:f=1,0,1,0,1,0,1 PASS (8 = 8)\n"),
        "{s}"
    );
    assert!(!s.contains(" FAIL "));
    assert!(s.contains("SUMMARY 21 checks, 0 failed"));
}

#[test]
fn oracle_split_instance() {
    let o = run(&["oracle", &path("split_f13.curve"), "--samples", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("CHECK h1m_fixed_points F13:p2:f=5,4,12,6,6,5,1 PASS (32 = 32)"),
        "{s}"
    );
    assert!(
        s.contains("CHECK j2_split F13:p2:f=5,4,12,6,6,5,1 PASS (16 = 16)"),
        "{s}"
    );
}

#[test]
fn oracle_outside_envelope_exits_2() {
    let o = run(&["oracle", &path("genus2.curve")]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("big.curve");
    fs::write(&f, "base: Fq 17\np: 2\nf: 1 0 1 0 1 0 1\n").unwrap();
    assert_eq!(run(&["oracle", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = run(&[
        "verify",
        &path("genus2.curve"),
        "--samples",
        "15",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = fs::read_to_string(&out).unwrap();
    assert!(
        s.starts_with("# verify seed=1 prime_budget=20 support=[] samples=15\n"),
        "{s}"
    );
    assert_eq!(s.lines().filter(|l| l.starts_with("CHECK ")).count(), 6);
    assert!(
        s.lines()
            .filter(|l| l.starts_with("CHECK "))
            .all(|l| l.contains(" PASS ")),
        "{s}"
    );
}

#[test]
fn verify_genus1_has_no_homomorphism_section() {
    let o = run(&["verify", &path("trigonal.curve"), "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("CHECK norm_identity Zeta3:p3:f=x^6-2*x^4+x^2 PASS (10/10)"),
        "{s}"
    );
    assert!(s.contains("CHECK principal_identity Zeta3:"), "{s}");
    assert!(
        s.contains("CHECK homomorphism Zeta3:p3:f=x^6-2*x^4+x^2 SKIP"),
        "{s}"
    );
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        &path("genus2.curve"),
        "--samples",
        "8",
        "--seed",
        "5",
    ];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let args = ["oracle", &path("genus2_f5.curve"), "--seed", "3"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let args = [
        "descend",
        &path("genus2.curve"),
        &path("sheets.div"),
        "--support",
        "7,11",
    ];
    let a = stdout(&run(&args));
    assert!(a.starts_with("# descend seed=1 prime_budget=20 support=[7,11]\n"));
    assert_eq!(a, stdout(&run(&args)));
}
