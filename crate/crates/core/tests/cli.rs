mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{fixture, parse_centi};

fn fpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compute_oo_fixture() {
    let o = fpa(&["compute", &fixture("academic_oo.fpa")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FP = 174.64"));
    assert!(stderr(&o).is_empty());
}

#[test]
fn compute_structural_fixture_as_json() {
    let o = fpa(&[
        "compute",
        &fixture("academic_structural.fpa"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\"fp\": \"180.93\""), "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cfp"], 163);
    assert_eq!(v["rcaf"], 46);
}

#[test]
fn compute_missing_file() {
    let o = fpa(&["compute", "missing.fpa"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("missing.fpa"));
}

#[test]
fn itemized_fixtures_match_count_fixtures() {
    for (items, counts) in [
        ("academic_oo_items.fpa", "academic_oo.fpa"),
        ("academic_structural_items.fpa", "academic_structural.fpa"),
    ] {
        let a = fpa(&["compute", &fixture(items), "--format", "csv"]);
        let b = fpa(&["compute", &fixture(counts), "--format", "csv"]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(stdout(&a), stdout(&b));
    }
}

#[test]
fn validate_outcomes() {
    let o = fpa(&["validate", &fixture("academic_oo.fpa")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n");

    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("[counts]\ninput = 1 1 1\n[rcaf]\n");
    for i in 1..=14 {
        text.push_str(&format!("f{i} = {}\n", if i == 5 { 9 } else { 2 }));
    }
    let bad = write(dir.path(), "bad_rating.fpa", &text);
    let o = fpa(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    let err = stderr(&o);
    let errors: Vec<&str> = err.lines().filter(|l| l.contains(": error: ")).collect();
    assert_eq!(errors.len(), 1, "{err}");
    assert!(
        errors[0].contains(":8: error: rating out of range 0..5: f5 = 9"),
        "{err}"
    );

    let header = write(
        dir.path(),
        "header.fpa",
        "[counts\ninput = 1 1 1\n[rcaf]\ntotal = 3\n",
    );
    let o = fpa(&["validate", &header]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn compare_fixtures() {
    let oo = fixture("academic_oo.fpa");
    let o = fpa(&["compare", &oo, &fixture("academic_structural.fpa")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FP delta = +6.29"));

    let o = fpa(&["compare", &oo, &oo]);
    assert!(stdout(&o).contains("FP delta = 0.00"));

    let o = fpa(&[
        "compare",
        &oo,
        &fixture("academic_structural.fpa"),
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.trim_end().ends_with(",+6.29"));
}

#[test]
fn compare_with_an_invalid_file_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.fpa", "[rcaf]\ntotal = 80\n");
    let o = fpa(&["compare", &fixture("academic_oo.fpa"), &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());

    let o = fpa(&["compare", "nope.fpa", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
}

#[test]
fn whatif_examples() {
    let oo = fixture("academic_oo.fpa");
    let o = fpa(&["whatif", &oo, "--rcaf", "total=+1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FP = 176.12"), "{}", stdout(&o));

    let o = fpa(&["whatif", &oo, "--add", "ILF:high"]);
    assert!(stdout(&o).contains("FP = 192.34"));
    assert!(stdout(&o).contains("FP delta = +17.70"));

    let o = fpa(&["whatif", &oo]);
    assert!(stdout(&o).contains("FP delta = 0.00"));

    let o = fpa(&["whatif", &oo, "--rcaf", "total=+20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("--rcaf total=+20"), "{}", stderr(&o));

    let o = fpa(&["whatif", &oo, "--rcaf", "f2=+1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--rcaf f2=+1"));
}

#[test]
fn whatif_on_itemized_factors() {
    let m = fixture("measured.fpa");
    let o = fpa(&[
        "whatif", &m, "--rcaf", "f3=+2", "--add", "EI:low", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // (39 + 3) × (65 + 36)
    assert_eq!(v["adjusted"]["fp"], "42.42");
    let base = parse_centi(v["base"]["fp"].as_str().unwrap()).unwrap();
    let adjusted = parse_centi(v["adjusted"]["fp"].as_str().unwrap()).unwrap();
    assert_eq!(
        parse_centi(v["fp_delta"].as_str().unwrap()),
        Some(adjusted - base)
    );

    let o = fpa(&["whatif", &m, "--rcaf", "f3=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("f3 would become -1"));
}

#[test]
fn override_files() {
    let dir = tempfile::tempdir().unwrap();
    let oo = fixture("academic_oo.fpa");

    let o = fpa(&[
        "compute",
        &oo,
        "--weights",
        &fixture("standard_weights.fpa"),
    ]);
    assert!(stdout(&o).contains("FP = 174.64"));

    let doubled = write(
        dir.path(),
        "w.fpa",
        "[weights]\ninput = 6 8 12\noutput = 8 10 14\nquery = 6 8 12\nfile = 14 20 30\ninterface = 10 14 20\n",
    );
    let o = fpa(&["compute", &oo, "--weights", &doubled]);
    assert!(stdout(&o).contains("FP = 349.28"));

    let partial = write(dir.path(), "p.fpa", "[weights]\ninput = 6 8 12\n");
    let o = fpa(&["compute", &oo, "--weights", &partial]);
    assert_eq!(o.status.code(), Some(1));

    // everything high
    let matrix = write(
        dir.path(),
        "m.fpm",
        "[matrix.EI]\ndet_breaks = 1 2\nref_breaks = 1 2\ngrid = h h h / h h h / h h h\n",
    );
    let o = fpa(&[
        "compute",
        &fixture("measured.fpa"),
        "--matrix",
        &matrix,
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // two EI at weight 6 instead of 3 + 4
    assert_eq!(v["cfp"], 39 - 7 + 12);

    let broken = write(dir.path(), "b.fpm", "[matrix.EI]\ngrid = x\n");
    let o = fpa(&["compute", &fixture("measured.fpa"), "--matrix", &broken]);
    assert_eq!(o.status.code(), Some(2));
    let o = fpa(&["compute", &oo, "--matrix", "nope.fpm"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn runs_are_deterministic() {
    let args = [
        "compare",
        &fixture("academic_oo.fpa"),
        &fixture("academic_structural.fpa"),
        "--format",
        "json",
    ];
    let a = fpa(&args);
    let b = fpa(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn in_process_runner_matches_binary() {
    let oo = fixture("academic_oo.fpa");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = fpa::cli::run(["fpa", "compute", oo.as_str()], &mut out, &mut err);
    assert_eq!(status, fpa::cli::ExitStatus::Success);
    assert_eq!(out, fpa(&["compute", &oo]).stdout);
}
