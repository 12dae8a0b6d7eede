use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_uc-chp");

fn section5() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/section5.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn with_section5(args: &[&str]) -> Output {
    let path = section5();
    let mut full = args.to_vec();
    full.extend(["--instance", path.to_str().unwrap()]);
    run(&full)
}

#[test]
fn validate_accepts_the_bundled_instance() {
    let out = with_section5(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2 generator(s), 3 period(s), 0 error(s)"));
}

#[test]
fn malformed_file_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"T\": 3,\n  \"demand\": [1, 2,\n").unwrap();
    let out = run(&["validate", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["solve", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn start_ramp_below_minimum_output_exits_1() {
    let text = fs::read_to_string(section5()).unwrap().replace("\"start_ramp\": 55", "\"start_ramp\": 10");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ramp.json");
    fs::write(&path, text).unwrap();
    let out = run(&["validate", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("G2"), "{text}");
    assert!(text.contains("1 error(s)"), "{text}");
}

#[test]
fn solve_prints_objective_and_schedule() {
    let out = with_section5(&["solve"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("z_qip,status,nodes\n835.000000,optimal,"), "{text}");
    for line in ["G1,2,1,0,35.000000", "G1,3,1,0,10.000000", "G2,1,1,0,40.000000", "G2,3,1,0,50.000000"] {
        assert!(text.contains(line), "missing {line}");
    }
}

#[test]
fn solve_with_zero_demand_turns_everything_off() {
    let text = fs::read_to_string(section5()).unwrap().replace("[40, 80, 60]", "[0, 0, 0]");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    fs::write(&path, text).unwrap();
    let out = run(&["solve", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\n0.000000,optimal,"), "{text}");
    assert!(text.contains("G2,1,0,0,0.000000"), "{text}");
}

#[test]
fn infeasible_demand_exits_1() {
    let text = fs::read_to_string(section5()).unwrap().replace("[40, 80, 60]", "[40, 500, 60]");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    fs::write(&path, text).unwrap();
    let out = run(&["solve", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn price_tlmp_and_chp() {
    let tlmp = stdout(&with_section5(&["price", "--method", "tlmp"]));
    assert!(tlmp.contains("TLMP,1,1.000000\nTLMP,2,5.000000\nTLMP,3,6.000000\n"), "{tlmp}");
    assert!(tlmp.contains("TLMP,35.000000,835.000000,"), "{tlmp}");

    let chp = stdout(&with_section5(&["price", "--method", "chp"]));
    assert!(chp.contains("CHP,7.000000,835.000000,828.000000,"), "{chp}");
}

#[test]
fn compare_writes_both_methods_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.csv");
    let trace = dir.path().join("trace.csv");
    let lp = dir.path().join("meuc.mps");
    let out = with_section5(&[
        "compare",
        "--out",
        out_path.to_str().unwrap(),
        "--trace-dp",
        trace.to_str().unwrap(),
        "--dump-lp",
        lp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("TLMP,35.000000,835.000000,835.000000,0.800000"), "{text}");
    assert!(text.contains("CHP,7.000000,835.000000,828.000000,0.800000"), "{text}");
    let trace = fs::read_to_string(&trace).unwrap();
    assert!(trace.contains("# method=CHP generator=G2"));
    assert!(fs::read_to_string(&lp).unwrap().contains("ROWS"));
}

#[test]
fn pretty_format_renders_tables() {
    let text = stdout(&with_section5(&["compare", "--format", "pretty"]));
    assert!(text.contains("Summary"));
    assert!(text.contains("80.00%"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [&["compare"][..], &["solve"], &["price", "--method", "chp"]] {
        let a = with_section5(args);
        let b = with_section5(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = run(&["compare", "--fuzz", "6", "--seed", "3"]);
    let b = run(&["compare", "--fuzz", "6", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fuzz_batch_reports_every_invariant() {
    let out = run(&["compare", "--fuzz", "8", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case,invariant,result,value"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r[2] == "pass"));
    for name in ["euc_integral", "euc_equals_dp", "chp_uplift_le_tlmp", "chp_uplift_equals_duality_gap"] {
        assert!(rows.iter().any(|r| r[1] == name), "missing {name}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["compare"]).status.code(), Some(2));
    assert_eq!(with_section5(&["price", "--method", "lmp"]).status.code(), Some(2));
    assert_eq!(with_section5(&["solve", "--gap-tol", "-1"]).status.code(), Some(2));
}
