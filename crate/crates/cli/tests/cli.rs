use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn example5() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/example5.twist")
}

fn twistkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gibbons_tsarev_quotient_structured() {
    let f = fixture("gibbons_tsarev.twist");
    let o = twistkit(&["--format", "structured", "check-covering", f.to_str().unwrap(), "--covering", "gtc"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("twistkit-report 1\n"));
    assert!(out.contains("task.0.verdict=pass\n"));
    assert!(out.contains("task.0.cofactor.0=1/(u_x + (u_t - w)*w)^2\n"), "{out}");
    assert!(out.contains("task.0.residual.0=(u_t*u_xt - u_x*u_tt + u_xx + 1)/(u_x + (u_t - w)*w)^2\n"));
}

#[test]
fn trivial_covering_fails_properness() {
    let f = fixture("gibbons_tsarev.twist");
    let o = twistkit(&["--format", "structured", "check-covering", f.to_str().unwrap(), "--covering", "flat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("task.0.detail.trivial=true"));
}

#[test]
fn example5_run_all_pass() {
    let o = twistkit(&["run", example5().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let heads: Vec<&str> = out.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(heads.len(), 3);
    assert!(heads.iter().all(|l| l.ends_with("PASS")));
}

#[test]
fn structured_report_is_byte_identical() {
    let f = example5();
    let run = || stdout(&twistkit(&["--format", "structured", "--seed", "42", "run", f.to_str().unwrap()]));
    assert_eq!(run(), run());
}

#[test]
fn timing_only_when_asked() {
    let f = example5();
    let plain = stdout(&twistkit(&["--format", "structured", "run", f.to_str().unwrap()]));
    let timed = stdout(&twistkit(&["--format", "structured", "--timing", "run", f.to_str().unwrap()]));
    assert!(!plain.contains("time_us"));
    assert!(timed.contains("task.0.time_us="));
}

#[test]
fn exit_code_two_when_any_task_errors() {
    let f = fixture("linear.twist");
    let o = twistkit(&["--format", "structured", "run", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("task.0.verdict=pass"));
    assert!(out.contains("task.1.verdict=fail"));
    assert!(out.contains("task.1.residual.0=-1\n"));
    assert!(out.contains("task.2.verdict=error"));
    assert!(out.contains("task.2.error=division by zero"));
    assert!(out.contains("task.3.verdict=pass"));
}

#[test]
fn exit_code_one_on_failure_only() {
    let f = fixture("linear.twist");
    let o = twistkit(&["check-symmetry", f.to_str().unwrap(), "--field", "shift", "--equation", "lin"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("FAIL"));
}

#[test]
fn lambda_mode_from_flags() {
    let f = example5();
    // The fixture has no plain ∂_u field; build one next to it.
    let dir = std::env::temp_dir().join(format!("twistkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = std::fs::read_to_string(&f).unwrap() + "\n[field du]\nu = 1\n";
    let path = dir.join("ex5.twist");
    std::fs::write(&path, src).unwrap();
    let o = twistkit(&[
        "--mode", "lambda", "--order", "2", "check-symmetry", path.to_str().unwrap(),
        "--field", "du", "--equation", "agl", "--lambda", "lam",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let p = twistkit(&["prolong", path.to_str().unwrap(), "--field", "du", "--lambda", "lam", "--order", "1", "--format", "structured"]);
    assert!(stdout(&p).contains("task.0.detail.u_x=(u*m*g(x)*u^m + u_x)/u\n"), "{}", stdout(&p));
}

#[test]
fn matrix_coverings() {
    let f = fixture("burgers.twist");
    let path = f.to_str().unwrap();
    let ok = twistkit(&["check-matrix-covering", path, "--name", "rescaled"]);
    assert_eq!(ok.status.code(), Some(0));
    let zero = twistkit(&["--format", "structured", "check-matrix-covering", path, "--name", "zero"]);
    assert_eq!(zero.status.code(), Some(1));
    assert!(stdout(&zero).contains("task.0.detail.trivial=true"));
}

#[test]
fn gauge_and_mch() {
    let f = fixture("gauge.twist");
    let o = twistkit(&["--format", "structured", "run", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("task.0.verdict=pass"));
    assert!(out.contains("task.0.detail.mu.x=[[0, -1], [0, 0]]"));
    assert!(out.contains("task.1.verdict=pass"));
    assert!(out.contains("task.2.verdict=fail"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("twistkit-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.twist");
    std::fs::write(&path, "[vars]\nx\n[deps]\nu\n[lambda l]\nu + v\n").unwrap();
    let o = twistkit(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown symbol v"));
    let missing = twistkit(&["check-covering", path.to_str().unwrap(), "--covering", "nope"]);
    assert_eq!(missing.status.code(), Some(2));
}
