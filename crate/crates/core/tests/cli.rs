use std::process::{Command, Output};

fn bandrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandrecon"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn compare_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("compare.csv");
    let out = bandrecon(&["compare", "--lambda", "1", "--m", "4,6", "--S", "2001", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "experiment,window,N,lambda,param,samples_used,max_error,bound,pass");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r.len() == 9 && r[8] == "true"));
    // time-window rows read 2m + 2L + 1 samples
    let sinh6 = rows.iter().find(|r| r[1] == "sinh" && r[4] == "6").unwrap();
    assert_eq!(sinh6[5], "1037");
    assert!(rows.iter().find(|r| r[1] == "shannon").unwrap()[7].is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["robustness", "--lambda", "0.5", "--m", "3", "--S", "501", "--draws", "4", "--trials", "5000", "--seed", "11"];
    let a = bandrecon(&args);
    let b = bandrecon(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    let last = other.len() - 1;
    other[last] = "12";
    assert_ne!(a.stdout, bandrecon(&other).stdout);
}

#[test]
fn tsv_output() {
    let out = bandrecon(&["norm", "--T-exp", "0,1,2", "--format", "tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("experiment\twindow\tN\tlambda"));
    assert_eq!(text.lines().count(), 1 + 3 * 3 * 3);
}

#[test]
fn bad_input_exits_two() {
    let out = bandrecon(&["freq-decay", "--lambda", "0", "--S", "11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    let out = bandrecon(&["norm", "--S", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_experiment_rejected() {
    let out = bandrecon(&["fig9"]);
    assert!(!out.status.success());
}

#[test]
fn failing_bound_gives_exit_one() {
    // two trials make the variance estimate far too noisy for 1.1 ρ²
    let out = bandrecon(&["robustness", "--lambda", "1", "--m", "2", "--S", "11", "--draws", "1", "--trials", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.starts_with("robustness,shannon-gaussian") && l.ends_with(",false")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}
