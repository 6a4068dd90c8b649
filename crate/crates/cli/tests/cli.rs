use std::process::{Command, Output};

use serde_json::Value;

fn cf_lab(args: &[&str]) -> Output {
    cf_lab_env(args, None)
}

fn cf_lab_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cf-lab"));
    cmd.args(args).env_remove("CF_LAB_THREADS");
    if let Some(t) = threads {
        cmd.env("CF_LAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(args: &[&str]) -> Vec<Value> {
    stdout(&cf_lab(args))
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn expand_reports_both_representations() {
    let r = &rows(&["expand", "5", "7"])[0];
    assert_eq!(r["sequence"], "1,2,2");
    assert_eq!(r["alternate"], "1,2,1,1");
    assert_eq!(r["continuant"], 7);
    assert_eq!(r["trace"], "1,1,3,7");
    assert_eq!(r["avg_bounded"], true);
}

#[test]
fn expand_handles_big_denominators() {
    // consecutive Fibonacci numbers: all terms 1 except the last
    let (mut k, mut n) = (1u128, 2u128);
    for _ in 0..170 {
        (k, n) = (n, k + n);
    }
    let line = stdout(&cf_lab(&["expand", &k.to_string(), &n.to_string()]));
    // integers are printed in full, beyond what an f64 can hold
    assert!(line.contains(&format!("\"continuant\":{n},")), "{line}");
    let r: Value = serde_json::from_str(&line).unwrap();
    let terms = r["sequence"].as_str().unwrap();
    assert_eq!(terms.split(',').count(), 171);
    assert!(terms.ends_with(",1,2"));

    let huge = cf_lab(&["expand", "3", "100000000000000000000000000000000000001"]);
    assert_eq!(huge.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_usage_code() {
    for args in [
        &["expand", "2", "4"][..],
        &["expand", "7", "5"],
        &["expand", "x", "5"],
        &["shift", "3,1"],
        &["shift", "1,0,2"],
        &["count", "--grid", "5,2"],
        &["catalan", "3", "--bound", "1"],
        &["pell", "3", "--bound", "1"],
        &["density", "1"],
        &["density", "10", "--shards", "2", "--shard", "2"],
        &["expand", "1", "2", "--format", "xml"],
    ] {
        let out = cf_lab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!stderr(&out).is_empty(), "{args:?}");
    }
    assert!(stderr(&cf_lab(&["expand", "2", "4"])).contains("not coprime"));
}

#[test]
fn shift_rows_follow_the_steps() {
    let steps = rows(&["shift", "1,1,2,4"]);
    assert!(steps.len() >= 2);
    for pair in steps.windows(2) {
        assert_eq!(pair[0]["after"], pair[1]["before"]);
    }
    for s in &steps {
        let before: u64 = s["continuant_before"].as_u64().unwrap();
        let after: u64 = s["continuant_after"].as_u64().unwrap();
        assert!(after >= before);
    }
    assert!(stdout(&cf_lab(&["shift", "2,2"])).is_empty());
    let csv = stdout(&cf_lab(&["shift", "2,2", "--format", "csv"]));
    assert_eq!(csv, "step,case,t,s,before,after,continuant_before,continuant_after\n");
}

#[test]
fn count_grid_and_certificate() {
    let r = rows(&["count", "--grid", "1,5,33461"]);
    assert_eq!(r[0]["avg_exponent"], Value::Null);
    assert_eq!(r[1]["uniform_count"], 11);
    assert_eq!(r[1]["avg_count"], 13);
    assert_eq!(r[2]["cert_m"], 12);
    assert_eq!(r[2]["cert_sequence_count"], 742900);
    assert!(r[2]["avg_count"].as_u64().unwrap() >= 742900);
}

#[test]
fn count_shards_sum_to_whole() {
    let whole = rows(&["count", "--max-n", "1000"]);
    assert_eq!(whole.len(), 3);
    let mut sums = [(0u64, 0u64); 3];
    for shard in 0..4 {
        let part = rows(&["count", "--max-n", "1000", "--shards", "4", "--shard", &shard.to_string()]);
        for (sum, row) in sums.iter_mut().zip(&part) {
            assert_eq!(row["avg_exponent"], Value::Null);
            sum.0 += row["avg_count"].as_u64().unwrap();
            sum.1 += row["uniform_count"].as_u64().unwrap();
        }
    }
    for (sum, row) in sums.iter().zip(&whole) {
        assert_eq!(sum.0, row["avg_count"].as_u64().unwrap());
        assert_eq!(sum.1, row["uniform_count"].as_u64().unwrap());
    }
}

#[test]
fn catalan_and_pell_tables() {
    let c = rows(&["catalan", "13", "--upto"]);
    assert_eq!(c.len(), 14);
    assert_eq!(c[5]["catalan"], 42);
    assert_eq!(c[13]["catalan"], 742900);
    let p = rows(&["pell", "13"]);
    assert_eq!(p[0]["f_k"], 33461);
    let csv = stdout(&cf_lab(&["pell", "2", "--bound", "3", "--upto", "--format", "csv"]));
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "k,bound,f_k,growth_root");
    assert!(lines[3].starts_with("2,3,3,3.3027756377"));
}

#[test]
fn density_rows() {
    let r = rows(&["density", "3"]);
    assert_eq!(r.len(), 3);
    assert_eq!(r[0]["kind"], "witness");
    assert_eq!(r[1]["representation"], "alternate");
    assert_eq!(r[2]["kind"], "summary");
    assert_eq!(r[2]["count"], 2);
    assert_eq!(r[2]["exponent"].as_f64().unwrap(), 0.630930);

    let s = rows(&["density", "100", "--summary", "--verify-corollary"]);
    assert_eq!(s.len(), 2);
    assert_eq!(s[1]["kind"], "corollary");
    assert_eq!(s[1]["violations"], 0);

    let two = rows(&["density", "2"]);
    assert_eq!(two[1]["exponent"].as_f64().unwrap(), 0.0);
}

#[test]
fn density_is_byte_identical_across_threads_and_shards() {
    let args = ["density", "2000", "--format", "csv"];
    let one = stdout(&cf_lab_env(&args, Some("1")));
    let eight = stdout(&cf_lab_env(&args, Some("8")));
    assert_eq!(one, eight);

    let mut merged: Vec<String> = Vec::new();
    for shard in 0..8 {
        let part = stdout(&cf_lab(&[
            "density", "2000", "--format", "csv", "--shards", "8", "--shard", &shard.to_string(),
        ]));
        merged.extend(
            part.lines()
                .skip(1)
                .filter(|l| l.starts_with("witness"))
                .map(str::to_owned),
        );
    }
    merged.sort_by_key(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap());
    let witnesses: Vec<&str> = one.lines().filter(|l| l.starts_with("witness")).collect();
    assert_eq!(merged, witnesses);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = cf_lab_env(&["catalan", "3"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("cf-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalan.csv");
    let out = cf_lab(&["catalan", "4", "--upto", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quick_verify_passes() {
    let r = rows(&["verify", "--quick"]);
    assert!(!r.is_empty());
    assert!(r.iter().all(|row| row["passed"] == true && row["violations"] == 0));
}
