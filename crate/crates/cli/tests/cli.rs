use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GOLDEN: &str = include_str!("../../core/tests/fixtures/golden_n8.csv");

fn ttp2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttp2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tight(n: usize) -> String {
    let mut s = format!("{n}\n");
    for i in 0..n {
        let row: Vec<&str> = (0..n).map(|j| if i / 2 == j / 2 { "0" } else { "1" }).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_tight_eight() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "tight8.txt", &tight(8));
    let out = ttp2(&["solve", &inst]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["total"], 56.0);
    assert!((r["gap_percent"].as_f64().unwrap() - 100.0 / 6.0).abs() < 1e-9);
    assert_eq!(r["construction"], "even");

    let csv = dir.path().join("tight8.schedule.csv");
    assert!(csv.exists());
    let check = ttp2(&["validate", csv.to_str().unwrap(), &inst]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["distance"]["total"], 56.0);
}

#[test]
fn solve_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("12\n");
    for i in 0..12i64 {
        let row: Vec<String> = (0..12i64).map(|j| ((i - j).abs() * 7 + (i * j) % 5 * (i != j) as i64).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    let inst = write(dir.path(), "r12.txt", &text);
    let strip = |o: &Output| {
        let mut v = json(o);
        v["elapsed_ms"] = Value::Null;
        v
    };
    let a = ttp2(&["solve", &inst, "--rounds", "3", "--seed", "9"]);
    let b = ttp2(&["solve", &inst, "--rounds", "3", "--seed", "9"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn small_counts_use_exhaustive_search() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = format!("6\n{}", "0 0 0 0 0 0\n".repeat(6));
    let inst = write(dir.path(), "zero6.txt", &zeros);
    let out = ttp2(&["solve", &inst]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["construction"], "brute");
    assert_eq!(json(&out)["total"], 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exhaustive"));

    let oracle = ttp2(&["oracle", &inst]);
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(json(&oracle)["total"], 0.0);
}

#[test]
fn unsupported_count_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "two.txt", "2\n0 1\n1 0\n");
    assert_eq!(ttp2(&["solve", &inst]).status.code(), Some(2));
    assert_eq!(ttp2(&["solve", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn validate_golden_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "golden.csv", GOLDEN);
    let inst = write(dir.path(), "tight8.txt", &tight(8));
    let out = ttp2(&["validate", &csv, &inst]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["distance"]["total"], 56.0);
}

#[test]
fn corrupted_csv_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "bad.csv", &GOLDEN.replacen('+', "*", 1));
    let out = ttp2(&["validate", &csv]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn infeasible_table_lists_violations() {
    // Swapping the first two days repeats opponents on consecutive days.
    let mut rows: Vec<Vec<String>> = GOLDEN
        .lines()
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect();
    for r in &mut rows {
        r.swap(1, 2);
    }
    let text: String = rows.iter().map(|r| r.join(",") + "\n").collect();
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "swapped.csv", &text);
    let out = ttp2(&["validate", &csv]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["feasible"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["property"] == "no-repeat"));
}

#[test]
fn lower_bound_of_tight_ten() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "tight10.txt", &tight(10));
    let out = ttp2(&["lb", &inst]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["total"], 80.0);
}

#[test]
fn bench_empty_and_populated() {
    let dir = tempfile::tempdir().unwrap();
    let out = ttp2(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["reports"].as_array().unwrap().len(), 0);

    write(dir.path(), "tight8.txt", &tight(8));
    write(dir.path(), "tight10.txt", &tight(10));
    let other = tempfile::tempdir().unwrap();
    let base = write(other.path(), "base.csv", "name,previous\ntight8,70\ntight10,100\n");
    let out = ttp2(&["bench", dir.path().to_str().unwrap(), "--baseline", &base]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    assert_eq!(v["improvements"].as_array().unwrap().len(), 2);
    assert!(v["mean_improvement_percent"].as_f64().unwrap() > 0.0);
}
