use std::process::Command;

use gridcode::cli::execute;
use gridcode::formats::{read_polynomial, read_truth_table, write_truth_table};
use gridcode::runner::Parallel;
use gridcode_core::restrict::exact_bucket_distribution;
use gridcode_core::{CubeFunction, PrimeField};

fn run(args: &[&str]) -> String {
    execute(args.iter().copied(), &Parallel::new(Some(2)).unwrap()).unwrap().1
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gridcode"))
}

#[test]
fn test_command_has_one_row_per_delta() {
    let out = run(&["test", "--n", "10", "--d", "1", "--k", "3", "--p", "2", "--delta", "0,0.1", "--trials", "2000", "--seed", "7"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# gridcode test n=10 d=1 k=3 p=2 trials=2000 seed=7");
    assert_eq!(lines[1], "delta,trials,rejections,rate,stderr");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("0/1,2000,0,0.0,0.0"));
    let rejections: u64 = lines[3].split(',').nth(2).unwrap().parse().unwrap();
    assert!(rejections > 0);
}

#[test]
fn buckets_exact_matches_enumeration() {
    let out = run(&["buckets", "--r", "5", "--k", "2", "--exact"]);
    let dist = exact_bucket_distribution(5, 2).unwrap();
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), dist.len());
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        let sizes: Vec<u32> = cells[0].split('-').map(|s| s.parse().unwrap()).collect();
        let p = &dist[&sizes];
        assert_eq!(cells[1], p.numer().to_string());
        assert_eq!(cells[2], p.denom().to_string());
    }
}

#[test]
fn sampled_buckets_sum_to_trials() {
    let out = run(&["buckets", "--r", "8", "--k", "3", "--sampler", "direct", "--trials", "500", "--seed", "2"]);
    let total: u64 = out.lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 500);
}

#[test]
fn decode_reports_query_counts() {
    let out = run(&["decode", "--n", "12", "--trials", "300", "--seed", "3"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(2).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][0], "0/1");
    assert_eq!(rows[0][2], "300");
    assert_eq!(rows[1][0], "1/24");
    assert!(rows.iter().all(|r| r[4] == "6"));
    let out = run(&["decode", "--n", "12", "--trials", "10", "--mode", "b-prime"]);
    assert!(out.contains("mode=b-prime"));
    assert!(out.lines().skip(2).all(|l| l.split(',').nth(4) == Some("3")));
}

#[test]
fn tolerant_rows_carry_certified_distance() {
    let out = run(&["tolerant", "--n", "10", "--delta1", "0.02", "--delta2", "0.2", "--corrupt", "0,1/4", "--trials", "40"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(2).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][1], "0/1");
    assert_eq!(rows[0][3], "1.0");
    assert_eq!(rows[1][1], "1/4");
}

#[test]
fn span_and_witness_emit_json() {
    let out = run(&["span", "--n", "36", "--s", "6", "--count", "30", "--trials", "3", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["params"]["t"], 1);
    assert_eq!(v["contained_trials"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let out = run(&["witness", "--k", "4", "--d", "1", "--p", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["all_pass"], true);
    assert_eq!(v["report"]["separation_method"], "pair-enumeration");
    let out = run(&["witness", "--k", "16", "--d", "1", "--quarters", "--format", "csv"]);
    assert!(out.starts_with("# gridcode witness k=16 d=1 p=2 lo=4 hi=12"));
}

#[test]
fn oracle_and_convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = PrimeField::new(2).unwrap();
    // X1 X2 + X3 X4 over F_2 is at distance 3/8 from affine functions.
    let f = CubeFunction::from_fn(4, f2, |x| f2.element(((x & 1) & (x >> 1 & 1)) ^ ((x >> 2 & 1) & (x >> 3 & 1)))).unwrap();
    let table = dir.path().join("ip.txt");
    std::fs::write(&table, write_truth_table(&f)).unwrap();
    let t = table.to_str().unwrap();
    let out = run(&["oracle", "--in", t, "--d", "1"]);
    let row: Vec<&str> = out.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0], "3/8");
    assert_eq!(row[1], "6");
    let poly = run(&["convert", "--in", t, "--from", "table", "--to", "poly"]);
    assert_eq!(poly, "4 2\n1,2:1\n3,4:1\n");
    let poly_file = dir.path().join("ip.poly");
    std::fs::write(&poly_file, &poly).unwrap();
    let back = run(&["convert", "--in", poly_file.to_str().unwrap(), "--from", "poly", "--to", "table"]);
    assert_eq!(read_truth_table(&back).unwrap(), f);
    assert_eq!(read_polynomial(&poly).unwrap().truth_table().unwrap(), f);
    let err = execute(["oracle", "--in", t, "--d", "1", "--n", "5"], &Parallel::new(Some(1)).unwrap()).unwrap_err();
    assert!(err.to_string().contains("n_matches_file"));
}

#[test]
fn same_invocation_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["test", "--n", "9", "--d", "1", "--k", "3", "--delta", "0.05", "--trials", "3000", "--seed", "11"];
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("out{i}.csv"));
        let status = bin()
            .args(args)
            .arg("--out")
            .arg(&path)
            .env("GRIDCODE_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn violated_preconditions_exit_nonzero_with_their_name() {
    let out = bin().args(["test", "--n", "3", "--d", "1", "--k", "3", "--delta", "0.1"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_greater_than_k"));
    let out = bin().args(["buckets", "--r", "2", "--k", "3", "--exact"]).output().unwrap();
    assert!(!out.status.success());
    let out = bin().args(["test", "--n", "5", "--bogus"]).output().unwrap();
    assert!(!out.status.success());
    let out = bin().args(["span", "--n", "36", "--s", "6", "--t", "3"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = bin().args(["test", "--n", "8", "--d", "1", "--k", "3", "--delta", "0.1"]).env("GRIDCODE_THREADS", "x").output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn verdicts_live_in_the_payload() {
    // A failing witness build is an error; a failing verdict is not.
    let out = bin().args(["witness", "--k", "6", "--d", "2", "--quarters"]).output().unwrap();
    assert!(!out.status.success());
    let out = bin().args(["test", "--n", "8", "--d", "1", "--k", "3", "--delta", "0.3", "--trials", "100"]).output().unwrap();
    assert!(out.status.success());
}
