use std::process::{Command, Output};

use serde_json::Value;

fn pb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pb"))
        .args(args)
        .output()
        .expect("run pb")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn test_subcommand() {
    let out = pb(&[
        "test", "--q", "25", "--m", "5", "--n", "1", "--a=-g", "--naive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["permutes"], true);
    assert_eq!(v["naive"], true);

    let v = json(&pb(&[
        "test", "--q", "25", "--m", "7", "--n", "1", "--a", "g",
    ]));
    assert_eq!(v["permutes"], true);
    assert!(v["induced_permutation"].is_array());

    let v = json(&pb(&[
        "test", "--q", "139", "--m", "26", "--n", "3", "--a", "17",
    ]));
    assert_eq!(v["permutes"], true);
    assert_eq!(v["canonical"]["k"], 23);

    let v = json(&pb(&[
        "test", "--q", "7", "--m", "4", "--n", "2", "--a", "1",
    ]));
    assert_eq!(v["permutes"], false);
    assert!(v["obstruction"].as_str().unwrap().contains("GcdFails"));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(pb(&["test", "--q", "25"]).status.code(), Some(2));
    assert_eq!(pb(&["frobnicate"]).status.code(), Some(2));
    let out = pb(&["test", "--q", "12", "--m", "3", "--n", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(
        pb(&["count-t", "--q", "7", "--m", "1", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pb(&["heuristic", "--R", "41"]).status.code(), Some(2));
    assert_eq!(
        pb(&["bounds", "--q", "7", "--m", "3", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn count_certify_bounds() {
    let v = json(&pb(&["count-t", "--q", "7", "--m", "4", "--n", "1"]));
    assert_eq!(v["T"], 2);

    let v = json(&pb(&[
        "certify",
        "--p",
        "19",
        "--m",
        "5",
        "--n",
        "1",
        "--validate",
    ]));
    assert_eq!(v["certificate"]["kind"], "unique_hermite_term");
    assert_eq!(v["certificate"]["exponent"], 6);
    assert_eq!(v["validated"], true);

    let v = json(&pb(&["certify", "--p", "139", "--m", "26", "--n", "3"]));
    assert!(v["certificate"].is_null());

    let v = json(&pb(&["bounds", "--q", "139", "--m", "26", "--n", "3"]));
    assert_eq!(v["g"], 23);
    assert_eq!(v["r"], 6);
    assert_eq!(v["intro1_inequality"], true);
    assert_eq!(v["wt_inequality"], true);
}

#[test]
fn heuristic_outputs() {
    let v = json(&pb(&["heuristic", "--R", "5"]));
    assert!((v["partial_sum"].as_f64().unwrap() - 1.780).abs() < 1e-3);
    assert_eq!(v["R"], 5);
    assert_eq!(v["f_values"]["3"], 4);
    let out = pb(&["heuristic", "--R", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,F,summand\n3,4,"));
}

#[test]
fn campaign_exit_codes() {
    let out = pb(&["verify-conjecture", "--max-p", "100", "--c", "0.2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["p"] == 11 && c["k"] == 5));

    let out = pb(&["verify-conjecture", "--max-p", "300"]);
    assert_eq!(out.status.code(), Some(0));

    let out = pb(&["verify-intro1", "--max-p", "31", "--show-pairs"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|p| p[0] == 31 && p[1] == 6));

    let out = pb(&["verify-existence", "--max-q", "300", "--threshold", "log"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["misses"].as_array().unwrap().len(), 0);

    let v = json(&pb(&[
        "corollary-table",
        "--g-list",
        "5,6,7,8",
        "--max-p",
        "100",
    ]));
    let rows = v["table"].as_array().unwrap();
    assert_eq!(rows[0]["primes"], serde_json::json!([11]));
    assert_eq!(rows[1]["primes"], serde_json::json!([7, 13, 19, 31]));
    assert_eq!(rows[2]["primes"], serde_json::json!([29]));
    assert_eq!(rows[3]["primes"], serde_json::json!([17]));
}

#[test]
fn scan_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let c = dir.path().join("c.csv");
    let run = |path: &std::path::Path, format: &str, jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_pb"))
            .args([
                "scan", "--q-min", "2", "--q-max", "50", "--format", format, "--out",
            ])
            .arg(path)
            .env("PB_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    run(&a, "jsonl", "1");
    run(&b, "jsonl", "3");
    run(&c, "csv", "2");
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let (metas, records) = permbin::scan::read_jsonl(&ta).unwrap();
    assert_eq!(metas.len(), permbin::arith::prime_powers_in(2, 50).len());
    let f7: Vec<_> = records.iter().filter(|r| r.q == 7).collect();
    assert_eq!(f7.len(), 24);
    let tc = std::fs::read_to_string(&c).unwrap();
    assert!(tc.lines().any(|l| l == "q,p,e,k,n,a,permutes,g,r"));
    assert!(tc.contains("\"1,1\""));

    let out = pb(&["scan", "--q-min", "9", "--q-max", "9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("{\"meta\":{"));
    assert_eq!(
        pb(&["scan", "--q-min", "9", "--q-max", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pb(&["--jobs", "0", "scan", "--q-min", "2", "--q-max", "3"])
            .status
            .code(),
        Some(2)
    );
}
