use std::path::Path;

use lueratio_cli::cache::{solve_cached, SolveKey, TrajectoryCache};
use lueratio_cli::main_with_args;
use lueratio::painleve::{Mode, SystemParams};

fn run(args: &[&str]) -> u8 {
    main_with_args(std::iter::once("lueratio").chain(args.iter().copied()))
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn limit_q_rows_decrease() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    assert_eq!(run(&["limit-q", "--alpha", "0", "--r", "1.5,2,4", "--out", out.to_str().unwrap()]), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["r", "q", "err"]);
    let q: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(q.len(), 3);
    assert!(q[0] > q[1] && q[1] > q[2]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (k, args) in [
        vec!["hard-edge", "--alpha", "1", "--x", "1,2,6", "--format", "json"],
        vec!["mc", "--n", "4", "--r", "1,2", "--samples", "2000", "--seed", "9"],
        vec!["finite-n", "--n", "2,3", "--r", "2"],
    ]
    .into_iter()
    .enumerate()
    {
        let a = dir.path().join(format!("a{k}"));
        let b = dir.path().join(format!("b{k}"));
        let mut args_a = args.clone();
        args_a.extend(["--out", a.to_str().unwrap()]);
        let mut args_b = args.clone();
        args_b.extend(["--out", b.to_str().unwrap(), "--workers", "3"]);
        assert_eq!(run(&args_a), 0);
        assert_eq!(run(&args_b), 0);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn json_output_has_schema_config_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    assert_eq!(run(&["hard-edge", "--x", "0,4", "--format", "json", "--out", out.to_str().unwrap()]), 0);
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["command"], "hard-edge");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["f"], 1.0);
}

#[test]
fn csv_floats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let cache = dir.path().join("cache");
    let args = ["painleve", "--r", "2", "--s", "5", "--format", "csv", "--cache-dir", cache.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(run(&args), 0);
    let params = SystemParams::new(0.0, 2.0).unwrap();
    let (t, hit) = solve_cached(&SolveKey::new(params, 5.0, 1e-10, Mode::Collocate), Some(&TrajectoryCache::new(&cache))).unwrap();
    assert!(hit);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    for (rec, node) in rdr.records().zip(&t.nodes) {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<f64>().unwrap().to_bits(), node.x.to_bits());
        assert_eq!(rec[5].parse::<f64>().unwrap().to_bits(), node.v.to_bits());
    }
}

#[test]
fn cache_hits_only_on_identical_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TrajectoryCache::new(dir.path());
    let params = SystemParams::new(0.0, 2.0).unwrap();
    let key = SolveKey::new(params, 5.0, 1e-9, Mode::Collocate);
    let (a, hit) = solve_cached(&key, Some(&cache)).unwrap();
    assert!(!hit);
    let (b, hit) = solve_cached(&key, Some(&cache)).unwrap();
    assert!(hit);
    assert_eq!(a.nodes, b.nodes);
    for other in [
        SolveKey::new(params, 5.0, 1e-10, Mode::Collocate),
        SolveKey::new(params, 6.0, 1e-9, Mode::Collocate),
        SolveKey::new(params, 5.0, 1e-9, Mode::Shoot),
        SolveKey::new(SystemParams::new(0.0, 2.5).unwrap(), 5.0, 1e-9, Mode::Collocate),
    ] {
        assert_ne!(other.digest(), key.digest());
        assert!(cache.load(&other).is_none());
    }
    // A file whose recorded inputs disagree with its key is ignored.
    let other = SolveKey::new(params, 5.0, 1e-10, Mode::Collocate);
    std::fs::copy(cache.path(&key), cache.path(&other)).unwrap();
    assert!(cache.load(&other).is_none());
}

#[test]
fn painleve_json_round_trips_through_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        assert_eq!(run(&["painleve", "--r", "2", "--s", "4", "--cache-dir", cache.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    }
    assert_eq!(read(&a), read(&b));
    let v: serde_json::Value = serde_json::from_str(&read(&a)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["trajectory"]["nodes"].as_array().unwrap().len() > 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["limit-q", "--r", "2,1.5"]), 2);
    assert_eq!(run(&["limit-q", "--r", "0.5"]), 2);
    assert_eq!(run(&["limit-q"]), 2);
    assert_eq!(run(&["hard-edge", "--x", "1", "--tol", "1"]), 2);
    assert_eq!(run(&["mc", "--n", "4", "--r", "2", "--x", "1"]), 2);
    assert_eq!(run(&["mc", "--n", "4", "--r", "2", "--alpha", "0.5", "--backend", "dense"]), 2);
    assert_eq!(run(&["bogus"]), 2);
    assert_eq!(run(&["--help"]), 0);
    assert_eq!(run(&["validate", "--criteria", "14"]), 2);
    assert_eq!(run(&["finite-n", "--n", "2", "--r", "2", "--precision", "8000"]), 2);
    // General-α shooting loses accuracy near the origin: a numerical failure.
    assert_eq!(run(&["painleve", "--r", "2", "--alpha", "0.7", "--mode", "shoot", "--no-cache", "--out", "/dev/null"]), 3);
    assert_eq!(lueratio_cli::CliError::Validation(1).exit_code(), 4);
}

#[test]
fn validate_subset_reports_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    assert_eq!(run(&["validate", "--criteria", "7,8", "--out", out.to_str().unwrap()]), 0);
    assert!(read(&out).starts_with("criterion,passed,seconds\n7,true,"));
}
