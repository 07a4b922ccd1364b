use ecdensity::cli::{run, EXIT_OK, EXIT_USAGE};
use std::process::Command;

fn cli(args: &str) -> ecdensity::cli::Outcome {
    run(std::iter::once("ecdensity").chain(args.split_whitespace()))
}

#[test]
fn density_values() {
    assert_eq!(cli("density --p 5 --mode tors").stdout, "tors: 25/62  0.403225806452\n");
    assert!(cli("density --p 3 --mode tors").stdout.starts_with("tors: 3/26 "));
    assert!(cli("density --p 5 --mode iso").stdout.contains("401/781"));
    assert!(cli("density --p 3 --mode p3").stdout.contains("total: 3/26"));
}

#[test]
fn prime_two_is_a_usage_error() {
    let o = cli("density --p 2 --mode tors");
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("p = 2"));
    assert_eq!(cli("density --p 9").code, EXIT_USAGE);
    assert_eq!(cli("density --mode tors").code, EXIT_USAGE);
}

#[test]
fn verify_suites() {
    let o = cli("verify --p 7 --suite counts");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("w3p_bruteforce: 15 == 15 PASS"));
    let o = cli("verify --p 5 --suite formulas");
    assert!(o.stdout.contains("components_sum_identity: 25/62 == 25/62 PASS"));
    let o = cli("verify --p 5 --suite estimator --k 4");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("bracket 25/62: PASS"));
    let o = cli("verify --p 11 --suite estimator --k 4");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("SKIP"));
}

#[test]
fn gl2_twist_decide() {
    let o = cli("gl2 --ell 3");
    let rows: Vec<&str> = o.stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(" 24")));
    assert_eq!(cli("twist --n 2").stdout.trim(), "1/2");
    assert_eq!(cli("twist --n 2 --p 7").code, EXIT_USAGE);
    assert_eq!(cli("twist --n 3 --mode roots --ell 7 --p 13").stdout.trim(), "1/4");
    assert_eq!(cli("decide --p 5 --a 0 --b 16 --k 6 --pred tors3").stdout.trim(), "yes");
    assert_eq!(cli("decide --p 5 --a 25 --b 50 --k 6 --pred tors3").stdout.trim(), "no");
    assert_eq!(cli("decide --p 3 --a2 0 --a4 0 --a6 9 --k 8").stdout.trim(), "yes");
    assert!(cli("decide --p 5 --a 0 --b 0 --k 2").stdout.starts_with("undecided"));
}

#[test]
fn igusa_rows() {
    let o = cli("igusa --p 5 --k 6 --m 2");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("closed 25/31") && o.stdout.contains("PASS"));
    assert_eq!(cli("igusa --p 7 --k 5 --m 2 --n 3").code, EXIT_OK);
    assert_eq!(cli("igusa --p 5 --k 4 --m 1 --n 1 --g-exp 1").code, EXIT_OK);
}

#[test]
fn json_is_stamped_and_reproducible() {
    let a = cli("estimate --p 5 --k 3 --samples 5000 --seed 11 --format json");
    let b = cli("estimate --p 5 --k 3 --samples 5000 --seed 11 --jobs 2 --format json");
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(a.stdout.trim()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["rng"], "ChaCha8");
    assert!(v["lower"].as_str().unwrap().contains('/'));
    for line in cli("density --p 7 --mode components --format json").stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["command"], "density");
        assert!(v["value"].is_string());
    }
}

#[test]
fn csv_quotes_nested_fields() {
    let o = cli("estimate --p 5 --k 2 --format csv");
    let mut lines = o.stdout.lines();
    assert!(lines.next().unwrap().starts_with("command,"));
    assert!(lines.next().unwrap().contains("\"{\"\""));
}

#[test]
fn stratified_estimates() {
    let o = cli("estimate --p 5 --k 2 --stratum good --format json");
    let v: serde_json::Value = serde_json::from_str(o.stdout.trim()).unwrap();
    assert_eq!(v["stratum"], "good");
    assert_eq!(v["total"], v["strata"]["good"]["yes"].as_u64().unwrap() + v["strata"]["good"]["no"].as_u64().unwrap() + v["strata"]["good"]["undecided"].as_u64().unwrap());
}

#[test]
fn budget_violations_are_reported_not_fatal() {
    let o = cli("verify --p 5 --suite estimator --k 2 --budget 10");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.lines().all(|l| l.ends_with("SKIP")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ecdensity");
    let out = Command::new(bin).args(["density", "--p", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "tors: 25/62  0.403225806452\n");
    let out = Command::new(bin).args(["density", "--p", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).args(["bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("ecdensity-cli-{}.txt", std::process::id()));
    let o = cli(&format!("density --p 5 --out {}", path.display()));
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "tors: 25/62  0.403225806452\n");
    let _ = std::fs::remove_file(path);
}
