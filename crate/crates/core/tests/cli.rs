use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercong"))
        .args(args)
        .env_remove("SUPERCONG_JOBS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_passes_and_writes_jsonl() {
    let o = run(&[
        "verify",
        "--to",
        "60",
        "--checks",
        "thm1_i,morley",
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2 * 16);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 8);
        assert_ne!(v["pass"], serde_json::Value::Bool(false));
        assert_eq!(v["micros"], 0);
    }
}

#[test]
fn csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = run(&[
        "verify",
        "--to",
        "20",
        "--checks",
        "thm2_v",
        "--a-range",
        "-1:1",
        "--b-range",
        "0:0",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "prime,check,params,applicable,pass,lhs,modulus_power,micros"
    );
    assert_eq!(rows.len(), 1 + 7 * 3);
    assert!(rows[1].starts_with("3,thm2_v,a=-1;b=0,true,true,0,"));
}

#[test]
fn perturbation_exits_one() {
    let o = run(&[
        "verify",
        "--to",
        "100",
        "--checks",
        "morley",
        "--perturb",
        "morley_exponent",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL morley"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--from", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--from", "50", "--to", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--checks", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--unknown"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--min-primes", "3"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--denoms", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--config", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# small run\nto = 30\nchecks = thm1_i\njobs = 2").unwrap();
    let cfg = f.path().to_str().unwrap();
    let from_file = run(&["verify", "--config", cfg]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file).lines().count(), 9);
    let overridden = run(&["verify", "--config", cfg, "--to", "12"]);
    assert_eq!(stdout(&overridden).lines().count(), 4);
}

#[test]
fn jobs_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_supercong"))
        .args(["verify", "--to", "30", "--checks", "lehmer"])
        .env("SUPERCONG_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identities_subcommand() {
    let o = run(&["identities", "--max-n", "20", "--series-order", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 7);
}

#[test]
fn scan_subcommand() {
    let o = run(&[
        "scan",
        "--family",
        "U",
        "--a=-1:-1",
        "--b",
        "1:1",
        "--denoms",
        "16",
        "--to",
        "300",
        "--min-primes",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(v["known_match"], "thm1_ii");
    assert_eq!(v["residue_class"]["mod"], 12);
}

#[test]
fn list_subcommand() {
    let o = run(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 30);
}
