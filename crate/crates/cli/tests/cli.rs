use std::fs;
use std::path::Path;
use std::process::Command;

fn fracmp(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fracmp"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn without_timestamp(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn verify_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracmp(&["verify", "--samples", "200"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn sweep_writes_sorted_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracmp(&["sweep", "--lambdas", "1,10,100,1000"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lambdas: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(lambdas, vec![1.0, 10.0, 100.0, 1000.0]);
    let tails: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert!(tails.windows(2).all(|w| w[1] < w[0]), "{tails:?}");
}

#[test]
fn solve_is_reproducible_up_to_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = fracmp(&["solve", "--seed", "7"], d.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(
        without_timestamp(&a.path().join("result.json")),
        without_timestamp(&b.path().join("result.json"))
    );
    for f in ["u.csv", "trace.csv", "report.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[problem]\nalpha = 0.3\n").unwrap();
    let o = fracmp(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    fs::write(&cfg, "[problem]\nunknown_key = 1\n").unwrap();
    let o = fracmp(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_error_exits_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracmp")).arg("nonsense").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
