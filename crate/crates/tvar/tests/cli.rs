use std::path::Path;
use std::process::{Command, Output};

fn tvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvar"))
        .args(args)
        .output()
        .unwrap()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("cfg.json");
    std::fs::write(
        &path,
        r#"{
  "coef_ids": ["const(0.5)", "sine(0.4,0.3)"],
  "noise_ids": ["gaussian", "laplace"],
  "n_grid": [1000, 2000, 4000, 8000],
  "replications": 50
}"#,
    )
    .unwrap();
    path.display().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn risk_happy_path_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("out");
    let o = tvar(&["risk", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let risk = read(out.join("risk.csv"));
    let mut lines = risk.lines();
    assert_eq!(
        lines.next(),
        Some("coef_id,noise_id,n,mean_abs_err,normalized,ci_half,kept_fraction")
    );
    assert_eq!(lines.count(), 16);
    let manifest: serde_json::Value =
        serde_json::from_str(&read(out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["subcommand"], "risk");
    assert_eq!(manifest["config"]["replications"], 50);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn out_of_class_beta_exits_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("out");
    let o = tvar(&[
        "risk",
        "--config",
        &cfg,
        "--set",
        "beta=2.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("1 <= beta < 2"), "{err}");
    assert!(!out.join("risk.csv").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"replicatons": 10}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["risk", "--config", bad.to_str().unwrap(), "--out", out],
        vec!["risk", "--set", "gamma=0.7", "--out", out],
        vec![
            "efficiency",
            "--set",
            "kernel_id=epanechnikov",
            "--out",
            out,
        ],
        vec!["simulate", "--out", out],
        vec!["rate", "--set", "n_grid=[1000,2000]", "--out", out],
        vec!["risk", "--bogus", "--out", out],
    ];
    for args in cases {
        let o = tvar(&args);
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(o.status.code(), Some(2), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn missing_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = dir.path().join("none.csv");
    let o = tvar(&[
        "estimate",
        "--trajectory",
        missing.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    for sub in ["rate", "clt", "lemmas", "lan"] {
        let a = dir.path().join(format!("{sub}-a"));
        let b = dir.path().join(format!("{sub}-b"));
        for out in [&a, &b] {
            let o = tvar(&[sub, "--config", &cfg, "--out", out.to_str().unwrap()]);
            assert!(
                o.status.success(),
                "{sub}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
        assert_eq!(read(a.join("manifest.json")), read(b.join("manifest.json")));
        let manifest: serde_json::Value =
            serde_json::from_str(&read(a.join("manifest.json"))).unwrap();
        for f in manifest["outputs"].as_array().unwrap() {
            let name = f["path"].as_str().unwrap();
            assert_eq!(
                std::fs::read(a.join(name)).unwrap(),
                std::fs::read(b.join(name)).unwrap()
            );
        }
    }
}

#[test]
fn simulate_estimate_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    let o = tvar(&[
        "simulate",
        "--set",
        r#"coef_ids=["sine(0.4,0.3)"]"#,
        "--set",
        r#"noise_ids=["mixture"]"#,
        "--set",
        "n_grid=[5000]",
        "--out",
        sim.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let traj = sim.join("trajectory.csv");
    assert_eq!(read(&traj).lines().count(), 5002);

    let est = dir.path().join("est");
    let o = tvar(&[
        "estimate",
        "--trajectory",
        traj.to_str().unwrap(),
        "--set",
        "kernel_id=epanechnikov",
        "--out",
        est.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(est.join("estimate.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("value,A_n,indicator,h,phi,kappa,d"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[0].parse().unwrap();
    assert!((value - 0.4).abs() < 0.3, "{value}");
    assert_eq!(row[2], "true");

    for (src, name) in [(&sim, "trajectory.csv"), (&est, "estimate.csv")] {
        let again = dir.path().join(format!("replay-{name}"));
        let o = tvar(&[
            "replay",
            "--manifest",
            src.join("manifest.json").to_str().unwrap(),
            "--out",
            again.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(read(src.join(name)), read(again.join(name)));
        assert_eq!(
            read(src.join("manifest.json")),
            read(again.join("manifest.json"))
        );
    }

    std::fs::write(&traj, read(&traj) + "\n").unwrap();
    let o = tvar(&[
        "replay",
        "--manifest",
        est.join("manifest.json").to_str().unwrap(),
        "--out",
        dir.path().join("stale").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = Command::new(env!("CARGO_BIN_EXE_tvar"))
            .args(["risk", "--config", &cfg, "--out", out.to_str().unwrap()])
            .env("TVAR_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        outputs.push(std::fs::read(out.join("risk.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn help_exits_0() {
    let o = tvar(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("efficiency"));
}
