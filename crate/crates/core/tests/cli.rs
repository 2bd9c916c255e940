use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stable-ar2"))
}

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

#[test]
fn ratio_reproduces_the_minus_limit() {
    let out = bin()
        .args(["ratio", "--alpha", "1.5", "--hmax", "40", "--config"])
        .arg(example("theta1.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,r_minus_over_alpha,r_plus"));
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(last[0], "40");
    let r: f64 = last[1].parse().unwrap();
    assert!((0.99..=1.01).contains(&r), "{r}");
    assert!(!text.contains('\r'));
}

#[test]
fn covariation_outside_its_domain_fails() {
    let out = bin()
        .args(["measures", "--kind", "cv", "--direction", "plus", "--alpha", "1.0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1 < alpha"), "{err}");
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let st = bin()
            .args(["simulate", "--n", "1000", "--seed", "7", "--out"])
            .arg(&p)
            .status()
            .unwrap();
        assert!(st.success());
        std::fs::read(p).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1001);
    assert!(text.starts_with("x1,x2\n"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        bin()
            .env("STABLE_AR2_THREADS", threads)
            .args(["measures", "--kind", "cd", "--hmax", "30", "--config"])
            .arg(example("theta2.json"))
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert!(!run("zero").status.success());
}

#[test]
fn unknown_config_keys_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        "{\n  \"a1\": 0.1, \"a2\": 0, \"a3\": 0, \"a4\": 0.2, \"alpha\": 1.5,\n  \"atoms\": [{\"s1\": 1, \"s2\": 0, \"w\": 1}, {\"s1\": -1, \"s2\": 0, \"w\": 1}],\n  \"hmaxx\": 4\n}\n",
    )
    .unwrap();
    let out = bin().args(["ratio", "--config"]).arg(&p).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hmaxx") && err.contains("line 4"), "{err}");
}

#[test]
fn theorem_check_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = bin()
        .args(["check-theorem1", "--hmax", "40", "--out"])
        .arg(&csv)
        .arg("--config")
        .arg(example("theta2.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",true"));

    let svg = dir.path().join("r.svg");
    let st = bin()
        .args(["ratio", "--hmax", "20", "--svg"])
        .arg(&svg)
        .arg("--out")
        .arg(dir.path().join("r.csv"))
        .status()
        .unwrap();
    assert!(st.success());
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polyline"));
}

#[test]
fn estimate_reads_an_ingested_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let st = bin()
        .args(["simulate", "--n", "20000", "--seed", "2", "--alpha", "1.8", "--out"])
        .arg(&path)
        .arg("--config")
        .arg(example("theta2.json"))
        .status()
        .unwrap();
    assert!(st.success());
    let out = bin()
        .args(["estimate", "--window", "1,4", "--p", "1.4", "--replicates", "50", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha_hat"));
}

#[test]
fn run_uses_the_task_from_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.json");
    let mut cfg: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(example("theta1.json")).unwrap()).unwrap();
    cfg["task"] = "asymptotics".into();
    cfg["h_max"] = 3.into();
    std::fs::write(&p, cfg.to_string()).unwrap();
    let out = bin().args(["run", "--config"]).arg(&p).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("D2 = "));
}
