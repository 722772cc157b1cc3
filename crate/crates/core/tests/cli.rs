use std::path::Path;
use std::process::{Command, Output};

fn risrate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risrate")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = risrate(&["validate", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("threshold_formula"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn out_of_range_epsilon_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = risrate(&["solve", "--set", "fbl.epsilon=0.7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    let line = err.lines().find(|l| l.starts_with("error:")).expect("error line");
    assert!(line.contains("key=fbl.epsilon"), "{line}");
}

#[test]
fn unknown_keys_and_files_are_config_errors() {
    let o = risrate(&["solve", "--set", "system.antennas=3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = risrate(&["solve", "--config", "/nonexistent/risrate.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = risrate(&["solve", "--arch", "triangle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_user_direct_solve_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = risrate(&[
        "solve", "--arch", "none", "--set", "system.users=1", "--set", "system.tx_antennas=2", "--seed", "3", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("status=Converged"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("solve_none.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 3);
    assert!(summary["outer_iterations"].as_u64().unwrap() <= 2);
    let trace = std::fs::read_to_string(dir.path().join("trace_none.csv")).unwrap();
    assert!(trace.lines().count() > 1);
}

fn experiment(dir: &Path, config: &Path) -> Output {
    risrate(&[
        "experiment",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn experiment_artifacts_are_byte_identical_across_runs() {
    let base = tempfile::tempdir().unwrap();
    let config = base.path().join("tiny.toml");
    std::fs::write(
        &config,
        "seed = 4\n\n[system]\ntx_antennas = 2\nris_elements = 4\nusers = 2\n\n[experiment]\npreset = \"maxmin_vs_power\"\ngrid = [10.0]\narchitectures = [\"none\", \"rand\", \"gp-d\"]\nuse_preset_system = false\n",
    )
    .unwrap();
    let (a, b) = (base.path().join("a"), base.path().join("b"));
    let oa = experiment(&a, &config);
    let ob = experiment(&b, &config);
    assert_eq!(oa.status.code(), Some(0), "{}", stderr(&oa));
    assert_eq!(ob.status.code(), Some(0));
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n.to_string_lossy().ends_with(".csv")));
    assert!(names.iter().any(|n| n.to_string_lossy().ends_with(".svg")));
    for n in names {
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}
