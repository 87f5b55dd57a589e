use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mecsim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mecsim"))
        .args(args)
        .current_dir(dir)
        .env_remove("MECSIM_SEED")
        .output()
        .unwrap()
}

fn tiny_config(dir: &Path) -> String {
    let path = dir.join("tiny.toml");
    fs::write(
        &path,
        "[agent.ppo]\nhidden_dims = [8]\nepisodes_per_rollout = 2\n\n[run]\nexperiments = 5\ncheckpoint_interval = 0\n",
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn train_then_evaluate_then_sweep_then_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let cfg = tiny_config(d);

    let out = mecsim(&["train", "--config", &cfg, "--agent", "ppo", "--episodes", "4", "--out", "run"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("run/checkpoint.json").exists());
    assert_eq!(fs::read_to_string(d.join("run/training_curve.csv")).unwrap().lines().count(), 5);

    let out = mecsim(&["evaluate", "--config", &cfg, "--policy", "ppo:run/checkpoint.json", "--experiments", "3"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("vary,value,policy,seeds,"));
    assert!(text.lines().nth(1).unwrap().starts_with("none,0.0,ppo,3,"));

    let out = mecsim(
        &["sweep", "--config", &cfg, "--vary", "urllc-mean", "--values", "5,10", "--policies", "local,fair", "--out", "s/m.csv"],
        d,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(d.join("s/m.csv")).unwrap().lines().count(), 5);
    assert!(d.join("s/metadata.json").exists());

    let out = mecsim(&["plot", "--input", "s/m.csv", "--out", "plots"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for m in ["total_time", "mmtc_energy", "urllc_time"] {
        assert!(d.join(format!("plots/urllc_mean_{m}.svg")).exists());
    }
}

#[test]
fn local_policy_reports_one_hundred() {
    let tmp = tempfile::tempdir().unwrap();
    let out = mecsim(&["evaluate", "--policy", "local", "--experiments", "4"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(",local,4,100.0,100.0,100.0,0.0,"), "{text}");
}

#[test]
fn seed_env_var_is_a_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mecsim"));
        cmd.args(["evaluate", "--policy", "fair", "--experiments", "3"]).current_dir(tmp.path());
        match seed {
            Some(s) => cmd.env("MECSIM_SEED", s),
            None => cmd.env_remove("MECSIM_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("9")), run(Some("9")));
    assert_ne!(run(Some("9")), run(None));
}

#[test]
fn validation_failures_exit_nonzero_with_a_message() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    fs::write(d.join("bad.toml"), "[env.mec]\ntotal_comm_rbs = -1\n").unwrap();
    let out = mecsim(&["evaluate", "--config", "bad.toml", "--policy", "local"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("env.mec.total_comm_rbs"));

    let out = mecsim(&["evaluate", "--policy", "ppo:missing.json"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    let out = mecsim(&["plot", "--input", "nope.csv", "--out", "p"], d);
    assert!(!out.status.success());
}

#[test]
fn sweep_output_is_byte_identical_on_repeat() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let args = |out: &'static str| {
        vec!["sweep", "--vary", "mmtc-mean", "--values", "10,30", "--policies", "sequential,fair", "--experiments", "20", "--seed", "3", "--out", out]
    };
    assert!(mecsim(&args("a.csv"), d).status.success());
    assert!(mecsim(&args("b.csv"), d).status.success());
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
}
