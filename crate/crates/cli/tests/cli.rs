use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hslab"))
        .args(args)
        .env_remove("HSLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hslab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bounds_prints_headline_values() {
    let o = hslab(&["bounds", "--d", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("lambda_bound             0.5\n"), "{text}");
    assert!(text.contains("density_bound            0.166667\n"));
    assert!(text.contains("lambert_w_2              0.852606\n"));
}

#[test]
fn invalid_gamma_is_a_one_line_error() {
    let o = hslab(&["contraction", "--d", "2", "--gamma", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    let last = err.lines().last().unwrap();
    assert!(last.starts_with("error: ") && last.contains("gamma must lie in (0,1)"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let o = hslab(&["free-volume", "--side", "4", "--steps", "200", "--replicas", "2", "--stride", "50"]);
    assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    let err = stderr(&o);
    let seed: u64 = err.lines().next().unwrap().strip_prefix("seed = ").unwrap().parse().unwrap();
    assert!(stdout(&o).contains(&format!("\"seed\":{seed}")));
}

#[test]
fn environment_seed_is_the_fallback() {
    let o = Command::new(env!("CARGO_BIN_EXE_hslab"))
        .args(["free-volume", "--side", "4", "--steps", "200", "--replicas", "2", "--stride", "50"])
        .env("HSLAB_SEED", "777")
        .output()
        .unwrap();
    assert!(stderr(&o).starts_with("seed = 777\n"));
}

#[test]
fn fixed_seed_reproduces_bytes() {
    let args = ["density", "--lambdas", "0.3", "--sides", "5", "--steps", "500", "--replicas", "4", "--seed", "12"];
    let a = hslab(&args);
    let b = hslab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 2);
    assert!(stdout(&a).contains("\"verdict\":\"pass\""));
}

#[test]
fn failing_verdict_sets_exit_status() {
    let o = hslab(&["stationarity", "--threshold", "0", "--steps", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"verdict\":\"fail\""));
}

#[test]
fn config_file_values_and_overrides() {
    let path = scratch("run.toml");
    fs::write(&path, "seed = 5\n[free-volume]\nside = 4.0\nsteps = 200\nreplicas = 2\nstride = 50\nlambda = 0.5\n").unwrap();
    let p = path.to_str().unwrap();
    let o = hslab(&["free-volume", "--config", p, "--lambda", "0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"seed\":5") && out.contains("\"lambda\":0.25"), "{out}");

    fs::write(&path, "[free-volume]\nsides = 4.0\n").unwrap();
    let o = hslab(&["free-volume", "--config", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field `sides`"), "{}", stderr(&o));

    fs::write(&path, "sead = 4\n").unwrap();
    assert_eq!(hslab(&["bounds", "--config", p]).status.code(), Some(2));
}

#[test]
fn output_and_csv_files() {
    let jsonl = scratch("out.jsonl");
    let csv = scratch("out.csv");
    let o = hslab(&[
        "contraction",
        "--trials",
        "400",
        "--seed",
        "2",
        "--output",
        jsonl.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert_eq!(fs::read_to_string(&jsonl).unwrap().lines().count(), 3);
    let table = fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("name,estimate,stderr,bound,comparison,verdict,replicas,seed\ncontraction,"));
}

#[test]
fn sample_then_resume_chain() {
    let snap = scratch("sample.json");
    let fin = scratch("final.json");
    let o = hslab(&["sample", "--sides", "4", "--lambda", "0.4", "--seed", "3", "--snapshot", snap.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = hslab(&[
        "chain",
        "--resume",
        snap.to_str().unwrap(),
        "--steps",
        "2000",
        "--seed",
        "3",
        "--snapshot",
        fin.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"name\":\"chain_density\""));
    assert!(fs::read_to_string(&fin).unwrap().contains("\"step\": "));
}

#[test]
fn hand_edited_invalid_snapshot_is_refused() {
    let r = 1.0 / std::f64::consts::PI.sqrt();
    let text = format!(
        r#"{{
  "format": "hslab-snapshot/1",
  "state_class": "omega",
  "d": 2,
  "lambda": 1.0,
  "domain_low": [0.0, 0.0],
  "domain_high": [5.0, 5.0],
  "tau": {{"balls": [], "shell": null}},
  "step": 0,
  "seed": null,
  "centers": [[2.0, 2.0], [{x}, 2.0]],
  "rng": null
}}"#,
        x = 2.0 + 1.5 * r
    );
    let path = scratch("bad.json");
    fs::write(&path, text).unwrap();
    let o = hslab(&["chain", "--resume", path.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("closer than 2r"), "{}", stderr(&o));
}
