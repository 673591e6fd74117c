use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gf2hash"));
    cmd.args(args).env_remove("GF2HASH_SEED");
    if let Some(seed) = env_seed {
        cmd.env("GF2HASH_SEED", seed);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str], env_seed: Option<&str>) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full, env_seed);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rows_of<'a>(doc: &'a Value, experiment: &str) -> Vec<&'a Value> {
    doc["rows"].as_array().unwrap().iter().filter(|r| r["experiment"] == experiment).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    assert_eq!(run(&["--version"], None).status.code(), Some(0));
    assert_eq!(run(&["simulate", "--bogus"], None).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--b", "2"], None).status.code(), Some(1));
    assert_eq!(run(&["exact", "--u", "12", "--b", "2"], None).status.code(), Some(2));
    assert_eq!(run(&["verify", "--check", "no-such-check"], None).status.code(), Some(1));
    let faulty = run(&["verify", "--check", "composition-pointwise", "--inject-fault"], None);
    assert_eq!(faulty.status.code(), Some(3));
    let text = String::from_utf8(faulty.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("composition-pointwise,fail,100,100,")));
}

#[test]
fn exact_reports_rationals() {
    let doc = json(&["exact", "--u", "2", "--b", "1"], None);
    assert_eq!(rows_of(&doc, "exact:expected")[0]["freq"], "5/2");
    let tails = rows_of(&doc, "exact:tail");
    let at4 = tails.iter().find(|r| r["threshold"] == 4).unwrap();
    assert_eq!(at4["freq"], "1/4");
    assert_eq!(doc["manifest"]["subcommand"], "exact");
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "seed = 5\n[simulate]\nu = 6\nb = \"2,3\"\ntrials = 10\nset-size = 8\n").unwrap();
    let config = config.to_str().unwrap();
    let seed = |args: &[&str], env: Option<&str>| json(args, env)["manifest"]["seed"].as_u64().unwrap();

    let base = ["simulate", "--u", "4", "--b", "2", "--trials", "5", "--set-size", "8"];
    assert_eq!(seed(&base, None), 0);
    assert_eq!(seed(&base, Some("9")), 9);
    let with_config = ["simulate", "--config", config];
    assert_eq!(seed(&with_config, Some("9")), 5);
    let with_flag = ["simulate", "--config", config, "--seed", "7"];
    assert_eq!(seed(&with_flag, Some("9")), 7);
    assert_eq!(run(&base, Some("seven")).status.code(), Some(1));
}

#[test]
fn config_values_sit_below_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "[simulate]\nu = 6\nb = \"2,3\"\ntrials = 10\nset = \"random\"\nset-size = 20\n").unwrap();
    let config = config.to_str().unwrap();

    let doc = json(&["simulate", "--config", config], None);
    assert_eq!(rows_of(&doc, "simulate").len(), 20);
    assert_eq!(doc["manifest"]["flags"]["u"], 6);

    let doc = json(&["simulate", "--config", config, "--trials", "3", "--b", "4"], None);
    let trials = rows_of(&doc, "simulate");
    assert_eq!(trials.len(), 3);
    assert!(trials.iter().all(|r| r["b"] == 4 && r["u"] == 6 && r["set_size"] == 20));

    fs::write(dir.path().join("bad.toml"), "[simulate]\nunknown = 1\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(run(&["simulate", "--config", bad.to_str().unwrap()], None).status.code(), Some(1));
}

#[test]
fn csv_writes_manifest_then_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let status = run(
        &[
            "simulate",
            "--u",
            "8",
            "--b",
            "3",
            "--trials",
            "4",
            "--thresholds",
            "2",
            "--set-size",
            "16",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let manifest: Value = serde_json::from_str(lines[0].strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(manifest["rng"], "chacha8/rand_chacha-0.3");
    assert!(manifest["timestamp"].is_string());
    assert_eq!(lines[1], gf2hash::cli::EXPERIMENT_COLUMNS.join(","));
    // 4 trials, mean, 5 order statistics and one tail row.
    assert_eq!(lines.len() - 2, 4 + 1 + 5 + 1);
}

#[test]
fn runs_replay_byte_for_byte() {
    let args =
        ["simulate", "--u", "16", "--b", "6", "--set", "random", "--set-size", "300", "--trials", "50", "--seed", "3"];
    let strip = |o: Output| String::from_utf8(o.stdout).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(run(&args, None)), strip(run(&args, None)));
}

#[test]
fn empty_table_bench_is_all_zero() {
    let doc = json(&["table-bench", "--n", "0", "--keys", "random"], None);
    let row = &doc["rows"][0];
    for col in ["max_chain", "largest_bin", "mean_probes_hit", "mean_probes_miss", "resizes"] {
        assert_eq!(row[col].as_f64(), Some(0.0), "{col}");
    }
}

#[test]
fn table_bench_subspace_prediction() {
    let doc = json(&["table-bench", "--n", "256", "--keys", "subspace", "--b", "8", "--linear"], None);
    let row = &doc["rows"][0];
    assert_eq!(row["max_chain"], row["largest_bin"]);
    assert_eq!(row["largest_bin"], row["subspace_prediction"]);
}

#[test]
fn bounds_flag_vacuous_values() {
    let doc = json(&["bounds", "--formula", "tail", "--b", "8", "--r", "16,256", "--eps", "0.5"], None);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["vacuous"], true);
    assert_eq!(rows[0]["clamped"], 1.0);
    assert_eq!(rows[1]["vacuous"], false);
    assert!((rows[1]["raw"].as_f64().unwrap() - 6.25e-7).abs() < 1e-15);
}
