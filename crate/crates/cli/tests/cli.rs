//! End-to-end tests driving the compiled binary: exit codes, report
//! determinism, schema diagnostics, and the verification commands.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqsnr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_channel(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const TWO_USER_CHANNEL: &str = r#"{"p": 1.1, "t": 0.8, "n0": 0.25,
  "users": [{"gamma": 0.5, "c": 0.9, "m": 1}, {"gamma": 0.8, "c": 1.2, "m": 2}]}"#;

fn generate_set(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(name);
    let out = run(&[
        "generate",
        "--family",
        "random-phase",
        "--n",
        "8",
        "--users",
        "2",
        "--seed",
        "47",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

#[test]
fn generation_is_deterministic_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate_set(dir.path(), "a.json");
    let b = generate_set(dir.path(), "b.json");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    let out = run(&[
        "generate",
        "--family",
        "random-phase",
        "--n",
        "8",
        "--users",
        "2",
        "--seed",
        "48",
        "--out",
        c.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn analyze_report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let args = [
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let value: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(value["tool"], "seqsnr");
    assert_eq!(value["k_users"], 2);
    assert_eq!(value["users"].as_array().unwrap().len(), 2);
}

#[test]
fn noise_only_analysis_reports_unit_snr() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("ones.json");
    let out = run(&[
        "generate",
        "--family",
        "all-ones",
        "--n",
        "4",
        "--users",
        "1",
        "--out",
        set.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let ch = write_channel(
        dir.path(),
        "noise.json",
        r#"{"p": 1.0, "t": 1.0, "n0": 2.0, "users": [{"gamma": 0.0, "c": 1.0, "m": 1}]}"#,
    );
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &value["users"][0];
    assert_eq!(row["snr_lower"], 1.0);
    assert_eq!(row["snr_db"], 0.0);
    assert_eq!(row["var_interference"], 0.0);
    assert_eq!(row["var_fading_bound"], 0.0);
    assert!(row["r_cc"].is_null());
}

#[test]
fn malformed_channel_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(
        dir.path(),
        "broken.json",
        r#"{"p": 1.0, "t": 1.0, "users": [{"gamma": 0.0, "c": 1.0, "m": 1}]}"#,
    );
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n0"), "diagnostic: {}", stderr(&out));
}

#[test]
fn ragged_set_exits_2_with_the_offending_row() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("ragged.json");
    fs::write(
        &set,
        r#"{"n": 2, "k": 2, "sequences": [[[1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0]]]}"#,
    )
    .unwrap();
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("sequence 1"),
        "diagnostic: {}",
        stderr(&out)
    );
}

#[test]
fn unnormalized_set_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("bad_energy.json");
    fs::write(
        &set,
        r#"{"n": 2, "k": 1, "sequences": [[[0.5, 0.0], [0.5, 0.0]]]}"#,
    )
    .unwrap();
    let ch = write_channel(
        dir.path(),
        "one.json",
        r#"{"p": 1.0, "t": 1.0, "n0": 0.5, "users": [{"gamma": 0.0, "c": 1.0, "m": 1}]}"#,
    );
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(!stderr(&out).is_empty());
}

#[test]
fn channel_user_count_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(
        dir.path(),
        "short.json",
        r#"{"p": 1.0, "t": 1.0, "n0": 0.5, "users": [{"gamma": 0.0, "c": 1.0, "m": 1}]}"#,
    );
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn matching_input_and_output_paths_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--out",
        set.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("differ"),
        "diagnostic: {}",
        stderr(&out)
    );
}

#[test]
fn thread_cap_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("four.json");
    let out = run(&[
        "generate",
        "--family",
        "random-binary",
        "--n",
        "16",
        "--users",
        "4",
        "--seed",
        "9",
        "--out",
        set.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let ch = write_channel(
        dir.path(),
        "four_ch.json",
        r#"{"p": 1.4, "t": 0.7, "n0": 0.3, "users": [
            {"gamma": 0.0, "c": 1.0, "m": 1}, {"gamma": 0.4, "c": 0.9, "m": 2},
            {"gamma": 0.8, "c": 1.1, "m": 1}, {"gamma": 1.2, "c": 0.6, "m": 3}]}"#,
    );
    let args = [
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--format",
        "csv",
    ];
    let single = bin()
        .args(args)
        .env("SEQSNR_THREADS", "1")
        .output()
        .unwrap();
    let quad = bin()
        .args(args)
        .env("SEQSNR_THREADS", "4")
        .output()
        .unwrap();
    let wide = bin()
        .args(args)
        .env("SEQSNR_THREADS", "64")
        .output()
        .unwrap();
    assert_eq!(code(&single), 0, "{}", stderr(&single));
    assert_eq!(single.stdout, quad.stdout);
    assert_eq!(single.stdout, wide.stdout);
}

#[test]
fn invalid_thread_cap_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    for bad in ["0", "-3", "many"] {
        let out = bin()
            .args([
                "analyze",
                "--input",
                set.to_str().unwrap(),
                "--channel",
                ch.to_str().unwrap(),
            ])
            .env("SEQSNR_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(code(&out), 2, "SEQSNR_THREADS={bad}");
        assert!(stderr(&out).contains("SEQSNR_THREADS"));
    }
}

#[test]
fn correlation_export_covers_the_full_lag_window() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let corr = dir.path().join("corr.csv");
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--correlation-out",
        corr.to_str().unwrap(),
        "--correlation-pair",
        "0",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&corr).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "l,re_c,im_c,re_theta,im_theta,re_theta_hat,im_theta_hat"
    );
    assert_eq!(lines.len(), 1 + 15); // header + lags -7..=7
    assert!(lines[1].starts_with("-7,"));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["correlation_pair"][1], 1);

    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--correlation-out",
        corr.to_str().unwrap(),
        "--correlation-pair",
        "0",
        "5",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn verify_suite_passes_on_the_reference_configuration() {
    let out = run(&[
        "verify", "--n", "8", "--users", "3", "--trials", "20", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("verify: PASS (11 checks, 20 trials)"));
    assert!(text.contains("snr bound vs oracle bracket"));
}

#[test]
fn verify_with_absurd_tolerance_exits_1() {
    let out = run(&[
        "verify", "--n", "8", "--users", "2", "--trials", "3", "--seed", "1", "--tol", "1e-18",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("VIOLATION"));
    assert!(text.contains("verify: FAIL"));
}

#[test]
fn verify_rejects_undersized_sets() {
    let out = run(&[
        "verify", "--n", "1", "--users", "2", "--trials", "1", "--seed", "0",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn grad_check_passes_at_the_default_step() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    for user in ["0", "1"] {
        let out = run(&[
            "grad-check",
            "--input",
            set.to_str().unwrap(),
            "--channel",
            ch.to_str().unwrap(),
            "--user",
            user,
        ]);
        assert_eq!(code(&out), 0, "user {user}: {}", stdout(&out));
        let text = stdout(&out);
        assert!(text.contains("grad-check: PASS"));
        assert!(text.contains("parameter-space worst error ratio"));
        assert!(text.contains("sequence-space worst error ratio"));
    }
}

#[test]
fn grad_check_with_absurd_tolerance_exits_1() {
    // --atol 0 drops the noise allowance so the comparison is purely
    // relative; no central difference can meet 1e-17 there.
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let out = run(&[
        "grad-check",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--user",
        "0",
        "--tol",
        "1e-17",
        "--atol",
        "0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("grad-check: FAIL"));
}

#[test]
fn grad_check_rejects_bad_user_and_bad_step() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let out = run(&[
        "grad-check",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--user",
        "5",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("out of range"));
    let out = run(&[
        "grad-check",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--user",
        "0",
        "--eps",
        "0.0",
    ]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "grad-check",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--user",
        "0",
        "--atol=-1.0",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("atol"));
}

#[test]
fn zadoff_chu_generation_rejects_even_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--family",
            "zadoff-chu",
            "--n",
            "8",
            "--users",
            "1",
            "--out",
            "zc.json",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(!stderr(&out).is_empty());
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--family",
            "zadoff-chu",
            "--n",
            "7",
            "--users",
            "1",
            "--out",
            "zc.json",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn unknown_flags_exit_2() {
    let out = run(&["analyze", "--bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn csv_report_floats_carry_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate_set(dir.path(), "set.json");
    let ch = write_channel(dir.path(), "ch.json", TWO_USER_CHANNEL);
    let report = dir.path().join("report.csv");
    let out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&report).unwrap();
    let data_line = text.lines().nth(4).expect("one row per user");
    let cell = data_line.split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap();
    let digits = mantissa.chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 17, "cell {cell}");
    // The cells parse back to the same values the JSON report carries.
    let parsed: f64 = cell.parse().unwrap();
    let json_out = run(&[
        "analyze",
        "--input",
        set.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(parsed, value["users"][0]["s_sums"][0].as_f64().unwrap());
}
