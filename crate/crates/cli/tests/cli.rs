use std::process::{Command, Output};

use bellforge_core::textfmt::{parse_matrix, write_matrix};
use bellforge_core::TensorOperator;
use serde_json::Value;

fn bellforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellforge"))
        .args(args)
        .env("BELLFORGE_THREADS", "4")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn verify_passes_for_supported_dimensions() {
    for d in ["2", "3", "6"] {
        let out = bellforge(&["verify", "--d", d, "--tol", "1e-10"]);
        assert_eq!(out.status.code(), Some(0), "d={d}: {}", stderr(&out));
        let report = json(&out);
        assert_eq!(report["command"], "verify");
        let results = report["results"].as_object().unwrap();
        assert!(results.values().all(|c| c["pass"] == true));
        if d == "2" {
            // two-qubit source operator: only the {2,3} pattern is checked
            assert!(results.contains_key("source_operator_marginal_2"));
            assert!(!results.contains_key("source_operator_marginal_1"));
        } else {
            assert!(results.contains_key("source_operator_marginal_1"));
        }
    }
}

#[test]
fn verify_rejects_out_of_range_dimensions() {
    for d in ["1", "7"] {
        let out = bellforge(&["verify", "--d", d]);
        assert_eq!(out.status.code(), Some(2));
        assert!(out.stdout.is_empty());
        assert!(stderr(&out).contains("--d"));
    }
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(bellforge(&["verify"]).status.code(), Some(2));
    assert_eq!(
        bellforge(&["bell", "--functional", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bellforge(&["bell", "--d", "3", "--functional", "chsh", "--state", "ghz"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bellforge(&[
            "bell",
            "--d",
            "3",
            "--functional",
            "chsh",
            "--state",
            "singlet"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        bellforge(&[
            "bell",
            "--d",
            "3",
            "--functional",
            "chsh",
            "--observables",
            "spin"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn werner3_original_bell_holds() {
    let out = bellforge(&[
        "bell",
        "--d",
        "3",
        "--functional",
        "original",
        "--state",
        "werner",
        "--restarts",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert!(num(&report["results"]["best_value"]["value"]) <= 1e-7);
    assert_eq!(report["parameters"]["seed"], 7);
    assert_eq!(report["parameters"]["restarts"], 50);
}

#[test]
fn singlet_original_bell_is_flagged() {
    let out = bellforge(&[
        "bell",
        "--d",
        "2",
        "--functional",
        "original",
        "--state",
        "singlet",
        "--restarts",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let best = &report["results"]["best_value"];
    assert_eq!(best["pass"], false);
    assert!((num(&best["value"]) - 2.0).abs() < 1e-4);
    assert!(stderr(&out).contains("VIOLATION"));
}

#[test]
fn quiet_suppresses_diagnostics() {
    let out = bellforge(&[
        "--quiet",
        "bell",
        "--d",
        "2",
        "--functional",
        "original",
        "--state",
        "singlet",
        "--restarts",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stderr.is_empty(), "{}", stderr(&out));
    json(&out);
}

#[test]
fn werner2_chsh_in_both_observable_classes() {
    let out = bellforge(&[
        "bell",
        "--d",
        "2",
        "--functional",
        "chsh",
        "--state",
        "werner",
        "--restarts",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!((num(&json(&out)["results"]["best_value"]["value"]) - 2.0).abs() < 1e-9);

    let out = bellforge(&[
        "bell",
        "--d",
        "2",
        "--functional",
        "chsh",
        "--state",
        "werner",
        "--restarts",
        "20",
        "--observables",
        "spin",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    let best = num(&report["results"]["best_value"]["value"]);
    assert!((best - std::f64::consts::SQRT_2).abs() < 1e-4, "{best}");
    assert_eq!(report["results"]["spin_oracle_agreement"]["pass"], true);
}

#[test]
fn dso_find_on_werner3_converges_and_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.mat");
    let out = bellforge(&[
        "dso-find",
        "--d",
        "3",
        "--state",
        "werner",
        "--pattern",
        "sym3",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["results"]["converged"]["pass"], true);
    let text = std::fs::read_to_string(&path).unwrap();
    let t = parse_matrix(&text).unwrap();
    assert_eq!(t.dims(), &[3, 3, 3]);
    assert_eq!(write_matrix(&t), text);
    let w = bellforge_core::states::werner(3).unwrap();
    for j in 1..=3 {
        assert!(
            t.partial_trace(j)
                .unwrap()
                .frobenius_distance(w.op())
                .unwrap()
                <= 1e-5
        );
    }
}

#[test]
fn dso_find_on_singlet_right_pair_does_not_converge() {
    let out = bellforge(&[
        "dso-find",
        "--d",
        "2",
        "--state",
        "singlet",
        "--pattern",
        "right2",
        "--iters",
        "5000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let check = &json(&out)["results"]["converged"];
    assert_eq!(check["pass"], false);
    assert!(num(&check["value"]) >= 1e-2);
    let err = stderr(&out);
    assert!(err.contains("no extension found"), "{err}");
}

#[test]
fn state_files_are_validated() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("missing.mat");
    let arg = format!("file:{}", missing.display());
    assert_eq!(
        bellforge(&["bell", "--functional", "chsh", "--state", &arg])
            .status
            .code(),
        Some(2)
    );

    let garbled = dir.path().join("garbled.mat");
    std::fs::write(&garbled, "dims: 2 2\n0 0 one 0\n").unwrap();
    let arg = format!("file:{}", garbled.display());
    assert_eq!(
        bellforge(&["bell", "--functional", "chsh", "--state", &arg])
            .status
            .code(),
        Some(2)
    );

    // trace 2, positive: parses fine but is not a state
    let scaled = dir.path().join("scaled.mat");
    let op = TensorOperator::identity(vec![2, 2]).unwrap().scale(0.5);
    std::fs::write(&scaled, write_matrix(&op)).unwrap();
    let arg = format!("file:{}", scaled.display());
    let out = bellforge(&["bell", "--functional", "chsh", "--state", &arg]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    // unit trace, one negative eigenvalue
    let indefinite = dir.path().join("indefinite.mat");
    let op = TensorOperator::diagonal(vec![2, 2], &[0.6, 0.6, 0.0, -0.2]).unwrap();
    std::fs::write(&indefinite, write_matrix(&op)).unwrap();
    let arg = format!("file:{}", indefinite.display());
    assert_eq!(
        bellforge(&["dso-find", "--state", &arg]).status.code(),
        Some(3)
    );

    // a valid state round-trips through the file path
    let good = dir.path().join("werner3.mat");
    std::fs::write(
        &good,
        write_matrix(bellforge_core::states::werner(3).unwrap().op()),
    )
    .unwrap();
    let arg = format!("file:{}", good.display());
    let out = bellforge(&[
        "bell",
        "--functional",
        "chsh",
        "--state",
        &arg,
        "--restarts",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["parameters"]["d"], 3);
}

#[test]
fn identical_runs_give_identical_results() {
    let args = [
        "bell",
        "--d",
        "3",
        "--functional",
        "chsh",
        "--restarts",
        "12",
        "--seed",
        "99",
    ];
    let first = json(&bellforge(&args));
    for threads in ["1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_bellforge"))
            .args(args)
            .env("BELLFORGE_THREADS", threads)
            .output()
            .unwrap();
        let again = json(&out);
        assert_eq!(
            serde_json::to_string(&first["results"]).unwrap(),
            serde_json::to_string(&again["results"]).unwrap()
        );
        assert_eq!(first["parameters"], again["parameters"]);
    }
}

#[test]
fn report_layout() {
    let out = bellforge(&["verify", "--d", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = [
        "\"command\"",
        "\"parameters\"",
        "\"results\"",
        "\"wall_time_ms\"",
        "\"artifact_version\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["artifact_version"], env!("CARGO_PKG_VERSION"));
    assert!(report["wall_time_ms"].is_u64());
}
