//! End-to-end tests driving the compiled binary against the bundled
//! network files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nodalfreq")
}

fn networks() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../networks")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn nodalfreq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_two_gen_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("two_gen.json");
    let out = run(&["analyze", "--input", input.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    // One data row for bus 3; mode-1 column is J1 + J2 = 30.
    assert!(text.contains("1/c_1,ii"), "{text}");
    assert!(text.lines().any(|l| l.trim_start().starts_with('3') && l.contains("30.0")), "{text}");

    let csv = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "3");
    let inv_c1: f64 = fields[3].parse().unwrap();
    assert!((inv_c1 - 30.0).abs() < 1e-9);
}

#[test]
fn analyze_ring_mode_one_column_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("four_gen/ring.json");
    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--modes",
    ]);
    assert!(out.status.success(), "{out:?}");

    let csv = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let inv_c1: f64 = fields[3].parse().unwrap();
        assert!((inv_c1 - 32.0).abs() < 1e-9, "{line}");
    }

    let modes = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    assert!(modes.starts_with("mode,lambda,u_1,u_2,u_3,u_4"));
    let first: Vec<&str> = modes.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[1], "0"); // snapped zero eigenvalue
}

#[test]
fn analyze_is_deterministic() {
    let input = networks().join("four_gen/ring.json");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&[
            "analyze",
            "--input",
            input.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
        outputs.push((
            stdout(&out),
            std::fs::read(dir.path().join("metrics.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn malformed_file_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "analyze",
        "--input",
        bad.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists(), "partial outputs written");
}

#[test]
fn invalid_network_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    // Disconnected: two buses, no branches.
    std::fs::write(
        &net,
        r#"{
            "buses": [
                {"id": "g", "kind": "generator",
                 "generator": {"inertia": 10.0, "damping": 1.0, "droop": 15.0, "turbine_time": 7.0}},
                {"id": "l", "kind": "load", "load_power": 0.1}
            ],
            "branches": []
        }"#,
    )
    .unwrap();
    let out = run(&["analyze", "--input", net.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let val = run(&["validate", "--input", net.to_str().unwrap()]);
    assert_eq!(val.status.code(), Some(2));
    assert!(stdout(&val).contains("disconnected"));
    assert!(stdout(&val).contains("FAIL"));
}

#[test]
fn validate_passes_bundled_networks() {
    for name in ["two_gen.json", "four_gen/ring.json", "four_gen/chain.json"] {
        let input = networks().join(name);
        let out = run(&["validate", "--input", input.to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {out:?}");
        assert!(stdout(&out).contains("PASS"));
    }
}

#[test]
fn simulate_two_gen_rocof_pass() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("two_gen.json");
    let out = run(&[
        "simulate",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "3=-0.1",
        "--t-end",
        "2",
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("PASS"), "{summary}");

    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,bus_3,coi\n"));
    assert_eq!(csv.lines().count(), 2002); // header + 2001 samples at 1 ms
}

#[test]
fn simulate_zero_disturbance_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("four_gen/ring.json");
    let out = run(&[
        "simulate",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--t-end",
        "1",
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("disturbance: none"));
    assert!(summary.contains("steady-state deviation: 0e0"));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    for line in csv.lines().skip(1) {
        for field in line.split(',').skip(1) {
            assert_eq!(field, "0");
        }
    }
}

#[test]
fn simulate_modal_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("four_gen/ring.json");
    let out = run(&[
        "simulate",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "8=-0.1",
        "--t-end",
        "5",
        "--modal",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let diff_line = text
        .lines()
        .find(|l| l.starts_with("modal vs state-space"))
        .expect("difference line");
    let value: f64 = diff_line
        .split('=')
        .nth(1)
        .unwrap()
        .trim()
        .trim_end_matches(" p.u.")
        .parse()
        .unwrap();
    assert!(value <= 1e-6, "{diff_line}");
    assert!(dir.path().join("modal_trajectory.csv").exists());
}

#[test]
fn simulate_handles_non_homogeneous_fleet() {
    // The state-space simulator has no homogeneity requirement; only the
    // modal comparison and the analyze pipeline do.
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(networks().join("two_gen.json")).unwrap();
    let mut net = nodalfreq_core::PowerNetwork::from_json(&base).unwrap();
    net.buses[0].generator.as_mut().unwrap().damping *= 3.0;
    let path = dir.path().join("mixed.json");
    std::fs::write(&path, net.to_json()).unwrap();

    let out = run(&[
        "simulate",
        "--input",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "3=-0.1",
        "--t-end",
        "1",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(std::fs::read_to_string(dir.path().join("summary.txt")).unwrap().contains("PASS"));

    // analyze needs the modal decomposition and must refuse.
    let analyze = run(&["analyze", "--input", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(analyze.status.code(), Some(2));

    // so does the modal comparison.
    let modal = run(&[
        "simulate",
        "--input",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "3=-0.1",
        "--t-end",
        "1",
        "--modal",
    ]);
    assert_eq!(modal.status.code(), Some(2));
}

#[test]
fn simulate_rejects_generator_bus_disturbance() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("two_gen.json");
    let out = run(&[
        "simulate",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "1=-0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generator internal bus"));
}

#[test]
fn simulate_with_onset_preroll() {
    let dir = tempfile::tempdir().unwrap();
    let input = networks().join("two_gen.json");
    let out = run(&[
        "simulate",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--disturb",
        "3=-0.1",
        "--t-end",
        "2",
        "--onset",
        "0.5",
        "--modal",
    ]);
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    // Flat until onset.
    let line: Vec<&str> = csv.lines().nth(400).unwrap().split(',').collect();
    assert_eq!(line[1], "0");
    let text = stdout(&out);
    let diff_line = text.lines().find(|l| l.starts_with("modal vs state-space")).unwrap();
    let value: f64 = diff_line.split('=').nth(1).unwrap().trim().trim_end_matches(" p.u.").parse().unwrap();
    assert!(value <= 1e-6, "{diff_line}");
}

#[test]
fn sweep_argmax_at_one_third() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--sweep",
        "20,10,301",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("argmax"), "{text}");
    let x: f64 = text
        .lines()
        .find(|l| l.starts_with("argmax"))
        .unwrap()
        .split("x = ")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((x - 1.0 / 3.0).abs() <= 1.0 / 300.0 + 1e-12);

    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 302);
    assert!(csv.lines().skip(1).all(|l| !l.ends_with("mismatch")));
}

#[test]
fn sweep_symmetric_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--sweep", "10,10,11", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x = 0.5"));
}

#[test]
fn unknown_tolerance_rejected() {
    let input = networks().join("two_gen.json");
    let out = run(&["analyze", "--input", input.to_str().unwrap(), "--tol", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn network_file_round_trip() {
    // A file serialized from the in-memory model re-parses identically.
    let input = networks().join("four_gen/ring.json");
    let text = std::fs::read_to_string(&input).unwrap();
    let net = nodalfreq_core::PowerNetwork::from_json(&text).unwrap();
    let back = nodalfreq_core::PowerNetwork::from_json(&net.to_json()).unwrap();
    assert_eq!(net, back);
}
