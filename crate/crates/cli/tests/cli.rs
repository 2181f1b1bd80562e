//! End-to-end checks of the binary: flag validation, exit codes, output
//! files and byte determinism across worker counts.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qutrit-rabi"))
}

#[test]
fn spectrum_level_crossing_reference_value() {
    let out = bin()
        .args([
            "spectrum",
            "--preset", "level-crossing",
            "--omega", "1", "--gamma", "0.7", "--lambda", "0.6", "--omega-mode", "1",
            "--sector", "m=-1",
            "--levels", "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "index,energy,residual");
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,-2.06000000000e0,"), "got {first}");
}

#[test]
fn spectrum_decoupled_ladder() {
    let out = bin()
        .args([
            "spectrum",
            "--preset", "level-crossing",
            "--omega", "1", "--gamma", "0", "--lambda", "0", "--omega-mode", "1",
            "--n-max", "3",
            "--levels", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let energies: Vec<&str> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(energies[0], "-2.00000000000e0");
    assert_eq!(energies[1], "-1.00000000000e0");
}

#[test]
fn bad_flag_combination_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = bin()
        .args(["spectrum", "--sector", "m=-1", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists(), "no partial CSV on error");
}

#[test]
fn m_sector_request_with_asymmetric_couplings_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    std::fs::write(
        &params,
        r#"{"omega1":1.0,"omega2":1.0,"gamma_x":1.0,"gamma_y":0.5,"gamma_z":0.0,
           "omega_mode":1.0,"lambda1":0.2,"lambda2":0.2,"n_max":8}"#,
    )
    .unwrap();
    let out = bin()
        .args(["spectrum", "--params"])
        .arg(&params)
        .args(["--sector", "m=-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the K partition is always available
    let out = bin()
        .args(["spectrum", "--params"])
        .arg(&params)
        .args(["--sector", "K=-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn unknown_params_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    std::fs::write(
        &params,
        r#"{"omega1":1,"omega2":1,"gamma_x":0,"gamma_y":0,"gamma_z":0,
           "omega_mode":1,"lambda1":0,"lambda2":0,"n_max":4,"extra":3}"#,
    )
    .unwrap();
    let out = bin().args(["spectrum", "--params"]).arg(&params).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qpt_scan_writes_csv_and_sidecar_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let out = bin()
            .args([
                "qpt-scan",
                "--g", "0.4:1.4:11",
                "--omega-over-gamma", "0.02",
                "--truncation", "fixed:64",
                "--workers", workers,
                "--output",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let ca = std::fs::read(&a).unwrap();
    let cb = std::fs::read(&b).unwrap();
    assert_eq!(ca, cb, "CSV bytes must not depend on worker count");
    assert!(dir.path().join("a.json").exists(), "sidecar written");
    let head = String::from_utf8_lossy(&ca);
    assert!(head.starts_with(
        "g,omega_over_gamma,energy,energy_rescaled,n_mean,n_rescaled,negativity,m_stag,gap,host_block,status"
    ));
}

#[test]
fn phase_diagram_small_grid_summary() {
    let out = bin()
        .args([
            "phase-diagram",
            "--grid", "omega:-1.2:1.2:7,x:0.01:0.45:5",
            "--n-max", "24",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with(
        "omega_over_gamma,x,energy,m_total,m_half,m_stag,mean_photon,negativity,gap,sector,status"
    ));
    assert_eq!(stdout.lines().count(), 1 + 35);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("label counts"), "summary on stderr: {stderr}");
}

#[test]
fn crossing_lines_emit_polylines() {
    let out = bin()
        .args(["crossing-lines", "--x-min", "0", "--x-max", "0.4", "--samples", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("pair,x,omega_over_gamma"));
    // 7 lines x 5 samples + header
    assert_eq!(stdout.lines().count(), 1 + 35);
}
