use std::path::PathBuf;
use std::process::{Command, Output};

fn povmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povmkit"))
        .args(args)
        .env_remove("POVMKIT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = povmkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows after the two comment lines and the header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(3).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("povmkit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn header_echoes_command_and_seed() {
    let out = stdout(&["tcs-table", "--w", "0", "--seed", "17"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# povmkit tcs-table"));
    assert_eq!(lines.next(), Some("# seed: 17"));
    assert_eq!(lines.next(), Some("w_re,w_im,var_x,var_y,product"));
}

#[test]
fn coherent_row_of_the_tcs_table() {
    let r = rows(&stdout(&["tcs-table", "--w", "0,0.5"]));
    assert_eq!(r[0], ["0", "0", "0.5", "0.5", "0.25"]);
    assert_eq!(r[1][4], "0.333333333333");
}

#[test]
fn infimum_status() {
    assert_eq!(rows(&stdout(&["infimum", "--diag", "0.3,0.8"]))[0][0], "does not exist");
    let r = rows(&stdout(&["infimum", "--diag", "0.1,0.3"]));
    assert_eq!(r[0][0], "exists");
    // for an irregular effect below ½ the infimum is A itself
    assert_eq!(r[0][3], "0.1;0.3");
}

#[test]
fn glb_agrees_with_bisection() {
    for seed in ["1", "2", "3"] {
        let r = rows(&stdout(&["glb-rank1", "--random-dim", "4", "--seed", seed]));
        let diff: f64 = r[0][2].parse().unwrap();
        assert!(diff.abs() < 1e-9, "seed {seed}: {diff}");
    }
}

#[test]
fn counterexample_lacks_the_norm1_property() {
    let r = rows(&stdout(&["povm-check", "--builtin", "counterexample", "--lambda", "0.3"]));
    let get = |k: &str| r.iter().find(|row| row[0] == k).map(|row| row[1].clone()).unwrap();
    assert_eq!(get("has_norm1_property"), "false");
    assert_eq!(get("is_regular_povm"), "true");
    assert_eq!(get("min_algebra_norm"), "0.7");
}

#[test]
fn angle_probe_deficits_shrink() {
    let r = rows(&stdout(&["angle-probe", "--amplitudes", "1,2,4"]));
    let deficits: Vec<f64> = r.iter().map(|row| row[3].parse().unwrap()).collect();
    assert!(deficits.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["tcs-table", "--random", "5", "--seed", "42"],
        &["povm-check", "--builtin", "random", "-d", "4", "--seed", "42"],
        &["cantor", "--random-opens", "4", "--seed", "42"],
        &["covariance-check", "--random", "3", "-d", "12", "--seed", "42"],
    ];
    for args in cases {
        let a = povmkit(args);
        let b = povmkit(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = stdout(&["tcs-table", "--random", "3", "--seed", "1"]);
    let b = stdout(&["tcs-table", "--random", "3", "--seed", "2"]);
    assert_ne!(rows(&a), rows(&b));
}

#[test]
fn exit_codes() {
    assert_eq!(povmkit(&["infimum", "--diag", "1.5"]).status.code(), Some(1));
    assert_eq!(povmkit(&["tcs-table", "--w", "1.2"]).status.code(), Some(1));
    assert_eq!(povmkit(&["phase-norms", "--arc", "0:x"]).status.code(), Some(1));
    assert_eq!(povmkit(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(povmkit(&["cantor", "--depth", "1", "--set", "0.3:0.31&cantor"]).status.code(), Some(2));
    assert_eq!(povmkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_names_the_driven_operation() {
    let cases = [
        ("phase-norms", "canonical_norm_scan"),
        ("phase-spectrum", "phase_effect"),
        ("infimum", "infimum_with_complement"),
        ("glb-rank1", "glb_with_rank1"),
        ("povm-check", "has_norm1_property"),
        ("margins", "cartesian_margin_effect"),
        ("angle-probe", "angle_margin_norm1_probe"),
        ("tcs-table", "uncertainty_product"),
        ("angle-density", "angle_density_limits"),
        ("cantor", "cantor_effect_norm"),
        ("covariance-check", "covariance_check"),
        ("variance-demo", "variance_demo"),
    ];
    for (cmd, op) in cases {
        let help = stdout(&[cmd, "--help"]);
        assert!(help.contains(op), "{cmd} --help does not mention {op}");
    }
}

#[test]
fn output_directory_from_the_environment() {
    let dir = scratch("envdir");
    let out = Command::new(env!("CARGO_BIN_EXE_povmkit"))
        .args(["variance-demo", "--etas", "0.1"])
        .env("POVMKIT_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("variance-demo.csv")).unwrap();
    assert!(text.starts_with("# povmkit variance-demo\n# seed: 0\neta,probability,variance,bound\n"));

    // an explicit --output wins over the environment
    let file = dir.join("explicit.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_povmkit"))
        .args(["tcs-table", "--w", "0", "--output"])
        .arg(&file)
        .env("POVMKIT_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(file.exists() && !dir.join("tcs-table.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn povm_export_round_trips_through_a_directory() {
    let dir = scratch("export");
    let first = stdout(&["povm-check", "--builtin", "random", "-d", "3", "--seed", "9", "--export", dir.to_str().unwrap()]);
    let second = stdout(&["povm-check", "--dir", dir.to_str().unwrap()]);
    let body = |s: &str| rows(s).into_iter().filter(|r| r[0] != "min_algebra_norm").collect::<Vec<_>>();
    assert_eq!(body(&first), body(&second));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn matrix_file_input() {
    let dir = scratch("matrix");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.csv");
    std::fs::write(&path, "0.2,0,0.1,0\n0.1,0,0.3,0\n").unwrap();
    let inf = dir.join("inf.csv");
    let r = rows(&stdout(&["infimum", "--matrix", path.to_str().unwrap(), "--write-matrix", inf.to_str().unwrap()]));
    assert_eq!(r[0][0], "exists");
    assert!(inf.exists());
    let _ = std::fs::remove_dir_all(&dir);
}
