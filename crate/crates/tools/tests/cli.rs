use std::path::Path;
use std::process::{Command, Output};

fn cangrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cangrowth"))
        .args(args)
        .env_remove("CANGROWTH_ABS_TOL")
        .env_remove("CANGROWTH_REL_TOL")
        .env_remove("CANGROWTH_MAX_SUBDIVISIONS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn s_constant_prints_pi_in_both_columns() {
    let o = cangrowth(&["s-constant", "--rho", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,q,S_derivative_form,S_direct_form"));
    let cols: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((cols[2] - std::f64::consts::PI).abs() < 1e-6);
    assert!((cols[3] - std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn gen_zeros_radii() {
    let o = cangrowth(&["gen-zeros", "--sigma", "1", "--rho", "0.5", "--count", "4"]);
    assert!(o.status.success());
    let radii: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(radii, [1.0, 4.0, 9.0, 16.0]);
}

#[test]
fn gen_zeros_round_trips_through_every_consumer() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.csv");
    let zeros = zeros.to_str().unwrap();
    let o = cangrowth(&[
        "gen-zeros", "--sigma", "0.7", "--rho", "0.6", "--count", "50", "--equidistributed",
        "--output", zeros,
    ]);
    assert!(o.status.success());

    let measure = canonical_growth_tools::io::read_measure(Path::new(zeros)).unwrap();
    let expected = canonical_growth::measures::synthesize_power_zeros(
        0.7, 0.6, 50, canonical_growth::AngleRule::Equidistributed,
    )
    .unwrap();
    assert_eq!(measure.atoms(), expected.atoms());

    let runs: [&[&str]; 4] = [
        &["eval", "--input", zeros, "--rho", "0.6", "--count", "4"],
        &["eval", "--input", zeros, "--q", "1", "--theta", "-1.5", "--count", "4"],
        &["verify-bounds", "--input", zeros, "--rho", "0.6", "--count", "4"],
        &["verify-type", "--input", zeros, "--rho", "0.6", "--r-max", "1e3", "--count", "12"],
    ];
    for args in runs {
        let o = cangrowth(args);
        assert_ne!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_bounds_single_atom_passes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "atom.csv", "re,im\n1,0\n");
    let o = cangrowth(&["verify-bounds", "--input", &input, "--q", "0", "--count", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passes"], true);
    for row in report["rows"].as_array().unwrap() {
        let lhs = row["lhs"].as_f64().unwrap();
        assert!((row["rhs_p1_a"].as_f64().unwrap() - lhs).abs() < 1e-12);
        assert!((row["rhs_p2_b"].as_f64().unwrap() - lhs).abs() < 1e-8);
    }
}

#[test]
fn eval_records_genus_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.json", r#"[{"re": 2, "im": 1}, {"re": -1, "im": 3, "mass": 2}]"#);
    let o = cangrowth(&["eval", "--input", &input, "--rho", "0.5", "--q", "2", "--count", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# genus override: q = 2 (order gives 0)\n"));
    assert_eq!(text.lines().nth(1), Some("r,circle_max,circle_mean"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cangrowth(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cangrowth(&["s-constant"]).status.code(), Some(2));
    assert_eq!(cangrowth(&["s-constant", "--rho", "1"]).status.code(), Some(2));
    assert_eq!(
        cangrowth(&["kernel-table", "--q", "0", "--r-min", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cangrowth(&["kernel-table", "--q", "0", "--count", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cangrowth(&["s-constant", "--rho", "0.5", "--abs-tol", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "re,im,mass\n1,0,1\n2,x,1\n");
    let o = cangrowth(&["eval", "--input", &bad, "--rho", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:3:"));

    let origin = write(dir.path(), "origin.csv", "re,im\n1,0\n\n0,0\n");
    let o = cangrowth(&["verify-bounds", "--input", &origin, "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("origin.csv:4:"));

    let json = write(dir.path(), "bad.json", "[\n{\"re\": 1, \"im\": }\n]");
    let o = cangrowth(&["eval", "--input", &json, "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json:2:"));

    let missing = dir.path().join("missing.csv");
    let o = cangrowth(&["eval", "--input", missing.to_str().unwrap(), "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_3() {
    let o = cangrowth(&["s-constant", "--rho", "0.5", "--max-subdivisions", "1", "--abs-tol", "1e-15", "--rel-tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn environment_overrides_tolerances() {
    let o = Command::new(env!("CARGO_BIN_EXE_cangrowth"))
        .args(["s-constant", "--rho", "0.5"])
        .env("CANGROWTH_MAX_SUBDIVISIONS", "1")
        .env("CANGROWTH_ABS_TOL", "1e-15")
        .env("CANGROWTH_REL_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let help = stdout(&cangrowth(&["--help"]));
    assert!(help.contains("CANGROWTH_ABS_TOL"));
}

// With tolerances this loose the four right-hand sides drift apart by more
// than the identity tolerance.
#[test]
fn failed_verification_exits_1() {
    let o = cangrowth(&[
        "verify-bounds", "--random", "2", "--seed", "3", "--q", "2", "--count", "6",
        "--abs-tol", "1e-2", "--rel-tol", "1e-2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().skip(1).any(|l| l.contains(",false,")));
}

#[test]
fn seeded_random_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = cangrowth(&[
            "verify-bounds", "--random", "3", "--seed", "11", "--q", "1", "--count", "6",
            "--output", p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
