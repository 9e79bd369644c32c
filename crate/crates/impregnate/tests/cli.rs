//! End-to-end tests of the `impregnate` binary: exit codes, artifact layout,
//! determinism of the CSV outputs, and well-formedness of the SVG plots.

use std::fs;
use std::process::{Command, Output};

use tempfile::tempdir;

fn impregnate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impregnate"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no exit code")
}

#[test]
fn run_writes_artifacts_and_passes() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = impregnate(&[
        "run",
        "--n",
        "200",
        "--output_dir",
        out_dir.to_str().unwrap(),
        "--dump-grid",
        "--svg",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("balance PASS"), "stdout: {stdout}");

    for name in [
        "balance.csv",
        "grid.csv",
        "summary.txt",
        "balance.svg",
        "profiles.svg",
    ] {
        assert!(out_dir.join(name).is_file(), "missing {name}");
    }
    for fraction in ["0.25", "0.5", "0.75", "1"] {
        let p = out_dir
            .join("profiles")
            .join(format!("profile_{fraction}.csv"));
        assert!(p.is_file(), "missing {}", p.display());
    }

    // Column layout and row counts.
    let balance = fs::read_to_string(out_dir.join("balance.csv")).unwrap();
    let mut lines = balance.lines();
    assert_eq!(lines.next().unwrap(), "tau,m1,m2,rel_diff");
    assert_eq!(lines.count(), 200);
    let grid = fs::read_to_string(out_dir.join("grid.csv")).unwrap();
    assert_eq!(
        grid.lines().next().unwrap(),
        "i,tau,rho_face,rho_mid,volume"
    );
    assert_eq!(grid.lines().count(), 201);
    let profile = fs::read_to_string(out_dir.join("profiles/profile_1.csv")).unwrap();
    assert_eq!(profile.lines().next().unwrap(), "rho_mid,u,theta");
    assert_eq!(profile.lines().count(), 201);

    for name in ["balance.svg", "profiles.svg"] {
        let svg = fs::read_to_string(out_dir.join(name)).unwrap();
        assert_well_formed_xml(&svg);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
    }
}

#[test]
fn grid_csv_only_on_request() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = impregnate(&[
        "run",
        "--n",
        "50",
        "--output_dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(!out_dir.join("grid.csv").exists());
    assert!(!out_dir.join("balance.svg").exists());
}

#[test]
fn identical_configs_produce_identical_csv_bytes() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out_dir in [&a, &b] {
        let out = impregnate(&[
            "run",
            "--n",
            "150",
            "--kplus",
            "100",
            "--output_dir",
            out_dir.to_str().unwrap(),
            "--dump-grid",
        ]);
        assert_eq!(code(&out), 0);
    }
    for name in [
        "balance.csv",
        "grid.csv",
        "profiles/profile_0.5.csv",
        "profiles/profile_1.csv",
    ] {
        let bytes_a = fs::read(a.join(name)).unwrap();
        let bytes_b = fs::read(b.join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
    }
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempdir().unwrap();
    let config_path = dir.path().join("case.conf");
    fs::write(
        &config_path,
        "# strong-adsorption variant\nkplus = 100\nn = 150\n",
    )
    .unwrap();
    let out = impregnate(&["check", "--config", config_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("balance PASS"));

    // Flags win over the file.
    let out = impregnate(&[
        "check",
        "--config",
        config_path.to_str().unwrap(),
        "--n",
        "0",
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn balance_failure_exits_one() {
    // A threshold below the roundoff floor of the bookkeeping makes the
    // check fail without touching the solver.
    let out = impregnate(&["run", "--n", "150", "--balance_threshold", "1e-25"]);
    // No artifacts are wanted here; point output at a temp dir anyway.
    let dir = tempdir().unwrap();
    let out = if code(&out) == 1 {
        out
    } else {
        impregnate(&[
            "run",
            "--n",
            "150",
            "--balance_threshold",
            "1e-25",
            "--output_dir",
            dir.path().join("o").to_str().unwrap(),
        ])
    };
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("balance FAIL"));
}

#[test]
fn non_convergence_exits_two() {
    let dir = tempdir().unwrap();
    let out = impregnate(&[
        "run",
        "--n",
        "150",
        "--kplus",
        "100",
        "--max_iters",
        "1",
        "--output_dir",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn missing_config_file_exits_three() {
    let out = impregnate(&["check", "--config", "/nonexistent/path/case.conf"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn invalid_values_exit_four() {
    let out = impregnate(&["check", "--n", "0"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n"));
    let out = impregnate(&["check", "--sigma", "-2"]);
    assert_eq!(code(&out), 4);
}

/// Minimal XML well-formedness check: every tag closes, attributes keep
/// balanced quotes, exactly one root element. Enough for the SVG we emit.
fn assert_well_formed_xml(text: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut roots = 0;
    let mut rest = text;
    while let Some(start) = rest.find('<') {
        rest = &rest[start..];
        let end = rest.find('>').expect("unterminated tag");
        let tag = &rest[1..end];
        rest = &rest[end + 1..];
        if tag.starts_with('?') || tag.starts_with("!--") {
            continue;
        }
        assert_eq!(
            tag.matches('"').count() % 2,
            0,
            "unbalanced quotes in <{tag}>"
        );
        if let Some(name) = tag.strip_prefix('/') {
            let open = stack.pop().unwrap_or_else(|| panic!("stray </{name}>"));
            assert_eq!(open, name.trim(), "mismatched closing tag");
            if stack.is_empty() {
                roots += 1;
            }
        } else if !tag.ends_with('/') {
            let name = tag.split_whitespace().next().unwrap().to_string();
            stack.push(name);
        } else if stack.is_empty() {
            roots += 1;
        }
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    assert_eq!(roots, 1, "expected exactly one root element");
}
