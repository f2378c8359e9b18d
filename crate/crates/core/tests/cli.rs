mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use dqsolve::format::{parse_dqm, parse_dqm_all, render_dqm};
use dqsolve::{solve_dual_system, verify_residual, ConditionMode, DualQuatMatrix, QuatMatrix, Tolerance};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn dqsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqsolve")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn system_flags() -> Vec<String> {
    ["A", "B", "C", "D"]
        .iter()
        .flat_map(|m| [format!("--{m}"), data(&format!("{}.dqm", m.to_lowercase())).display().to_string()])
        .collect()
}

fn with<'a>(head: &[&'a str], tail: &'a [String]) -> Vec<&'a str> {
    head.iter().copied().chain(tail.iter().map(String::as_str)).collect()
}

#[test]
fn data_files_hold_the_worked_example() {
    let w = worked();
    for (name, m) in [("a", &w.a), ("b", &w.b), ("c", &w.c), ("d", &w.d), ("x", &w.x)] {
        let text = std::fs::read_to_string(data(&format!("{name}.dqm"))).unwrap();
        assert_eq!(&parse_dqm(&text).unwrap(), m, "{name}.dqm");
    }
}

#[test]
fn solve_system_emits_a_verified_solution() {
    let flags = system_flags();
    let o = dqsolve(&with(&["solve", "system"], &flags));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# verdict: solvable"));
    assert!(text.contains("# tol 1e-10, rank-tol 1e-10, mode both"));
    let x = parse_dqm(&text).unwrap();
    let w = worked();
    let (r1, r2) = verify_residual(&w.a, &w.b, &w.c, &w.d, &x).unwrap();
    assert!(r1 <= 1e-10 && r2 <= 1e-10, "{r1} {r2}");
}

#[test]
fn solve_writes_out_file_and_verify_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.dqm");
    let out_s = out.display().to_string();
    let flags = system_flags();
    let o = dqsolve(&with(&["solve", "system", "--out", &out_s], &flags));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("solvable: wrote 2x2 solution to"));
    let o = dqsolve(&with(&["verify", "--X", &out_s], &flags));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: verified"));
}

#[test]
fn check_system_prints_the_rank_table() {
    let flags = system_flags();
    let o = dqsolve(&with(&["check", "system"], &flags));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for (name, rank) in [("RC1", 2), ("RC2", 2), ("RC3", 4), ("RC4", 2), ("RC5", 2), ("RC6", 4), ("RC7", 4)] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap_or_else(|| panic!("{name} missing:\n{text}"));
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols, [name, &rank.to_string(), &rank.to_string(), "PASS"], "{line}");
    }
    assert!(text.contains("verdict: solvable (rank conditions PASS, projector conditions PASS)"));
}

#[test]
fn verify_known_solution_and_zero() {
    let flags = system_flags();
    let x = data("x.dqm").display().to_string();
    let o = dqsolve(&with(&["verify", "--X", &x], &flags));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.dqm");
    std::fs::write(&zero, render_dqm(&DualQuatMatrix::zeros(2, 2), &[])).unwrap();
    let o = dqsolve(&with(&["verify", "--X", zero.to_str().unwrap()], &flags));
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    let w = worked();
    let residual = |prefix: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(prefix)).unwrap();
        line.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    assert!((residual("AX-B") - w.b.norm()).abs() <= 1e-6 * w.b.norm());
    assert!((residual("XC-D") - w.d.norm()).abs() <= 1e-6 * w.d.norm());
}

#[test]
fn perturbed_instance_is_unsolvable() {
    let w = worked();
    let b = dual(w.b.std().clone(), w.b.inf() + &QuatMatrix::identity(2));
    let dir = tempfile::tempdir().unwrap();
    let bp = dir.path().join("b.dqm");
    std::fs::write(&bp, render_dqm(&b, &["B1 + I".into()])).unwrap();
    let mut flags = system_flags();
    flags[3] = bp.display().to_string();
    for mode in ["projector", "rank", "both"] {
        let o = dqsolve(&with(&["solve", "system", "--mode", mode], &flags));
        assert_eq!(o.status.code(), Some(2), "{mode}");
        assert!(stdout(&o).starts_with("unsolvable: failed"), "{}", stdout(&o));
    }
    let o = dqsolve(&with(&["check", "system"], &flags));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("rank conditions FAIL, projector conditions FAIL"));
}

#[test]
fn sample_is_deterministic_and_matches_the_library() {
    let flags = system_flags();
    let args = with(&["sample", "--n", "3", "--seed", "41", "--scale", "0.5"], &flags);
    let first = dqsolve(&args);
    let second = dqsolve(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let samples = parse_dqm_all(&stdout(&first)).unwrap();
    assert_eq!(samples.len(), 3);

    let w = worked();
    let outcome = solve_dual_system(&w.a, &w.b, &w.c, &w.d, &Tolerance::default(), ConditionMode::Both)
        .unwrap()
        .outcome;
    for (i, x) in samples.iter().enumerate() {
        assert_eq!(x, &outcome.sample(41 + i as u64, 0.5).unwrap());
        let (r1, r2) = verify_residual(&w.a, &w.b, &w.c, &w.d, x).unwrap();
        assert!(r1 <= 1e-9 && r2 <= 1e-9);
    }
    assert!(stdout(&first).contains("# solution: general solution instance 2 of 3, seed 42, scale 0.5"));
}

#[test]
fn one_sided_and_eta_hermitian_commands() {
    let dir = tempfile::tempdir().unwrap();
    let put = |name: &str, m: &DualQuatMatrix| {
        let p = dir.path().join(name);
        std::fs::write(&p, render_dqm(m, &[])).unwrap();
        p.display().to_string()
    };
    let w = worked();
    let a = data("a.dqm").display().to_string();
    let b = data("b.dqm").display().to_string();
    let o = dqsolve(&["solve", "ax-b", "--A", &a, "--B", &b]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let x = parse_dqm(&stdout(&o)).unwrap();
    assert!((&(&w.a * &x) - &w.b).norm() <= 1e-10);

    let c = data("c.dqm").display().to_string();
    let d = data("d.dqm").display().to_string();
    let o = dqsolve(&["solve", "xc-d", "--C", &c, "--D", &d]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let x = parse_dqm(&stdout(&o)).unwrap();
    assert!((&(&x * &w.c) - &w.d).norm() <= 1e-10);
    let o = dqsolve(&["check", "xc-d", "--C", &c, "--D", &d]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("RC2")));

    // j^{i*} = j, so X = [[1, j], [j, 2]] is i-Hermitian and so is B = X^2.
    use dqsolve::quaternion::{J, ONE};
    let xh = dual(qm(&[&[ONE, J], &[J, q(2.0, 0.0, 0.0, 0.0)]]), QuatMatrix::zeros(2, 2));
    assert!(xh.is_eta_hermitian(dqsolve::EtaAxis::I, &Tolerance::default()).unwrap());
    let bh = &xh * &xh;
    let (ap, bp) = (put("ah.dqm", &xh), put("bh.dqm", &bh));
    let o = dqsolve(&["solve", "ax-b", "--A", &ap, "--B", &bp, "--eta", "i"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("eta i"), "{out}");
    let xp = put("xh.dqm", &parse_dqm(&out).unwrap());
    let o = dqsolve(&["verify", "--X", &xp, "--A", &ap, "--B", &bp, "--eta", "i"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // B = [[i]] is not i-Hermitian
    let ip = put("i.dqm", &dual(qm(&[&[dqsolve::quaternion::I]]), QuatMatrix::zeros(1, 1)));
    let one = put("one.dqm", &DualQuatMatrix::identity(1));
    let o = dqsolve(&["solve", "ax-b", "--A", &one, "--B", &ip, "--eta", "i"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not i-Hermitian"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dqm");
    std::fs::write(&bad, "# short\ndqmatrix 2 2\n(1 0 0 0)\n(1 0 0 0)\n(1 0 0 0)\n").unwrap();
    let bad = bad.display().to_string();
    let o = dqsolve(&["solve", "xc-d", "--C", &bad, "--D", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.dqm: line 2"), "{err}");

    let a = data("a.dqm").display().to_string();
    let c = data("c.dqm").display().to_string();
    let o = dqsolve(&["solve", "ax-b", "--A", &a, "--B", &c, "--tol", "nan"]);
    assert_eq!(o.status.code(), Some(1));

    let wide = dir.path().join("wide.dqm");
    std::fs::write(&wide, render_dqm(&DualQuatMatrix::zeros(3, 1), &[])).unwrap();
    let o = dqsolve(&["solve", "ax-b", "--A", &a, "--B", wide.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("shape mismatch"), "{}", stderr(&o));
}
