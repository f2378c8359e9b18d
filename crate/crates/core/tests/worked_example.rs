mod common;

use common::*;
use dqsolve::quaternion::{I, J, K};
use dqsolve::{rank_report, solve_dual_system, verify_residual, ConditionMode, Tolerance};

#[test]
fn compatibility_products() {
    let w = worked();
    let (a0, a1) = (w.a.std(), w.a.inf());
    let (b0, b1) = (w.b.std(), w.b.inf());
    let (c0, c1) = (w.c.std(), w.c.inf());
    let (d0, d1) = (w.d.std(), w.d.inf());
    let ad = qm(&[&[q(-1.0, 1.0, -1.0, 0.0), -K], &[K, -J]]);
    assert_eq!(a0 * d0, ad);
    assert_eq!(b0 * c0, ad);
    let cross = qm(&[&[-J, -K], &[q(-2.0, -1.0, 0.0, 0.0), I]]);
    assert_eq!(&(a0 * d1) - &(b0 * c1), cross);
    assert_eq!(&(b1 * c0) - &(a1 * d0), cross);
}

#[test]
fn ranks_and_verdicts() {
    let w = worked();
    let tol = Tolerance::default();
    let report = rank_report(&w.a, &w.b, &w.c, &w.d, &tol).unwrap();
    let expected = [("RC1", 2), ("RC2", 2), ("RC3", 4), ("RC4", 2), ("RC5", 2), ("RC6", 4), ("RC7", 4)];
    for (name, rank) in expected {
        let check = report.rank(name).unwrap_or_else(|| panic!("{name} missing"));
        assert!(check.pass, "{name}: {check:?}");
        assert_eq!(check.sides().1, rank.to_string(), "{name}");
    }
    assert!(report.all_pass());
}

#[test]
fn known_solution_and_particular_solution() {
    let w = worked();
    let (rab, rxc) = verify_residual(&w.a, &w.b, &w.c, &w.d, &w.x).unwrap();
    assert!(rab <= 1e-12 && rxc <= 1e-12, "{rab} {rxc}");

    let tol = Tolerance::default();
    let analysis = solve_dual_system(&w.a, &w.b, &w.c, &w.d, &tol, ConditionMode::Both).unwrap();
    assert!(analysis.outcome.solvable, "{:?}", analysis.outcome.failed_conditions);
    let x = analysis.outcome.particular.clone().unwrap();
    let (rab, rxc) = verify_residual(&w.a, &w.b, &w.c, &w.d, &x).unwrap();
    assert!(rab <= 1e-10 && rxc <= 1e-10, "{rab} {rxc}");
    assert!(analysis.ledger.shapes_consistent(2, 2, 2, 2));
    for seed in 0..10 {
        let x = analysis.outcome.sample(seed, 1.0).unwrap();
        let (rab, rxc) = verify_residual(&w.a, &w.b, &w.c, &w.d, &x).unwrap();
        assert!(rab <= 1e-9 && rxc <= 1e-9, "seed {seed}: {rab} {rxc}");
    }
}
