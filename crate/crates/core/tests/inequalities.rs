mod common;

use common::{problem, tag, test_meshes};
use tracelab::fem::DomainKind;
use tracelab::inequality_lab::{InequalityLab, NormMode};
use tracelab::operator::{frac_graph_power, Side};

#[test]
fn graph_mode_harmonic_constants_do_not_depend_on_s() {
    for (kind, refine) in [(DomainKind::Square, 1), (DomainKind::LShape, 2)] {
        let p = problem(kind, refine);
        let lab = InequalityLab::new(&p, 3).unwrap();
        let rows: Vec<_> = [1.05, 1.25, 1.45]
            .iter()
            .map(|&s| lab.harmonic_inequality_check(s, NormMode::Graph).unwrap())
            .collect();
        for r in &rows {
            assert!((r.c_low - rows[0].c_low).abs() < 1e-12);
            assert!((r.c_high - rows[0].c_high).abs() < 1e-12);
            assert!((r.c_high - lab.t_norm()).abs() < 1e-10, "{}", tag(&p));
        }
        assert!((lab.t_norm() - 2f64.sqrt()).abs() < 1e-10);
    }
}

#[test]
fn surrogate_harmonic_constants_approach_s_equal_one() {
    let p = problem(DomainKind::Square, 1);
    let lab = InequalityLab::new(&p, 3).unwrap();
    let at = |s: f64| lab.harmonic_inequality_check(s, NormMode::Surrogate).unwrap();
    let rows: Vec<_> = [1e-3, 1e-5, 1e-7].iter().map(|h| at(1.0 + h)).collect();
    let d1 = (rows[0].c_high - rows[2].c_high).abs();
    let d2 = (rows[1].c_high - rows[2].c_high).abs();
    assert!(d2 < 2e-2 * d1.max(1e-12), "{d1} {d2}");
    assert!((rows[1].c_low - rows[2].c_low).abs() < 1e-3);
    for r in &rows {
        assert!(r.holds());
    }
}

#[test]
fn constant_functions_scale_by_a_power_of_two() {
    let p = problem(DomainKind::LShape, 1);
    let lab = InequalityLab::new(&p, 3).unwrap();
    let ones = vec![1.0; p.dofs()];
    let trace = p.spaces.gamma.apply(&ones);
    let base = p.spaces.l2_boundary.norm(&trace);
    for s in [1.05, 1.25, 1.45] {
        let lifted = frac_graph_power(lab.lambda(), -(s - 0.5), Side::Domain)
            .unwrap()
            .apply(&trace);
        let lhs = p.spaces.l2_boundary.norm(&lifted);
        let expected = 2f64.powf(s - 0.5) * base;
        assert!((lhs - expected).abs() < 1e-10 * expected, "s={s}: {lhs} vs {expected}");
    }
}

#[test]
fn trace_constants_hold_for_every_probe() {
    for (kind, refine) in test_meshes() {
        let p = problem(kind, refine);
        let lab = InequalityLab::new(&p, 3).unwrap();
        for mode in [NormMode::Graph, NormMode::Surrogate] {
            for s in [0.0, 0.5, 1.0] {
                let r = lab.trace_equivalence_constants(s, mode).unwrap();
                assert!(r.holds(), "{} {mode} s={s}: {}", tag(&p), r.worst_violation);
                assert!(r.c_low > 0.0 && r.c_low <= r.c_high + 1e-12);
            }
        }
    }
}

#[test]
fn exponents_outside_the_ranges_are_rejected() {
    let p = problem(DomainKind::Square, 0);
    let lab = InequalityLab::new(&p, 3).unwrap();
    assert!(lab.trace_equivalence_constants(-0.1, NormMode::Graph).is_err());
    assert!(lab.trace_equivalence_constants(1.1, NormMode::Surrogate).is_err());
    for s in [1.0, 1.5, 0.5] {
        assert!(lab.harmonic_inequality_check(s, NormMode::Graph).is_err());
    }
    assert!(lab.interpolation_scan(&[0.5, 1.2]).is_err());
}

#[test]
fn same_seed_same_rows() {
    let p = problem(DomainKind::LShape, 1);
    let a = InequalityLab::new(&p, 11).unwrap();
    let b = InequalityLab::new(&p, 11).unwrap();
    assert_eq!(
        a.harmonic_inequality_check(1.25, NormMode::Surrogate).unwrap(),
        b.harmonic_inequality_check(1.25, NormMode::Surrogate).unwrap()
    );
    assert_eq!(a.bergman_sandwich().unwrap(), b.bergman_sandwich().unwrap());
}

#[test]
fn interpolation_scan_ends_match_sandwich() {
    let p = problem(DomainKind::LShape, 1);
    let lab = InequalityLab::new(&p, 3).unwrap();
    let rows = lab.interpolation_scan(&[0.0, 0.5, 1.0]).unwrap();
    let b = lab.bergman_sandwich().unwrap();
    assert!((rows[0].c_low - 1.0).abs() < 1e-10 && (rows[0].c_high - 1.0).abs() < 1e-10);
    assert!((rows[2].c_low - b.row.c_low).abs() < 1e-9);
    assert!((rows[2].c_high - b.row.c_high).abs() < 1e-9);
    assert!(rows.iter().all(|r| r.holds()));
}
