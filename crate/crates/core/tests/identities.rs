mod common;

use common::{problem, random_pairs, tag};
use proptest::prelude::*;
use tracelab::fem::DomainKind;
use tracelab::identity_suite::{
    check_penrose, check_permutation, random_operator, standard_battery, DEFAULT_PERMUTATION_S,
};
use tracelab::linalg::DenseMatrix;
use tracelab::operator::{
    adjoint, frac_graph_power, penrose_residuals, pseudoinverse, relative_residual, Side,
    WeightedOperator, WeightedSpace,
};

#[test]
fn battery_passes_on_random_pairs() {
    for (label, a, b) in random_pairs(40) {
        for r in standard_battery(&a, &b, &DEFAULT_PERMUTATION_S).unwrap() {
            assert!(r.pass, "{label}: {} {} {}", r.name, r.residual, r.context);
        }
    }
}

#[test]
fn permutation_on_trace_pairs_for_s_and_minus_s() {
    let s_list = [0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0];
    for kind in [DomainKind::Square, DomainKind::LShape] {
        for refine in 0..=2 {
            let p = problem(kind, refine);
            let gamma = &p.spaces.gamma;
            let lambda = pseudoinverse(gamma, None).unwrap();
            for r in check_permutation(gamma, &lambda, &s_list).unwrap() {
                assert!(r.pass, "{} {}", tag(&p), r.context);
            }
        }
    }
}

#[test]
fn zero_operator_is_its_own_pseudoinverse() {
    let (a, b) = random_operator(5, 7, 4, 0).unwrap();
    assert_eq!(a.matrix().max_abs(), 0.0);
    assert_eq!(b.matrix().max_abs(), 0.0);
    for r in standard_battery(&a, &b, &DEFAULT_PERMUTATION_S).unwrap() {
        assert!(r.pass, "{} {}", r.name, r.residual);
    }
}

#[test]
fn pseudoinverse_of_pseudoinverse_is_the_operator() {
    for (label, a, b) in random_pairs(20) {
        let back = pseudoinverse(&b, None).unwrap();
        let scale = 1.0 + a.matrix().frobenius_norm();
        let diff = (back.matrix() - a.matrix()).frobenius_norm() / scale;
        assert!(diff < 1e-10, "{label}: {diff}");
    }
}

fn weighted_pair() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 1usize..=12, 1usize..=12)
        .prop_flat_map(|(seed, m, n)| (Just(seed), Just(m), Just(n), 0..=m.min(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn penrose_conditions_hold((seed, m, n, r) in weighted_pair()) {
        let (a, b) = random_operator(seed, m, n, r).unwrap();
        let report = check_penrose(&a, &b).unwrap();
        prop_assert!(report.pass, "{}", report.context);
    }

    #[test]
    fn adjoint_moves_across_inner_product(
        (seed, m, n, r) in weighted_pair(),
        xs in prop::collection::vec(-1.0f64..1.0, 12),
        ys in prop::collection::vec(-1.0f64..1.0, 12),
    ) {
        let (a, _) = random_operator(seed, m, n, r).unwrap();
        let x = &xs[..m];
        let y = &ys[..n];
        let lhs = a.codomain().inner(&a.apply(x), y);
        let rhs = a.domain().inner(x, &adjoint(&a).apply(y));
        let scale = 1.0 + a.codomain().norm(&a.apply(x)) * a.codomain().norm(y);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn adjoint_is_an_involution((seed, m, n, r) in weighted_pair()) {
        let (a, _) = random_operator(seed, m, n, r).unwrap();
        let back = adjoint(&adjoint(&a));
        prop_assert!((back.matrix() - a.matrix()).frobenius_norm() <= 1e-9 * (1.0 + a.matrix().frobenius_norm()));
    }

    #[test]
    fn pseudoinverse_scales_inversely(
        (seed, m, n, r) in weighted_pair(),
        c in prop_oneof![0.01f64..0.5, 2.0f64..100.0, -100.0f64..-2.0],
    ) {
        let (a, b) = random_operator(seed, m, n, r).unwrap();
        let scaled = pseudoinverse(&a.scale(c), None).unwrap();
        let expected = b.scale(1.0 / c);
        let diff = (scaled.matrix() - expected.matrix()).frobenius_norm();
        prop_assert!(diff <= 1e-10 * (1.0 + expected.matrix().frobenius_norm()));
    }

    #[test]
    fn graph_powers_compose((seed, m, n, r) in weighted_pair(), s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let (a, _) = random_operator(seed, m, n, r).unwrap();
        for side in [Side::Domain, Side::Codomain] {
            let ps = frac_graph_power(&a, s, side).unwrap();
            let pt = frac_graph_power(&a, t, side).unwrap();
            let pst = frac_graph_power(&a, s + t, side).unwrap();
            prop_assert!(relative_residual(ps.compose(&pt).unwrap().matrix(), pst.matrix()) < 1e-10);
        }
    }
}

#[test]
fn penrose_detects_a_wrong_inverse() {
    let (a, b) = random_operator(9, 6, 5, 3).unwrap();
    let wrong = b.scale(1.5);
    assert!(penrose_residuals(&a, &wrong).unwrap().relative() > 1e-3);
}

#[test]
fn euclidean_pseudoinverse_matches_normal_equations() {
    // full column rank: A† = (AᵀA)⁻¹Aᵀ
    let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0], &[3.0, -1.0]]);
    let a = WeightedOperator::new(
        WeightedSpace::euclidean("x", 2),
        WeightedSpace::euclidean("y", 3),
        m.clone(),
    )
    .unwrap();
    let ata = m.tr_matmul(&m);
    let det = ata.as_slice()[0] * ata.as_slice()[3] - ata.as_slice()[1] * ata.as_slice()[2];
    let inv = DenseMatrix::from_rows(&[
        &[ata.as_slice()[3] / det, -ata.as_slice()[1] / det],
        &[-ata.as_slice()[2] / det, ata.as_slice()[0] / det],
    ]);
    let expected = inv.matmul(&m.transpose());
    let b = pseudoinverse(&a, None).unwrap();
    assert!(relative_residual(b.matrix(), &expected) < 1e-14);
}
