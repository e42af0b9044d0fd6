#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracelab::fem::{DomainKind, DomainSpec, FemProblem};
use tracelab::identity_suite::random_operator;
use tracelab::operator::WeightedOperator;

pub const SUITE_SEED: u64 = 4242;

/// (seed, dim_dom, dim_cod, rank) for `count` pairs with dims in 1..=50.
pub fn pair_specs(count: usize) -> Vec<(u64, usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=50);
            let n = rng.random_range(1..=50);
            let r = rng.random_range(0..=m.min(n));
            (rng.random(), m, n, r)
        })
        .collect()
}

pub fn random_pairs(count: usize) -> Vec<(String, WeightedOperator, WeightedOperator)> {
    pair_specs(count)
        .into_iter()
        .map(|(seed, m, n, r)| {
            let (a, b) = random_operator(seed, m, n, r).expect("random pair");
            (format!("seed={seed} {m}x{n} rank {r}"), a, b)
        })
        .collect()
}

pub fn problem(kind: DomainKind, refine: usize) -> FemProblem {
    FemProblem::build(DomainSpec::new(kind, refine)).expect("mesh builds")
}

/// The small meshes used across the FEM tests.
pub fn test_meshes() -> Vec<(DomainKind, usize)> {
    let mut v = Vec::new();
    for kind in [DomainKind::Square, DomainKind::LShape] {
        for refine in 0..=2 {
            v.push((kind, refine));
        }
    }
    v.push((DomainKind::NGon(8), 1));
    v
}

pub fn tag(p: &FemProblem) -> String {
    format!("{}/r{}", p.label(), p.refine())
}
