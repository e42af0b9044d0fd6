// The s = 1 sandwich c₁′‖v‖ ≤ ‖(I+F₁*F₁)^{1/2}E₁v‖ ≤ c₂′‖v‖ on discrete
// harmonic functions, and the scan over 0 ≤ s ≤ 1 that connects the L²
// norm (s = 0) to it.
//
// cargo run --example bergman_interpolation

use tracelab::fem::{DomainKind, DomainSpec, FemProblem};
use tracelab::inequality_lab::InequalityLab;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = FemProblem::build(DomainSpec::new(DomainKind::Square, 2))?;
    let lab = InequalityLab::new(&p, 1)?;
    let b = lab.bergman_sandwich()?;
    println!(
        "sandwich: c_low={:.12} c_high={:.12} worst violation {:.3e}",
        b.row.c_low, b.row.c_high, b.row.worst_violation
    );
    println!(
        "middle identity {:.3e}, extremal gaps {:.3e} / {:.3e}",
        b.middle_identity, b.low_gap, b.high_gap
    );
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    for r in lab.interpolation_scan(&grid)? {
        println!("s={:<4} c_low={:.9} c_high={:.9}", r.s, r.c_low, r.c_high);
    }
    if !b.row.holds() || b.middle_identity > 1e-9 {
        return Err("sandwich check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
