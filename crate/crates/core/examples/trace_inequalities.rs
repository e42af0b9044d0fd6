// Equivalence constants between the graph norm ‖(I+Λ*Λ)^s g‖ on boundary
// functions and the spectral H^s(∂Ω) norm, across refinements.
//
// cargo run --example trace_inequalities

use tracelab::fem::{DomainKind, DomainSpec, FemProblem};
use tracelab::inequality_lab::{InequalityLab, NormMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("mesh       s     c_low     c_high    ratio");
    for kind in [DomainKind::Square, DomainKind::LShape] {
        for refine in [1, 2] {
            let p = FemProblem::build(DomainSpec::new(kind, refine))?;
            let lab = InequalityLab::new(&p, 1)?;
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let r = lab.trace_equivalence_constants(s, NormMode::Surrogate)?;
                println!(
                    "{:<8}r{refine} {s:4}  {:.6}  {:.6}  {:.6}",
                    kind.to_string(),
                    r.c_low,
                    r.c_high,
                    r.c_high / r.c_low
                );
                if !r.holds() {
                    return Err("probe outside the computed constants".into());
                }
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
