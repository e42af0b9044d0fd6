// T_{B*}(I+BB*)^{-s} = (I+B*B)^{-s}T_{B*} for several s, on a random pair
// and on the trace operator of an L-shaped domain, each side also compared
// with the closed form on the singular vectors of A.
//
// cargo run --example permutation_equality

use tracelab::fem::{DomainKind, DomainSpec, FemProblem};
use tracelab::identity_suite::{check_permutation, random_operator};
use tracelab::operator::pseudoinverse;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s_list = [-1.0, 0.25, 0.5, 0.75, 1.0, 2.0];

    let (a, b) = random_operator(11, 9, 6, 4)?;
    let p = FemProblem::build(DomainSpec::new(DomainKind::LShape, 1))?;
    let gamma = p.spaces.gamma.clone();
    let lambda = pseudoinverse(&gamma, None)?;

    for (label, a, b) in [("random 9x6", &a, &b), ("trace lshape/r1", &gamma, &lambda)] {
        println!("{label}");
        for r in check_permutation(a, b, &s_list)? {
            println!("  {:.3e}  {}", r.residual, r.context);
            if !r.pass {
                return Err(format!("permutation failed for {label}").into());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
