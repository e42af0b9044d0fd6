// A random rank-deficient operator between two weighted spaces, its
// Moore–Penrose inverse, and the four Penrose residuals.
//
// cargo run --example penrose_pair

use tracelab::identity_suite::{check_penrose, random_operator};
use tracelab::operator::{penrose_residuals, weighted_svd};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = random_operator(7, 12, 9, 5)?;
    let f = weighted_svd(&a, None)?;
    println!("A: {} -> {}, rank {}", a.domain().label(), a.codomain().label(), f.rank);
    println!("singular values: {:?}", f.values);

    let r = penrose_residuals(&a, &b)?;
    println!("|ABA - A| = {:.3e}", r.aba);
    println!("|BAB - B| = {:.3e}", r.bab);
    println!("AB self-adjoint defect = {:.3e}", r.ab_sym);
    println!("BA self-adjoint defect = {:.3e}", r.ba_sym);

    let report = check_penrose(&a, &b)?;
    if !report.pass {
        return Err(format!("Penrose check failed: {report:?}").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
