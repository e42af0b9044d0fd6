// Singular values of the P1 trace operator against the Steklov eigenvalues,
// s_k = (1 + λ_k)^{-1/2}, on a polygon approximating the unit disk.
// The continuum disk has λ = 0, 1, 1, 2, 2, 3, ...
//
// cargo run --release --example trace_spectrum

use tracelab::fem::{steklov, DomainKind, DomainSpec, FemProblem};
use tracelab::operator::weighted_svd;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = FemProblem::build(DomainSpec::new(DomainKind::NGon(16), 1))?;
    let f = weighted_svd(&p.spaces.gamma, None)?;
    let st = steklov(&p.mesh, &p.mats)?;
    println!("{} vertices, {} on the boundary", p.dofs(), p.mats.n_boundary());
    println!("op_norm(Gamma) = {:.15}", f.values[0]);
    println!(" k   lambda_k     s_k (Steklov)      s_k (SVD)");
    for k in 0..6 {
        println!(
            "{k:2}  {:9.6}  {:.15}  {:.15}",
            st.lambdas[k], st.sigmas[k], f.values[k]
        );
    }
    let gap = st
        .sigmas
        .iter()
        .zip(&f.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max |s_Steklov - s_SVD| = {gap:.3e}");
    if gap > 1e-9 || (f.values[0] - 1.0).abs() > 1e-10 {
        return Err("trace spectrum mismatch".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
