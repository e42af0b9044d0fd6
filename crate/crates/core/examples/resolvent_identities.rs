// The resolvent identities of a Moore–Penrose pair, on a full-rank pair and
// on a pair whose adjoint has a kernel (identity 5 is then skipped).
//
// cargo run --example resolvent_identities

use tracelab::identity_suite::{check_resolvent_identities, random_operator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (seed, dom, cod, rank) in [(1, 6, 6, 6), (3, 10, 7, 4)] {
        let (a, b) = random_operator(seed, dom, cod, rank)?;
        println!("pair seed={seed} {dom}x{cod} rank {rank}");
        for r in check_resolvent_identities(&a, &b)? {
            println!("  {:<12} {:.3e} {}", r.name, r.residual, r.context);
            if !r.pass {
                return Err(format!("{} failed", r.name).into());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
