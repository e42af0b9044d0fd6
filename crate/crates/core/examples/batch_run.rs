// Drives the batch runner from code: a config text, a run into a scratch
// directory, and the files it leaves behind.
//
// cargo run --example batch_run

use tracelab::cli::{parse_config, run, Command};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("tracelab-batch-{}", std::process::id()));
    let text = format!(
        "seed = 5\ndims = 6x4,10x10\ntrials = 4\nout = {}\n",
        dir.display()
    );
    let cfg = parse_config(&text, Command::VerifyIdentities)?;
    let outcome = run(&cfg)?;
    print!("{}", outcome.summary);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    std::fs::remove_dir_all(&dir)?;
    if outcome.exit_code() != 0 {
        return Err("a check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
