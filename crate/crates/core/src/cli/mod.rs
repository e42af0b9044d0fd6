//! Batch front end: config parsing, the four commands, CSV and summary output.
//!
//! Exit status: 0 when every check passed, 1 when any check failed (files are
//! still written), 2 on a configuration error.

mod config;
mod run;

use std::ffi::OsString;
use std::fs;

use clap::Parser;

pub use config::{
    parse_config, Command, ModeSelection, RunConfig, DEFAULT_OUT_DIR, KEYS, OUT_DIR_ENV,
};
pub use run::{
    constants, constants_csv, fem_check, fmt_real, identities_csv, report, run,
    verify_identities, RunOutcome, CONSTANTS_CSV, CONSTANTS_HEADER, EXIT_CONFIG,
    EXIT_FAILED_CHECK, EXIT_OK, IDENTITIES_CSV, IDENTITIES_HEADER, SUMMARY_TXT,
};

use crate::error::{Error, Result};

const AFTER_HELP: &str = "\
Config files hold `key = value` lines (# starts a comment). Keys: command, seed,
dims, trials, domain, refine, s_values (alias s), harmonic_s, output_path
(alias out), mode. Flags override file values.

Defaults: seed 1, dims 8x6, trials 20, domain square, refine 1, mode both,
harmonic_s 1.05,1.25,1.45, output directory $TRACELAB_OUT_DIR or ./tracelab-out.
s_values defaults to -1,0.25,0.5,0.75,1,2 (permutation exponents) for
verify-identities and fem-check, and to 0,0.1,...,1 for constants, where it
must lie in [0, 1].

Outputs: identities.csv (verify-identities, fem-check), constants.csv
(constants), summary.txt (all). report re-reads the CSVs in the output
directory and rewrites summary.txt.";

#[derive(Parser, Debug)]
#[command(name = "tracelab", version, about = "Moore-Penrose identity and trace-inequality checks", after_help = AFTER_HELP)]
pub struct Args {
    /// verify-identities, fem-check, constants or report
    #[arg(value_parser = parse_command)]
    pub command: Command,
    /// Base seed for random pairs and probes
    #[arg(long)]
    pub seed: Option<String>,
    /// Domain x codomain dimensions, e.g. 8x6,20x20
    #[arg(long)]
    pub dims: Option<String>,
    /// Random pairs per dims entry
    #[arg(long)]
    pub trials: Option<String>,
    /// square, lshape or ngon:<sides>
    #[arg(long)]
    pub domain: Option<String>,
    /// Quadrisection levels
    #[arg(long)]
    pub refine: Option<String>,
    /// Comma-separated exponents
    #[arg(long = "s", allow_hyphen_values = true)]
    pub s_values: Option<String>,
    /// Exponents in (1, 3/2) for the harmonic inequality
    #[arg(long = "harmonic-s")]
    pub harmonic_s: Option<String>,
    /// graph, surrogate or both
    #[arg(long)]
    pub mode: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    /// key = value config file
    #[arg(long)]
    pub config: Option<String>,
}

fn parse_command(s: &str) -> std::result::Result<Command, String> {
    s.parse()
}

/// Merges the config file (if any) with flag overrides.
pub fn resolve(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config {
                location: "--config".into(),
                message: format!("cannot read {path}: {e}"),
            })?;
            parse_config(&text, args.command)?
        }
        None => RunConfig::defaults(args.command),
    };
    cfg.command = args.command;
    let flags = [
        ("seed", "--seed", &args.seed),
        ("dims", "--dims", &args.dims),
        ("trials", "--trials", &args.trials),
        ("domain", "--domain", &args.domain),
        ("refine", "--refine", &args.refine),
        ("s_values", "--s", &args.s_values),
        ("harmonic_s", "--harmonic-s", &args.harmonic_s),
        ("mode", "--mode", &args.mode),
        ("output_path", "--out", &args.out),
    ];
    for (key, flag, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v, flag)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cfg = match resolve(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("tracelab: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            outcome.exit_code()
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("tracelab: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("tracelab: {e}");
            EXIT_FAILED_CHECK
        }
    }
}
