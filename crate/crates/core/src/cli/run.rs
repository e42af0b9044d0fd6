use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Command, RunConfig};
use crate::error::{Error, Result};
use crate::fem::{DomainSpec, FemProblem};
use crate::identity_suite::{check_fem_trace, random_operator, standard_battery, ResidualReport};
use crate::inequality_lab::{ConstantsRow, InequalityLab, NormMode, DEFAULT_PROBE_SEED};

pub const IDENTITIES_CSV: &str = "identities.csv";
pub const CONSTANTS_CSV: &str = "constants.csv";
pub const SUMMARY_TXT: &str = "summary.txt";

pub const IDENTITIES_HEADER: &str = "name,context,residual,tolerance,pass";
pub const CONSTANTS_HEADER: &str = "theorem,mesh,refine,dofs,s,c_low,c_high,worst_violation,mode";

/// Exit status of a finished run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub all_passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.all_passed {
            EXIT_OK
        } else {
            EXIT_FAILED_CHECK
        }
    }
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn identities_csv(reports: &[ResidualReport]) -> String {
    let mut out = String::from(IDENTITIES_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.name,
            r.context.replace(',', ";"),
            fmt_real(r.residual),
            fmt_real(r.tolerance),
            r.pass
        );
    }
    out
}

pub fn constants_csv(rows: &[ConstantsRow]) -> String {
    let mut out = String::from(CONSTANTS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.theorem,
            r.mesh,
            r.refine,
            r.dofs,
            fmt_real(r.s),
            fmt_real(r.c_low),
            fmt_real(r.c_high),
            fmt_real(r.worst_violation),
            r.mode
        );
    }
    out
}

fn error_report(name: &str, context: String, e: &Error) -> ResidualReport {
    let mut r = ResidualReport::new(name, f64::INFINITY, 0.0);
    r.context = format!("{context} error: {e}");
    r
}

/// Seed and rank of one random trial, drawn from a dedicated ChaCha stream.
fn trial_draw(seed: u64, pair: usize, trial: usize, max_rank: usize) -> (u64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((pair as u64) << 32) | trial as u64);
    let rank = rng.random_range(0..=max_rank);
    (rng.next_u64(), rank)
}

/// Nine residual rows per trial for every `dims` pair.
pub fn verify_identities(cfg: &RunConfig) -> Vec<ResidualReport> {
    let s_values = cfg.effective_s_values();
    let cells: Vec<(usize, (usize, usize), usize)> = cfg
        .dims
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| (0..cfg.trials).map(move |t| (i, d, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(pair, (dom, cod), trial)| {
            let (op_seed, rank) = trial_draw(cfg.seed, pair, trial, dom.min(cod));
            let ctx = format!("seed={} dims={dom}x{cod} rank={rank} trial={trial}", cfg.seed);
            match random_operator(op_seed, dom, cod, rank)
                .and_then(|(a, b)| standard_battery(&a, &b, &s_values))
            {
                Ok(reports) => reports.into_iter().map(|r| r.with_context(&ctx)).collect(),
                Err(e) => vec![error_report("battery", ctx, &e)],
            }
        })
        .collect::<Vec<Vec<_>>>()
        .concat()
}

fn build_problem(cfg: &RunConfig) -> Result<FemProblem> {
    FemProblem::build(DomainSpec::new(cfg.domain, cfg.refine))
}

/// Trace-operator checks; also returns the summary lines.
pub fn fem_check(cfg: &RunConfig) -> Result<(Vec<ResidualReport>, String)> {
    let problem = build_problem(cfg)?;
    let ctx = format!("mesh={} refine={}", problem.label(), problem.refine());
    let spectrum = check_fem_trace(&problem, &cfg.effective_s_values())?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "mesh {} refine {}: {} vertices, {} boundary",
        problem.label(),
        problem.refine(),
        problem.dofs(),
        problem.mats.n_boundary()
    );
    let norm = spectrum.sigmas.first().copied().unwrap_or(0.0);
    let _ = writeln!(text, "op_norm(Gamma)={norm:.12}");
    let head: Vec<String> = spectrum
        .lambdas
        .iter()
        .take(6)
        .map(|l| format!("{l:.6}"))
        .collect();
    let _ = writeln!(text, "steklov lambda_0..: {}", head.join(" "));
    let reports = spectrum
        .reports
        .into_iter()
        .map(|r| r.with_context(&ctx))
        .collect();
    Ok((reports, text))
}

enum Cell {
    Trace(f64, NormMode),
    Harmonic(f64, NormMode),
    Bergman,
    Interpolation,
}

/// Constant sweeps. Trace and harmonic rows come in each selected mode; the
/// sandwich and interpolation rows are graph norms only.
pub fn constants(cfg: &RunConfig) -> Result<(Vec<ConstantsRow>, String, bool)> {
    let problem = build_problem(cfg)?;
    let lab = InequalityLab::new(&problem, cfg.seed ^ DEFAULT_PROBE_SEED)?;
    let s_values = cfg.effective_s_values();
    let modes = cfg.mode.modes();
    let mut cells = Vec::new();
    for &m in &modes {
        cells.extend(s_values.iter().map(|&s| Cell::Trace(s, m)));
    }
    for &m in &modes {
        cells.extend(cfg.harmonic_s.iter().map(|&s| Cell::Harmonic(s, m)));
    }
    cells.push(Cell::Bergman);
    cells.push(Cell::Interpolation);

    let results: Vec<Result<(Vec<ConstantsRow>, Option<String>)>> = cells
        .par_iter()
        .map(|cell| match *cell {
            Cell::Trace(s, m) => Ok((vec![lab.trace_equivalence_constants(s, m)?], None)),
            Cell::Harmonic(s, m) => Ok((vec![lab.harmonic_inequality_check(s, m)?], None)),
            Cell::Bergman => {
                let b = lab.bergman_sandwich()?;
                let note = format!(
                    "bergman: c_low={:.12} c_high={:.12} middle_identity={:.3e} extremal_gaps={:.3e},{:.3e}",
                    b.row.c_low, b.row.c_high, b.middle_identity, b.low_gap, b.high_gap
                );
                let ok = b.middle_identity <= 1e-9 && b.low_gap <= 1e-9 && b.high_gap <= 1e-9;
                Ok((vec![b.row], Some(if ok { note } else { format!("FAIL {note}") })))
            }
            Cell::Interpolation => Ok((lab.interpolation_scan(&s_values)?, None)),
        })
        .collect();

    let mut rows = Vec::new();
    let mut notes = String::new();
    let mut ok = true;
    for r in results {
        let (mut part, note) = r?;
        if let Some(n) = note {
            ok &= !n.starts_with("FAIL");
            let _ = writeln!(notes, "{n}");
        }
        rows.append(&mut part);
    }
    ok &= rows.iter().all(|r| r.holds() && r.c_low.is_finite() && r.c_high.is_finite());
    ok &= rows
        .iter()
        .all(|r| r.c_low <= r.c_high * (1.0 + 1e-12) && (r.c_low > 0.0 || r.dofs == 0));
    let mut text = format!(
        "mesh {} refine {}: {} vertices, ‖T_Λ*‖={:.12}\n",
        problem.label(),
        problem.refine(),
        problem.dofs(),
        lab.t_norm()
    );
    text.push_str(&notes);
    Ok((rows, text, ok))
}

fn summary_header(cfg: &RunConfig) -> String {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut text = format!("tracelab {} at unix time {stamp}\n\nconfig:\n", cfg.command);
    for line in cfg.emit().lines() {
        let _ = writeln!(text, "  {line}");
    }
    text.push('\n');
    text
}

fn residual_lines(reports: &[ResidualReport]) -> String {
    let failed: Vec<&ResidualReport> = reports.iter().filter(|r| !r.pass).collect();
    let skipped = reports.iter().filter(|r| r.skipped).count();
    let worst = reports
        .iter()
        .filter(|r| r.pass && !r.skipped)
        .map(|r| r.residual / r.tolerance.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let mut text = format!(
        "checks: {} total, {} failed, {} skipped; worst residual/tolerance among passes {:.3e}\n",
        reports.len(),
        failed.len(),
        skipped,
        worst
    );
    for r in failed {
        let _ = writeln!(
            text,
            "FAIL {} residual={:.3e} tolerance={:.1e} {}",
            r.name, r.residual, r.tolerance, r.context
        );
    }
    text
}

fn constants_lines(rows: &[ConstantsRow]) -> String {
    let mut text = String::new();
    for r in rows {
        let _ = writeln!(
            text,
            "{:<20} {:<9} s={:<6} c_low={:.6} c_high={:.6} worst_violation={:.3e}{}",
            r.theorem,
            r.mode,
            r.s,
            r.c_low,
            r.c_high,
            r.worst_violation,
            if r.holds() { "" } else { "  FAIL" }
        );
    }
    text
}

/// Parsed row of a previously written CSV, as raw fields.
fn read_csv(path: &Path, header: &str) -> Result<Vec<Vec<String>>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(Error::Config {
            location: path.display().to_string(),
            message: format!("expected header '{header}'"),
        });
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .map(|(i, l)| {
            let fields: Vec<String> = l.split(',').map(str::to_string).collect();
            if fields.len() != width {
                return Err(Error::Config {
                    location: format!("{} line {}", path.display(), i + 2),
                    message: format!("expected {width} fields, got {}", fields.len()),
                });
            }
            Ok(fields)
        })
        .collect()
}

fn parse_field(path: &Path, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Config {
        location: path.display().to_string(),
        message: format!("'{v}' is not a number"),
    })
}

/// Aggregates the CSVs already present in the output directory.
pub fn report(cfg: &RunConfig) -> Result<(String, bool)> {
    let dir = &cfg.output_path;
    let ids = dir.join(IDENTITIES_CSV);
    let cons = dir.join(CONSTANTS_CSV);
    if !ids.exists() && !cons.exists() {
        return Err(Error::Config {
            location: dir.display().to_string(),
            message: format!("neither {IDENTITIES_CSV} nor {CONSTANTS_CSV} found"),
        });
    }
    let mut text = String::new();
    let mut ok = true;
    if ids.exists() {
        let rows = read_csv(&ids, IDENTITIES_HEADER)?;
        let mut names: Vec<String> = Vec::new();
        for r in &rows {
            if !names.contains(&r[0]) {
                names.push(r[0].clone());
            }
        }
        let _ = writeln!(text, "{IDENTITIES_CSV}: {} rows", rows.len());
        for name in names {
            let mine: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == name).collect();
            let fails = mine.iter().filter(|r| r[4] != "true").count();
            let mut worst = 0.0_f64;
            for r in &mine {
                worst = worst.max(parse_field(&ids, &r[2])?);
            }
            ok &= fails == 0;
            let _ = writeln!(
                text,
                "  {name:<22} rows={:<4} failed={fails:<3} max_residual={worst:.3e}",
                mine.len()
            );
        }
    }
    if cons.exists() {
        let rows = read_csv(&cons, CONSTANTS_HEADER)?;
        let _ = writeln!(text, "{CONSTANTS_CSV}: {} rows", rows.len());
        let mut groups: Vec<(String, String)> = Vec::new();
        for r in &rows {
            let key = (r[0].clone(), r[8].clone());
            if !groups.contains(&key) {
                groups.push(key);
            }
        }
        for (theorem, mode) in groups {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0_f64;
            let mut worst = f64::NEG_INFINITY;
            let mut n = 0;
            for r in rows.iter().filter(|r| r[0] == theorem && r[8] == mode) {
                lo = lo.min(parse_field(&cons, &r[5])?);
                hi = hi.max(parse_field(&cons, &r[6])?);
                worst = worst.max(parse_field(&cons, &r[7])?);
                n += 1;
            }
            ok &= worst <= crate::inequality_lab::VIOLATION_TOL;
            let _ = writeln!(
                text,
                "  {theorem:<20} {mode:<9} rows={n:<3} c_low>={lo:.6} c_high<={hi:.6} worst_violation={worst:.3e}"
            );
        }
    }
    Ok((text, ok))
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    files
        .iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(path)
        })
        .collect()
}

/// Runs one command and writes its files into `cfg.output_path`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut summary = summary_header(cfg);
    let (csv, all_passed) = match cfg.command {
        Command::VerifyIdentities => {
            let reports = verify_identities(cfg);
            summary.push_str(&residual_lines(&reports));
            let ok = reports.iter().all(|r| r.pass);
            (Some((IDENTITIES_CSV, identities_csv(&reports))), ok)
        }
        Command::FemCheck => {
            let (reports, text) = fem_check(cfg)?;
            summary.push_str(&text);
            summary.push_str(&residual_lines(&reports));
            let ok = reports.iter().all(|r| r.pass);
            (Some((IDENTITIES_CSV, identities_csv(&reports))), ok)
        }
        Command::Constants => {
            let (rows, text, ok) = constants(cfg)?;
            summary.push_str(&text);
            summary.push_str(&constants_lines(&rows));
            (Some((CONSTANTS_CSV, constants_csv(&rows))), ok)
        }
        Command::Report => {
            let (text, ok) = report(cfg)?;
            summary.push_str(&text);
            (None, ok)
        }
    };
    let _ = writeln!(summary, "\nresult: {}", if all_passed { "PASS" } else { "FAIL" });
    let mut files: Vec<(&str, String)> = csv.into_iter().collect();
    files.push((SUMMARY_TXT, summary.clone()));
    let files = write_outputs(&cfg.output_path, &files)?;
    Ok(RunOutcome {
        all_passed,
        files,
        summary,
    })
}
