//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::time::{Duration, Instant};

use common::{problem, random_pairs, tag, test_meshes};
use tracelab::cli::{self, Command, RunConfig, CONSTANTS_CSV, IDENTITIES_CSV};
use tracelab::fem::{steklov, DomainKind, FemProblem};
use tracelab::identity_suite::{
    check_decomposition, check_penrose, check_permutation, check_resolvent_identities,
    check_tb_adjoint, check_tb_pinv, DEFAULT_PERMUTATION_S,
};
use tracelab::inequality_lab::{InequalityLab, NormMode, DEFAULT_HARMONIC_S};
use tracelab::operator::{pseudoinverse, weighted_svd, WeightedOperator};

const PENROSE_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-9;
const ADJOINT_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;
const STEKLOV_TOL: f64 = 1e-9;
const DISK_REL_TOL: f64 = 0.05;
const UNIT_TOL: f64 = 1e-10;
const DRIFT_LIMIT: f64 = 2.0;
const VIOLATION_TOL: f64 = 1e-9;
const PENROSE_BUDGET: Duration = Duration::from_secs(10);
const SPECTRUM_BUDGET: Duration = Duration::from_secs(60);
const N_PAIRS: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

type Pair = (String, WeightedOperator, WeightedOperator);

fn worst(acc: &mut (f64, String), value: f64, label: impl FnOnce() -> String) {
    if value > acc.0 || value.is_nan() {
        *acc = (value, label());
    }
}

fn fem_pairs() -> Vec<Pair> {
    let mut out = Vec::new();
    for kind in [DomainKind::Square, DomainKind::LShape] {
        for refine in 0..=2 {
            let p = problem(kind, refine);
            let gamma = p.spaces.gamma.clone();
            let lambda = pseudoinverse(&gamma, None).expect("trace pseudoinverse");
            out.push((format!("trace {}", tag(&p)), gamma, lambda));
        }
    }
    out
}

fn penrose_suite() -> (Outcome, Vec<Pair>) {
    let start = Instant::now();
    let pairs = random_pairs(N_PAIRS);
    let mut acc = (0.0, String::new());
    for (label, a, b) in &pairs {
        let r = check_penrose(a, b).expect("penrose");
        worst(&mut acc, r.residual, || label.clone());
    }
    let elapsed = start.elapsed();
    let pass = acc.0 <= PENROSE_TOL && elapsed <= PENROSE_BUDGET;
    let detail = format!(
        "{N_PAIRS} pairs, worst max residual/(1+|A|_F) {:.2e} <= {PENROSE_TOL:.0e} at {}; {:.2} s <= {} s",
        acc.0,
        acc.1,
        elapsed.as_secs_f64(),
        PENROSE_BUDGET.as_secs()
    );
    (Outcome { pass, detail }, pairs)
}

fn resolvents(pairs: &[Pair]) -> Outcome {
    let mut acc = (0.0, String::new());
    let mut applicable5 = 0;
    for (label, a, b) in pairs {
        for r in check_resolvent_identities(a, b).expect("resolvents") {
            if r.context.starts_with("skipped") {
                continue;
            }
            if r.name == "resolvent_5" {
                applicable5 += 1;
            }
            worst(&mut acc, r.residual, || format!("{} {label}", r.name));
        }
    }
    Outcome {
        pass: acc.0 <= IDENTITY_TOL,
        detail: format!(
            "items 1-4, 6 on {} pairs, item 5 on {applicable5}; worst {:.2e} <= {IDENTITY_TOL:.0e} ({})",
            pairs.len(),
            acc.0,
            acc.1
        ),
    }
}

fn permutation(pairs: &[Pair], fem: &[Pair]) -> Outcome {
    let mut acc = (0.0, String::new());
    for (label, a, b) in pairs.iter().chain(fem) {
        for r in check_permutation(a, b, &DEFAULT_PERMUTATION_S).expect("permutation") {
            worst(&mut acc, r.residual, || format!("{label} {}", r.context));
        }
    }
    Outcome {
        pass: acc.0 <= IDENTITY_TOL,
        detail: format!(
            "{} random + {} trace pairs, s in {:?}, both sides and spectral oracle; worst {:.2e} <= {IDENTITY_TOL:.0e} ({})",
            pairs.len(),
            fem.len(),
            DEFAULT_PERMUTATION_S,
            acc.0,
            acc.1
        ),
    }
}

fn tb_identities(pairs: &[Pair], fem: &[Pair]) -> Outcome {
    let mut ident = (0.0, String::new());
    let mut adj = (0.0, String::new());
    for (label, a, b) in pairs.iter().chain(fem) {
        for r in [check_decomposition(a, b), check_tb_pinv(a, b)] {
            let r = r.expect("decomposition");
            worst(&mut ident, r.residual, || format!("{} {label}", r.name));
        }
        let r = check_tb_adjoint(a, b).expect("tb adjoint");
        worst(&mut adj, r.residual, || label.clone());
    }
    Outcome {
        pass: ident.0 <= IDENTITY_TOL && adj.0 <= ADJOINT_TOL,
        detail: format!(
            "decomposition/T_B pseudoinverse worst {:.2e} <= {IDENTITY_TOL:.0e} ({}); adjoint(T_B) = T_B* (Hilbert-Schmidt) worst {:.2e} <= {ADJOINT_TOL:.0e} ({})",
            ident.0, ident.1, adj.0, adj.1
        ),
    }
}

/// (|‖Γ‖ − 1|, distance of the maximizer from constants, Steklov vs SVD, λ).
fn trace_facts(p: &FemProblem) -> (f64, f64, f64, Vec<f64>) {
    let gamma = &p.spaces.gamma;
    let h1 = gamma.domain();
    let f = weighted_svd(gamma, None).expect("svd of trace");
    let ones = vec![1.0; h1.dim()];
    let n1 = h1.norm(&ones);
    let top = f.right.col(0);
    let along = h1.inner(&top, &ones) / n1;
    let rest: Vec<f64> = top.iter().zip(&ones).map(|(t, o)| t - along * o / n1).collect();
    let st = steklov(&p.mesh, &p.mats).expect("steklov");
    let agreement = if st.sigmas.len() == f.rank {
        st.sigmas
            .iter()
            .zip(&f.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    ((f.values[0] - 1.0).abs(), h1.norm(&rest), agreement, st.lambdas)
}

fn trace_spectrum() -> Outcome {
    let start = Instant::now();
    let mut meshes = test_meshes();
    meshes.push((DomainKind::NGon(64), 2));
    let (mut norm, mut maxim, mut agree) = ((0.0, String::new()), (0.0, String::new()), (0.0, String::new()));
    let mut disk = (f64::INFINITY, Vec::new());
    for (kind, refine) in meshes {
        let p = problem(kind, refine);
        let label = tag(&p);
        let (dn, dm, da, lambdas) = trace_facts(&p);
        worst(&mut norm, dn, || label.clone());
        worst(&mut maxim, dm, || label.clone());
        worst(&mut agree, da, || label.clone());
        if kind == DomainKind::NGon(64) {
            let target = [1.0, 1.0, 2.0, 2.0, 3.0];
            let rel = target
                .iter()
                .zip(&lambdas[1..6])
                .map(|(t, l)| (l - t).abs() / t)
                .fold(0.0, f64::max);
            disk = (rel, lambdas[1..6].to_vec());
        }
    }
    let elapsed = start.elapsed();
    let pass = norm.0 <= NORM_TOL
        && maxim.0 <= NORM_TOL
        && agree.0 <= STEKLOV_TOL
        && disk.0 <= DISK_REL_TOL
        && elapsed <= SPECTRUM_BUDGET;
    Outcome {
        pass,
        detail: format!(
            "|op_norm-1| {:.2e} ({}), maximizer off constants {:.2e} ({}) <= {NORM_TOL:.0e}; Steklov vs SVD {:.2e} <= {STEKLOV_TOL:.0e}; ngon:64/r2 lambda_1..5 = {:.4?}, worst rel. dev. {:.2}% <= 5%; {:.1} s <= {} s",
            norm.0,
            norm.1,
            maxim.0,
            maxim.1,
            agree.0,
            disk.1,
            100.0 * disk.0,
            elapsed.as_secs_f64(),
            SPECTRUM_BUDGET.as_secs()
        ),
    }
}

fn trace_inequalities() -> Outcome {
    let mut unit = (0.0, String::new());
    for (kind, refine) in test_meshes() {
        let p = problem(kind, refine);
        let lab = InequalityLab::new(&p, 1).expect("lab");
        for mode in [NormMode::Graph, NormMode::Surrogate] {
            let r = lab.trace_equivalence_constants(0.0, mode).expect("s = 0");
            let dev = (r.c_low - 1.0).abs().max((r.c_high - 1.0).abs());
            worst(&mut unit, dev, || format!("{} {mode}", tag(&p)));
        }
    }
    let mut ok = true;
    let mut drift = (0.0, String::new());
    for kind in [DomainKind::Square, DomainKind::LShape] {
        let ratios: Vec<Vec<f64>> = [1, 2]
            .iter()
            .map(|&refine| {
                let p = problem(kind, refine);
                let lab = InequalityLab::new(&p, 1).expect("lab");
                [0.25, 0.5, 0.75, 1.0]
                    .iter()
                    .map(|&s| {
                        let r = lab
                            .trace_equivalence_constants(s, NormMode::Surrogate)
                            .expect("constants");
                        ok &= r.c_low > 0.0 && r.c_low <= r.c_high && r.c_high.is_finite() && r.holds();
                        r.c_high / r.c_low
                    })
                    .collect()
            })
            .collect();
        for (k, s) in [0.25, 0.5, 0.75, 1.0].iter().enumerate() {
            let d = ratios[1][k] / ratios[0][k];
            let factor = d.max(1.0 / d);
            worst(&mut drift, factor, || format!("{kind} s={s}"));
        }
    }
    Outcome {
        pass: unit.0 <= UNIT_TOL && ok && drift.0 < DRIFT_LIMIT,
        detail: format!(
            "s=0 constants off (1,1) by {:.2e} <= {UNIT_TOL:.0e} ({}); 0 < c_low <= c_high < inf: {ok}; worst c_high/c_low drift r1->r2 x{:.3} < {DRIFT_LIMIT} ({})",
            unit.0, unit.1, drift.0, drift.1
        ),
    }
}

fn harmonic_inequality() -> Outcome {
    let mut acc = (f64::NEG_INFINITY, String::new());
    for (kind, refine) in test_meshes() {
        let p = problem(kind, refine);
        let lab = InequalityLab::new(&p, 1).expect("lab");
        for s in DEFAULT_HARMONIC_S {
            let r = lab.harmonic_inequality_check(s, NormMode::Graph).expect("harmonic");
            worst(&mut acc, r.worst_violation, || format!("{} s={s}", tag(&p)));
        }
    }
    Outcome {
        pass: acc.0 <= VIOLATION_TOL,
        detail: format!(
            "graph mode, s in {DEFAULT_HARMONIC_S:?}, basis + 100 random probes; worst relative violation {:.2e} <= {VIOLATION_TOL:.0e} ({})",
            acc.0, acc.1
        ),
    }
}

fn bergman() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for kind in [DomainKind::Square, DomainKind::LShape] {
        let p = problem(kind, 2);
        let lab = InequalityLab::new(&p, 1).expect("lab");
        let b = lab.bergman_sandwich().expect("sandwich");
        let ok = b.row.worst_violation <= VIOLATION_TOL
            && b.middle_identity <= VIOLATION_TOL
            && b.low_gap <= VIOLATION_TOL
            && b.high_gap <= VIOLATION_TOL;
        pass &= ok;
        lines.push(format!(
            "{}: c=({:.6}, {:.6}) violation {:.1e}, extremal gaps {:.1e}/{:.1e}, middle identity {:.1e}",
            tag(&p),
            b.row.c_low,
            b.row.c_high,
            b.row.worst_violation,
            b.low_gap,
            b.high_gap,
            b.middle_identity
        ));
    }
    Outcome {
        pass,
        detail: format!("{}; all <= {VIOLATION_TOL:.0e}", lines.join("; ")),
    }
}

fn interpolation() -> Outcome {
    let p = problem(DomainKind::Square, 2);
    let lab = InequalityLab::new(&p, 1).expect("lab");
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let rows = lab.interpolation_scan(&grid).expect("scan");
    let b = lab.bergman_sandwich().expect("sandwich");
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let unit = (first.c_low - 1.0).abs().max((first.c_high - 1.0).abs());
    let end = (last.c_low - b.row.c_low).abs().max((last.c_high - b.row.c_high).abs());
    let lo = first.c_low.min(last.c_low);
    let hi = first.c_high.max(last.c_high);
    let excess = rows
        .iter()
        .map(|r| (lo - r.c_low).max(r.c_high - hi))
        .fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        pass: unit <= UNIT_TOL && end <= VIOLATION_TOL && excess <= VIOLATION_TOL,
        detail: format!(
            "square/r2: s=0 off (1,1) by {unit:.2e} <= {UNIT_TOL:.0e}; s=1 vs sandwich {end:.2e} <= {VIOLATION_TOL:.0e}; intermediate excess over endpoint bounds {excess:.2e} <= {VIOLATION_TOL:.0e}"
        ),
    }
}

fn determinism() -> Outcome {
    let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().expect("tempdir")).collect();
    let mut same = true;
    let mut checked = Vec::new();
    for (command, file) in [
        (Command::VerifyIdentities, IDENTITIES_CSV),
        (Command::FemCheck, IDENTITIES_CSV),
        (Command::Constants, CONSTANTS_CSV),
    ] {
        let bytes: Vec<Vec<u8>> = dirs
            .iter()
            .map(|d| {
                let mut cfg = RunConfig::defaults(command);
                cfg.output_path = d.path().to_path_buf();
                cfg.trials = 5;
                cfg.s_values = (command == Command::Constants).then(|| vec![0.0, 0.5, 1.0]);
                cli::run(&cfg).expect("run");
                std::fs::read(d.path().join(file)).expect("csv written")
            })
            .collect();
        same &= !bytes[0].is_empty() && bytes[0] == bytes[1];
        checked.push(format!("{command}:{} bytes", bytes[0].len()));
    }
    Outcome {
        pass: same,
        detail: format!("two runs per command, CSVs byte-identical: {same} ({})", checked.join(", ")),
    }
}

fn main() {
    let (c1, pairs) = penrose_suite();
    let fem = fem_pairs();
    let mut results = vec![("penrose suite", c1)];
    results.push(("resolvent identities", resolvents(&pairs)));
    results.push(("permutation equality", permutation(&pairs, &fem)));
    results.push(("decomposition and T_B identities", tb_identities(&pairs, &fem)));
    results.push(("trace-operator spectrum", trace_spectrum()));
    results.push(("trace inequalities", trace_inequalities()));
    results.push(("harmonic inequality 1<s<3/2", harmonic_inequality()));
    results.push(("harmonic sandwich s=1", bergman()));
    results.push(("interpolation scan", interpolation()));
    results.push(("determinism", determinism()));

    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
