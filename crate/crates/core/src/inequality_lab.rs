//! Best constants and vector-by-vector checks for the trace and harmonic
//! inequalities on a finite-element mesh.
//!
//! Constants are extreme generalized eigenvalues of pairs of Grams on the
//! relevant subspace. Seeded random vectors are used only as violation probes.
//!
//! Harmonic coordinates are taken in the Steklov eigenbasis, which is
//! orthonormal in the H¹_∂ Gram. Probes use the independent harmonic basis.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fem::{
    harmonic_basis, poisson_operators, steklov, BoundarySpectrum, FemProblem, HarmonicBasis,
    PoissonOperators, SteklovSystem,
};
use crate::linalg::{gen_sym_eig, spd_power, DenseMatrix};
use crate::operator::{
    frac_graph_power_from_svd, op_norm, pseudoinverse_from_svd, t_b_from_svd, weighted_svd,
    Side, SvdFactors, WeightedOperator, WeightedSpace,
};

pub const TRACE_INEQUALITY: &str = "trace_inequality";
pub const HARMONIC_INEQUALITY: &str = "harmonic_inequality";
pub const BERGMAN_SANDWICH: &str = "bergman_sandwich";
pub const INTERPOLATION: &str = "interpolation";

/// Relative slack allowed before a probe counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Random harmonic combinations per check, on top of the basis vectors.
pub const N_PROBES: usize = 100;
pub const DEFAULT_PROBE_SEED: u64 = 20_240_601;

/// Default s grid for the harmonic inequality, inside (1, 3/2).
pub const DEFAULT_HARMONIC_S: [f64; 3] = [1.05, 1.25, 1.45];

/// How fractional boundary norms are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormMode {
    /// Graph norms of (I+Λ*Λ)^s.
    Graph,
    /// Spectral norm of the boundary Laplace–Beltrami pencil.
    Surrogate,
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormMode::Graph => "graph",
            NormMode::Surrogate => "surrogate",
        })
    }
}

impl FromStr for NormMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(NormMode::Graph),
            "surrogate" => Ok(NormMode::Surrogate),
            _ => Err(Error::InvalidSpec(format!("unknown norm mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantsRow {
    pub theorem: String,
    pub s: f64,
    pub mesh: String,
    pub refine: usize,
    pub c_low: f64,
    pub c_high: f64,
    /// Largest relative excess over the bound among the probes; ≤ 0 when it held.
    pub worst_violation: f64,
    pub dofs: usize,
    pub mode: NormMode,
}

impl ConstantsRow {
    pub fn holds(&self) -> bool {
        self.worst_violation <= VIOLATION_TOL
    }
}

/// Result of the s = 1 sandwich check.
#[derive(Clone, Debug, PartialEq)]
pub struct BergmanReport {
    pub row: ConstantsRow,
    /// max |‖(I+F₁*F₁)^{1/2}E₁v‖ − ‖T_{F₁*}v‖| / ‖T_{F₁*}v‖ over the probes.
    pub middle_identity: f64,
    /// Relative gap of the left inequality at the minimizing singular vector.
    pub low_gap: f64,
    /// Relative gap of the right inequality at the maximizing singular vector.
    pub high_gap: f64,
}

struct BergmanData {
    ops: PoissonOperators,
    f1_svd: SvdFactors,
    t_f1_star: WeightedOperator,
}

/// Shared operators for one mesh. The Robin/Dirichlet part is built on first use.
pub struct InequalityLab<'a> {
    problem: &'a FemProblem,
    seed: u64,
    lambda: WeightedOperator,
    lambda_svd: SvdFactors,
    t_lambda_star: WeightedOperator,
    t_norm: f64,
    harmonic: HarmonicBasis,
    steklov: SteklovSystem,
    boundary: BoundarySpectrum,
    bergman: OnceLock<Result<BergmanData>>,
}

/// √ of the extreme eigenvalues of num·x = θ·den·x.
fn rayleigh_extremes(num: &DenseMatrix, den: &DenseMatrix) -> Result<(f64, f64)> {
    if num.rows() == 0 {
        return Ok((0.0, 0.0));
    }
    let eig = gen_sym_eig(&num.symmetrized(), &den.symmetrized())?;
    let lo = eig.values[0].max(0.0).sqrt();
    let hi = eig.values[eig.len() - 1].max(0.0).sqrt();
    Ok((lo, hi))
}

fn gram_of(x: &DenseMatrix, g: &DenseMatrix) -> DenseMatrix {
    x.tr_matmul(&g.matmul(x)).symmetrized()
}

/// ‖x_j‖_g for every column.
fn column_norms(x: &DenseMatrix, g: &DenseMatrix) -> Vec<f64> {
    let gx = g.matmul(x);
    (0..x.cols())
        .map(|j| {
            (0..x.rows())
                .map(|i| x[(i, j)] * gx[(i, j)])
                .sum::<f64>()
                .max(0.0)
                .sqrt()
        })
        .collect()
}

fn check_range(s: f64, lo: f64, hi: f64, open: bool, range: &'static str) -> Result<()> {
    let inside = if open {
        s > lo && s < hi
    } else {
        s >= lo && s <= hi
    };
    if inside {
        Ok(())
    } else {
        Err(Error::SOutOfRange { s, range })
    }
}

/// max over j of the relative excess of `mid` outside [c_low·r, c_high·r].
fn sandwich_violation(mid: &[f64], reference: &[f64], c_low: f64, c_high: f64) -> f64 {
    mid.iter()
        .zip(reference)
        .filter(|(_, r)| **r > 0.0)
        .map(|(m, r)| ((c_low * r - m) / r).max((m - c_high * r) / r))
        .fold(f64::NEG_INFINITY, f64::max)
}

impl<'a> InequalityLab<'a> {
    pub fn new(problem: &'a FemProblem, seed: u64) -> Result<Self> {
        let gamma = &problem.spaces.gamma;
        let gamma_svd = weighted_svd(gamma, None)?;
        let lambda = pseudoinverse_from_svd(gamma, &gamma_svd);
        let lambda_svd = gamma_svd.pseudoinverse_factors();
        let t_lambda_star = t_b_from_svd(gamma, &lambda, &lambda_svd)?.t_b_star;
        let t_norm = op_norm(&t_lambda_star)?;
        let harmonic = harmonic_basis(&problem.mesh, &problem.mats)?;
        let steklov = steklov(&problem.mesh, &problem.mats)?;
        let boundary = BoundarySpectrum::new(&problem.mats)?;
        Ok(InequalityLab {
            problem,
            seed,
            lambda,
            lambda_svd,
            t_lambda_star,
            t_norm,
            harmonic,
            steklov,
            boundary,
            bergman: OnceLock::new(),
        })
    }

    pub fn problem(&self) -> &FemProblem {
        self.problem
    }

    /// Λ = Γ†.
    pub fn lambda(&self) -> &WeightedOperator {
        &self.lambda
    }

    /// T_{Λ*} : H¹_∂ → L²(∂Ω).
    pub fn t_lambda_star(&self) -> &WeightedOperator {
        &self.t_lambda_star
    }

    /// ‖T_{Λ*}‖.
    pub fn t_norm(&self) -> f64 {
        self.t_norm
    }

    pub fn steklov(&self) -> &SteklovSystem {
        &self.steklov
    }

    fn row(&self, theorem: &str, s: f64, c: (f64, f64), worst: f64, mode: NormMode) -> ConstantsRow {
        ConstantsRow {
            theorem: theorem.to_string(),
            s,
            mesh: self.problem.label(),
            refine: self.problem.refine(),
            c_low: c.0,
            c_high: c.1,
            worst_violation: worst,
            dofs: self.problem.dofs(),
            mode,
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// Harmonic basis columns followed by [`N_PROBES`] random combinations.
    pub fn harmonic_probes(&self) -> DenseMatrix {
        let h = &self.harmonic.basis;
        let mut rng = self.rng(1);
        let coeffs = DenseMatrix::from_fn(h.cols(), N_PROBES, |_, _| {
            rng.sample::<f64, _>(StandardNormal)
        });
        let random = h.matmul(&coeffs);
        let mut cols: Vec<Vec<f64>> = (0..h.cols()).map(|j| h.col(j)).collect();
        cols.extend((0..N_PROBES).map(|j| random.col(j)));
        DenseMatrix::from_columns(h.rows(), &cols)
    }

    fn boundary_probes(&self) -> DenseMatrix {
        let mut rng = self.rng(2);
        DenseMatrix::from_fn(self.problem.mats.n_boundary(), N_PROBES, |_, _| {
            rng.sample::<f64, _>(StandardNormal)
        })
    }

    /// (I+Λ*Λ)^p on the boundary space.
    fn boundary_graph_power(&self, p: f64) -> DenseMatrix {
        frac_graph_power_from_svd(&self.lambda, &self.lambda_svd, -p, Side::Domain).into_matrix()
    }

    /// (I+ΛΛ*)^p on H¹_∂.
    fn domain_graph_power(&self, p: f64) -> DenseMatrix {
        frac_graph_power_from_svd(&self.lambda, &self.lambda_svd, -p, Side::Codomain).into_matrix()
    }

    fn graph_gram(&self, s: f64) -> DenseMatrix {
        gram_of(&self.boundary_graph_power(s), &self.problem.mats.boundary_mass)
    }

    /// Equivalence constants of g ↦ ‖(I+Λ*Λ)^s g‖_{L²(∂Ω)} against the
    /// reference norm of `mode` (itself in graph mode, the surrogate H^s norm
    /// otherwise), for 0 ≤ s ≤ 1.
    pub fn trace_equivalence_constants(&self, s: f64, mode: NormMode) -> Result<ConstantsRow> {
        check_range(s, 0.0, 1.0, false, "[0, 1]")?;
        let graph = self.graph_gram(s);
        let reference = match mode {
            NormMode::Graph => graph.clone(),
            NormMode::Surrogate => self.boundary.gram(s)?,
        };
        let c = rayleigh_extremes(&graph, &reference)?;
        let probes = self.boundary_probes();
        let mid = column_norms(&probes, &graph);
        let refn = column_norms(&probes, &reference);
        let worst = sandwich_violation(&mid, &refn, c.0, c.1);
        Ok(self.row(TRACE_INEQUALITY, s, c, worst, mode))
    }

    /// ‖v‖_{𝓗^s} ≤ ‖T_{Λ*}‖·‖(I+ΛΛ*)^{s−1}v‖_{∂,Ω} for 1 < s < 3/2.
    ///
    /// The left side is ‖(I+Λ*Λ)^{s−1/2}Γv‖ in graph mode. In surrogate mode it
    /// is the G_{s−1/2} norm of Γv scaled by the lower trace equivalence
    /// constant at s − 1/2. The constants are the extreme ratios of the left
    /// side to ‖(I+ΛΛ*)^{s−1}v‖ over the harmonic subspace.
    pub fn harmonic_inequality_check(&self, s: f64, mode: NormMode) -> Result<ConstantsRow> {
        check_range(s, 1.0, 1.5, true, "(1, 3/2)")?;
        self.harmonic_row(s, mode)
    }

    /// Also accepts the endpoint s = 1, used as the limit reference.
    pub(crate) fn harmonic_row(&self, s: f64, mode: NormMode) -> Result<ConstantsRow> {
        let mats = &self.problem.mats;
        let trace = mats.trace.clone();
        let gram = mats.h1_boundary_gram();
        let q = self.domain_graph_power(s - 1.0);
        let (lhs_op, lhs_gram, scale) = match mode {
            NormMode::Graph => (
                self.boundary_graph_power(s - 0.5).matmul(&trace),
                mats.boundary_mass.clone(),
                1.0,
            ),
            NormMode::Surrogate => {
                let eq = self.trace_equivalence_constants(s - 0.5, NormMode::Surrogate)?;
                (trace, self.boundary.gram(s - 0.5)?, eq.c_low)
            }
        };

        let v = &self.steklov.v;
        let c = rayleigh_extremes(
            &gram_of(&lhs_op.matmul(v), &lhs_gram),
            &gram_of(&q.matmul(v), &gram),
        )?;

        let probes = self.harmonic_probes();
        let lhs = column_norms(&lhs_op.matmul(&probes), &lhs_gram);
        let rhs = column_norms(&q.matmul(&probes), &gram);
        let worst = lhs
            .iter()
            .zip(&rhs)
            .map(|(l, r)| (scale * l - self.t_norm * r) / (self.t_norm * r))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(self.row(HARMONIC_INEQUALITY, s, c, worst, mode))
    }

    fn bergman_data(&self) -> Result<&BergmanData> {
        self.bergman
            .get_or_init(|| {
                let p = self.problem;
                let ops = poisson_operators(&p.mesh, &p.mats, &p.spaces)?;
                let f1_svd = ops.e1_svd.pseudoinverse_factors();
                let t_f1_star = t_b_from_svd(&ops.e1, &ops.f1, &f1_svd)?.t_b_star;
                Ok(BergmanData {
                    ops,
                    f1_svd,
                    t_f1_star,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Robin and Dirichlet solution operators of the mesh.
    pub fn poisson(&self) -> Result<&PoissonOperators> {
        Ok(&self.bergman_data()?.ops)
    }

    /// (I+F₁*F₁)^{p} on L²(Ω).
    fn bergman_graph_power(&self, data: &BergmanData, p: f64) -> DenseMatrix {
        frac_graph_power_from_svd(&data.ops.f1, &data.f1_svd, -p, Side::Domain).into_matrix()
    }

    /// c₁′‖v‖_{∂,Ω} ≤ ‖(I+F₁*F₁)^{1/2}E₁v‖_{L²} ≤ c₂′‖v‖_{∂,Ω} on harmonic v,
    /// with c₁′, c₂′ the extreme singular values of T_{F₁*} on the harmonic subspace.
    pub fn bergman_sandwich(&self) -> Result<BergmanReport> {
        let data = self.bergman_data()?;
        let mats = &self.problem.mats;
        let gram = mats.h1_boundary_gram();
        let h = &self.harmonic.basis;
        let t = data.t_f1_star.matrix();

        let coords = WeightedSpace::euclidean("harmonic", h.cols());
        let restricted = WeightedOperator::new(
            coords,
            data.t_f1_star.codomain().clone(),
            t.matmul(h),
        )?;
        let f = weighted_svd(&restricted, Some(0.0))?;
        let mut values = f.values.clone();
        values.resize(h.cols(), 0.0);
        let c_low = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let c_high = values.iter().cloned().fold(0.0, f64::max);

        let middle = self.bergman_graph_power(data, 0.5).matmul(data.ops.e1.matrix());
        let probes = self.harmonic_probes();
        let mid = column_norms(&middle.matmul(&probes), &mats.mass);
        let tv = column_norms(&t.matmul(&probes), &mats.mass);
        let norm = column_norms(&probes, &gram);
        let worst = sandwich_violation(&mid, &norm, c_low, c_high);
        let middle_identity = mid
            .iter()
            .zip(&tv)
            .map(|(m, t)| if *t > 0.0 { (m - t).abs() / t } else { m.abs() })
            .fold(0.0, f64::max);

        let gap = |k: usize, c: f64| -> f64 {
            if k >= f.rank {
                return 0.0;
            }
            let v = h.matvec(&f.right.col(k));
            let m = column_norms(&DenseMatrix::from_columns(v.len(), &[middle.matvec(&v)]), &mats.mass)[0];
            let n = column_norms(&DenseMatrix::from_columns(v.len(), &[v]), &gram)[0];
            (m - c * n).abs() / n
        };
        let low_gap = if f.rank == h.cols() && f.rank > 0 {
            gap(f.rank - 1, c_low)
        } else {
            0.0
        };
        let high_gap = gap(0, c_high);

        Ok(BergmanReport {
            row: self.row(BERGMAN_SANDWICH, 1.0, (c_low, c_high), worst, NormMode::Graph),
            middle_identity,
            low_gap,
            high_gap,
        })
    }

    /// Equivalence constants on the harmonic subspace between the graph norm
    /// ‖(I+F₁*F₁)^{s/2}E₁v‖_{L²} and the spectral interpolation norm
    /// cᵀ·Mv^{1−s}·c, where c are coordinates in the Steklov basis and
    /// Mv = VᵀMV is the L² Gram of that basis.
    ///
    /// The reference norm is the L² norm at s = 0 and the H¹_∂ norm at s = 1,
    /// so the s = 1 row reproduces the sandwich constants with normalization
    /// factor 1.
    pub fn interpolation_scan(&self, s_grid: &[f64]) -> Result<Vec<ConstantsRow>> {
        for &s in s_grid {
            check_range(s, 0.0, 1.0, false, "[0, 1]")?;
        }
        let data = self.bergman_data()?;
        let mats = &self.problem.mats;
        let v = &self.steklov.v;
        let e1v = data.ops.e1.matrix().matmul(v);
        let mv = gram_of(v, &mats.mass);
        let mut rng = self.rng(3);
        let probes = DenseMatrix::from_fn(v.cols(), N_PROBES, |_, _| {
            rng.sample::<f64, _>(StandardNormal)
        });
        s_grid
            .iter()
            .map(|&s| {
                let x = self.bergman_graph_power(data, 0.5 * s).matmul(&e1v);
                let graph = gram_of(&x, &mats.mass);
                let spectral = spd_power(&mv, 1.0 - s)?;
                let c = rayleigh_extremes(&graph, &spectral)?;
                let worst = sandwich_violation(
                    &column_norms(&probes, &graph),
                    &column_norms(&probes, &spectral),
                    c.0,
                    c.1,
                );
                Ok(self.row(INTERPOLATION, s, c, worst, NormMode::Graph))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{DomainKind, DomainSpec};

    fn problem(kind: DomainKind, refine: usize) -> FemProblem {
        FemProblem::build(DomainSpec::new(kind, refine)).unwrap()
    }

    #[test]
    fn mode_round_trip() {
        for m in [NormMode::Graph, NormMode::Surrogate] {
            assert_eq!(m.to_string().parse::<NormMode>().unwrap(), m);
        }
        assert!("both".parse::<NormMode>().is_err());
    }

    #[test]
    fn trace_constants_at_zero_are_one() {
        let p = problem(DomainKind::LShape, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        for mode in [NormMode::Graph, NormMode::Surrogate] {
            let r = lab.trace_equivalence_constants(0.0, mode).unwrap();
            assert!((r.c_low - 1.0).abs() < 1e-10, "{r:?}");
            assert!((r.c_high - 1.0).abs() < 1e-10, "{r:?}");
            assert!(r.holds());
        }
    }

    #[test]
    fn trace_constants_reject_out_of_range() {
        let p = problem(DomainKind::Square, 0);
        let lab = InequalityLab::new(&p, 1).unwrap();
        assert!(matches!(
            lab.trace_equivalence_constants(1.5, NormMode::Graph),
            Err(Error::SOutOfRange { .. })
        ));
        assert!(matches!(
            lab.harmonic_inequality_check(1.0, NormMode::Graph),
            Err(Error::SOutOfRange { .. })
        ));
    }

    #[test]
    fn trace_constants_positive_and_ordered() {
        let p = problem(DomainKind::Square, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        for s in [0.25, 0.5, 0.75, 1.0] {
            let r = lab.trace_equivalence_constants(s, NormMode::Surrogate).unwrap();
            assert!(r.c_low > 0.0 && r.c_low <= r.c_high && r.c_high.is_finite());
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn harmonic_graph_constants_are_closed_form() {
        // on v_k the ratio is √(1+s_k²), so the top constant is ‖T_{Λ*}‖ = √2
        let p = problem(DomainKind::Square, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        assert!((lab.t_norm() - 2f64.sqrt()).abs() < 1e-12);
        let r = lab.harmonic_inequality_check(1.25, NormMode::Graph).unwrap();
        let s_min = lab.steklov().sigmas.last().copied().unwrap();
        assert!((r.c_high - 2f64.sqrt()).abs() < 1e-10);
        assert!((r.c_low - (1.0 + s_min * s_min).sqrt()).abs() < 1e-10);
        assert!(r.worst_violation <= 1e-9);
    }

    #[test]
    fn harmonic_surrogate_holds() {
        let p = problem(DomainKind::LShape, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        let r = lab.harmonic_inequality_check(1.45, NormMode::Surrogate).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn bergman_constants_and_identity() {
        let p = problem(DomainKind::Square, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        let b = lab.bergman_sandwich().unwrap();
        assert!(b.row.c_low > 0.0 && b.row.c_low <= b.row.c_high);
        assert!(b.row.holds(), "{b:?}");
        assert!(b.middle_identity < 1e-9);
        assert!(b.low_gap < 1e-9 && b.high_gap < 1e-9);
    }

    #[test]
    fn interpolation_endpoints() {
        let p = problem(DomainKind::Square, 1);
        let lab = InequalityLab::new(&p, 1).unwrap();
        let rows = lab.interpolation_scan(&[0.0, 1.0]).unwrap();
        assert!((rows[0].c_low - 1.0).abs() < 1e-10 && (rows[0].c_high - 1.0).abs() < 1e-10);
        let b = lab.bergman_sandwich().unwrap().row;
        assert!((rows[1].c_low - b.c_low).abs() < 1e-9);
        assert!((rows[1].c_high - b.c_high).abs() < 1e-9);
    }

    #[test]
    fn rows_are_deterministic() {
        let p = problem(DomainKind::Square, 0);
        let a = InequalityLab::new(&p, 7).unwrap();
        let b = InequalityLab::new(&p, 7).unwrap();
        assert_eq!(
            a.harmonic_inequality_check(1.1, NormMode::Graph).unwrap(),
            b.harmonic_inequality_check(1.1, NormMode::Graph).unwrap()
        );
    }
}
