//! Residual checks for the Moore–Penrose operator identities.
//!
//! Every check takes a pair (A, B) with B = A†, verifies the pair first, then
//! assembles both sides of an identity independently and reports the relative
//! Frobenius residual. Pairs come either from [`random_operator`] or from the
//! finite-element trace operator (A = Γ, B = Λ = Γ†).
//!
//! The permutation identity T_{B*}(I+BB*)^{-s} = (I+B*B)^{-s}T_{B*} is checked
//! here for arbitrary finite-dimensional pairs, not only for the trace pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fem::{harmonic_basis, steklov, FemProblem};
use crate::linalg::{dot, DenseMatrix};
use crate::operator::{
    adjoint, frac_graph_power_from_svd, penrose_residuals, pseudoinverse, pseudoinverse_from_svd,
    relative_residual,
    t_b, verify_pair, weighted_svd, Side, SvdFactors, WeightedOperator, WeightedSpace,
};

/// Relative tolerance for identity residuals.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for adjoint(T_B) = T_{B*} and for image-subspace checks.
pub const TB_ADJOINT_TOL: f64 = 1e-10;
/// Penrose residual tolerance, scaled by 1 + ‖A‖_F.
pub const PENROSE_TOL: f64 = 1e-10;
/// ‖Γ‖ = 1 and its maximizer.
pub const TRACE_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: String,
    /// Conditional identity whose hypothesis does not hold; counted as passing.
    pub skipped: bool,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        ResidualReport {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            context: String::new(),
            skipped: false,
        }
    }

    pub fn skipped(name: impl Into<String>, tolerance: f64, reason: &str) -> Self {
        ResidualReport {
            name: name.into(),
            residual: 0.0,
            tolerance,
            pass: true,
            context: format!("skipped: {reason}"),
            skipped: true,
        }
    }

    /// Prepends `ctx` to the report context.
    pub fn with_context(mut self, ctx: &str) -> Self {
        self.context = match (ctx.is_empty(), self.context.is_empty()) {
            (true, _) => self.context,
            (false, true) => ctx.to_string(),
            (false, false) => format!("{ctx} {}", self.context),
        };
        self
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// `k` Euclidean-orthonormal columns by twice-repeated modified Gram–Schmidt.
fn random_orthonormal(rng: &mut ChaCha8Rng, n: usize, k: usize) -> DenseMatrix {
    let g = gaussian_matrix(rng, n, k);
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| g.col(j)).collect();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let proj = dot(&cols[i], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= proj * y;
                }
            }
        }
        let norm = dot(&cols[j], &cols[j]).sqrt();
        cols[j].iter_mut().for_each(|x| *x /= norm);
    }
    DenseMatrix::from_columns(n, &cols)
}

/// Random SPD Gram with eigenvalues log-uniform in [1e-2, 1e2] (condition ≤ 1e4).
fn random_gram(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let q = random_orthonormal(rng, n, n);
    let d: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-2.0..=2.0))).collect();
    q.scale_columns(&d).matmul(&q.transpose()).symmetrized()
}

/// Seeded random operator of exact rank `rank` between random weighted spaces,
/// together with its Moore–Penrose inverse.
///
/// Nonzero singular values (Euclidean) are log-uniform in [0.5, 2].
pub fn random_operator(
    seed: u64,
    dim_dom: usize,
    dim_cod: usize,
    rank: usize,
) -> Result<(WeightedOperator, WeightedOperator)> {
    if rank > dim_dom.min(dim_cod) {
        return Err(Error::RankTooLarge {
            rank,
            dim_dom,
            dim_cod,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = WeightedSpace::new(format!("H1[{dim_dom}]"), random_gram(&mut rng, dim_dom))?;
    let cod = WeightedSpace::new(format!("H2[{dim_cod}]"), random_gram(&mut rng, dim_cod))?;
    let p = random_orthonormal(&mut rng, dim_cod, rank);
    let q = random_orthonormal(&mut rng, dim_dom, rank);
    let sigma: Vec<f64> = (0..rank)
        .map(|_| 2f64.powf(rng.random_range(-1.0..=1.0)))
        .collect();
    let matrix = p.scale_columns(&sigma).matmul(&q.transpose());
    let a = WeightedOperator::new(dom, cod, matrix)?;
    let b = pseudoinverse(&a, None)?;
    Ok((a, b))
}

/// Penrose conditions of (A, B), reported as one row.
pub fn check_penrose(a: &WeightedOperator, b: &WeightedOperator) -> Result<ResidualReport> {
    let r = penrose_residuals(a, b)?;
    let scaled = r.max_abs() / (1.0 + r.norm_a);
    let mut report = ResidualReport::new("penrose", scaled, PENROSE_TOL);
    report.context = format!(
        "aba={:.3e} bab={:.3e} ab_sym={:.3e} ba_sym={:.3e}",
        r.aba, r.bab, r.ab_sym, r.ba_sym
    );
    Ok(report)
}

fn null_projector(f: &SvdFactors, space: &WeightedSpace) -> DenseMatrix {
    &DenseMatrix::identity(space.dim()) - &f.row_space_projector(space)
}

/// ‖P − Q‖_F / max(1, ‖Q‖_F); projectors onto {0} are zero only up to rounding.
fn projector_distance(p: &DenseMatrix, q: &DenseMatrix) -> f64 {
    (p - q).frobenius_norm() / q.frobenius_norm().max(1.0)
}

fn range_complement_projector(f: &SvdFactors, space: &WeightedSpace) -> DenseMatrix {
    &DenseMatrix::identity(space.dim()) - &f.range_projector(space)
}

/// The six resolvent identities of a Moore–Penrose pair (A: H1→H2, B = A†):
///
/// 1. A(I+A*A)⁻¹ = B*(I+BB*)⁻¹
/// 2. (I+A*A)⁻¹ + (I+BB*)⁻¹ = I + P_𝓝(B*)
/// 3. A*(I+AA*)⁻¹ = B(I+B*B)⁻¹
/// 4. (I+AA*)⁻¹ + (I+B*B)⁻¹ = I + P_𝓝(A*)
/// 5. (I+AA*)⁻¹ + (I+B*B)⁻¹ = I, only when A* is injective
/// 6. 𝓝(A*(I+AA*)^{-1/2}) = 𝓝(A*) = 𝓝(B), compared as projectors
pub fn check_resolvent_identities(
    a: &WeightedOperator,
    b: &WeightedOperator,
) -> Result<Vec<ResidualReport>> {
    verify_pair(a, b)?;
    let fa = weighted_svd(a, None)?;
    let fb = weighted_svd(b, None)?;
    let h1 = a.domain();
    let h2 = a.codomain();
    let a_star = adjoint(a);
    let b_star = adjoint(b);

    let res_a_dom = frac_graph_power_from_svd(a, &fa, 1.0, Side::Domain); // (I+A*A)⁻¹ on H1
    let res_a_cod = frac_graph_power_from_svd(a, &fa, 1.0, Side::Codomain); // (I+AA*)⁻¹ on H2
    let res_b_dom = frac_graph_power_from_svd(b, &fb, 1.0, Side::Domain); // (I+B*B)⁻¹ on H2
    let res_b_cod = frac_graph_power_from_svd(b, &fb, 1.0, Side::Codomain); // (I+BB*)⁻¹ on H1

    let mut reports = Vec::with_capacity(6);

    let lhs = a.compose(&res_a_dom)?;
    let rhs = b_star.compose(&res_b_cod)?;
    reports.push(ResidualReport::new(
        "resolvent_1",
        relative_residual(lhs.matrix(), rhs.matrix()),
        IDENTITY_TOL,
    ));

    let lhs = res_a_dom.add(&res_b_cod)?;
    let rhs = &DenseMatrix::identity(h1.dim()) + &range_complement_projector(&fb, h1);
    reports.push(ResidualReport::new(
        "resolvent_2",
        relative_residual(lhs.matrix(), &rhs),
        IDENTITY_TOL,
    ));

    let lhs = a_star.compose(&res_a_cod)?;
    let rhs = b.compose(&res_b_dom)?;
    reports.push(ResidualReport::new(
        "resolvent_3",
        relative_residual(lhs.matrix(), rhs.matrix()),
        IDENTITY_TOL,
    ));

    let sum = res_a_cod.add(&res_b_dom)?;
    let rhs = &DenseMatrix::identity(h2.dim()) + &range_complement_projector(&fa, h2);
    reports.push(ResidualReport::new(
        "resolvent_4",
        relative_residual(sum.matrix(), &rhs),
        IDENTITY_TOL,
    ));

    if fa.rank == h2.dim() {
        reports.push(ResidualReport::new(
            "resolvent_5",
            relative_residual(sum.matrix(), &DenseMatrix::identity(h2.dim())),
            IDENTITY_TOL,
        ));
    } else {
        reports.push(ResidualReport::skipped(
            "resolvent_5",
            IDENTITY_TOL,
            "A* not injective",
        ));
    }

    let root_a_cod = frac_graph_power_from_svd(a, &fa, 0.5, Side::Codomain);
    let c = a_star.compose(&root_a_cod)?;
    let p_c = null_projector(&weighted_svd(&c, None)?, h2);
    let p_a_star = null_projector(&weighted_svd(&a_star, None)?, h2);
    let p_b = null_projector(&fb, h2);
    let residual = projector_distance(&p_c, &p_a_star).max(projector_distance(&p_b, &p_a_star));
    reports.push(ResidualReport::new("resolvent_6", residual, IDENTITY_TOL));

    Ok(reports)
}

/// T_B is the Moore–Penrose inverse of C = B*(I+BB*)^{-1/2}.
pub fn check_tb_pinv(a: &WeightedOperator, b: &WeightedOperator) -> Result<ResidualReport> {
    let tb = t_b(a, b)?;
    let fb = weighted_svd(b, None)?;
    let root = frac_graph_power_from_svd(b, &fb, 0.5, Side::Codomain);
    let c = adjoint(b).compose(&root)?;
    let r = penrose_residuals(&c, &tb.t_b)?;
    Ok(ResidualReport::new("tb_pinv", r.relative(), IDENTITY_TOL))
}

/// adjoint(T_B) = T_{B*}, in the Hilbert–Schmidt norm between the weighted
/// spaces. Raw coordinates would add the Gram conditioning on top.
pub fn check_tb_adjoint(a: &WeightedOperator, b: &WeightedOperator) -> Result<ResidualReport> {
    let tb = t_b(a, b)?;
    Ok(ResidualReport::new(
        "tb_adjoint",
        relative_residual(&tb.t_b.orthonormal_matrix().transpose(), &tb.t_b_star.orthonormal_matrix()),
        TB_ADJOINT_TOL,
    ))
}

/// A = (I+B*B)^{-1/2}·T_{B*}.
pub fn check_decomposition(a: &WeightedOperator, b: &WeightedOperator) -> Result<ResidualReport> {
    let tb = t_b(a, b)?;
    let root = frac_graph_power_from_svd(b, &weighted_svd(b, None)?, 0.5, Side::Domain);
    let rebuilt = root.compose(&tb.t_b_star)?;
    Ok(ResidualReport::new(
        "decomposition",
        relative_residual(rebuilt.matrix(), a.matrix()),
        IDENTITY_TOL,
    ))
}

/// Closed-form action of T_{B*}(I+BB*)^{-s} on the singular system (s_k, v_k, z_k) of A:
/// v_k ↦ (s_k²/(1+s_k²))^s·√(1+s_k²)·z_k, and zero on 𝓝(A).
pub fn permutation_spectral_oracle(a: &WeightedOperator, fa: &SvdFactors, s: f64) -> DenseMatrix {
    let weights: Vec<f64> = fa
        .values
        .iter()
        .map(|sk| {
            let sk2 = sk * sk;
            (sk2 / (1.0 + sk2)).powf(s) * (1.0 + sk2).sqrt()
        })
        .collect();
    fa.left
        .scale_columns(&weights)
        .matmul(&fa.right.tr_matmul(a.domain().gram()))
}

/// T_{B*}(I+BB*)^{-s} = (I+B*B)^{-s}T_{B*} for each s, each side also compared
/// against [`permutation_spectral_oracle`].
pub fn check_permutation(
    a: &WeightedOperator,
    b: &WeightedOperator,
    s_list: &[f64],
) -> Result<Vec<ResidualReport>> {
    let tb = t_b(a, b)?;
    let fa = weighted_svd(a, None)?;
    let fb = weighted_svd(b, None)?;
    let mut reports = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let lhs = tb
            .t_b_star
            .compose(&frac_graph_power_from_svd(b, &fb, s, Side::Codomain))?;
        let rhs = frac_graph_power_from_svd(b, &fb, s, Side::Domain).compose(&tb.t_b_star)?;
        let oracle = permutation_spectral_oracle(a, &fa, s);
        let sides = relative_residual(lhs.matrix(), rhs.matrix());
        let vs_oracle = relative_residual(lhs.matrix(), &oracle)
            .max(relative_residual(rhs.matrix(), &oracle));
        let mut report = ResidualReport::new("permutation", sides.max(vs_oracle), IDENTITY_TOL);
        report.context = format!("s={s} sides={sides:.3e} oracle={vs_oracle:.3e}");
        reports.push(report);
    }
    Ok(reports)
}

/// Extreme singular values of T_B on 𝓡(B*), plus how far its image leaves 𝓝(B*)^⊥.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TbIsomorphism {
    pub c_low: f64,
    pub c_high: f64,
    pub image_residual: f64,
    /// 𝓡(B*) = {0}; the constants are reported as (0, 0).
    pub degenerate: bool,
}

impl TbIsomorphism {
    pub fn report(&self) -> ResidualReport {
        let injective = self.degenerate || self.c_low > 0.0;
        let residual = if injective {
            self.image_residual
        } else {
            f64::INFINITY
        };
        let mut r = ResidualReport::new("tb_isomorphism", residual, TB_ADJOINT_TOL);
        r.context = format!(
            "c_low={:.6e} c_high={:.6e}{}",
            self.c_low,
            self.c_high,
            if self.degenerate { " degenerate" } else { "" }
        );
        r
    }
}

pub fn check_tb_isomorphism(a: &WeightedOperator, b: &WeightedOperator) -> Result<TbIsomorphism> {
    let tb = t_b(a, b)?;
    let fb = weighted_svd(b, None)?;
    if fb.rank == 0 {
        return Ok(TbIsomorphism {
            c_low: 0.0,
            c_high: 0.0,
            image_residual: 0.0,
            degenerate: true,
        });
    }
    // 𝓡(B*) is spanned by the right singular vectors of B
    let restricted = tb.t_b.matrix().matmul(&fb.right);
    let coords = WeightedSpace::euclidean("range(B*)", fb.rank);
    let op = WeightedOperator::new(coords, a.domain().clone(), restricted.clone())?;
    let f = weighted_svd(&op, Some(0.0))?;
    let mut values = f.values.clone();
    values.resize(fb.rank, 0.0);
    let projector = range_complement_projector(&fb, a.domain());
    let leak = projector.matmul(&restricted).frobenius_norm();
    let scale = restricted.frobenius_norm();
    Ok(TbIsomorphism {
        c_low: values.iter().cloned().fold(f64::INFINITY, f64::min),
        c_high: values.iter().cloned().fold(0.0, f64::max),
        image_residual: if scale > 0.0 { leak / scale } else { leak },
        degenerate: false,
    })
}

/// Default exponents for the permutation check.
pub const DEFAULT_PERMUTATION_S: [f64; 6] = [-1.0, 0.25, 0.5, 0.75, 1.0, 2.0];

/// The per-pair battery used by the batch runner: six resolvent rows, T_B
/// pseudoinverse, decomposition, and the worst permutation row over `s_list`.
pub fn standard_battery(
    a: &WeightedOperator,
    b: &WeightedOperator,
    s_list: &[f64],
) -> Result<Vec<ResidualReport>> {
    let mut reports = check_resolvent_identities(a, b)?;
    reports.push(check_tb_pinv(a, b)?);
    reports.push(check_decomposition(a, b)?);
    let worst = check_permutation(a, b, s_list)?
        .into_iter()
        .max_by(|x, y| x.residual.total_cmp(&y.residual));
    reports.push(worst.unwrap_or_else(|| ResidualReport::skipped("permutation", IDENTITY_TOL, "empty s list")));
    Ok(reports)
}

/// Spectral facts of the trace operator Γ of a mesh, computed once.
#[derive(Clone, Debug)]
pub struct TraceSpectrum {
    /// Weighted singular values of Γ, descending.
    pub sigmas: Vec<f64>,
    /// Steklov eigenvalues, ascending.
    pub lambdas: Vec<f64>,
    pub reports: Vec<ResidualReport>,
}

/// Trace-operator checks on a mesh: ‖Γ‖ = 1 attained at constants, Steklov
/// values against the SVD of Γ, the harmonic subspace, Penrose conditions of
/// (Γ, Γ†), and the operator identities of that pair with `s_list` used for
/// the permutation check.
pub fn check_fem_trace(problem: &FemProblem, s_list: &[f64]) -> Result<TraceSpectrum> {
    let gamma = &problem.spaces.gamma;
    let h1 = gamma.domain();
    let fg = weighted_svd(gamma, None)?;
    let lambda = pseudoinverse_from_svd(gamma, &fg);
    let mut reports = Vec::new();

    let norm = fg.values.first().copied().unwrap_or(0.0);
    reports.push(ResidualReport::new("op_norm_gamma", (norm - 1.0).abs(), TRACE_NORM_TOL));

    let ones = vec![1.0; h1.dim()];
    let unit: Vec<f64> = ones.iter().map(|x| x / h1.norm(&ones)).collect();
    let top = fg.right.col(0);
    let along = h1.inner(&top, &unit);
    let rest: Vec<f64> = top.iter().zip(&unit).map(|(t, u)| t - along * u).collect();
    reports.push(ResidualReport::new("gamma_maximizer", h1.norm(&rest), TRACE_NORM_TOL));

    let st = steklov(&problem.mesh, &problem.mats)?;
    let agreement = if st.sigmas.len() == fg.rank {
        st.sigmas
            .iter()
            .zip(&fg.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let mut r = ResidualReport::new("steklov_vs_svd", agreement, IDENTITY_TOL);
    r.context = format!("steklov={} svd_rank={}", st.sigmas.len(), fg.rank);
    reports.push(r);

    let hb = harmonic_basis(&problem.mesh, &problem.mats)?;
    reports.push(ResidualReport::new(
        "harmonic_dimension",
        (hb.dim() as f64 - problem.mats.n_boundary() as f64).abs(),
        0.0,
    ));
    let kh = problem.mats.stiffness.matmul(&hb.basis);
    let equilibrium = hb
        .interior
        .iter()
        .flat_map(|&i| kh.row(i).iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    reports.push(ResidualReport::new("harmonic_equilibrium", equilibrium, TB_ADJOINT_TOL));

    reports.push(check_penrose(gamma, &lambda)?);
    reports.extend(standard_battery(gamma, &lambda, s_list)?);
    reports.push(check_tb_adjoint(gamma, &lambda)?);
    reports.push(check_tb_isomorphism(gamma, &lambda)?.report());
    Ok(TraceSpectrum {
        sigmas: fg.values,
        lambdas: st.lambdas,
        reports,
    })
}
