//! Linear maps between finite-dimensional inner-product spaces.
//!
//! A [`WeightedSpace`] is ℝⁿ with the inner product (x, y) = xᵀ·G·y for an SPD
//! Gram G. Adjoints, singular systems, Moore–Penrose inverses and fractional
//! graph powers are all taken relative to the Grams of the spaces involved,
//! so the matrix of A* is G_dom⁻¹·Aᵀ·G_cod rather than a plain transpose.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{
    bilinear, cholesky, cholesky_solve, solve_lower, solve_lower_transpose, svd, DenseMatrix,
};

/// Relative Penrose residual above which `t_b` refuses a pair.
pub const PAIR_CHECK_TOL: f64 = 1e-8;

/// Shared handle to a space; operators built on the same space point at one allocation.
pub type SpaceRef = Arc<WeightedSpace>;

pub struct WeightedSpace {
    label: String,
    gram: DenseMatrix,
    chol: DenseMatrix,
}

impl WeightedSpace {
    pub fn new(label: impl Into<String>, gram: DenseMatrix) -> Result<SpaceRef> {
        let chol = cholesky(&gram)?;
        Ok(Arc::new(WeightedSpace {
            label: label.into(),
            gram,
            chol,
        }))
    }

    pub fn euclidean(label: impl Into<String>, dim: usize) -> SpaceRef {
        Arc::new(WeightedSpace {
            label: label.into(),
            gram: DenseMatrix::identity(dim),
            chol: DenseMatrix::identity(dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    /// Lower Cholesky factor of the Gram.
    pub fn chol(&self) -> &DenseMatrix {
        &self.chol
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(x, &self.gram, y)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// G⁻¹·B.
    pub fn solve(&self, b: &DenseMatrix) -> DenseMatrix {
        cholesky_solve(&self.chol, b)
    }

    /// Lᵀ·X·L⁻ᵀ: the matrix of an endomorphism in Gram-orthonormal coordinates.
    pub fn to_orthonormal(&self, x: &DenseMatrix) -> DenseMatrix {
        let y = solve_lower(&self.chol, &x.transpose()).transpose();
        self.chol.tr_matmul(&y)
    }

    fn same_as(self: &SpaceRef, other: &SpaceRef) -> bool {
        Arc::ptr_eq(self, other) || (self.dim() == other.dim() && self.gram == other.gram)
    }
}

impl fmt::Debug for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedSpace({}, dim {})", self.label, self.dim())
    }
}

#[derive(Clone, Debug)]
pub struct WeightedOperator {
    domain: SpaceRef,
    codomain: SpaceRef,
    matrix: DenseMatrix,
}

impl WeightedOperator {
    pub fn new(domain: SpaceRef, codomain: SpaceRef, matrix: DenseMatrix) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch {
                op: "WeightedOperator::new",
                detail: format!(
                    "matrix {:?} between {} (dim {}) and {} (dim {})",
                    matrix.shape(),
                    domain.label(),
                    domain.dim(),
                    codomain.label(),
                    codomain.dim()
                ),
            });
        }
        Ok(WeightedOperator {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(space: &SpaceRef) -> Self {
        WeightedOperator {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: DenseMatrix::identity(space.dim()),
        }
    }

    pub fn zero(domain: &SpaceRef, codomain: &SpaceRef) -> Self {
        WeightedOperator {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: DenseMatrix::zeros(codomain.dim(), domain.dim()),
        }
    }

    pub fn domain(&self) -> &SpaceRef {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceRef {
        &self.codomain
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec(x)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &WeightedOperator) -> Result<WeightedOperator> {
        if !self.domain.same_as(&rhs.codomain) {
            return Err(Error::SpaceMismatch {
                op: "compose",
                detail: format!(
                    "{} expects {}, got {}",
                    "left factor",
                    self.domain.label(),
                    rhs.codomain.label()
                ),
            });
        }
        Ok(WeightedOperator {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.matmul(&rhs.matrix),
        })
    }

    fn check_same_spaces(&self, rhs: &WeightedOperator, op: &'static str) -> Result<()> {
        if self.domain.same_as(&rhs.domain) && self.codomain.same_as(&rhs.codomain) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                op,
                detail: format!(
                    "{}→{} vs {}→{}",
                    self.domain.label(),
                    self.codomain.label(),
                    rhs.domain.label(),
                    rhs.codomain.label()
                ),
            })
        }
    }

    pub fn add(&self, rhs: &WeightedOperator) -> Result<WeightedOperator> {
        self.check_same_spaces(rhs, "add")?;
        Ok(self.with_matrix(&self.matrix + &rhs.matrix))
    }

    pub fn sub(&self, rhs: &WeightedOperator) -> Result<WeightedOperator> {
        self.check_same_spaces(rhs, "sub")?;
        Ok(self.with_matrix(&self.matrix - &rhs.matrix))
    }

    pub fn scale(&self, alpha: f64) -> WeightedOperator {
        self.with_matrix(self.matrix.scale(alpha))
    }

    fn with_matrix(&self, matrix: DenseMatrix) -> WeightedOperator {
        WeightedOperator {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix,
        }
    }

    /// Same matrix viewed on a different pair of spaces.
    pub fn reinterpret(&self, domain: &SpaceRef, codomain: &SpaceRef) -> Result<WeightedOperator> {
        WeightedOperator::new(domain.clone(), codomain.clone(), self.matrix.clone())
    }

    /// L_codᵀ·A·L_dom⁻ᵀ: the matrix in Gram-orthonormal coordinates, where the
    /// weighted adjoint is the transpose and Frobenius is the Hilbert–Schmidt norm.
    pub fn orthonormal_matrix(&self) -> DenseMatrix {
        let y = solve_lower(&self.domain.chol, &self.matrix.transpose()).transpose();
        self.codomain.chol.tr_matmul(&y)
    }

    pub fn adjoint(&self) -> WeightedOperator {
        adjoint(self)
    }
}

/// ‖x − reference‖_F / ‖reference‖_F, or the absolute norm when the reference vanishes.
pub fn relative_residual(x: &DenseMatrix, reference: &DenseMatrix) -> f64 {
    let diff = (x - reference).frobenius_norm();
    let scale = reference.frobenius_norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Adjoint relative to the Grams: G_dom⁻¹·Aᵀ·G_cod.
pub fn adjoint(a: &WeightedOperator) -> WeightedOperator {
    let rhs = a.matrix.tr_matmul(a.codomain.gram());
    WeightedOperator {
        domain: a.codomain.clone(),
        codomain: a.domain.clone(),
        matrix: a.domain.solve(&rhs),
    }
}

/// Weighted singular system restricted to the numerical rank.
///
/// `left` columns are orthonormal in the codomain Gram, `right` columns in the
/// domain Gram, and A·right_k = values_k·left_k.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub left: DenseMatrix,
    pub values: Vec<f64>,
    pub right: DenseMatrix,
    pub rank: usize,
    pub tol: f64,
}

impl SvdFactors {
    /// Gram-orthogonal projector onto span(right) in the domain.
    pub fn row_space_projector(&self, domain: &WeightedSpace) -> DenseMatrix {
        self.right.matmul(&self.right.tr_matmul(domain.gram()))
    }

    /// Gram-orthogonal projector onto span(left) = range of A in the codomain.
    pub fn range_projector(&self, codomain: &WeightedSpace) -> DenseMatrix {
        self.left.matmul(&self.left.tr_matmul(codomain.gram()))
    }

    /// Singular system of A† read off from that of A: values 1/σ in descending
    /// order, with the roles of the left and right vectors exchanged.
    pub fn pseudoinverse_factors(&self) -> SvdFactors {
        let order: Vec<usize> = (0..self.rank).rev().collect();
        SvdFactors {
            left: self.right.select_cols(&order),
            values: order.iter().map(|&k| 1.0 / self.values[k]).collect(),
            right: self.left.select_cols(&order),
            rank: self.rank,
            tol: 0.0,
        }
    }
}

/// Default rank cutoff: 1e-12 · max(dim) · σ₁.
pub fn default_rank_tol(dim_dom: usize, dim_cod: usize, sigma_max: f64) -> f64 {
    1e-12 * dim_dom.max(dim_cod) as f64 * sigma_max
}

/// Weighted SVD through the Euclidean SVD of L_codᵀ·A·L_dom⁻ᵀ.
///
/// `tol = None` applies [`default_rank_tol`].
pub fn weighted_svd(a: &WeightedOperator, tol: Option<f64>) -> Result<SvdFactors> {
    let l_dom = a.domain.chol();
    let l_cod = a.codomain.chol();
    // Ã = L_codᵀ · A · L_dom⁻ᵀ
    let a_right = solve_lower(l_dom, &a.matrix.transpose()).transpose();
    let tilde = l_cod.tr_matmul(&a_right);
    let f = svd(&tilde)?;
    let sigma_max = f.sigma.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or_else(|| default_rank_tol(a.domain.dim(), a.codomain.dim(), sigma_max));
    let rank = f.sigma.iter().take_while(|&&s| s > tol).count();
    let keep: Vec<usize> = (0..rank).collect();
    let left = solve_lower_transpose(l_cod, &f.u.select_cols(&keep));
    let right = solve_lower_transpose(l_dom, &f.w.select_cols(&keep));
    Ok(SvdFactors {
        left,
        values: f.sigma[..rank].to_vec(),
        right,
        rank,
        tol,
    })
}

/// Moore–Penrose inverse Σ σ_k⁻¹ · right_k · left_kᵀ · G_cod.
pub fn pseudoinverse(a: &WeightedOperator, tol: Option<f64>) -> Result<WeightedOperator> {
    let f = weighted_svd(a, tol)?;
    Ok(pseudoinverse_from_svd(a, &f))
}

pub fn pseudoinverse_from_svd(a: &WeightedOperator, f: &SvdFactors) -> WeightedOperator {
    let inv: Vec<f64> = f.values.iter().map(|s| 1.0 / s).collect();
    let lg = f.left.tr_matmul(a.codomain.gram());
    let matrix = f.right.scale_columns(&inv).matmul(&lg);
    WeightedOperator {
        domain: a.codomain.clone(),
        codomain: a.domain.clone(),
        matrix,
    }
}

/// Largest weighted singular value.
pub fn op_norm(a: &WeightedOperator) -> Result<f64> {
    Ok(weighted_svd(a, None)?.values.first().copied().unwrap_or(0.0))
}

/// Which space a fractional graph power acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// (I + B*B)^{-s} on the domain of B.
    Domain,
    /// (I + BB*)^{-s} on the codomain of B.
    Codomain,
}

/// (I + B*B)^{-s} or (I + BB*)^{-s}, defined spectrally from the weighted SVD of B.
///
/// On the span of the singular vectors the factor is (1 + σ_k²)^{-s}; on the
/// orthogonal complement it is the identity.
pub fn frac_graph_power(b: &WeightedOperator, s: f64, side: Side) -> Result<WeightedOperator> {
    let f = weighted_svd(b, None)?;
    Ok(frac_graph_power_from_svd(b, &f, s, side))
}

pub fn frac_graph_power_from_svd(
    b: &WeightedOperator,
    f: &SvdFactors,
    s: f64,
    side: Side,
) -> WeightedOperator {
    let (space, basis) = match side {
        Side::Domain => (&b.domain, &f.right),
        Side::Codomain => (&b.codomain, &f.left),
    };
    let n = space.dim();
    if s == 0.0 || f.rank == 0 {
        return WeightedOperator::identity(space);
    }
    // (1+σ²)^{-s} − 1 without cancellation for small σ
    let weights: Vec<f64> = f
        .values
        .iter()
        .map(|sv| (-s * (sv * sv).ln_1p()).exp_m1())
        .collect();
    let correction = basis
        .scale_columns(&weights)
        .matmul(&basis.tr_matmul(space.gram()));
    let matrix = &DenseMatrix::identity(n) + &correction;
    WeightedOperator {
        domain: space.clone(),
        codomain: space.clone(),
        matrix,
    }
}

/// The four Penrose residuals of a candidate pair (A, B).
///
/// `aba` and `bab` are Frobenius norms of ABA − A and BAB − B; the symmetry
/// residuals measure how far AB and BA are from self-adjoint, in
/// Gram-orthonormal coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenroseResiduals {
    pub aba: f64,
    pub bab: f64,
    pub ab_sym: f64,
    pub ba_sym: f64,
    pub norm_a: f64,
    pub norm_b: f64,
}

impl PenroseResiduals {
    pub fn max_abs(&self) -> f64 {
        self.aba.max(self.bab).max(self.ab_sym).max(self.ba_sym)
    }

    /// Worst residual with ABA−A scaled by 1+‖A‖_F and BAB−B by 1+‖B‖_F.
    pub fn relative(&self) -> f64 {
        (self.aba / (1.0 + self.norm_a))
            .max(self.bab / (1.0 + self.norm_b))
            .max(self.ab_sym)
            .max(self.ba_sym)
    }
}

fn check_reverse_pair(a: &WeightedOperator, b: &WeightedOperator, op: &'static str) -> Result<()> {
    if a.domain.same_as(&b.codomain) && a.codomain.same_as(&b.domain) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            op,
            detail: format!(
                "A: {}→{}, B: {}→{}",
                a.domain.label(),
                a.codomain.label(),
                b.domain.label(),
                b.codomain.label()
            ),
        })
    }
}

pub fn penrose_residuals(a: &WeightedOperator, b: &WeightedOperator) -> Result<PenroseResiduals> {
    check_reverse_pair(a, b, "penrose_residuals")?;
    let ab = a.matrix.matmul(&b.matrix);
    let ba = b.matrix.matmul(&a.matrix);
    let aba = (&ab.matmul(&a.matrix) - &a.matrix).frobenius_norm();
    let bab = (&ba.matmul(&b.matrix) - &b.matrix).frobenius_norm();
    let asym = |space: &WeightedSpace, p: &DenseMatrix| {
        let x = space.to_orthonormal(p);
        (&x - &x.transpose()).frobenius_norm()
    };
    Ok(PenroseResiduals {
        aba,
        bab,
        ab_sym: asym(&a.codomain, &ab),
        ba_sym: asym(&a.domain, &ba),
        norm_a: a.matrix.frobenius_norm(),
        norm_b: b.matrix.frobenius_norm(),
    })
}

/// Fails with `NotAPseudoinversePair` unless B is the Moore–Penrose inverse of A
/// to within [`PAIR_CHECK_TOL`].
pub fn verify_pair(a: &WeightedOperator, b: &WeightedOperator) -> Result<PenroseResiduals> {
    let r = penrose_residuals(a, b)?;
    let residual = r.relative();
    if residual.is_nan() || residual > PAIR_CHECK_TOL {
        return Err(Error::NotAPseudoinversePair { residual });
    }
    Ok(r)
}

/// T_B together with T_{B*}.
#[derive(Clone, Debug)]
pub struct TbPair {
    /// T_B = B(I+B*B)^{-1/2} + A*(I+B*B)^{-1/2}, from the codomain of A to its domain.
    pub t_b: WeightedOperator,
    /// T_{B*} = B*(I+BB*)^{-1/2} + A(I+BB*)^{-1/2}, from the domain of A to its codomain.
    pub t_b_star: WeightedOperator,
}

pub fn t_b(a: &WeightedOperator, b: &WeightedOperator) -> Result<TbPair> {
    let f = weighted_svd(b, None)?;
    t_b_from_svd(a, b, &f)
}

/// [`t_b`] with a precomputed singular system `f` of B.
pub fn t_b_from_svd(a: &WeightedOperator, b: &WeightedOperator, f: &SvdFactors) -> Result<TbPair> {
    verify_pair(a, b)?;
    let root_dom = frac_graph_power_from_svd(b, f, 0.5, Side::Domain);
    let root_cod = frac_graph_power_from_svd(b, f, 0.5, Side::Codomain);
    let t_b = b.compose(&root_dom)?.add(&adjoint(a).compose(&root_dom)?)?;
    let t_b_star = adjoint(b).compose(&root_cod)?.add(&a.compose(&root_cod)?)?;
    Ok(TbPair { t_b, t_b_star })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(label: &str, diag: &[f64]) -> SpaceRef {
        WeightedSpace::new(label, DenseMatrix::from_diag(diag)).unwrap()
    }

    #[test]
    fn euclidean_adjoint_is_transpose() {
        let d = WeightedSpace::euclidean("d", 3);
        let c = WeightedSpace::euclidean("c", 2);
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let a = WeightedOperator::new(d, c, m.clone()).unwrap();
        assert_eq!(adjoint(&a).matrix(), &m.transpose());
    }

    #[test]
    fn identity_between_grams() {
        let g1 = DenseMatrix::from_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let g2 = DenseMatrix::from_rows(&[&[3.0, -1.0], &[-1.0, 2.0]]);
        let d = WeightedSpace::new("H1", g1.clone()).unwrap();
        let c = WeightedSpace::new("H2", g2.clone()).unwrap();
        let a = WeightedOperator::new(d, c, DenseMatrix::identity(2)).unwrap();
        let expected = cholesky_solve(&cholesky(&g1).unwrap(), &g2);
        assert!(relative_residual(adjoint(&a).matrix(), &expected) < 1e-14);
    }

    #[test]
    fn diagonal_svd_and_pinv() {
        let e = WeightedSpace::euclidean("e", 2);
        let a = WeightedOperator::new(e.clone(), e, DenseMatrix::from_diag(&[3.0, 0.0])).unwrap();
        let f = weighted_svd(&a, None).unwrap();
        assert_eq!(f.rank, 1);
        assert!((f.values[0] - 3.0).abs() < 1e-15);

        let e = WeightedSpace::euclidean("e", 2);
        let a = WeightedOperator::new(e.clone(), e, DenseMatrix::from_diag(&[2.0, 0.0])).unwrap();
        let b = pseudoinverse(&a, None).unwrap();
        assert!(relative_residual(b.matrix(), &DenseMatrix::from_diag(&[0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn pseudoinverse_factors_match_direct_svd() {
        let d = space("d", &[1.0, 2.0, 3.0]);
        let c = space("c", &[4.0, 0.5]);
        let m = DenseMatrix::from_rows(&[&[1.0, -2.0, 0.5], &[0.25, 1.0, 3.0]]);
        let a = WeightedOperator::new(d, c, m).unwrap();
        let fa = weighted_svd(&a, None).unwrap();
        let b = pseudoinverse_from_svd(&a, &fa);
        let direct = weighted_svd(&b, None).unwrap();
        let derived = fa.pseudoinverse_factors();
        for (x, y) in direct.values.iter().zip(&derived.values) {
            assert!((x - y).abs() < 1e-13 * x);
        }
        let p1 = direct.range_projector(b.codomain());
        let p2 = derived.range_projector(b.codomain());
        assert!((&p1 - &p2).max_abs() < 1e-12);
    }

    #[test]
    fn zero_operator() {
        let d = space("d", &[1.0, 2.0, 3.0]);
        let c = space("c", &[4.0, 5.0]);
        let z = WeightedOperator::zero(&d, &c);
        let f = weighted_svd(&z, None).unwrap();
        assert_eq!(f.rank, 0);
        assert!(f.values.is_empty());
        let b = pseudoinverse(&z, None).unwrap();
        assert_eq!(b.matrix().max_abs(), 0.0);
        assert_eq!(op_norm(&z).unwrap(), 0.0);
        let tb = t_b(&z, &b).unwrap();
        assert_eq!(tb.t_b.matrix().max_abs(), 0.0);
        for s in [0.3, -1.0, 2.0] {
            let p = frac_graph_power(&b, s, Side::Domain).unwrap();
            assert_eq!(p.matrix(), &DenseMatrix::identity(2));
        }
    }

    #[test]
    fn invertible_pinv_is_inverse() {
        let e = WeightedSpace::euclidean("e", 2);
        let m = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let a = WeightedOperator::new(e.clone(), e, m.clone()).unwrap();
        let b = pseudoinverse(&a, None).unwrap();
        assert!(relative_residual(&m.matmul(b.matrix()), &DenseMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn scalar_t_b() {
        let e = WeightedSpace::euclidean("e", 3);
        let a = WeightedOperator::identity(&e);
        let b = pseudoinverse(&a, None).unwrap();
        let tb = t_b(&a, &b).unwrap();
        let expected = DenseMatrix::identity(3).scale(2f64.sqrt());
        assert!(relative_residual(tb.t_b.matrix(), &expected) < 1e-15);
        assert!(relative_residual(tb.t_b_star.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn t_b_rejects_non_pair() {
        let e = WeightedSpace::euclidean("e", 2);
        let a = WeightedOperator::identity(&e);
        let not_b = a.scale(2.0);
        assert!(matches!(t_b(&a, &not_b), Err(Error::NotAPseudoinversePair { .. })));
    }

    #[test]
    fn unit_singular_value_halves() {
        let e = WeightedSpace::euclidean("e", 2);
        let b = WeightedOperator::new(e.clone(), e, DenseMatrix::from_diag(&[1.0, 0.0])).unwrap();
        let p = frac_graph_power(&b, 1.0, Side::Codomain).unwrap();
        assert!((p.matrix()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((p.matrix()[(1, 1)] - 1.0).abs() < 1e-15);
        let zero_power = frac_graph_power(&b, 0.0, Side::Domain).unwrap();
        assert_eq!(zero_power.matrix(), &DenseMatrix::identity(2));
    }

    #[test]
    fn compose_checks_spaces() {
        let a = WeightedSpace::euclidean("a", 2);
        let b = space("b", &[1.0, 2.0]);
        let x = WeightedOperator::identity(&a);
        let y = WeightedOperator::identity(&b);
        assert!(matches!(x.compose(&y), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn orthonormal_adjoint_is_transpose() {
        let d = space("d", &[4.0, 0.25, 9.0]);
        let c = space("c", &[2.0, 0.5]);
        let m = DenseMatrix::from_rows(&[&[1.0, -2.0, 0.5], &[3.0, 1.0, -1.0]]);
        let a = WeightedOperator::new(d, c, m).unwrap();
        let lhs = adjoint(&a).orthonormal_matrix();
        assert!(relative_residual(&lhs, &a.orthonormal_matrix().transpose()) < 1e-15);
    }

}
