use super::assembly::{FemMatrices, TraceSpaces};
use super::mesh::Mesh;
use crate::error::Result;
use crate::linalg::{cholesky, cholesky_solve, DenseMatrix};
use crate::operator::{adjoint, pseudoinverse_from_svd, weighted_svd, SvdFactors, WeightedOperator};

/// Embedding and solution operators of the Robin and Dirichlet Poisson problems.
#[derive(Clone, Debug)]
pub struct PoissonOperators {
    /// E : H¹_∂ → L², the identity matrix.
    pub e: WeightedOperator,
    /// E* : L² → H¹_∂, the Robin solve (K + TᵀMbT)⁻¹·M.
    pub e_star: WeightedOperator,
    /// E₀* : L² → H¹_∂, the homogeneous Dirichlet solve.
    pub e0_star: WeightedOperator,
    /// E₁* = E* − E₀*, whose range is the harmonic subspace.
    pub e1_star: WeightedOperator,
    /// E₁ = (E₁*)*.
    pub e1: WeightedOperator,
    /// F₁ = E₁†.
    pub f1: WeightedOperator,
    /// Weighted singular system of E₁, from which F₁ is built.
    pub e1_svd: SvdFactors,
}

/// Interior-block Dirichlet solve: u_I = K_II⁻¹·(M·f)_I, u = 0 on the boundary.
fn dirichlet_solve_matrix(mesh: &Mesh, mats: &FemMatrices) -> Result<DenseMatrix> {
    let n = mesh.n_vertices();
    let interior = mesh.interior_vertices();
    let mut out = DenseMatrix::zeros(n, n);
    if interior.is_empty() {
        log::warn!("no interior vertices; Dirichlet solution operator is zero");
        return Ok(out);
    }
    let k_ii = mats.stiffness.select(&interior, &interior);
    let m_i = mats.mass.select_rows(&interior);
    let u_i = cholesky_solve(&cholesky(&k_ii)?, &m_i);
    for (r, &i) in interior.iter().enumerate() {
        for j in 0..n {
            out[(i, j)] = u_i[(r, j)];
        }
    }
    Ok(out)
}

pub fn poisson_operators(
    mesh: &Mesh,
    mats: &FemMatrices,
    spaces: &TraceSpaces,
) -> Result<PoissonOperators> {
    let n = mesh.n_vertices();
    let e = WeightedOperator::new(spaces.h1.clone(), spaces.l2.clone(), DenseMatrix::identity(n))?;
    let e_star = adjoint(&e);
    let e0_star = WeightedOperator::new(
        spaces.l2.clone(),
        spaces.h1.clone(),
        dirichlet_solve_matrix(mesh, mats)?,
    )?;
    let e1_star = e_star.sub(&e0_star)?;
    let e1 = adjoint(&e1_star);
    let e1_svd = weighted_svd(&e1, None)?;
    let f1 = pseudoinverse_from_svd(&e1, &e1_svd);
    Ok(PoissonOperators {
        e,
        e_star,
        e0_star,
        e1_star,
        e1,
        f1,
        e1_svd,
    })
}
