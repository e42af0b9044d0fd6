use super::assembly::FemMatrices;
use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, gen_sym_eig, solve_lower, DenseMatrix};

/// Discrete harmonic functions: P1 fields whose stiffness residual vanishes at
/// every interior vertex.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    /// Columns span the harmonic subspace and are orthonormal in K + TᵀMbT.
    pub basis: DenseMatrix,
    /// Harmonic extension of each boundary nodal function (column j has trace e_j).
    pub extension: DenseMatrix,
    pub interior: Vec<usize>,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// True when the mesh has no interior vertex and every field is harmonic.
    pub fn is_degenerate(&self) -> bool {
        self.interior.is_empty()
    }
}

/// Harmonic extension operator: boundary values → full nodal vector with
/// (K·u)_I = 0, computed by a Cholesky solve on the interior stiffness block.
pub fn harmonic_extension(mesh: &Mesh, mats: &FemMatrices) -> Result<DenseMatrix> {
    let n = mesh.n_vertices();
    let nb = mesh.n_boundary();
    let interior = mesh.interior_vertices();
    let mut ext = DenseMatrix::zeros(n, nb);
    for (j, &b) in mesh.boundary_loop.iter().enumerate() {
        ext[(b, j)] = 1.0;
    }
    if interior.is_empty() {
        return Ok(ext);
    }
    let k_ii = mats.stiffness.select(&interior, &interior);
    let k_ib = mats.stiffness.select(&interior, &mesh.boundary_loop);
    let l = cholesky(&k_ii)?;
    let u_i = cholesky_solve(&l, &k_ib);
    for (r, &i) in interior.iter().enumerate() {
        for j in 0..nb {
            ext[(i, j)] = -u_i[(r, j)];
        }
    }
    Ok(ext)
}

pub fn harmonic_basis(mesh: &Mesh, mats: &FemMatrices) -> Result<HarmonicBasis> {
    if mesh.n_boundary() == 0 {
        return Err(Error::InvalidMesh("mesh has no boundary vertices".into()));
    }
    let interior = mesh.interior_vertices();
    if interior.is_empty() {
        log::warn!("mesh has no interior vertices; every P1 field is harmonic");
    }
    let extension = harmonic_extension(mesh, mats)?;
    let gram = mats.h1_boundary_gram();
    let coupling = extension.tr_matmul(&gram.matmul(&extension)).symmetrized();
    let l = cholesky(&coupling)?;
    // H = H0 · L⁻ᵀ
    let basis = solve_lower(&l, &extension.transpose()).transpose();
    Ok(HarmonicBasis {
        basis,
        extension,
        interior,
    })
}

/// Steklov eigenpairs and the matching singular system of the trace operator.
#[derive(Clone, Debug)]
pub struct SteklovSystem {
    /// Ascending, λ₀ = 0.
    pub lambdas: Vec<f64>,
    /// s_k = (1 + λ_k)^{-1/2}, descending.
    pub sigmas: Vec<f64>,
    /// Harmonic eigenfunctions v_k, orthonormal in K + TᵀMbT.
    pub v: DenseMatrix,
    /// Boundary functions z_k = Γv_k / s_k, orthonormal in Mb.
    pub z: DenseMatrix,
}

/// Solves K·v = λ·TᵀMbT·v on the harmonic subspace.
///
/// In the coordinates of the boundary-node extension H0 this is the
/// Dirichlet-to-Neumann pencil (H0ᵀ·K·H0, Mb), since T·H0 = I.
pub fn steklov(mesh: &Mesh, mats: &FemMatrices) -> Result<SteklovSystem> {
    let ext = harmonic_extension(mesh, mats)?;
    let dtn = ext.tr_matmul(&mats.stiffness.matmul(&ext)).symmetrized();
    let eig = gen_sym_eig(&dtn, &mats.boundary_mass)?;
    let sigmas: Vec<f64> = eig.values.iter().map(|l| 1.0 / (1.0 + l).sqrt()).collect();
    let v = ext.matmul(&eig.vectors).scale_columns(&sigmas);
    Ok(SteklovSystem {
        lambdas: eig.values,
        sigmas,
        v,
        z: eig.vectors,
    })
}

/// Spectral data of the boundary Laplace–Beltrami pencil (Kb, Mb).
#[derive(Clone, Debug)]
pub struct BoundarySpectrum {
    pub mu: Vec<f64>,
    /// Mb-orthonormal eigenvectors.
    pub w: DenseMatrix,
    mass: DenseMatrix,
}

impl BoundarySpectrum {
    pub fn new(mats: &FemMatrices) -> Result<Self> {
        let eig = gen_sym_eig(&mats.boundary_stiffness, &mats.boundary_mass)?;
        Ok(BoundarySpectrum {
            mu: eig.values,
            w: eig.vectors,
            mass: mats.boundary_mass.clone(),
        })
    }

    /// G_s = Mb·W·diag((1+μ_k)^s)·Wᵀ·Mb for 0 ≤ s ≤ 1.
    pub fn gram(&self, s: f64) -> Result<DenseMatrix> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::SOutOfRange { s, range: "[0, 1]" });
        }
        let weights: Vec<f64> = self.mu.iter().map(|m| (1.0 + m.max(0.0)).powf(s)).collect();
        let mw = self.mass.matmul(&self.w);
        Ok(mw.scale_columns(&weights).matmul(&mw.transpose()).symmetrized())
    }
}

/// Spectral surrogate for the H^s(∂Ω) Gram on the boundary nodal space.
pub fn boundary_fractional_gram(mats: &FemMatrices, s: f64) -> Result<DenseMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::SOutOfRange { s, range: "[0, 1]" });
    }
    BoundarySpectrum::new(mats)?.gram(s)
}
