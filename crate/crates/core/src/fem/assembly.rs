use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::operator::{SpaceRef, WeightedOperator, WeightedSpace};

/// Element matrices of lowest-order Lagrange elements on a mesh.
///
/// Boundary matrices are indexed by position along `boundary_loop`.
#[derive(Clone, Debug)]
pub struct FemMatrices {
    /// ∫ ∇φ_i · ∇φ_j
    pub stiffness: DenseMatrix,
    /// ∫ φ_i φ_j
    pub mass: DenseMatrix,
    /// ∫_∂Ω ψ_i ψ_j dσ
    pub boundary_mass: DenseMatrix,
    /// ∫_∂Ω ψ_i' ψ_j' dσ (arclength derivative)
    pub boundary_stiffness: DenseMatrix,
    /// Nodal restriction to the boundary loop, n_b × n.
    pub trace: DenseMatrix,
}

impl FemMatrices {
    pub fn n(&self) -> usize {
        self.stiffness.rows()
    }

    pub fn n_boundary(&self) -> usize {
        self.trace.rows()
    }

    /// Tᵀ·Mb·T, the boundary term of the H¹_∂ Gram.
    pub fn boundary_term(&self) -> DenseMatrix {
        self.trace.tr_matmul(&self.boundary_mass.matmul(&self.trace))
    }

    /// K + Tᵀ·Mb·T.
    pub fn h1_boundary_gram(&self) -> DenseMatrix {
        &self.stiffness + &self.boundary_term()
    }
}

/// Gradients of the three barycentric hat functions on a triangle.
fn hat_gradients(p: [[f64; 2]; 3], twice_area: f64) -> [[f64; 2]; 3] {
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        // rotate the opposite edge by -90°, scaled by 1/(2|T|)
        g[i] = [(a[1] - b[1]) / twice_area, (b[0] - a[0]) / twice_area];
    }
    g
}

pub fn assemble(mesh: &Mesh) -> Result<FemMatrices> {
    let n = mesh.n_vertices();
    let mut stiffness = DenseMatrix::zeros(n, n);
    let mut mass = DenseMatrix::zeros(n, n);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(t);
        if area <= 1e-14 {
            return Err(Error::DegenerateTriangle { index: t, area });
        }
        let p = [
            mesh.vertices[tri[0]],
            mesh.vertices[tri[1]],
            mesh.vertices[tri[2]],
        ];
        let g = hat_gradients(p, 2.0 * area);
        for i in 0..3 {
            for j in 0..3 {
                let k = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                stiffness[(tri[i], tri[j])] += k;
                let m = if i == j { area / 6.0 } else { area / 12.0 };
                mass[(tri[i], tri[j])] += m;
            }
        }
    }

    let nb = mesh.n_boundary();
    let mut boundary_mass = DenseMatrix::zeros(nb, nb);
    let mut boundary_stiffness = DenseMatrix::zeros(nb, nb);
    let mut trace = DenseMatrix::zeros(nb, n);
    for i in 0..nb {
        let j = (i + 1) % nb;
        let p = mesh.vertices[mesh.boundary_loop[i]];
        let q = mesh.vertices[mesh.boundary_loop[j]];
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        boundary_mass[(i, i)] += len / 3.0;
        boundary_mass[(j, j)] += len / 3.0;
        boundary_mass[(i, j)] += len / 6.0;
        boundary_mass[(j, i)] += len / 6.0;
        boundary_stiffness[(i, i)] += 1.0 / len;
        boundary_stiffness[(j, j)] += 1.0 / len;
        boundary_stiffness[(i, j)] -= 1.0 / len;
        boundary_stiffness[(j, i)] -= 1.0 / len;
        trace[(i, mesh.boundary_loop[i])] = 1.0;
    }

    Ok(FemMatrices {
        stiffness,
        mass,
        boundary_mass,
        boundary_stiffness,
        trace,
    })
}

/// The three Hilbert spaces of the discrete problem and the trace operator between them.
#[derive(Clone, Debug)]
pub struct TraceSpaces {
    /// H¹_∂(Ω), Gram K + TᵀMbT.
    pub h1: SpaceRef,
    /// L²(∂Ω), Gram Mb.
    pub l2_boundary: SpaceRef,
    /// L²(Ω), Gram M.
    pub l2: SpaceRef,
    /// Γ : H¹_∂(Ω) → L²(∂Ω), matrix T.
    pub gamma: WeightedOperator,
}

pub fn spaces_and_trace(mats: &FemMatrices) -> Result<TraceSpaces> {
    let h1 = WeightedSpace::new("H1_boundary", mats.h1_boundary_gram())?;
    let l2_boundary = WeightedSpace::new("L2_boundary", mats.boundary_mass.clone())?;
    let l2 = WeightedSpace::new("L2_domain", mats.mass.clone())?;
    let gamma = WeightedOperator::new(h1.clone(), l2_boundary.clone(), mats.trace.clone())?;
    Ok(TraceSpaces {
        h1,
        l2_boundary,
        l2,
        gamma,
    })
}
