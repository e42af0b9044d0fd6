//! P1 finite elements on polygons: meshes, assembly, the trace operator and
//! its Steklov structure, the boundary fractional Grams, and the Robin and
//! Dirichlet solution operators.
//!
//! Only two space dimensions are supported.

mod assembly;
mod io;
mod mesh;
mod poisson;
mod spectral;

pub use assembly::{assemble, spaces_and_trace, FemMatrices, TraceSpaces};
pub use io::{parse_matrix_csv, parse_mesh, read_mesh, write_matrix_csv, write_mesh};
pub use mesh::{build_mesh, DomainKind, DomainSpec, Mesh};
pub use poisson::{poisson_operators, PoissonOperators};
pub use spectral::{
    boundary_fractional_gram, harmonic_basis, harmonic_extension, steklov, BoundarySpectrum,
    HarmonicBasis, SteklovSystem,
};

use crate::error::Result;

/// Everything derived from one mesh that the experiments share.
#[derive(Clone, Debug)]
pub struct FemProblem {
    pub spec: Option<DomainSpec>,
    pub mesh: Mesh,
    pub mats: FemMatrices,
    pub spaces: TraceSpaces,
}

impl FemProblem {
    pub fn build(spec: DomainSpec) -> Result<Self> {
        let mesh = build_mesh(spec)?;
        let mut p = Self::from_mesh(mesh)?;
        p.spec = Some(spec);
        Ok(p)
    }

    pub fn from_mesh(mesh: Mesh) -> Result<Self> {
        mesh.validate()?;
        let mats = assemble(&mesh)?;
        let spaces = spaces_and_trace(&mats)?;
        Ok(FemProblem {
            spec: None,
            mesh,
            mats,
            spaces,
        })
    }

    pub fn label(&self) -> String {
        match self.spec {
            Some(s) => s.kind.to_string(),
            None => "custom".to_string(),
        }
    }

    pub fn refine(&self) -> usize {
        self.spec.map_or(0, |s| s.refine)
    }

    pub fn dofs(&self) -> usize {
        self.mesh.n_vertices()
    }
}
