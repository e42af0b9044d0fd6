use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("operator spaces do not match in {op}: {detail}")]
    SpaceMismatch { op: &'static str, detail: String },

    #[error("operators are not a Moore-Penrose pair (Penrose residual {residual:e})")]
    NotAPseudoinversePair { residual: f64 },

    #[error("requested rank {rank} exceeds min({dim_dom}, {dim_cod})")]
    RankTooLarge {
        rank: usize,
        dim_dom: usize,
        dim_cod: usize,
    },

    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh file line {line}: {message}")]
    MeshFormat { line: usize, message: String },

    #[error("mesh has no interior vertices")]
    NoInteriorVertices,

    #[error("s = {s} outside the admissible range {range}")]
    SOutOfRange { s: f64, range: &'static str },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
