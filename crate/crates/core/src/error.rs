use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported Lie algebra family `{0}`")]
    UnsupportedFamily(String),

    #[error("{family}({n}) is below the minimum rank {min}")]
    RankTooSmall { family: String, n: usize, min: usize },

    #[error("elements belong to different ambient algebras")]
    AmbientMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix does not expand in the basis (residual {residual:.3e})")]
    ExpansionResidual { residual: f64 },

    #[error("basis matrices are linearly dependent")]
    DependentBasis,

    #[error("subspace is not contained in the enclosing space (residual {residual:.3e})")]
    NotContained { residual: f64 },

    #[error("subspaces carry different inner-product forms")]
    FormMismatch,

    #[error("Cartan relations fail, the pair is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("k is not an ideal complement of p2 in h (residual {residual:.3e})")]
    NotIdeal { residual: f64 },

    #[error("deformation parameter must be a positive finite real, got {0}")]
    InvalidDeformation(f64),

    #[error("the bar model is not reductive (residual {residual:.3e})")]
    NotReductive { residual: f64 },

    #[error("subspace is not inside p1 (residual {residual:.3e})")]
    NotInP1 { residual: f64 },

    #[error("[m,m] is not contained in k (residual {residual:.3e}); refusing to sample the lifted action")]
    HypothesisNotVerified { residual: f64 },

    #[error("bracket closure of m grows from {expected} to {got} dimensions, m is not a section candidate")]
    SectionNotClosed { expected: usize, got: usize },

    #[error("subspace is not a subalgebra (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },

    #[error("group element is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("construction `{construction}` is not available for {algebra}")]
    UnsupportedConstruction { construction: String, algebra: String },
}
