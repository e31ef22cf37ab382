use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row")]
    EmptyMatrix,

    #[error("matrix is not Hermitian: max |M_ij - conj(M_ji)| = {max_asymmetry:e} exceeds tolerance {tol:e}")]
    AsymmetryExceedsTolerance { max_asymmetry: f64, tol: f64 },

    #[error("invalid tolerance {0}: must be positive and finite")]
    InvalidTolerance(f64),

    #[error("Hermitian eigensolver did not converge")]
    EigensolverFailure,

    #[error("t must be positive (got {0})")]
    NonPositiveTime(f64),

    #[error("t must be finite (got {0})")]
    NonFiniteTime(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("measure `{measure}` has no `{regime}` regime")]
    UnsupportedRegime {
        measure: &'static str,
        regime: &'static str,
    },

    #[error("communities overlap at node {0}")]
    OverlappingCommunities(usize),

    #[error("community is empty")]
    EmptyCommunity,

    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("closeness has negative off-diagonal entry {value:e} at ({i}, {j}); use signed modularity")]
    NegativeEntries { i: usize, j: usize, value: f64 },

    #[error("total closeness weight is zero; modularity is undefined")]
    DegenerateTotalWeight,

    #[error("partitions cover different node sets ({left} vs {right} nodes)")]
    MismatchedNodeSets { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("mean degree {mean_degree} is infeasible for communities of {community_size} nodes")]
    InfeasibleDegree { mean_degree: f64, community_size: usize },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("sigma must be non-negative (got {0})")]
    NegativeSigma(f64),

    #[error("epsilon must be non-negative (got {0})")]
    NegativeEpsilon(f64),

    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },

    #[error("sigma = {sigma}, sample {sample}: {source}")]
    Sample {
        sigma: f64,
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Sample { source, .. } => source.is_numerical(),
            other => matches!(
                other,
                Error::EigensolverFailure | Error::DegenerateTotalWeight | Error::InvalidDensityMatrix(_)
            ),
        }
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
