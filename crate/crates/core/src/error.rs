use thiserror::Error;

/// Errors raised while building domains, meshes and polynomial fits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("degenerate triangle: vertices are collinear")]
    DegenerateTriangle,

    #[error("polygon edges {first} and {second} intersect")]
    SelfIntersecting { first: usize, second: usize },

    #[error("polygon vertex {index} repeats vertex {previous}")]
    RepeatedVertex { index: usize, previous: usize },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("meshes of mixed degrees cannot be joined ({expected} vs {found})")]
    MixedDegrees { expected: usize, found: usize },

    #[error("not polynomial-determining at this degree: {points} points, {required} required")]
    NotDetermining { points: usize, required: usize },

    #[error("AM too large: projected Vandermonde size {projected} exceeds cap {cap}")]
    AmTooLarge { projected: usize, cap: usize },

    #[error("numerically rank-deficient Vandermonde: residual column norm {residual:e} at step {step} of {of}")]
    RankDeficient { step: usize, of: usize, residual: f64 },

    #[error("singular triangular factor in refinement round {round} (row {row})")]
    SingularFactor { round: usize, row: usize },

    #[error("singular square system: {0}")]
    Singular(&'static str),

    #[error("unsupported basis family for {0}")]
    UnsupportedFamily(&'static str),

    #[error("control mesh too coarse: {control} points, need at least {required}")]
    ControlTooCoarse { control: usize, required: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that come from numerics (rank, singularity, memory cap)
    /// rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::SingularFactor { .. } | Error::Singular(_) | Error::AmTooLarge { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
