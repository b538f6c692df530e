use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed surface spec: {0}")]
    MalformedSpec(String),

    #[error("edge ({p1},{e1}) cannot be glued to edge ({p2},{e2}): {reason}")]
    NonMatchingEdge {
        p1: usize,
        e1: usize,
        p2: usize,
        e2: usize,
        reason: String,
    },

    #[error("surface is disconnected ({components} components)")]
    DisconnectedSurface { components: usize },

    #[error("matrix is not in SL(2,R): det = {det}")]
    NotUnimodular { det: f64 },

    #[error("wedge comparison within tolerance (relative cross product {cross:e}); input needs exact arithmetic")]
    ToleranceBreakdown { cross: f64 },

    #[error("unknown singularity id {0}")]
    UnknownSingularity(usize),

    #[error("requested radius {requested} exceeds enumeration radius {available}")]
    RadiusExceedsEnumeration { requested: f64, available: f64 },

    #[error("function support radius {support} exceeds enumeration radius {available}")]
    SupportExceedsEnumeration { support: f64, available: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("schedule violation: {0}")]
    ScheduleViolation(String),

    #[error("empty sample")]
    EmptySample,

    #[error("test function has zero mass")]
    ZeroMassPsi,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable name, used by the CLI error record and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedSpec(_) => "MalformedSpec",
            Error::NonMatchingEdge { .. } => "NonMatchingEdge",
            Error::DisconnectedSurface { .. } => "DisconnectedSurface",
            Error::NotUnimodular { .. } => "NotUnimodular",
            Error::ToleranceBreakdown { .. } => "ToleranceBreakdown",
            Error::UnknownSingularity(_) => "UnknownSingularity",
            Error::RadiusExceedsEnumeration { .. } => "RadiusExceedsEnumeration",
            Error::SupportExceedsEnumeration { .. } => "SupportExceedsEnumeration",
            Error::InsufficientData(_) => "InsufficientData",
            Error::ScheduleViolation(_) => "ScheduleViolation",
            Error::EmptySample => "EmptySample",
            Error::ZeroMassPsi => "ZeroMassPsi",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }

    /// Whether the error stems from bad input rather than a failed computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedSpec(_)
                | Error::NonMatchingEdge { .. }
                | Error::DisconnectedSurface { .. }
                | Error::NotUnimodular { .. }
                | Error::UnknownSingularity(_)
                | Error::InvalidArgument(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
