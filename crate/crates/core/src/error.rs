use thiserror::Error;

/// Errors produced by the samplers, chains and experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point lies outside the domain")]
    OutsideDomain,

    #[error("domain interior is empty")]
    EmptyInterior,

    #[error("rejection sampler exhausted {attempts} attempts without an admissible configuration")]
    RejectionExhausted { attempts: u64 },

    #[error("heat-bath resampling exhausted {attempts} attempts (update radius {radius}, ball centre {center:?})")]
    HeatBathExhausted {
        attempts: u64,
        radius: f64,
        center: Vec<f64>,
    },

    #[error(
        "oracle domain may hold more than {max_spheres} sphere(s): diameter {diameter} is not below {limit}"
    )]
    OracleDomainTooLarge {
        max_spheres: usize,
        diameter: f64,
        limit: f64,
    },

    #[error("adding the centre would leave the extended state space")]
    InvalidEdge,

    #[error("subregion is not contained in the domain")]
    NotASubregion,

    #[error("no admissible edge endpoint found after {attempts} attempts")]
    NoValidEdge { attempts: u64 },

    #[error("eta = {eta} exceeds the admissible maximum {eta_max}")]
    EtaTooLarge { eta: f64, eta_max: f64 },

    #[error("sample set is empty")]
    EmptySamples,

    #[error("snapshot rejected: {0}")]
    Snapshot(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
