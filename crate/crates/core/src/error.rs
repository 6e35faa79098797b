use thiserror::Error;

/// Error taxonomy shared by every module. The variant name doubles as the
/// stable identifier reported by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(i64),
    #[error("genus {0} is negative")]
    NegativeGenus(i64),
    #[error("genus {0} is below the required minimum 2")]
    GenusTooSmall(i64),
    #[error("rank {0} must be at least 1")]
    InvalidRank(i64),
    #[error("polygon is not convex: {0}")]
    NotConvex(String),
    #[error("bad polygon endpoints: {0}")]
    BadEndpoints(String),
    #[error("rank {r} does not divide degree {d}")]
    IndivisibleDegree { r: i64, d: i64 },
    #[error("endpoint mismatch: ({0}, {1}) vs ({2}, {3})")]
    EndpointMismatch(i64, i64, i64, i64),
    #[error("enumeration exceeded the node cap of {0}")]
    BudgetExceeded(u64),
    #[error("invalid admissibility constraints: {0}")]
    InvalidConstraints(String),
    #[error("point {0} has no image under the point map")]
    PointNotMapped(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPrimeCharacteristic(_) => "NonPrimeCharacteristic",
            Error::NegativeGenus(_) => "NegativeGenus",
            Error::GenusTooSmall(_) => "GenusTooSmall",
            Error::InvalidRank(_) => "InvalidRank",
            Error::NotConvex(_) => "NotConvex",
            Error::BadEndpoints(_) => "BadEndpoints",
            Error::IndivisibleDegree { .. } => "IndivisibleDegree",
            Error::EndpointMismatch(..) => "EndpointMismatch",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::InvalidConstraints(_) => "InvalidConstraints",
            Error::PointNotMapped(_) => "PointNotMapped",
            Error::Parse(_) => "Parse",
            Error::Overflow(_) => "Overflow",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
