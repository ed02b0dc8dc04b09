use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),
    #[error("complexity {0} is below 2")]
    ComplexityTooLow(i64),
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("coordinates violate the matching equations: {0}")]
    Matching(String),
    #[error("coordinates trace {0} components")]
    Disconnected(usize),
    #[error("curve is null")]
    NullCurve,
    #[error("walk does not describe a simple closed curve")]
    NotSimple,
    #[error("curves live on different surfaces ({0} vs {1})")]
    SurfaceMismatch(String, String),
    #[error("multicurve components intersect")]
    NotDisjoint,
    #[error("multicurve repeats a component")]
    DuplicateComponent,
    #[error("curve is not essential")]
    NotEssential,
    #[error("curve is not surviving")]
    NotSurviving,
    #[error("curve is not a vertex of the {0} complex")]
    NotAVertex(String),
    #[error("projection of the witness boundary to its own witness is empty")]
    EmptyProjection,
    #[error("enumeration budget too large: {0}")]
    BudgetTooLarge(String),
    #[error("distance undecided within budget {0}")]
    Undecided(u32),
    #[error("witness geodesic undecided within budget {0}")]
    WitnessGeodesicUndecided(u32),
    #[error("endpoint is not surviving")]
    NotSurvivingEndpoint,
    #[error("not a geodesic: {0}")]
    NotAGeodesic(String),
    #[error("cutoff k = {k} is below max(M, 24) = {min}")]
    KTooSmall { k: u32, min: u32 },
    #[error("order axiom fails: {0}")]
    OrderViolation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedTriangulation(_) => "MalformedTriangulation",
            Error::ComplexityTooLow(_) => "ComplexityTooLow",
            Error::UnknownSurface(_) => "UnknownSurface",
            Error::UnknownCurve(_) => "UnknownCurve",
            Error::Matching(_) => "Matching",
            Error::Disconnected(_) => "Disconnected",
            Error::NullCurve => "NullCurve",
            Error::NotSimple => "NotSimple",
            Error::SurfaceMismatch(..) => "SurfaceMismatch",
            Error::NotDisjoint => "NotDisjoint",
            Error::DuplicateComponent => "DuplicateComponent",
            Error::NotEssential => "NotEssential",
            Error::NotSurviving => "NotSurviving",
            Error::NotAVertex(_) => "NotAVertex",
            Error::EmptyProjection => "EmptyProjection",
            Error::BudgetTooLarge(_) => "BudgetTooLarge",
            Error::Undecided(_) => "Undecided",
            Error::WitnessGeodesicUndecided(_) => "WitnessGeodesicUndecided",
            Error::NotSurvivingEndpoint => "NotSurvivingEndpoint",
            Error::NotAGeodesic(_) => "NotAGeodesic",
            Error::KTooSmall { .. } => "KTooSmall",
            Error::OrderViolation(_) => "OrderViolation",
            Error::Invalid(_) => "Invalid",
        }
    }
}
