use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate parametrization at xi = {xi}: |g'| = {speed:e}")]
    DegenerateParametrization { xi: f64, speed: f64 },

    #[error("point outside the Frenet validity strip: |eta| * kappa = {value:.3} >= 1")]
    OutsideValidityStrip { value: f64 },

    #[error("Newton inversion of the Frenet map did not converge at ({x}, {y}); residual {residual:e}")]
    NewtonDivergence { x: f64, y: f64, residual: f64 },

    #[error("degenerate chord between xi = {xi0} and xi = {xi1}")]
    DegenerateChord { xi0: f64, xi1: f64 },

    #[error("mesh too coarse for the interface: h * kappa = {value:.4} exceeds {limit}")]
    MeshTooCoarse { value: f64, limit: f64 },

    #[error("interface is tangent to edge {edge} (|n . t| = {slope:e}); perturb the mesh")]
    TangentialIntersection { edge: usize, slope: f64 },

    #[error("element {element} is cut at {count} points; the mesh is too coarse for the interface")]
    AmbiguousCut { element: usize, count: usize },

    #[error("cut-cell partition of element {element} degenerated after {levels} bisection levels")]
    DegeneratePartition { element: usize, levels: usize },

    #[error("X0 constraint nullspace has dimension {found}, expected {expected} (element {element})")]
    DimensionMismatch { element: usize, expected: usize, found: usize },

    #[error("local mass matrix of element {element} is singular (condition {condition:e})")]
    SingularMass { element: usize, condition: f64 },

    #[error("stiffness matrix is not positive definite; increase sigma0 (currently {sigma0})")]
    NotPositiveDefinite { sigma0: f64 },

    #[error("linear solver did not reach the residual bound: {residual:e} > {bound:e}")]
    NonConvergence { residual: f64, bound: f64 },

    #[error("gradient Gram matrix of element {element} is singular")]
    SingularGram { element: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateParametrization { .. } => "DegenerateParametrization",
            Error::OutsideValidityStrip { .. } => "OutsideValidityStrip",
            Error::NewtonDivergence { .. } => "NewtonDivergence",
            Error::DegenerateChord { .. } => "DegenerateChord",
            Error::MeshTooCoarse { .. } => "MeshTooCoarse",
            Error::TangentialIntersection { .. } => "TangentialIntersection",
            Error::AmbiguousCut { .. } => "AmbiguousCut",
            Error::DegeneratePartition { .. } => "DegeneratePartition",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularMass { .. } => "SingularMass",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::SingularGram { .. } => "SingularGram",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
