//! Manufactured solutions, error norms, convergence studies and probes.

pub mod convergence;
pub mod manufactured;
pub mod norms;
pub mod probes;

pub use convergence::{convergence_study, projection_study, rates, LevelResult, Rates, StudyReport, StudySetup};
pub use manufactured::{ExactSolution, ManufacturedCircle};
pub use norms::{error_norms, DiscreteField, ErrorNorms, FeFunction};
