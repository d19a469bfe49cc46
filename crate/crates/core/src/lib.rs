pub mod analysis;
pub mod assembly;
pub mod config;
pub mod discretization;
pub mod error;
pub mod geometry;
pub mod ife_space;
pub mod jet;
pub mod mesh;
pub mod poly;
pub mod quadrature;

pub use error::{Error, Result};
