//! Local finite element spaces: tensor polynomials away from the interface
//! and Frenet IFE functions on interface elements.

pub mod basis;
pub mod laplacian;
pub mod projection;
pub mod space;

pub use basis::{build_interface_basis, build_x0, build_x1, FrenetScaling, IfeFunction, InterfaceBasis, Origin};
pub use laplacian::{apply_laplacian, laplacian_coeffs, laplacian_jets, LaplacianJets};
pub use projection::project_l2;
pub use space::{InterfaceSpace, LocalSpace, ShapeValues, TensorBasis};
