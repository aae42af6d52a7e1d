//! High-precision reductions of the general quintic to the icosahedral
//! equation and of the general sextic to the Valentiner-group normal problem.

pub mod complex;
pub mod error;
pub mod form;
pub mod group;
pub mod icosahedron;
pub mod instance;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod projective;
pub mod resultant;
pub mod roots;
pub mod tolerance;
pub mod valentiner;

pub use complex::BigComplex;
pub use error::{Error, Result};
pub use form::{act_on_form, evaluate_form, hessian_form, jacobian_det, HomogeneousForm};
pub use group::{close_group, group_from_elements, projectivize, MatrixGroup};
pub use instance::{QuinticInstance, RootInstance, SexticInstance};
pub use matrix::LinearSubstitution;
pub use perm::Perm;
pub use projective::ProjectivePoint;
pub use roots::find_roots;
pub use tolerance::ToleranceConfig;
