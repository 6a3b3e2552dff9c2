//! Construction, classification and testing of parity-swapped, rotation
//! invariant state pairs ("gloves") that let two parties compare the
//! handedness of their reference frames.
//!
//! The angular kernels and sparse algebra are generic over [`Real`]; the
//! higher layers work in double precision through the aliases below.

pub mod angular;
pub mod catalog;
pub mod density;
pub mod error;
pub mod irrep;
pub mod protocol;
pub mod scalar;
pub mod search;
pub mod twirl;

pub use error::{GloveError, Result};
pub use scalar::Real;

/// Double-precision sparse state vector.
pub type StateVector = angular::SparseState<f64>;
/// Double-precision sparse operator.
pub type LinearOperator = angular::SparseOperator<f64>;
/// Single-precision sparse state vector.
pub type StateVector32 = angular::SparseState<f32>;
/// Single-precision sparse operator.
pub type LinearOperator32 = angular::SparseOperator<f32>;
/// Rotation angles in double precision.
pub type Euler = angular::EulerAngles<f64>;

pub use angular::{BasisLabel, EulerAngles, FactorSpec, FactorState, HalfInt, SpaceSpec};
pub use density::DensityMatrix;
