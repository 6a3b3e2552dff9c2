//! Product-basis angular-momentum algebra: sparse states and operators,
//! parity, Wigner rotations, Clebsch–Gordan coefficients, generators and
//! exchange projectors.

pub mod clebsch;
pub mod dense;
pub mod generators;
pub mod halfint;
pub mod json;
pub mod operator;
pub mod parity;
pub mod permutation;
pub mod space;
pub mod state;
pub mod wigner;

pub use clebsch::{clebsch_gordan, clebsch_gordan_exact, SignedSqrt};
pub use generators::{angular_momentum_generators, Generators};
pub use halfint::HalfInt;
pub use operator::SparseOperator;
pub use parity::{apply_parity, conjugate_by_parity, parity_eigenvalue, parity_operator};
pub use permutation::{permutation_project, Symmetry};
pub use space::{Basis, BasisLabel, FactorSpec, FactorState, SpaceSpec};
pub use state::SparseState;
pub use wigner::{
    apply_rotation, rotate_operator, wigner_big_d_matrix, wigner_small_d, wigner_small_d_matrix, EulerAngles,
};

use crate::error::Result;
use crate::scalar::Real;
use num_complex::Complex;

/// `⟨a|b⟩`.
pub fn inner_product<T: Real>(a: &SparseState<T>, b: &SparseState<T>) -> Result<Complex<T>> {
    a.inner(b)
}
