//! Scalar abstraction shared by the angular kernels and the sparse algebra.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the angular kernels are written against.
///
/// Exact factorial and Clebsch–Gordan arithmetic is carried out in big
/// rationals and only converted to `Self` at the end, so the precision of a
/// result is limited by `Self` alone.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Amplitudes with modulus at or below this are dropped from sparse storage.
    fn prune_tolerance() -> Self;

    /// Default tolerance for equality of states and scalars.
    fn comparison_tolerance() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits in scalar")
    }
}

impl Real for f64 {
    fn prune_tolerance() -> Self {
        1e-14
    }

    fn comparison_tolerance() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn prune_tolerance() -> Self {
        1e-6
    }

    fn comparison_tolerance() -> Self {
        1e-5
    }
}

/// Amplitude prune tolerance for double precision.
pub const PRUNE_TOL: f64 = 1e-14;
/// Comparison tolerance for states and scalars.
pub const COMPARE_TOL: f64 = 1e-12;
/// Tolerance for operator identities (commutators, idempotence, hermiticity).
pub const OPERATOR_TOL: f64 = 1e-10;
