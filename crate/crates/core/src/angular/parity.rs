//! Spatial inversion: `(−1)^l` on every orbital factor, identity on spins.

use num_complex::Complex;

use super::operator::SparseOperator;
use super::space::SpaceSpec;
use super::state::SparseState;
use crate::scalar::Real;

pub fn apply_parity<T: Real>(psi: &SparseState<T>) -> SparseState<T> {
    let amps = psi
        .iter()
        .map(|(l, a)| {
            let a = if l.parity() < 0 { -*a } else { *a };
            (l.clone(), a)
        })
        .collect();
    SparseState::from_map_unchecked(psi.space().clone(), amps)
}

pub fn parity_operator<T: Real>(space: &SpaceSpec) -> SparseOperator<T> {
    SparseOperator::diagonal(space.clone(), |l| Complex::new(T::lit(f64::from(l.parity())), T::zero()))
}

/// `P A P`.
pub fn conjugate_by_parity<T: Real>(op: &SparseOperator<T>) -> SparseOperator<T> {
    let mut out = SparseOperator::zero(op.space().clone());
    for (r, c, v) in op.entries() {
        let v = if r.parity() * c.parity() < 0 { -*v } else { *v };
        out.add_entry(r.clone(), c.clone(), v);
    }
    out
}

/// Parity eigenvalue of `psi` if it is an eigenvector within `tol`.
pub fn parity_eigenvalue<T: Real>(psi: &SparseState<T>, tol: T) -> Option<i8> {
    let p = apply_parity(psi);
    if p.distance(psi).ok()? <= tol {
        Some(1)
    } else if p.try_add(psi).ok()?.norm() <= tol {
        Some(-1)
    } else {
        None
    }
}
