//! Dense double-precision views of sparse states and operators, used for
//! eigendecompositions and as a brute-force cross-check of the sparse path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::halfint::HalfInt;
use super::space::{Basis, FactorSpec, SpaceSpec};
use super::wigner::{wigner_big_d_matrix, EulerAngles};
use crate::error::Result;
use crate::{LinearOperator, StateVector};

pub fn state_to_vector(psi: &StateVector, basis: &Basis) -> DVector<Complex64> {
    DVector::from_vec(psi.to_dense(basis))
}

pub fn vector_to_state(space: &SpaceSpec, basis: &Basis, v: &DVector<Complex64>) -> Result<StateVector> {
    StateVector::from_dense(space.clone(), basis, v.as_slice())
}

pub fn operator_to_matrix(op: &LinearOperator, basis: &Basis) -> DMatrix<Complex64> {
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (r, c, v) in op.entries() {
        let i = basis.index_of(r).expect("row label in basis");
        let j = basis.index_of(c).expect("column label in basis");
        m[(i, j)] = *v;
    }
    m
}

pub fn matrix_to_operator(space: &SpaceSpec, basis: &Basis, m: &DMatrix<Complex64>) -> LinearOperator {
    let mut op = LinearOperator::zero(space.clone());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.norm() > crate::scalar::PRUNE_TOL {
                op.add_entry(basis.label(i).clone(), basis.label(j).clone(), v);
            }
        }
    }
    op
}

/// Dense `D` on one factor, in the factor's ascending `(2j, 2m)` basis order.
fn factor_rotation(f: &FactorSpec, angles: &EulerAngles) -> DMatrix<Complex64> {
    let labels = f.labels();
    let n = labels.len();
    let mut m = DMatrix::zeros(n, n);
    let mut offset = 0;
    while offset < n {
        let tj = labels[offset].two_j;
        let size = tj as usize + 1;
        let d = wigner_big_d_matrix(HalfInt::from_twice(tj as i32), angles).expect("valid factor");
        // `d` is ordered m = j..-j; the factor basis is ordered m = -j..j.
        for r in 0..size {
            for c in 0..size {
                m[(offset + r, offset + c)] = d[size - 1 - r][size - 1 - c];
            }
        }
        offset += size;
    }
    m
}

/// Dense `U(α, β, γ)` as the Kronecker product of the factor rotations.
pub fn rotation_matrix(space: &SpaceSpec, angles: &EulerAngles) -> DMatrix<Complex64> {
    space.factors().iter().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, f| {
        acc.kronecker(&factor_rotation(f, angles))
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}
