//! Sparse linear operators over a product basis.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::space::{Basis, BasisLabel, SpaceSpec};
use super::state::{check_same_space, SparseState};
use crate::error::{GloveError, Result};
use crate::scalar::Real;

type Row<T> = BTreeMap<BasisLabel, Complex<T>>;

/// Sparse operator stored row-major: `rows[r][c] = ⟨r|A|c⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<T: Real> {
    space: SpaceSpec,
    rows: BTreeMap<BasisLabel, Row<T>>,
}

impl<T: Real> SparseOperator<T> {
    pub fn zero(space: SpaceSpec) -> Self {
        SparseOperator { space, rows: BTreeMap::new() }
    }

    pub fn identity(space: SpaceSpec) -> Self {
        let one = Complex::new(T::one(), T::zero());
        let rows = space.labels().into_iter().map(|l| (l.clone(), BTreeMap::from([(l, one)]))).collect();
        SparseOperator { space, rows }
    }

    pub fn from_entries<I>(space: SpaceSpec, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, BasisLabel, Complex<T>)>,
    {
        let mut op = Self::zero(space);
        for (r, c, v) in entries {
            op.space.validate_label(&r)?;
            op.space.validate_label(&c)?;
            op.add_entry(r, c, v);
        }
        op.prune();
        Ok(op)
    }

    /// Diagonal operator `Σ f(l) |l⟩⟨l|` over the full basis.
    pub fn diagonal(space: SpaceSpec, mut f: impl FnMut(&BasisLabel) -> Complex<T>) -> Self {
        let mut op = Self::zero(space.clone());
        for l in space.labels() {
            let v = f(&l);
            op.add_entry(l.clone(), l, v);
        }
        op.prune();
        op
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &SparseState<T>, bra: &SparseState<T>) -> Result<Self> {
        check_same_space(ket.space(), bra.space())?;
        let mut op = Self::zero(ket.space().clone());
        for (r, a) in ket.iter() {
            for (c, b) in bra.iter() {
                op.add_entry(r.clone(), c.clone(), a * b.conj());
            }
        }
        op.prune();
        Ok(op)
    }

    /// `Σ_k |v_k⟩⟨v_k|` for vectors assumed orthonormal.
    pub fn projector(space: SpaceSpec, vectors: &[SparseState<T>]) -> Result<Self> {
        let mut op = Self::zero(space);
        for v in vectors {
            op = op.try_add(&Self::outer(v, v)?)?;
        }
        Ok(op)
    }

    pub(crate) fn add_entry(&mut self, r: BasisLabel, c: BasisLabel, v: Complex<T>) {
        *self.rows.entry(r).or_default().entry(c).or_default() += v;
    }

    pub(crate) fn prune(&mut self) {
        let tol = T::prune_tolerance();
        for row in self.rows.values_mut() {
            row.retain(|_, v| v.norm() > tol);
        }
        self.rows.retain(|_, row| !row.is_empty());
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn get(&self, r: &BasisLabel, c: &BasisLabel) -> Complex<T> {
        self.rows.get(r).and_then(|row| row.get(c)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BasisLabel, &BasisLabel, &Complex<T>)> {
        self.rows.iter().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    pub fn apply(&self, psi: &SparseState<T>) -> Result<SparseState<T>> {
        check_same_space(&self.space, psi.space())?;
        let mut out: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
        for (r, row) in &self.rows {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (c, v) in row {
                let a = psi.amplitude(c);
                if a.re != T::zero() || a.im != T::zero() {
                    acc += v * a;
                }
            }
            out.insert(r.clone(), acc);
        }
        Ok(SparseState::from_map_unchecked(psi.space().clone(), out))
    }

    /// `⟨a|self|b⟩`.
    pub fn expectation(&self, a: &SparseState<T>, b: &SparseState<T>) -> Result<Complex<T>> {
        a.inner(&self.apply(b)?)
    }

    pub fn adjoint(&self) -> Self {
        let mut op = Self::zero(self.space.clone());
        for (r, c, v) in self.entries() {
            op.add_entry(c.clone(), r.clone(), v.conj());
        }
        op
    }

    /// Operator product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        check_same_space(&self.space, &rhs.space)?;
        let mut op = Self::zero(self.space.clone());
        for (r, row) in &self.rows {
            let mut acc: Row<T> = BTreeMap::new();
            for (k, a) in row {
                if let Some(krow) = rhs.rows.get(k) {
                    for (c, b) in krow {
                        *acc.entry(c.clone()).or_default() += a * b;
                    }
                }
            }
            if !acc.is_empty() {
                op.rows.insert(r.clone(), acc);
            }
        }
        op.prune();
        Ok(op)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut op = self.clone();
        for row in op.rows.values_mut() {
            for v in row.values_mut() {
                *v *= s;
            }
        }
        op.prune();
        op
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    /// `self + s * rhs`.
    pub fn axpy(&self, s: Complex<T>, rhs: &Self) -> Result<Self> {
        check_same_space(&self.space, &rhs.space)?;
        let mut op = self.clone();
        for (r, c, v) in rhs.entries() {
            op.add_entry(r.clone(), c.clone(), v * s);
        }
        op.prune();
        Ok(op)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.axpy(Complex::new(T::one(), T::zero()), rhs)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.axpy(Complex::new(-T::one(), T::zero()), rhs)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.try_sub(&rhs.compose(self)?)
    }

    pub fn trace(&self) -> Complex<T> {
        self.rows.iter().filter_map(|(r, row)| row.get(r)).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries().map(|(_, _, v)| v.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> T {
        self.entries().map(|(_, _, v)| v.norm()).fold(T::zero(), T::max)
    }

    /// Frobenius norm of `self − rhs`.
    pub fn distance(&self, rhs: &Self) -> Result<T> {
        Ok(self.try_sub(rhs)?.frobenius_norm())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.entries().all(|(r, c, v)| (*v - self.get(c, r).conj()).norm() <= tol)
    }

    pub fn to_dense(&self, basis: &Basis) -> Vec<Vec<Complex<T>>> {
        let n = basis.len();
        let mut m = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
        for (r, c, v) in self.entries() {
            let i = basis.index_of(r).expect("row label in basis");
            let j = basis.index_of(c).expect("column label in basis");
            m[i][j] = *v;
        }
        m
    }

    pub fn from_dense(space: SpaceSpec, basis: &Basis, m: &[Vec<Complex<T>>]) -> Result<Self> {
        if m.len() != basis.len() || m.iter().any(|row| row.len() != basis.len()) {
            return Err(GloveError::Dimension("dense matrix does not match basis".into()));
        }
        let mut op = Self::zero(space);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                op.add_entry(basis.label(i).clone(), basis.label(j).clone(), *v);
            }
        }
        op.prune();
        Ok(op)
    }
}
