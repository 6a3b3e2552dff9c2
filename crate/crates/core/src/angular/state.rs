//! Sparse complex state vectors over a product basis.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use rand::Rng;

use super::space::{Basis, BasisLabel, SpaceSpec};
use crate::error::{GloveError, Result};
use crate::scalar::Real;

/// Sparse map from product basis labels to complex amplitudes.
///
/// Amplitudes whose modulus is at or below [`Real::prune_tolerance`] are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState<T: Real> {
    space: SpaceSpec,
    amps: BTreeMap<BasisLabel, Complex<T>>,
}

pub(crate) fn check_same_space(a: &SpaceSpec, b: &SpaceSpec) -> Result<()> {
    if a.factors() != b.factors() {
        return Err(GloveError::Dimension(format!("space {a} does not match space {b}")));
    }
    Ok(())
}

fn keep<T: Real>(c: &Complex<T>) -> bool {
    c.norm() > T::prune_tolerance()
}

impl<T: Real> SparseState<T> {
    pub fn zero(space: SpaceSpec) -> Self {
        SparseState { space, amps: BTreeMap::new() }
    }

    pub fn basis_state(space: SpaceSpec, label: BasisLabel) -> Result<Self> {
        Self::from_terms(space, [(label, Complex::new(T::one(), T::zero()))])
    }

    /// Builds a state from `(label, amplitude)` terms, summing repeated labels.
    pub fn from_terms<I>(space: SpaceSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, Complex<T>)>,
    {
        let mut amps: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
        for (label, c) in terms {
            space.validate_label(&label)?;
            *amps.entry(label).or_default() += c;
        }
        amps.retain(|_, c| keep(c));
        Ok(SparseState { space, amps })
    }

    /// Like [`from_terms`](Self::from_terms) with real amplitudes.
    pub fn from_real_terms<I>(space: SpaceSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, T)>,
    {
        Self::from_terms(space, terms.into_iter().map(|(l, x)| (l, Complex::new(x, T::zero()))))
    }

    /// Caller guarantees labels are valid; pruning is still applied.
    pub(crate) fn from_map_unchecked(space: SpaceSpec, mut amps: BTreeMap<BasisLabel, Complex<T>>) -> Self {
        amps.retain(|_, c| keep(c));
        SparseState { space, amps }
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex<T> {
        self.amps.get(label).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex<T>)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.values().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= T::prune_tolerance() {
            return Err(GloveError::Domain("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(Complex::new(n.recip(), T::zero())))
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_same_space(&self.space, &other.space)?;
        let (small, large, conj_small) = if self.amps.len() <= other.amps.len() {
            (&self.amps, &other.amps, true)
        } else {
            (&other.amps, &self.amps, false)
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for (label, a) in small {
            if let Some(b) = large.get(label) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let amps = self.amps.iter().map(|(l, a)| (l.clone(), a * c)).collect();
        Self::from_map_unchecked(self.space.clone(), amps)
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Complex<T>, other: &Self) -> Result<Self> {
        check_same_space(&self.space, &other.space)?;
        let mut amps = self.amps.clone();
        for (l, b) in &other.amps {
            *amps.entry(l.clone()).or_default() += b * c;
        }
        Ok(Self::from_map_unchecked(self.space.clone(), amps))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex::new(T::one(), T::zero()), other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex::new(-T::one(), T::zero()), other)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        Ok(self.try_sub(other)?.norm())
    }

    /// `min_φ ‖self − e^{iφ} other‖` for unit vectors, i.e. `√(2 − 2|⟨self|other⟩|)`.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<T> {
        let ov = self.inner(other)?.norm();
        let d = self.norm_sqr() + other.norm_sqr() - (ov + ov);
        Ok(d.max(T::zero()).sqrt())
    }

    /// Multiplies by a global phase so the amplitude of the smallest label is
    /// real and positive.
    pub fn phase_fixed(&self) -> Self {
        match self.amps.values().next() {
            Some(first) => {
                let n = first.norm();
                self.scale(first.conj() / n)
            }
            None => self.clone(),
        }
    }

    pub fn to_dense(&self, basis: &Basis) -> Vec<Complex<T>> {
        let mut v = vec![Complex::new(T::zero(), T::zero()); basis.len()];
        for (l, a) in &self.amps {
            let i = basis.index_of(l).expect("label belongs to basis");
            v[i] = *a;
        }
        v
    }

    pub fn from_dense(space: SpaceSpec, basis: &Basis, data: &[Complex<T>]) -> Result<Self> {
        if data.len() != basis.len() {
            return Err(GloveError::Dimension(format!(
                "dense vector of length {} for basis of size {}",
                data.len(),
                basis.len()
            )));
        }
        let amps = data.iter().enumerate().map(|(i, c)| (basis.label(i).clone(), *c)).collect();
        Ok(Self::from_map_unchecked(space, amps))
    }

    /// Random unit vector with `terms` Gaussian-distributed nonzero entries
    /// (all of the basis when `terms` is `None`).
    pub fn random<R: Rng + ?Sized>(space: SpaceSpec, terms: Option<usize>, rng: &mut R) -> Self {
        let labels = space.labels();
        let picked: Vec<BasisLabel> = match terms {
            Some(k) if k < labels.len() => {
                rand::seq::index::sample(rng, labels.len(), k).into_iter().map(|i| labels[i].clone()).collect()
            }
            _ => labels,
        };
        let amps = picked
            .into_iter()
            .map(|l| {
                let re: f64 = rng.sample(rand_distr_normal());
                let im: f64 = rng.sample(rand_distr_normal());
                (l, Complex::new(T::lit(re), T::lit(im)))
            })
            .collect();
        let psi = Self::from_map_unchecked(space, amps);
        psi.normalized().unwrap_or(psi)
    }
}

/// Standard normal via Box–Muller, kept local so `rand_distr` is not needed.
fn rand_distr_normal() -> impl rand::distr::Distribution<f64> {
    struct Normal;
    impl rand::distr::Distribution<f64> for Normal {
        fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        }
    }
    Normal
}

// Operator sugar; these panic when the spaces differ. Use the `try_*`
// methods when the spaces are not known to match.

impl<T: Real> Add for &SparseState<T> {
    type Output = SparseState<T>;
    fn add(self, rhs: &SparseState<T>) -> SparseState<T> {
        self.try_add(rhs).expect("states share a space")
    }
}

impl<T: Real> Sub for &SparseState<T> {
    type Output = SparseState<T>;
    fn sub(self, rhs: &SparseState<T>) -> SparseState<T> {
        self.try_sub(rhs).expect("states share a space")
    }
}

impl<T: Real> Mul<T> for &SparseState<T> {
    type Output = SparseState<T>;
    fn mul(self, rhs: T) -> SparseState<T> {
        self.scale_real(rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for &SparseState<T> {
    type Output = SparseState<T>;
    fn mul(self, rhs: Complex<T>) -> SparseState<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &SparseState<T> {
    type Output = SparseState<T>;
    fn neg(self) -> SparseState<T> {
        self.scale_real(-T::one())
    }
}
