//! Validated density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angular::dense::{hermitian_eigenvalues, operator_to_matrix};
use crate::angular::json::{operator_from_triplets, operator_triplets, Triplet};
use crate::angular::{conjugate_by_parity, rotate_operator, EulerAngles, SpaceSpec};
use crate::error::{GloveError, Result};
use crate::scalar::OPERATOR_TOL;
use crate::{LinearOperator, StateVector};

/// Hermitian, positive, unit-trace operator with its trace cached.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: LinearOperator,
    trace: f64,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity, all within `1e-10`.
    pub fn new(op: LinearOperator) -> Result<Self> {
        if !op.is_hermitian(OPERATOR_TOL) {
            return Err(GloveError::InvalidDensity("operator is not Hermitian".into()));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > OPERATOR_TOL || tr.im.abs() > OPERATOR_TOL {
            return Err(GloveError::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let basis = op.space().basis();
        let min = hermitian_eigenvalues(&operator_to_matrix(&op, &basis)).first().copied().unwrap_or(0.0);
        if min < -OPERATOR_TOL {
            return Err(GloveError::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(DensityMatrix { trace: tr.re, op })
    }

    /// Caller guarantees the operator is a density matrix up to rounding.
    pub(crate) fn from_operator_unchecked(op: LinearOperator) -> Self {
        let trace = op.trace().re;
        DensityMatrix { op, trace }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        let psi = psi.normalized()?;
        Ok(Self::from_operator_unchecked(LinearOperator::outer(&psi, &psi)?))
    }

    /// `Σ_k w_k |ψ_k⟩⟨ψ_k|` with normalized states and weights summing to one.
    pub fn mixture(terms: &[(f64, StateVector)]) -> Result<Self> {
        let total: f64 = terms.iter().map(|(w, _)| *w).sum();
        if terms.is_empty() || terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > OPERATOR_TOL {
            return Err(GloveError::InvalidDensity("mixture weights must be non-negative and sum to 1".into()));
        }
        let space = terms[0].1.space().clone();
        let mut op = LinearOperator::zero(space);
        for (w, psi) in terms {
            let psi = psi.normalized()?;
            op = op.axpy(Complex64::new(*w, 0.0), &LinearOperator::outer(&psi, &psi)?)?;
        }
        Ok(Self::from_operator_unchecked(op))
    }

    /// Random full-rank-up-to-`rank` mixed state with Dirichlet-like weights.
    pub fn random<R: Rng + ?Sized>(space: &SpaceSpec, rank: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..rank.max(1)).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        let terms: Vec<(f64, StateVector)> =
            raw.iter().map(|w| (w / total, StateVector::random(space.clone(), None, rng))).collect();
        let mut op = LinearOperator::zero(space.clone());
        for (w, psi) in &terms {
            op = op
                .axpy(Complex64::new(*w, 0.0), &LinearOperator::outer(psi, psi).expect("same space"))
                .expect("same space");
        }
        Self::from_operator_unchecked(op)
    }

    pub fn operator(&self) -> &LinearOperator {
        &self.op
    }

    pub fn into_operator(self) -> LinearOperator {
        self.op
    }

    pub fn space(&self) -> &SpaceSpec {
        self.op.space()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `P ρ P`.
    pub fn parity_conjugate(&self) -> Self {
        Self::from_operator_unchecked(conjugate_by_parity(&self.op))
    }

    /// `U ρ U†`.
    pub fn rotated(&self, angles: &EulerAngles) -> Self {
        Self::from_operator_unchecked(rotate_operator(&self.op, angles))
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        operator_to_matrix(&self.op, &self.space().basis())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.to_matrix())
    }

    /// `−Σ λ log₂ λ` over the spectrum.
    pub fn entropy_bits(&self) -> f64 {
        self.eigenvalues().into_iter().filter(|&l| l > 1e-15).map(|l| -l * l.log2()).sum()
    }

    /// `(ρ + σ) / 2`.
    pub fn average(&self, other: &Self) -> Result<Self> {
        let op = self.op.try_add(&other.op)?.scale_real(0.5);
        Ok(Self::from_operator_unchecked(op))
    }
}

/// Wire form: the space and the nonzero entries as triplets.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityDoc {
    space: SpaceSpec,
    entries: Vec<Triplet>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityDoc { space: self.space().clone(), entries: operator_triplets(&self.op) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = DensityDoc::deserialize(d)?;
        operator_from_triplets(&doc.space, &doc.entries).and_then(DensityMatrix::new).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{BasisLabel, FactorState};

    fn y(l: u32, m: i32) -> BasisLabel {
        BasisLabel::new(vec![FactorState::orbital(l, m)])
    }

    #[test]
    fn validation() {
        let space = SpaceSpec::orbitals(1, 1);
        let half = Complex64::new(0.5, 0.0);
        let ok =
            LinearOperator::from_entries(space.clone(), [(y(0, 0), y(0, 0), half), (y(1, 0), y(1, 0), half)]).unwrap();
        assert!(DensityMatrix::new(ok).is_ok());

        let bad_trace = LinearOperator::from_entries(space.clone(), [(y(0, 0), y(0, 0), half)]).unwrap();
        assert!(DensityMatrix::new(bad_trace).is_err());

        let not_herm = LinearOperator::from_entries(
            space.clone(),
            [(y(0, 0), y(0, 0), half), (y(1, 0), y(1, 0), half), (y(0, 0), y(1, 0), half)],
        )
        .unwrap();
        assert!(DensityMatrix::new(not_herm).is_err());

        let negative = LinearOperator::from_entries(
            space,
            [(y(0, 0), y(0, 0), Complex64::new(1.5, 0.0)), (y(1, 0), y(1, 0), Complex64::new(-0.5, 0.0))],
        )
        .unwrap();
        assert!(DensityMatrix::new(negative).is_err());
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit_like_state() {
        let space = SpaceSpec::orbitals(1, 1);
        let a = StateVector::basis_state(space.clone(), y(0, 0)).unwrap();
        let b = StateVector::basis_state(space, y(1, 1)).unwrap();
        let rho = DensityMatrix::mixture(&[(0.5, a), (0.5, b)]).unwrap();
        assert!((rho.entropy_bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_validates() {
        let space = SpaceSpec::orbitals(1, 1);
        let a = StateVector::basis_state(space.clone(), y(1, 0)).unwrap();
        let rho = DensityMatrix::pure(&a).unwrap();
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rho);
        let bad = json.replace("\"re\":1.0", "\"re\":2.0");
        assert!(serde_json::from_str::<DensityMatrix>(&bad).is_err());
    }
}
