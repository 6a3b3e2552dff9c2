//! Symmetrizers and antisymmetrizers over groups of identical factors.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::space::BasisLabel;
use super::state::SparseState;
use crate::error::{domain, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

fn permutation_sign(p: &[usize]) -> i8 {
    let inversions =
        (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(1/n!) Σ_π χ(π) π` applied to the factors listed in `group`, where
/// `χ` is 1 for [`Symmetry::Symmetric`] and the permutation sign otherwise.
pub fn permutation_project<T: Real>(psi: &SparseState<T>, group: &[usize], sign: Symmetry) -> Result<SparseState<T>> {
    let factors = psi.space().factors();
    if group.iter().any(|&i| i >= factors.len()) {
        return domain("exchange group index out of range");
    }
    if !group.iter().all_unique() {
        return domain("exchange group lists a factor twice");
    }
    if let Some(&first) = group.first() {
        if group.iter().any(|&i| factors[i] != factors[first]) {
            return domain("exchange group mixes factors of different kind or cutoff");
        }
    }
    let n = group.len();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let weight = T::one() / T::lit(perms.len() as f64);
    let mut amps: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
    for perm in &perms {
        let chi = match sign {
            Symmetry::Symmetric => weight,
            Symmetry::Antisymmetric => weight * T::lit(f64::from(permutation_sign(perm))),
        };
        for (label, a) in psi.iter() {
            let mut states = label.to_vec();
            for (i, &p) in perm.iter().enumerate() {
                states[group[i]] = label[group[p]];
            }
            *amps.entry(BasisLabel::new(states)).or_default() += a * chi;
        }
    }
    Ok(SparseState::from_map_unchecked(psi.space().clone(), amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::space::SpaceSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sign_of_permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn projectors_are_idempotent_and_complementary_for_pairs() {
        let space = SpaceSpec::orbitals(1, 2);
        let psi = SparseState::<f64>::random(space, None, &mut ChaCha8Rng::seed_from_u64(11));
        let s = permutation_project(&psi, &[0, 1], Symmetry::Symmetric).unwrap();
        let a = permutation_project(&psi, &[0, 1], Symmetry::Antisymmetric).unwrap();
        let ss = permutation_project(&s, &[0, 1], Symmetry::Symmetric).unwrap();
        assert!(ss.distance(&s).unwrap() < 1e-12);
        assert!((&s + &a).distance(&psi).unwrap() < 1e-12);
        assert!(s.inner(&a).unwrap().norm() < 1e-12);
    }

    #[test]
    fn heterogeneous_group_is_rejected() {
        let space: SpaceSpec = "orb1,orb2".parse().unwrap();
        let psi = SparseState::<f64>::zero(space);
        assert!(permutation_project(&psi, &[0, 1], Symmetry::Symmetric).is_err());
        assert!(permutation_project(&psi, &[0, 0], Symmetry::Symmetric).is_err());
        assert!(permutation_project(&psi, &[0, 5], Symmetry::Symmetric).is_err());
    }
}
