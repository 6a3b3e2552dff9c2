//! Total angular-momentum generators `Jz, J±, J²` summed over all factors.

use num_complex::Complex;

use super::operator::SparseOperator;
use super::space::{FactorState, SpaceSpec};
use crate::scalar::Real;

/// Sparse generators of the rotation group on a product space. Spin factors
/// contribute spin-1/2 generators, so `J = L + S`.
#[derive(Clone, Debug)]
pub struct Generators<T: Real> {
    pub jz: SparseOperator<T>,
    pub jplus: SparseOperator<T>,
    pub jminus: SparseOperator<T>,
    pub jsquared: SparseOperator<T>,
}

/// `⟨j m+1|J+|j m⟩ = √((j−m)(j+m+1))`, in doubled quantum numbers.
pub(crate) fn raising_coefficient<T: Real>(s: FactorState) -> T {
    let tj = s.two_j as i32;
    let prod = (tj - s.two_m) * (tj + s.two_m + 2);
    T::lit(f64::from(prod).sqrt() / 2.0)
}

pub fn angular_momentum_generators<T: Real>(space: &SpaceSpec) -> Generators<T> {
    let half = T::lit(0.5);
    let jz =
        SparseOperator::diagonal(space.clone(), |l| Complex::new(T::lit(f64::from(l.total_two_m())) * half, T::zero()));

    let mut jplus = SparseOperator::zero(space.clone());
    for label in space.labels() {
        for (i, s) in label.iter().enumerate() {
            if s.two_m < s.two_j as i32 {
                let up = FactorState { two_j: s.two_j, two_m: s.two_m + 2 };
                let c = raising_coefficient::<T>(*s);
                jplus.add_entry(label.with(i, up), label.clone(), Complex::new(c, T::zero()));
            }
        }
    }
    jplus.prune();
    let jminus = jplus.adjoint();

    let jsquared = jminus
        .compose(&jplus)
        .and_then(|a| a.try_add(&jz.compose(&jz)?))
        .and_then(|a| a.try_add(&jz))
        .expect("operators share a space");

    Generators { jz, jplus, jminus, jsquared }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::state::SparseState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_orbital_casimir() {
        let space = SpaceSpec::orbitals(2, 1);
        let g = angular_momentum_generators::<f64>(&space);
        for l in space.labels() {
            let lval = f64::from(l[0].two_j) / 2.0;
            let v = g.jsquared.get(&l, &l).re;
            assert!((v - lval * (lval + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn commutation_relations() {
        let space: SpaceSpec = "spin,orb1".parse().unwrap();
        let g = angular_momentum_generators::<f64>(&space);
        // [Jz, J+] = J+, [J+, J-] = 2 Jz
        let c = g.jz.commutator(&g.jplus).unwrap();
        assert!(c.distance(&g.jplus).unwrap() < 1e-12);
        let c = g.jplus.commutator(&g.jminus).unwrap();
        assert!(c.distance(&g.jz.scale_real(2.0)).unwrap() < 1e-12);
        assert!(g.jsquared.commutator(&g.jz).unwrap().frobenius_norm() < 1e-12);
        assert!(g.jsquared.is_hermitian(1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let psi = SparseState::<f64>::random(space.clone(), None, &mut rng);
            let lhs = c.apply(&psi).unwrap();
            let rhs = g.jz.apply(&psi).unwrap().scale_real(2.0);
            assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        }
    }
}
