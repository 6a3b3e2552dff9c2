use glove_core::angular::{apply_parity, apply_rotation, conjugate_by_parity, rotate_operator};
use glove_core::catalog::{all_entries, haar_rotations};
use glove_core::irrep::{construct_glove_pair, decompose, verify_pair, CheckTolerances};
use glove_core::twirl::{haar_twirl_exact, helstrom_success, pure_pair};
use glove_core::{DensityMatrix, Euler, SpaceSpec, StateVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space_strategy() -> impl Strategy<Value = SpaceSpec> {
    prop::sample::select(vec![
        "orb1",
        "orb2",
        "spin,orb1",
        "orb1,orb1",
        "spin,spin,orb1",
        "orb1,orb1,orb1",
        "orb2,spin",
    ])
    .prop_map(|s| s.parse().unwrap())
}

fn angles() -> impl Strategy<Value = Euler> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(a, b, g)| Euler::new(a, b, g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parity_is_an_involution(space in space_strategy(), seed in any::<u64>()) {
        let psi = StateVector::random(space, None, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(apply_parity(&apply_parity(&psi)).distance(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn rotations_preserve_inner_products(space in space_strategy(), seed in any::<u64>(), r in angles()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = StateVector::random(space.clone(), None, &mut rng);
        let b = StateVector::random(space, Some(4), &mut rng);
        let before = a.inner(&b).unwrap();
        let after = apply_rotation(&a, &r).inner(&apply_rotation(&b, &r)).unwrap();
        prop_assert!((before - after).norm() < 1e-12);
    }

    #[test]
    fn parity_commutes_with_rotations(space in space_strategy(), seed in any::<u64>(), r in angles()) {
        let psi = StateVector::random(space, None, &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = apply_parity(&apply_rotation(&psi, &r));
        let rhs = apply_rotation(&apply_parity(&psi), &r);
        prop_assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn twirl_output_is_an_invariant_density(space in space_strategy(), seed in any::<u64>(), rank in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::random(&space, rank, &mut rng);
        let t = haar_twirl_exact(&rho).unwrap();
        prop_assert!((t.operator().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(t.eigenvalues()[0] >= -1e-9);
        for r in haar_rotations(5, seed) {
            prop_assert!(rotate_operator(t.operator(), &r).distance(t.operator()).unwrap() <= 1e-9);
        }
        let tt = haar_twirl_exact(&t).unwrap();
        prop_assert!(tt.operator().distance(t.operator()).unwrap() < 1e-12);
    }

    #[test]
    fn helstrom_is_invariant_under_joint_rotation(space in space_strategy(), seed in any::<u64>(), r in angles()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DensityMatrix::random(&space, 2, &mut rng);
        let b = DensityMatrix::random(&space, 1, &mut rng);
        let before = helstrom_success(&a, &b).unwrap();
        let after = helstrom_success(&a.rotated(&r), &b.rotated(&r)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9);
        prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&before));
    }

    #[test]
    fn parity_conjugation_is_an_involution_on_operators(space in space_strategy(), seed in any::<u64>()) {
        let rho = DensityMatrix::random(&space, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let twice = conjugate_by_parity(&conjugate_by_parity(rho.operator()));
        prop_assert!(twice.distance(rho.operator()).unwrap() < 1e-14);
    }
}

#[test]
fn every_constructed_pair_passes_the_invariants() {
    let rotations = haar_rotations(20, 99);
    for s in ["orb1,orb1", "orb1,orb1,orb1", "spin,spin,orb1", "spin,orb1", "orb2,orb1"] {
        let space: SpaceSpec = s.parse().unwrap();
        let blocks = decompose(&space).unwrap();
        for plus in blocks.iter().filter(|b| b.parity == 1) {
            for minus in blocks.iter().filter(|b| b.parity == -1 && b.two_l == plus.two_l) {
                let pair = construct_glove_pair(plus, minus).unwrap();
                for c in verify_pair(&pair, &rotations, CheckTolerances::default()).unwrap() {
                    assert!(c.pass, "{s}: {c:?}");
                }
            }
        }
    }
}

#[test]
fn perfect_entries_survive_the_twirl() {
    for e in all_entries().into_iter().filter(|e| e.perfect) {
        let (p, m) = pure_pair(e.pair.plus()).unwrap();
        let h = helstrom_success(&haar_twirl_exact(&p).unwrap(), &haar_twirl_exact(&m).unwrap()).unwrap();
        assert!((h - 1.0).abs() <= 1e-9, "{}: {h}", e.id);
    }
}

#[test]
fn decomposition_is_complete_and_orthonormal() {
    for s in ["orb1,orb1,orb1", "spin,spin,orb2", "orb3,spin"] {
        let space: SpaceSpec = s.parse().unwrap();
        let all: Vec<StateVector> = decompose(&space).unwrap().into_iter().flat_map(|b| b.basis).collect();
        assert_eq!(all.len(), space.dim());
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().skip(i) {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap().norm() - expected).abs() < 1e-12, "{s}");
            }
        }
    }
}
