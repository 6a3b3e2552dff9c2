//! Independent checks of the angular kernels against dense linear algebra.

use glove_core::angular::dense::{operator_to_matrix, rotation_matrix, state_to_vector};
use glove_core::angular::{
    apply_parity, apply_rotation, clebsch_gordan, parity_operator, rotate_operator, wigner_small_d_matrix, FactorSpec,
    HalfInt,
};
use glove_core::{Euler, LinearOperator, SpaceSpec, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

/// `J_y` on spin `j` in the basis `m = j, j−1, …, −j`.
fn jy(two_j: i32) -> DMatrix<Complex64> {
    let n = two_j as usize + 1;
    let j = f64::from(two_j) / 2.0;
    let mut jp = DMatrix::<Complex64>::zeros(n, n);
    for col in 1..n {
        let m = j - col as f64;
        jp[(col - 1, col)] = Complex64::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    (&jp - jp.adjoint()) / Complex64::new(0.0, 2.0)
}

/// Largest entry deviation between `d^j(β)` and `exp(−iβJ_y)` for
/// `2j ≤ max_two_j`.
pub fn small_d_deviation(max_two_j: i32) -> f64 {
    let mut worst: f64 = 0.0;
    for two_j in 0..=max_two_j {
        for beta in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.2, std::f64::consts::PI, 5.9] {
            let oracle = (jy(two_j) * Complex64::new(0.0, -beta)).exp();
            let d = wigner_small_d_matrix::<f64>(h(two_j), beta).unwrap();
            for (r, row) in d.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    worst = worst.max((oracle[(r, c)] - Complex64::new(*v, 0.0)).norm());
                }
            }
        }
    }
    worst
}

/// Largest violation of the two Clebsch–Gordan orthogonality relations for
/// `2j₁, 2j₂ ≤ max_two_j`.
pub fn clebsch_gordan_orthogonality_deviation(max_two_j: i32) -> f64 {
    let mut worst: f64 = 0.0;
    for t1 in 0i32..=max_two_j {
        for t2 in 0i32..=max_two_j {
            let couplings: Vec<(i32, i32)> = ((t1 - t2).abs()..=t1 + t2)
                .step_by(2)
                .flat_map(|t| (-t..=t).step_by(2).map(move |tm| (t, tm)))
                .collect();
            let products = product_labels(t1, t2);
            let cg = |(tm1, tm2): (i32, i32), (t, tm): (i32, i32)| {
                clebsch_gordan::<f64>(h(t1), h(tm1), h(t2), h(tm2), h(t), h(tm)).unwrap()
            };
            for &a in &couplings {
                for &b in &couplings {
                    let s: f64 = products.iter().map(|&p| cg(p, a) * cg(p, b)).sum();
                    worst = worst.max((s - if a == b { 1.0 } else { 0.0 }).abs());
                }
            }
            for &p in &products {
                for &q in &products {
                    let s: f64 = couplings.iter().map(|&c| cg(p, c) * cg(q, c)).sum();
                    worst = worst.max((s - if p == q { 1.0 } else { 0.0 }).abs());
                }
            }
        }
    }
    worst
}

pub fn product_labels(t1: i32, t2: i32) -> Vec<(i32, i32)> {
    (-t1..=t1).step_by(2).flat_map(|a| (-t2..=t2).step_by(2).map(move |b| (a, b))).collect()
}

/// Every product of spin-½ and `orb1..orb3` factors with dimension at most
/// `max_dim`.
pub fn all_small_spaces(max_dim: usize) -> Vec<SpaceSpec> {
    let kinds = [
        FactorSpec::SpinHalf,
        FactorSpec::Orbital { l_max: 1 },
        FactorSpec::Orbital { l_max: 2 },
        FactorSpec::Orbital { l_max: 3 },
    ];
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<FactorSpec>> = vec![Vec::new()];
    while let Some(prefix) = frontier.pop() {
        for k in kinds {
            let mut f = prefix.clone();
            f.push(k);
            let s = SpaceSpec::product(f.clone());
            if s.dim() <= max_dim {
                out.push(s);
                if f.len() < 6 {
                    frontier.push(f);
                }
            }
        }
    }
    out
}

/// Compares sparse inner products, operator application and composition,
/// rotation and parity with their dense counterparts on every space from
/// [`all_small_spaces`]. Returns the number of spaces and the worst
/// deviation.
pub fn sparse_dense_deviation(max_dim: usize, seed: u64) -> (usize, f64) {
    let spaces = all_small_spaces(max_dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for space in &spaces {
        let basis = space.basis();
        let a = StateVector::random(space.clone(), None, &mut rng);
        let b = StateVector::random(space.clone(), Some(3), &mut rng);
        let (va, vb) = (state_to_vector(&a, &basis), state_to_vector(&b, &basis));
        let entries: Vec<_> = (0..space.dim().min(40))
            .map(|_| {
                let r = basis.label(rng.random_range(0..basis.len())).clone();
                let c = basis.label(rng.random_range(0..basis.len())).clone();
                (r, c, Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            })
            .collect();
        let op = LinearOperator::from_entries(space.clone(), entries).unwrap();
        let m = operator_to_matrix(&op, &basis);

        worst = worst.max((a.inner(&b).unwrap() - va.dotc(&vb)).norm());

        let applied = state_to_vector(&op.apply(&a).unwrap(), &basis);
        worst = worst.max((applied - &m * &va).norm());

        let sq = operator_to_matrix(&op.compose(&op.adjoint()).unwrap(), &basis);
        worst = worst.max((sq - &m * m.adjoint()).norm());

        let angles = Euler::haar(&mut rng);
        let u = rotation_matrix(space, &angles);
        let rotated = state_to_vector(&apply_rotation(&a, &angles), &basis);
        worst = worst.max((rotated - &u * &va).norm());
        let rop = operator_to_matrix(&rotate_operator(&op, &angles), &basis);
        worst = worst.max((rop - &u * &m * u.adjoint()).norm());

        let p = operator_to_matrix(&parity_operator::<f64>(space), &basis);
        let pa = state_to_vector(&apply_parity(&a), &basis);
        worst = worst.max((pa - &p * &va).norm());
        worst = worst.max((&p * &u - &u * &p).norm());
    }
    (spaces.len(), worst)
}
