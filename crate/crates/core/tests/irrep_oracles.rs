use std::collections::BTreeMap;

use glove_core::angular::angular_momentum_generators;
use glove_core::angular::dense::{hermitian_eigenvalues, operator_to_matrix};
use glove_core::catalog::aharonov_state;
use glove_core::irrep::{block_table, decompose, glove_existence, BlockTable};
use glove_core::{BasisLabel, SpaceSpec};
use nalgebra::DMatrix;

/// Multiplicity of `(L, parity)` from the spectrum of `J²` restricted to the
/// `M = L` sector of each parity.
fn brute_force_table(space: &SpaceSpec) -> BTreeMap<(u32, i8), usize> {
    let g = angular_momentum_generators::<f64>(space);
    let basis = space.basis();
    let full = operator_to_matrix(&g.jsquared, &basis);
    let mut sectors: BTreeMap<(i32, i8), Vec<usize>> = BTreeMap::new();
    for (i, l) in basis.labels().iter().enumerate() {
        sectors.entry((l.total_two_m(), l.parity())).or_default().push(i);
    }
    let mut table = BTreeMap::new();
    for ((tm, p), idx) in sectors {
        if tm < 0 {
            continue;
        }
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| full[(idx[r], idx[c])]);
        let l = f64::from(tm) / 2.0;
        let target = l * (l + 1.0);
        let n = hermitian_eigenvalues(&sub).iter().filter(|&&e| (e - target).abs() < 1e-8).count();
        if n > 0 {
            table.insert((tm as u32, p), n);
        }
    }
    table
}

fn decomposed_table(space: &SpaceSpec) -> BTreeMap<(u32, i8), usize> {
    let mut t = BTreeMap::new();
    for b in decompose(space).unwrap() {
        *t.entry((b.two_l, b.parity)).or_default() += 1;
    }
    t
}

#[test]
fn multiplicities_match_brute_force_diagonalization() {
    for s in [
        "orb1",
        "orb3",
        "spin",
        "orb1,orb1",
        "orb1,orb1,orb1",
        "spin,orb1",
        "spin,spin,orb1",
        "spin,orb2,spin",
        "orb1,orb2",
        "orb2,spin,spin",
        "spin,spin,spin,spin",
        "orb3,orb1",
        "orb1,spin,spin,spin",
    ] {
        let space: SpaceSpec = s.parse().unwrap();
        assert!(space.dim() <= 64, "{s}: {}", space.dim());
        let brute = brute_force_table(&space);
        assert_eq!(decomposed_table(&space), brute, "{s}");
        let report = glove_existence(&space).unwrap();
        for (&(l, p), &n) in &brute {
            assert_eq!(report.multiplicity(l, p), n, "{s}");
        }
    }
}

#[test]
fn three_orbitals_have_one_odd_scalar_equal_to_the_aharonov_state() {
    let space = SpaceSpec::orbitals(1, 3);
    let blocks = decompose(&space).unwrap();
    let odd: Vec<_> = blocks.iter().filter(|b| b.two_l == 0 && b.parity == -1).collect();
    assert_eq!(odd.len(), 1);
    let overlap = odd[0].top().inner(&aharonov_state()).unwrap().norm();
    assert!(overlap >= 1.0 - 1e-9);
}

#[test]
fn block_table_json_shape() {
    let t = block_table(&"orb1,orb1".parse().unwrap()).unwrap();
    let v = serde_json::to_value(&t).unwrap();
    let blocks = v["blocks"].as_array().unwrap();
    let count = |l: u64, p: i64| {
        blocks.iter().filter(|b| b["L_times_2"].as_u64() == Some(l) && b["parity"].as_i64() == Some(p)).count()
    };
    assert_eq!(count(2, 1), 1);
    assert_eq!(count(2, -1), 2);
    assert_eq!(v["flags"]["perfect_subspace_glove"], true);
    assert_eq!(v["flags"]["perfect_invariant_state_glove"], false);
    let back: BlockTable = serde_json::from_value(v).unwrap();
    assert_eq!(back, t);
}

#[test]
fn orbital_parity_follows_the_l_sum() {
    for b in decompose(&"orb2,orb1".parse().unwrap()).unwrap() {
        for v in &b.basis {
            for (label, _) in v.iter() {
                assert_eq!(BasisLabel::parity(label), b.parity);
            }
        }
    }
}
