//! Haar twirl over rotations, discrimination metrics and communication cost.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::dense::{hermitian_eigenvalues, matrix_to_operator, operator_to_matrix, rotation_matrix};
use crate::angular::json::{operator_triplets, Triplet};
use crate::angular::state::check_same_space;
use crate::angular::{apply_parity, FactorState};
use crate::density::DensityMatrix;
use crate::error::{domain, Result};
use crate::irrep::{decompose, in_support, GlovePair, IrrepBlock};
use crate::{BasisLabel, Euler, LinearOperator, SpaceSpec, StateVector};

/// Samples drawn from one generator stream in the Monte-Carlo twirl.
pub const CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwirlMethod {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// [`haar_twirl_exact_with`] after decomposing the space.
pub fn haar_twirl_exact(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let blocks = decompose(rho.space())?;
    Ok(haar_twirl_exact_with(rho.operator(), &blocks))
}

/// Exact twirl of any operator from a precomputed decomposition.
///
/// Copies `a, b` of the same `L` contribute
/// `(1/(2L+1)) Σ_M ⟨a,M|A|b,M⟩ · Σ_{M'} |a,M'⟩⟨b,M'|`; pairs with different
/// `L` drop out.
pub fn haar_twirl_exact_with(op: &LinearOperator, blocks: &[IrrepBlock]) -> DensityMatrix {
    DensityMatrix::from_operator_unchecked(twirl_operator(op, blocks))
}

pub(crate) fn twirl_operator(op: &LinearOperator, blocks: &[IrrepBlock]) -> LinearOperator {
    let mut out = LinearOperator::zero(op.space().clone());
    let images: Vec<Vec<StateVector>> =
        blocks.iter().map(|b| b.basis.iter().map(|v| op.apply(v).expect("same space")).collect()).collect();
    for a in blocks {
        for (ib, b) in blocks.iter().enumerate() {
            if a.two_l != b.two_l {
                continue;
            }
            let mut c = Complex64::new(0.0, 0.0);
            for (va, img) in a.basis.iter().zip(&images[ib]) {
                c += va.inner(img).expect("same space");
            }
            c /= a.dim() as f64;
            if c.norm() <= crate::scalar::PRUNE_TOL {
                continue;
            }
            for (va, vb) in a.basis.iter().zip(&b.basis) {
                for (r, x) in va.iter() {
                    for (col, y) in vb.iter() {
                        out.add_entry(r.clone(), col.clone(), c * x * y.conj());
                    }
                }
            }
        }
    }
    out.prune();
    out
}

fn chunk_sum(a: &DMatrix<Complex64>, space: &SpaceSpec, seed: u64, chunk: usize, count: usize) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut acc = DMatrix::zeros(a.nrows(), a.ncols());
    for _ in 0..count {
        let u = rotation_matrix(space, &Euler::haar(&mut rng));
        acc += &u * a * u.adjoint();
    }
    acc
}

/// `(1/N) Σ U_i ρ U_i†` over `N` Haar samples.
///
/// Samples come in chunks of [`CHUNK`]; chunk `k` draws from stream `k` of
/// a generator seeded with `seed`, and chunk sums are added in order, so the
/// result does not depend on the number of worker threads.
pub fn haar_twirl_monte_carlo(rho: &DensityMatrix, samples: usize, seed: u64) -> Result<DensityMatrix> {
    if samples == 0 {
        return domain("Monte-Carlo twirl needs at least one sample");
    }
    let space = rho.space().clone();
    let basis = space.basis();
    let a = operator_to_matrix(rho.operator(), &basis);
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<DMatrix<Complex64>> =
        (0..chunks).into_par_iter().map(|k| chunk_sum(&a, &space, seed, k, CHUNK.min(samples - k * CHUNK))).collect();
    let mut total = DMatrix::zeros(a.nrows(), a.ncols());
    for p in &partial {
        total += p;
    }
    total /= Complex64::new(samples as f64, 0.0);
    Ok(DensityMatrix::from_operator_unchecked(matrix_to_operator(&space, &basis, &total)))
}

/// `½ Σ |λ(ρ − σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_space(rho.space(), sigma.space())?;
    let diff = rho.operator().try_sub(sigma.operator())?;
    let m = operator_to_matrix(&diff, &rho.space().basis());
    let td = 0.5 * hermitian_eigenvalues(&m).iter().map(|l| l.abs()).fold(0.0, |a, b| a + b);
    Ok(td.clamp(0.0, 1.0))
}

/// Optimal success probability for equal priors, `½ + ½ D(ρ, σ)`.
pub fn helstrom_success(rho_plus: &DensityMatrix, rho_minus: &DensityMatrix) -> Result<f64> {
    Ok(0.5 + 0.5 * trace_distance(rho_plus, rho_minus)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlReport {
    pub space: SpaceSpec,
    pub method: TwirlMethod,
    pub rho_plus: DensityMatrix,
    pub rho_minus: DensityMatrix,
    pub trace_distance: f64,
    pub helstrom: f64,
}

/// Twirls `ρ` and `PρP` and compares them.
pub fn twirl_report(rho: &DensityMatrix, method: TwirlMethod) -> Result<TwirlReport> {
    let minus = rho.parity_conjugate();
    let (rho_plus, rho_minus) = match method {
        TwirlMethod::Exact => {
            let blocks = decompose(rho.space())?;
            (haar_twirl_exact_with(rho.operator(), &blocks), haar_twirl_exact_with(minus.operator(), &blocks))
        }
        TwirlMethod::MonteCarlo { samples, seed } => {
            (haar_twirl_monte_carlo(rho, samples, seed)?, haar_twirl_monte_carlo(&minus, samples, seed)?)
        }
    };
    let trace_distance = trace_distance(&rho_plus, &rho_minus)?;
    Ok(TwirlReport {
        space: rho.space().clone(),
        method,
        rho_plus,
        rho_minus,
        trace_distance,
        helstrom: 0.5 + 0.5 * trace_distance,
    })
}

/// Qubits carried by one transmitted glove: the base-2 entropy of
/// `(twirl(ρ⁺) + twirl(ρ⁻))/2`, with `ρ⁻ = Pρ⁺P`.
///
/// `ρ⁺` is `|ψ⟩⟨ψ|` for a given representative `ψ` in the `+` support, or the
/// normalized projector `Π⁺/tr Π⁺` when `None`.
pub fn communication_cost(pair: &GlovePair, representative: Option<&StateVector>) -> Result<f64> {
    let rho_plus = match representative {
        Some(psi) => {
            let psi = psi.normalized()?;
            if !in_support(&pair.plus_projector(), &psi, 1e-9)? {
                return domain("representative lies outside the + glove support");
            }
            DensityMatrix::pure(&psi)?
        }
        None => {
            let d = pair.plus_basis.len() as f64;
            DensityMatrix::from_operator_unchecked(pair.plus_projector().scale_real(1.0 / d))
        }
    };
    let rho_minus = rho_plus.parity_conjugate();
    let blocks = decompose(pair.space())?;
    let tp = haar_twirl_exact_with(rho_plus.operator(), &blocks);
    let tm = haar_twirl_exact_with(rho_minus.operator(), &blocks);
    Ok(tp.average(&tm)?.entropy_bits())
}

/// Largest `l` carrying amplitude, per orbital factor.
pub fn lmax_footprint(psi: &StateVector) -> Vec<u32> {
    let orbital: Vec<usize> =
        psi.space().factors().iter().enumerate().filter(|(_, f)| f.is_orbital()).map(|(i, _)| i).collect();
    let mut out = vec![0; orbital.len()];
    for (label, _) in psi.iter() {
        for (k, &i) in orbital.iter().enumerate() {
            out[k] = out[k].max(label[i].two_j / 2);
        }
    }
    out
}

fn y1(m: i32) -> BasisLabel {
    BasisLabel::new(vec![FactorState::orbital(1, m)])
}

fn y00() -> BasisLabel {
    BasisLabel::new(vec![FactorState::orbital(0, 0)])
}

/// The averaged approximate-glove states as printed, with the `+` between
/// the `|Y₁₀⟩⟨Y₁₀|` and `|Y₁₋₁⟩⟨Y₁₋₁|` terms restored:
/// `(1/6) Σ_m |Y₁m⟩⟨Y₁m| + ½|Y₀₀⟩⟨Y₀₀| ± ¼(|Y₀₀⟩⟨Y₁₀| + h.c.)`.
pub fn printed_averaged_states() -> (DensityMatrix, DensityMatrix) {
    let space = SpaceSpec::orbitals(1, 1);
    let build = |sign: f64| {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut entries = vec![(y00(), y00(), c(0.5))];
        for m in [1, 0, -1] {
            entries.push((y1(m), y1(m), c(1.0 / 6.0)));
        }
        entries.push((y00(), y1(0), c(0.25 * sign)));
        entries.push((y1(0), y00(), c(0.25 * sign)));
        let op = LinearOperator::from_entries(space.clone(), entries).expect("valid labels");
        DensityMatrix::new(op).expect("printed matrices are valid states")
    };
    (build(1.0), build(-1.0))
}

/// Printed averaged states next to the computed twirl of the same pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragedStateDiscrepancy {
    pub printed_trace_distance: f64,
    pub twirl_trace_distance: f64,
    pub printed_helstrom: f64,
    pub twirl_helstrom: f64,
    /// Largest entry of `printed ρ⁺ − twirl(|g⁺⟩⟨g⁺|)`.
    pub max_entry_difference: f64,
    pub agree: bool,
    pub printed_rho_plus: Vec<Triplet>,
    pub twirl_rho_plus: Vec<Triplet>,
    pub note: String,
}

/// Compares the printed averaged states with the exact twirl of
/// `g± = (Y₀₀ ± Y₁₀)/√2`. Both numbers are reported; neither is assumed.
pub fn averaged_state_discrepancy() -> Result<AveragedStateDiscrepancy> {
    let space = SpaceSpec::orbitals(1, 1);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let g_plus = StateVector::from_real_terms(space, [(y00(), r), (y1(0), r)])?;
    let rho = DensityMatrix::pure(&g_plus)?;
    let twirled = twirl_report(&rho, TwirlMethod::Exact)?;
    let (pp, pm) = printed_averaged_states();
    let printed_td = trace_distance(&pp, &pm)?;
    let diff = pp.operator().try_sub(twirled.rho_plus.operator())?.max_norm();
    let agree = diff <= 1e-9 && (printed_td - twirled.trace_distance).abs() <= 1e-9;
    Ok(AveragedStateDiscrepancy {
        printed_trace_distance: printed_td,
        twirl_trace_distance: twirled.trace_distance,
        printed_helstrom: 0.5 + 0.5 * printed_td,
        twirl_helstrom: twirled.helstrom,
        max_entry_difference: diff,
        agree,
        printed_rho_plus: operator_triplets(pp.operator()),
        twirl_rho_plus: operator_triplets(twirled.rho_plus.operator()),
        note: "the full rotation average removes every coherence between l = 0 and l = 1; the printed states keep a ±1/4 coherence, so the printed pair is distinguishable while the averaged pair is not".into(),
    })
}

/// `|g±⟩⟨g±|`-style input: `ρ⁺ = |ψ⟩⟨ψ|` and its parity image.
pub fn pure_pair(psi: &StateVector) -> Result<(DensityMatrix, DensityMatrix)> {
    let plus = DensityMatrix::pure(psi)?;
    let minus = DensityMatrix::pure(&apply_parity(psi))?;
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{rotate_operator, FactorState};
    use crate::catalog::{
        four_particle_gloves, haar_rotations, s3_state, three_particle_projector_gloves, two_particle_approx_gloves,
    };

    #[test]
    fn invariant_state_is_a_fixed_point() {
        let e = four_particle_gloves();
        let rho = DensityMatrix::pure(e.pair.plus()).unwrap();
        let t = haar_twirl_exact(&rho).unwrap();
        assert!(t.operator().distance(rho.operator()).unwrap() < 1e-12);
    }

    #[test]
    fn twirl_is_idempotent_trace_preserving_and_invariant() {
        let space: SpaceSpec = "orb1,spin".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = DensityMatrix::random(&space, 3, &mut rng);
        let t = haar_twirl_exact(&rho).unwrap();
        let tt = haar_twirl_exact(&t).unwrap();
        assert!(t.operator().distance(tt.operator()).unwrap() < 1e-12);
        assert!((t.operator().trace().re - 1.0).abs() < 1e-10);
        assert!(t.eigenvalues()[0] > -1e-9);
        for r in haar_rotations(50, 2) {
            assert!(rotate_operator(t.operator(), &r).distance(t.operator()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn approximate_gloves_twirl_to_the_same_state() {
        let e = two_particle_approx_gloves();
        let (p, m) = pure_pair(e.pair.plus()).unwrap();
        let tp = haar_twirl_exact(&p).unwrap();
        let tm = haar_twirl_exact(&m).unwrap();
        assert!(trace_distance(&tp, &tm).unwrap() < 1e-9);
        assert!((helstrom_success(&tp, &tm).unwrap() - 0.5).abs() < 1e-9);
        let y00 = BasisLabel::new(vec![FactorState::orbital(0, 0)]);
        assert!((tp.operator().get(&y00, &y00).re - 0.5).abs() < 1e-12);
        for m in [-1, 0, 1] {
            let l = BasisLabel::new(vec![FactorState::orbital(1, m)]);
            assert!((tp.operator().get(&l, &l).re - 1.0 / 6.0).abs() < 1e-12);
            assert!(tp.operator().get(&y00, &l).norm() < 1e-14);
        }
    }

    #[test]
    fn monte_carlo_is_close_and_deterministic() {
        let space = SpaceSpec::orbitals(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = DensityMatrix::random(&space, 2, &mut rng);
        let exact = haar_twirl_exact(&rho).unwrap();
        let n = 4000;
        let mc = haar_twirl_monte_carlo(&rho, n, 3).unwrap();
        let dev = mc.operator().try_sub(exact.operator()).unwrap().max_norm();
        assert!(dev < 5.0 / (n as f64).sqrt(), "{dev}");
        let again = haar_twirl_monte_carlo(&rho, n, 3).unwrap();
        assert_eq!(mc, again);
        assert!(haar_twirl_monte_carlo(&rho, 0, 3).is_err());
    }

    #[test]
    fn trace_distance_basics() {
        let space = SpaceSpec::orbitals(1, 1);
        let a = StateVector::basis_state(space.clone(), y00()).unwrap();
        let b = StateVector::basis_state(space, y1(1)).unwrap();
        let (ra, rb) = (DensityMatrix::pure(&a).unwrap(), DensityMatrix::pure(&b).unwrap());
        assert!((trace_distance(&ra, &rb).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&ra, &ra).unwrap() < 1e-12);
        assert!((helstrom_success(&ra, &ra).unwrap() - 0.5).abs() < 1e-12);
        let other = DensityMatrix::pure(&s3_state()).unwrap();
        assert!(trace_distance(&ra, &other).is_err());
    }

    #[test]
    fn printed_states_have_half_trace_distance() {
        let (p, m) = printed_averaged_states();
        assert!((trace_distance(&p, &m).unwrap() - 0.5).abs() < 1e-12);
        let report = averaged_state_discrepancy().unwrap();
        assert!(!report.agree);
        assert!(report.twirl_trace_distance < 1e-9);
        assert!((report.max_entry_difference - 0.25).abs() < 1e-12);
    }

    #[test]
    fn communication_costs() {
        let four = four_particle_gloves();
        assert!((communication_cost(&four.pair, None).unwrap() - 1.0).abs() < 1e-9);
        assert!((communication_cost(&four.pair, Some(four.pair.plus())).unwrap() - 1.0).abs() < 1e-9);
        let three = three_particle_projector_gloves();
        let expected = 1.0 + 3f64.log2();
        assert!((communication_cost(&three.pair, Some(three.pair.plus())).unwrap() - expected).abs() < 1e-9);
        assert!((communication_cost(&three.pair, None).unwrap() - expected).abs() < 1e-9);
        assert!(communication_cost(&three.pair, Some(three.pair.minus())).is_err());
    }

    #[test]
    fn footprints() {
        assert_eq!(lmax_footprint(four_particle_gloves().pair.plus()), vec![1, 1, 1]);
        assert_eq!(lmax_footprint(&s3_state()), vec![0, 0, 0]);
        assert_eq!(lmax_footprint(two_particle_approx_gloves().pair.plus()), vec![1]);
        let spin: SpaceSpec = "spin,orb2".parse().unwrap();
        let psi = StateVector::basis_state(spin, BasisLabel::new(vec![FactorState::up(), FactorState::orbital(2, -1)]))
            .unwrap();
        assert_eq!(lmax_footprint(&psi), vec![2]);
    }

    #[test]
    fn report_serializes() {
        let (p, _) = pure_pair(two_particle_approx_gloves().pair.plus()).unwrap();
        let r = twirl_report(&p, TwirlMethod::MonteCarlo { samples: 100, seed: 1 }).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: TwirlReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.method, r.method);
        assert!((back.helstrom - 0.5 - 0.5 * back.trace_distance).abs() < 1e-12);
    }
}
