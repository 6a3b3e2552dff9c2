//! Seeded simulation of the chirality-comparison protocol: Alice prepares a
//! glove, the channel rotates it, Bob measures and infers whether their
//! handedness agrees.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::dense::{hermitian_eigen, operator_to_matrix, state_to_vector};
use crate::angular::{apply_parity, apply_rotation, Basis, FactorSpec};
use crate::catalog::CatalogEntry;
use crate::density::DensityMatrix;
use crate::error::{domain, Result};
use crate::irrep::GloveKind;
use crate::twirl::{communication_cost, haar_twirl_exact, lmax_footprint};
use crate::{Euler, StateVector};

/// Trials drawn from one generator stream.
pub const TRIAL_CHUNK: usize = 1000;

/// Probabilities this close to 0 or 1 are snapped.
const SNAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub random_rotation: bool,
    pub fixed_rotation: Option<Euler>,
    pub bob_opposite_chirality: bool,
}

impl ChannelConfig {
    pub fn new(random_rotation: bool, fixed_rotation: Option<Euler>, bob_opposite_chirality: bool) -> Result<Self> {
        if random_rotation && fixed_rotation.is_some() {
            return domain("random and fixed rotations are mutually exclusive");
        }
        if fixed_rotation.is_some_and(|r| !r.is_finite()) {
            return domain("fixed rotation angles must be finite");
        }
        Ok(ChannelConfig { random_rotation, fixed_rotation, bob_opposite_chirality })
    }

    /// Compact description without commas, for CSV and tables.
    pub fn label(&self) -> String {
        let channel = match (self.random_rotation, self.fixed_rotation) {
            (true, _) => "random".to_string(),
            (false, Some(r)) => format!("fixed({};{};{})", r.alpha, r.beta, r.gamma),
            (false, None) => "none".to_string(),
        };
        let frame = if self.bob_opposite_chirality { "opposite" } else { "same" };
        format!("{channel}/{frame}")
    }
}

/// Bob's measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    /// `{Π⁺, Π⁻, rest}`; `rest` counts as a failure.
    #[default]
    Glove,
    /// Optimal two-outcome measurement for the channel-averaged states, with
    /// the null space of `ρ̄⁺ − ρ̄⁻` answered by a fair coin.
    Helstrom,
}

impl Measurement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measurement::Glove => "glove",
            Measurement::Helstrom => "helstrom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub entry: String,
    pub config: ChannelConfig,
    pub measurement: Measurement,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub stderr: f64,
    pub seed: u64,
    pub inferred_same: usize,
    pub inferred_opposite: usize,
    pub inconclusive: usize,
}

impl SimReport {
    pub const CSV_HEADER: &'static str = "entry,config,trials,successes,frequency,stderr,seed";

    pub fn config_label(&self) -> String {
        format!("{}/{}", self.config.label(), self.measurement.as_str())
    }
}

#[derive(Clone, Copy, Default)]
struct Counts {
    same: usize,
    opposite: usize,
    inconclusive: usize,
}

impl Counts {
    fn add(self, o: Counts) -> Counts {
        Counts {
            same: self.same + o.same,
            opposite: self.opposite + o.opposite,
            inconclusive: self.inconclusive + o.inconclusive,
        }
    }
}

fn snap(p: f64) -> f64 {
    if p.abs() <= SNAP {
        0.0
    } else if (p - 1.0).abs() <= SNAP {
        1.0
    } else {
        p.clamp(0.0, 1.0)
    }
}

/// Born probabilities of Bob's outcomes on a state: `(same, opposite, rest)`.
trait Detector: Sync {
    fn probabilities(&self, psi: &StateVector) -> (f64, f64, f64);
}

struct GloveDetector<'a> {
    plus: &'a [StateVector],
    minus: &'a [StateVector],
}

impl Detector for GloveDetector<'_> {
    fn probabilities(&self, psi: &StateVector) -> (f64, f64, f64) {
        let weight =
            |basis: &[StateVector]| -> f64 { basis.iter().map(|b| b.inner(psi).expect("same space").norm_sqr()).sum() };
        let p = snap(weight(self.plus));
        let m = snap(weight(self.minus));
        (p, m, snap(1.0 - p - m))
    }
}

struct HelstromDetector {
    basis: Basis,
    positive: DMatrix<Complex64>,
    null: DMatrix<Complex64>,
}

impl HelstromDetector {
    fn new(rho_plus: &DensityMatrix, rho_minus: &DensityMatrix) -> Result<Self> {
        let basis = rho_plus.space().basis();
        let diff = rho_plus.operator().try_sub(rho_minus.operator())?;
        let (values, vectors) = hermitian_eigen(&operator_to_matrix(&diff, &basis));
        let n = basis.len();
        let mut positive = DMatrix::zeros(n, n);
        let mut null = DMatrix::zeros(n, n);
        for (k, &l) in values.iter().enumerate() {
            let v = vectors.column(k);
            let outer = v * v.adjoint();
            if l > SNAP {
                positive += outer;
            } else if l.abs() <= SNAP {
                null += outer;
            }
        }
        Ok(HelstromDetector { basis, positive, null })
    }
}

impl Detector for HelstromDetector {
    fn probabilities(&self, psi: &StateVector) -> (f64, f64, f64) {
        let v = state_to_vector(psi, &self.basis);
        let pos = (v.adjoint() * &self.positive * &v)[(0, 0)].re;
        let zero = (v.adjoint() * &self.null * &v)[(0, 0)].re;
        let same = snap(pos + 0.5 * zero);
        (same, snap(1.0 - same), 0.0)
    }
}

fn run_chunk(
    detector: &dyn Detector,
    prepared: &StateVector,
    config: &ChannelConfig,
    seed: u64,
    chunk: usize,
    count: usize,
) -> Counts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut counts = Counts::default();
    let fixed = config.fixed_rotation.map(|r| detector.probabilities(&apply_rotation(prepared, &r)));
    let unrotated = detector.probabilities(prepared);
    for _ in 0..count {
        let (p_same, p_opp, _) = if config.random_rotation {
            detector.probabilities(&apply_rotation(prepared, &Euler::haar(&mut rng)))
        } else {
            fixed.unwrap_or(unrotated)
        };
        let u: f64 = rng.random();
        if u < p_same {
            counts.same += 1;
        } else if u < p_same + p_opp {
            counts.opposite += 1;
        } else {
            counts.inconclusive += 1;
        }
    }
    counts
}

/// Runs `trials` independent rounds of the protocol.
///
/// Alice sends the pair's `+` representative, parity-conjugated when Bob's
/// handedness is opposite. Trials run in chunks of [`TRIAL_CHUNK`], chunk `k`
/// on stream `k` of a generator seeded with `seed`, so the counts do not
/// depend on the number of worker threads.
pub fn simulate_exchange(
    entry: &CatalogEntry,
    config: &ChannelConfig,
    measurement: Measurement,
    trials: usize,
    seed: u64,
) -> Result<SimReport> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    ChannelConfig::new(config.random_rotation, config.fixed_rotation, config.bob_opposite_chirality)?;
    let plus = entry.pair.plus().normalized()?;
    let prepared = if config.bob_opposite_chirality { apply_parity(&plus) } else { plus.clone() };

    let glove;
    let helstrom;
    let detector: &dyn Detector = match measurement {
        Measurement::Glove => {
            glove = GloveDetector { plus: &entry.pair.plus_basis, minus: &entry.pair.minus_basis };
            &glove
        }
        Measurement::Helstrom => {
            let rho = DensityMatrix::pure(&plus)?;
            let (rp, rm) = if config.random_rotation {
                (haar_twirl_exact(&rho)?, haar_twirl_exact(&rho.parity_conjugate())?)
            } else if let Some(r) = config.fixed_rotation {
                (rho.rotated(&r), rho.parity_conjugate().rotated(&r))
            } else {
                (rho.clone(), rho.parity_conjugate())
            };
            helstrom = HelstromDetector::new(&rp, &rm)?;
            &helstrom
        }
    };

    let chunks = trials.div_ceil(TRIAL_CHUNK);
    let partial: Vec<Counts> = (0..chunks)
        .into_par_iter()
        .map(|k| run_chunk(detector, &prepared, config, seed, k, TRIAL_CHUNK.min(trials - k * TRIAL_CHUNK)))
        .collect();
    let counts = partial.into_iter().fold(Counts::default(), Counts::add);
    let successes = if config.bob_opposite_chirality { counts.opposite } else { counts.same };
    let frequency = successes as f64 / trials as f64;
    Ok(SimReport {
        entry: entry.id.clone(),
        config: *config,
        measurement,
        trials,
        successes,
        frequency,
        stderr: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
        seed,
        inferred_same: counts.same,
        inferred_opposite: counts.opposite,
        inconclusive: counts.inconclusive,
    })
}

/// Helstrom success for telling the `+` representative from its rotation by
/// `angles`: `½ + ½√(1 − |⟨ψ|U ψ⟩|²)`. A value of ½ means the glove leaks no
/// orientation information.
pub fn fixed_frame_information_check(entry: &CatalogEntry, angles: &Euler) -> Result<f64> {
    if entry.pair.kind == GloveKind::ProjectorPair && !entry.pair.two_l.is_some_and(|l| l > 0) {
        return domain(format!("entry {} has no definite L > 0 for a subspace check", entry.id));
    }
    if !angles.is_finite() {
        return domain("rotation angles must be finite");
    }
    let psi = entry.pair.plus().normalized()?;
    let overlap = psi.inner(&apply_rotation(&psi, angles))?.norm_sqr().min(1.0);
    Ok(0.5 + 0.5 * (1.0 - overlap).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub entry: String,
    pub particles: usize,
    pub factors: Vec<String>,
    pub qubits: f64,
    pub lmax: Vec<u32>,
    pub perfect: bool,
}

pub fn resource_report(entry: &CatalogEntry) -> Result<ResourceReport> {
    Ok(ResourceReport {
        entry: entry.id.clone(),
        particles: entry.particles,
        factors: entry
            .space
            .factors()
            .iter()
            .map(|f| match f {
                FactorSpec::Orbital { l_max } => format!("orbital(l<={l_max})"),
                FactorSpec::SpinHalf => "spin-1/2".to_string(),
            })
            .collect(),
        qubits: communication_cost(&entry.pair, Some(entry.pair.plus()))?,
        lmax: lmax_footprint(entry.pair.plus()),
        perfect: entry.perfect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        all_entries, four_particle_gloves, three_particle_projector_gloves, two_particle_approx_gloves,
    };

    fn random() -> ChannelConfig {
        ChannelConfig::new(true, None, false).unwrap()
    }

    #[test]
    fn perfect_gloves_never_fail() {
        for e in all_entries().into_iter().filter(|e| e.perfect) {
            for opposite in [false, true] {
                let cfg = ChannelConfig::new(true, None, opposite).unwrap();
                let r = simulate_exchange(&e, &cfg, Measurement::Glove, 2000, 3).unwrap();
                assert_eq!(r.successes, r.trials, "{} opposite={opposite}", e.id);
                if opposite {
                    assert_eq!(r.inferred_opposite, r.trials);
                }
            }
        }
    }

    #[test]
    fn glove_basis_on_approximate_gloves_sits_at_one_third() {
        let e = two_particle_approx_gloves();
        let r = simulate_exchange(&e, &random(), Measurement::Glove, 10_000, 7).unwrap();
        assert!((r.frequency - 1.0 / 3.0).abs() < 4.0 * r.stderr, "{}", r.frequency);
        let h = simulate_exchange(&e, &random(), Measurement::Helstrom, 10_000, 7).unwrap();
        assert!((h.frequency - 0.5).abs() < 4.0 * h.stderr);
        assert!(r.frequency <= h.frequency + 4.0 * h.stderr);
    }

    #[test]
    fn fixed_frame_approximate_gloves_succeed() {
        let e = two_particle_approx_gloves();
        let cfg = ChannelConfig::default();
        let r = simulate_exchange(&e, &cfg, Measurement::Glove, 500, 1).unwrap();
        assert_eq!(r.successes, 500);
    }

    #[test]
    fn seeded_runs_repeat() {
        let e = two_particle_approx_gloves();
        let a = simulate_exchange(&e, &random(), Measurement::Glove, 3500, 42).unwrap();
        let b = simulate_exchange(&e, &random(), Measurement::Glove, 3500, 42).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| simulate_exchange(&e, &random(), Measurement::Glove, 3500, 42).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn config_rules() {
        assert!(ChannelConfig::new(true, Some(Euler::identity()), false).is_err());
        let e = four_particle_gloves();
        assert!(simulate_exchange(&e, &random(), Measurement::Glove, 0, 0).is_err());
    }

    #[test]
    fn information_leakage() {
        let four = four_particle_gloves();
        let angles = Euler::new(0.3, 1.1, -2.0);
        assert!((fixed_frame_information_check(&four, &angles).unwrap() - 0.5).abs() < 1e-12);
        let three = three_particle_projector_gloves();
        let v = fixed_frame_information_check(&three, &Euler::about_y(std::f64::consts::FRAC_PI_2)).unwrap();
        // |⟨ψ|Uψ⟩| = d¹₁₁(π/2) = ½
        assert!((v - (0.5 + 0.5 * 0.75f64.sqrt())).abs() < 1e-12);
        assert!((fixed_frame_information_check(&three, &Euler::identity()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn resources() {
        let r = resource_report(&four_particle_gloves()).unwrap();
        assert_eq!((r.particles, r.lmax.clone(), r.perfect), (4, vec![1, 1, 1], true));
        assert!((r.qubits - 1.0).abs() < 1e-9);
        let r = resource_report(&three_particle_projector_gloves()).unwrap();
        assert_eq!((r.particles, r.lmax.clone()), (3, vec![1, 1]));
        assert!((r.qubits - (1.0 + 3f64.log2())).abs() < 1e-9);
        let r = resource_report(&two_particle_approx_gloves()).unwrap();
        assert_eq!((r.particles, r.lmax.clone(), r.perfect), (2, vec![1], false));
    }
}
