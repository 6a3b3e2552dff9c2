//! Derivative-free search for the best approximate glove state on a space.
//!
//! A candidate is `ψ = Σ_k x_k |L_k, L_k⟩` over the highest-weight vectors of
//! the irrep blocks. Its twirled pair splits into one rank-one piece per `L`,
//! so with `u_L, v_L` the norms of the parity `+1` and `−1` parts the Helstrom
//! score is `½ + Σ_L |u_L||v_L| / ‖x‖²`. The score depends on the block
//! weights only, so real coefficients lose nothing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::Result;
use crate::irrep::{decompose, glove_existence, ExistenceReport, IrrepBlock};
use crate::twirl::{twirl_report, TwirlMethod};
use crate::{SpaceSpec, StateVector};

/// Iterations without an improvement above [`STALL_TOL`] that end a run.
pub const STALL_WINDOW: usize = 50;
pub const STALL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub space: SpaceSpec,
    pub best_state: StateVector,
    pub score: f64,
    /// Supremum of the score allowed by the multiplicity table.
    pub bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restarts: usize,
    pub seed: u64,
}

/// `1` when some `L` carries both parities, else `½`.
pub fn block_bound(report: &ExistenceReport) -> f64 {
    if report.flags.perfect_subspace_glove {
        1.0
    } else {
        0.5
    }
}

struct Objective {
    /// `(L, parity)` of every block in parameter order.
    keys: Vec<(u32, i8)>,
    bound: f64,
}

impl Objective {
    fn score(&self, x: &[f64]) -> f64 {
        let total: f64 = x.iter().map(|v| v * v).sum();
        if total <= 0.0 || !total.is_finite() {
            return 0.5;
        }
        let mut weights: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for (xi, &(l, p)) in x.iter().zip(&self.keys) {
            let w = weights.entry(l).or_default();
            if p > 0 {
                w.0 += xi * xi;
            } else {
                w.1 += xi * xi;
            }
        }
        let s = 0.5 + weights.values().map(|(u, v)| (u * v).sqrt()).sum::<f64>() / total;
        s.min(self.bound)
    }
}

struct Run {
    x: Vec<f64>,
    score: f64,
    iterations: usize,
    converged: bool,
}

/// Nelder–Mead ascent on `f` from `x0`.
fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, max_iters: usize) -> Run {
    let n = x0.len();
    let neg = |x: &[f64]| -f(x);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.clone(), neg(&x0)));
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += if x[i].abs() > 1e-3 { 0.5 * x[i] } else { 0.25 };
        let v = neg(&x);
        simplex.push((x, v));
    }
    let mut history: Vec<f64> = Vec::with_capacity(max_iters + 1);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        history.push(simplex[0].1);
        if history.len() > STALL_WINDOW {
            let old = history[history.len() - 1 - STALL_WINDOW];
            if old - simplex[0].1 < STALL_TOL {
                converged = true;
                break;
            }
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let toward = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (w - c)).collect() };

        let reflected = toward(-1.0);
        let fr = neg(&reflected);
        if fr < simplex[0].1 {
            let expanded = toward(-2.0);
            let fe = neg(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst.1 {
                let c = toward(-0.5);
                let v = neg(&c);
                (c, v)
            } else {
                let c = toward(0.5);
                let v = neg(&c);
                (c, v)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = neg(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    Run { x, score: -v, iterations, converged }
}

fn assemble(blocks: &[IrrepBlock], x: &[f64], space: &SpaceSpec) -> Result<StateVector> {
    let mut psi = StateVector::zero(space.clone());
    for (b, &c) in blocks.iter().zip(x) {
        psi = psi.axpy(num_complex::Complex64::new(c, 0.0), b.top())?;
    }
    psi.normalized()
}

/// Maximizes the twirled Helstrom score over unit states on `space`.
///
/// Each restart starts from a Gaussian point drawn from stream `r` of a
/// generator seeded with `seed`; the best restart wins, ties going to the
/// lowest index.
pub fn optimize_approx_gloves(space: &SpaceSpec, restarts: usize, max_iters: usize, seed: u64) -> Result<SearchResult> {
    let blocks = decompose(space)?;
    let bound = block_bound(&glove_existence(space)?);
    let objective = Objective { keys: blocks.iter().map(|b| (b.two_l, b.parity)).collect(), bound };
    let runs: Vec<Run> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let x0: Vec<f64> = (0..blocks.len()).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            nelder_mead(|x| objective.score(x), x0, max_iters)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.score > runs[best].score {
            best = i;
        }
    }
    let run = &runs[best];
    Ok(SearchResult {
        space: space.clone(),
        best_state: assemble(&blocks, &run.x, space)?,
        score: objective.score(&run.x),
        bound,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: run.converged,
        restarts: runs.len(),
        seed,
    })
}

/// Helstrom score of `ψ` through the general twirl path.
pub fn score_state(psi: &StateVector) -> Result<f64> {
    Ok(twirl_report(&DensityMatrix::pure(psi)?, TwirlMethod::Exact)?.helstrom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_perfect_scalar_glove() {
        let r = optimize_approx_gloves(&SpaceSpec::orbitals(1, 3), 4, 5000, 0).unwrap();
        assert!(r.score >= 1.0 - 1e-6, "{}", r.score);
        assert!(r.score <= r.bound);
        assert!((score_state(&r.best_state).unwrap() - r.score).abs() < 1e-9);
    }

    #[test]
    fn single_orbital_spaces_are_capped_at_one_half() {
        for l in [1, 2, 5] {
            let r = optimize_approx_gloves(&SpaceSpec::orbitals(l, 1), 2, 500, 1).unwrap();
            assert!(r.score <= 0.5 + 1e-6);
            assert_eq!(r.bound, 0.5);
            assert!((score_state(&r.best_state).unwrap() - r.score).abs() < 1e-9);
        }
    }

    #[test]
    fn two_orbitals_reach_one_through_l_equals_one() {
        let r = optimize_approx_gloves(&SpaceSpec::orbitals(1, 2), 3, 3000, 2).unwrap();
        assert!(r.score >= 1.0 - 1e-6);
        assert!((score_state(&r.best_state).unwrap() - r.score).abs() < 1e-9);
    }

    #[test]
    fn block_score_matches_twirl_for_random_points() {
        let space: SpaceSpec = "orb1,spin,spin".parse().unwrap();
        let blocks = decompose(&space).unwrap();
        let bound = block_bound(&glove_existence(&space).unwrap());
        let obj = Objective { keys: blocks.iter().map(|b| (b.two_l, b.parity)).collect(), bound };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let x: Vec<f64> = (0..blocks.len()).map(|_| rng.random::<f64>() - 0.5).collect();
            let psi = assemble(&blocks, &x, &space).unwrap();
            assert!((score_state(&psi).unwrap() - obj.score(&x)).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let s = SpaceSpec::orbitals(1, 2);
        let a = optimize_approx_gloves(&s, 3, 400, 9).unwrap();
        let b = optimize_approx_gloves(&s, 3, 400, 9).unwrap();
        assert_eq!(a, b);
    }
}
