//! Wigner rotation matrices and the rotation action on product states.
//!
//! Rotations are active and parameterized by z-y-z Euler angles:
//! `U(α, β, γ) = e^{−iαJz} e^{−iβJy} e^{−iγJz}`, so that
//! `U|j m⟩ = Σ_{m'} D^j_{m'm}(α, β, γ) |j m'⟩` with
//! `D^j_{m'm} = e^{−im'α} d^j_{m'm}(β) e^{−imγ}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::clebsch::{check_pair, factorial};
use super::halfint::HalfInt;
use super::operator::SparseOperator;
use super::space::{BasisLabel, FactorState};
use super::state::SparseState;
use crate::error::Result;
use crate::scalar::Real;

/// Largest `2j` supported by the rotation kernels.
pub const MAX_TWO_J: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles<T = f64> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> EulerAngles<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        EulerAngles { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Rotation by `beta` about the y axis.
    pub fn about_y(beta: T) -> Self {
        Self::new(T::zero(), beta, T::zero())
    }

    /// Haar-distributed rotation: `α, γ` uniform on `[0, 2π)`, `cos β` uniform
    /// on `[−1, 1]`.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let tau = std::f64::consts::TAU;
        let a: f64 = rng.random::<f64>() * tau;
        let c: f64 = 1.0 - 2.0 * rng.random::<f64>();
        let g: f64 = rng.random::<f64>() * tau;
        Self::new(T::lit(a), T::lit(c.clamp(-1.0, 1.0).acos()), T::lit(g))
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }

    /// Angles folded into `α, γ ∈ [0, 4π)`, `β ∈ [0, π]`. Meant for display; the
    /// folded angles may differ from the input by a spinor sign.
    pub fn canonical(&self) -> Self {
        let two_pi = T::TAU();
        let four_pi = two_pi + two_pi;
        let wrap = |x: T, p: T| {
            let r = x % p;
            if r < T::zero() {
                r + p
            } else {
                r
            }
        };
        let mut a = self.alpha;
        let mut g = self.gamma;
        let mut b = wrap(self.beta, two_pi);
        if b > T::PI() {
            b = two_pi - b;
            a += T::PI();
            g += T::PI();
        }
        Self::new(wrap(a, four_pi), b, wrap(g, four_pi))
    }
}

/// One term of the Wigner sum: `coef · cos(β/2)^cos_pow · sin(β/2)^sin_pow`.
#[derive(Clone, Copy, Debug)]
struct DTerm {
    coef: f64,
    cos_pow: i32,
    sin_pow: i32,
}

type DTable = Vec<Vec<Vec<DTerm>>>;

/// Per-`2j` table of Wigner-sum terms, indexed `[j - m'][j - m]`, built once
/// from exact factorials.
fn d_terms(two_j: u32) -> &'static DTable {
    static TABLES: OnceLock<Vec<OnceLock<DTable>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAX_TWO_J).map(|_| OnceLock::new()).collect());
    tables[two_j as usize].get_or_init(|| build_d_terms(two_j as i32))
}

fn build_d_terms(tj: i32) -> DTable {
    let n = (tj + 1) as usize;
    let f = |x: i32| -> BigUint { factorial(x as usize).clone() };
    let mut table = vec![vec![Vec::new(); n]; n];
    for (r, row) in table.iter_mut().enumerate() {
        let tmp = tj - 2 * r as i32; // 2m'
        for (c, cell) in row.iter_mut().enumerate() {
            let tm = tj - 2 * c as i32; // 2m
            let jpmp = (tj + tmp) / 2;
            let jmmp = (tj - tmp) / 2;
            let jpm = (tj + tm) / 2;
            let jmm = (tj - tm) / 2;
            let mpmm = (tmp - tm) / 2;
            let numer = f(jpmp) * f(jmmp) * f(jpm) * f(jmm);
            let s_min = 0.max(-mpmm);
            let s_max = jpm.min(jmmp);
            for s in s_min..=s_max {
                let den = f(jpm - s) * f(s) * f(mpmm + s) * f(jmmp - s);
                // Exact ratio numer / den², converted late.
                let ratio = BigRational::new(numer.clone().into(), (&den * &den).into());
                let mag = ratio.to_f64().expect("finite").sqrt();
                let sign = if (mpmm + s).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                cell.push(DTerm { coef: sign * mag, cos_pow: tj + (tm - tmp) / 2 - 2 * s, sin_pow: mpmm + 2 * s });
            }
        }
    }
    table
}

fn d_from_terms<T: Real>(terms: &[DTerm], beta: T) -> T {
    let half = beta / (T::one() + T::one());
    let (s, c) = half.sin_cos();
    terms.iter().map(|t| T::lit(t.coef) * c.powi(t.cos_pow) * s.powi(t.sin_pow)).fold(T::zero(), |a, b| a + b)
}

/// Wigner small-d element `d^j_{m_row, m_col}(β)`.
pub fn wigner_small_d<T: Real>(j: HalfInt, m_row: HalfInt, m_col: HalfInt, beta: T) -> Result<T> {
    check_pair(j, m_row)?;
    check_pair(j, m_col)?;
    let tj = j.twice();
    let r = ((tj - m_row.twice()) / 2) as usize;
    let c = ((tj - m_col.twice()) / 2) as usize;
    Ok(d_from_terms(&d_terms(tj as u32)[r][c], beta))
}

/// Full `d^j(β)` with rows and columns ordered `m = j, j−1, …, −j`.
pub fn wigner_small_d_matrix<T: Real>(j: HalfInt, beta: T) -> Result<Vec<Vec<T>>> {
    check_pair(j, j)?;
    let table = d_terms(j.twice() as u32);
    Ok(table.iter().map(|row| row.iter().map(|terms| d_from_terms(terms, beta)).collect()).collect())
}

/// Full `D^j(α, β, γ)`, ordered like [`wigner_small_d_matrix`].
pub fn wigner_big_d_matrix<T: Real>(j: HalfInt, angles: &EulerAngles<T>) -> Result<Vec<Vec<Complex<T>>>> {
    let d = wigner_small_d_matrix(j, angles.beta)?;
    let tj = j.twice();
    let half = T::lit(0.5);
    let phase = |tm: i32, angle: T| Complex::from_polar(T::one(), -(T::lit(f64::from(tm)) * half) * angle);
    Ok(d.into_iter()
        .enumerate()
        .map(|(r, row)| {
            let left = phase(tj - 2 * r as i32, angles.alpha);
            row.into_iter().enumerate().map(|(c, x)| left * phase(tj - 2 * c as i32, angles.gamma) * x).collect()
        })
        .collect())
}

/// Caches `D^j` per `2j` for one set of angles.
pub(crate) struct RotationCache<'a, T: Real> {
    angles: &'a EulerAngles<T>,
    mats: HashMap<u32, Vec<Vec<Complex<T>>>>,
}

impl<'a, T: Real> RotationCache<'a, T> {
    pub(crate) fn new(angles: &'a EulerAngles<T>) -> Self {
        RotationCache { angles, mats: HashMap::new() }
    }

    /// Images `U|j m⟩ = Σ_{m'} D_{m'm} |j m'⟩` of one factor state.
    pub(crate) fn column(&mut self, s: FactorState) -> Vec<(FactorState, Complex<T>)> {
        let angles = self.angles;
        let mat = self.mats.entry(s.two_j).or_insert_with(|| {
            wigner_big_d_matrix(HalfInt::from_twice(s.two_j as i32), angles).expect("valid factor state")
        });
        let tj = s.two_j as i32;
        let c = ((tj - s.two_m) / 2) as usize;
        (0..=s.two_j as usize).map(|r| (FactorState { two_j: s.two_j, two_m: tj - 2 * r as i32 }, mat[r][c])).collect()
    }
}

/// Applies `U(α, β, γ)` to every factor of `psi`.
pub fn apply_rotation<T: Real>(psi: &SparseState<T>, angles: &EulerAngles<T>) -> SparseState<T> {
    let mut cache = RotationCache::new(angles);
    let nf = psi.space().factors().len();
    let mut current: BTreeMap<BasisLabel, Complex<T>> = psi.iter().map(|(l, a)| (l.clone(), *a)).collect();
    for i in 0..nf {
        let mut next: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
        for (label, amp) in &current {
            for (s, d) in cache.column(label[i]) {
                if d.norm() > T::prune_tolerance() {
                    *next.entry(label.with(i, s)).or_default() += amp * d;
                }
            }
        }
        current = next;
    }
    SparseState::from_map_unchecked(psi.space().clone(), current)
}

/// `U A U†` for a sparse operator `A`.
pub fn rotate_operator<T: Real>(op: &SparseOperator<T>, angles: &EulerAngles<T>) -> SparseOperator<T> {
    let space = op.space().clone();
    let mut images: HashMap<BasisLabel, SparseState<T>> = HashMap::new();
    let mut image = |l: &BasisLabel| -> SparseState<T> {
        images
            .entry(l.clone())
            .or_insert_with(|| {
                let e = SparseState::from_map_unchecked(
                    space.clone(),
                    BTreeMap::from([(l.clone(), Complex::new(T::one(), T::zero()))]),
                );
                apply_rotation(&e, angles)
            })
            .clone()
    };
    let mut out = SparseOperator::zero(space.clone());
    for (r, c, v) in op.entries() {
        let ur = image(r);
        let uc = image(c);
        for (a, x) in ur.iter() {
            for (b, y) in uc.iter() {
                out.add_entry(a.clone(), b.clone(), v * x * y.conj());
            }
        }
    }
    out.prune();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn identity_at_zero_angle() {
        for tj in 0..=10 {
            let d = wigner_small_d_matrix(h(tj), 0.0f64).unwrap();
            for (r, row) in d.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    let want = if r == c { 1.0 } else { 0.0 };
                    assert!((x - want).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn spin_half_closed_form() {
        let b = 0.731f64;
        assert!((wigner_small_d(h(1), h(1), h(1), b).unwrap() - (b / 2.0).cos()).abs() < 1e-15);
        assert!((wigner_small_d(h(1), h(1), h(-1), b).unwrap() + (b / 2.0).sin()).abs() < 1e-15);
        assert!((wigner_small_d(h(1), h(-1), h(1), b).unwrap() - (b / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn spin_one_closed_form() {
        let b = 1.234f64;
        let d = wigner_small_d_matrix(h(2), b).unwrap();
        let (s, c) = b.sin_cos();
        let r2 = 2f64.sqrt();
        let want = [
            [(1.0 + c) / 2.0, -s / r2, (1.0 - c) / 2.0],
            [s / r2, c, -s / r2],
            [(1.0 - c) / 2.0, s / r2, (1.0 + c) / 2.0],
        ];
        for r in 0..3 {
            for k in 0..3 {
                assert!((d[r][k] - want[r][k]).abs() < 1e-14, "({r},{k})");
            }
        }
    }

    #[test]
    fn rejects_invalid_numbers() {
        assert!(wigner_small_d(h(2), h(4), h(0), 0.1f64).is_err());
        assert!(wigner_small_d(h(2), h(1), h(1), 0.1f64).is_err());
        assert!(wigner_small_d_matrix(h(100), 0.1f64).is_err());
    }

    #[test]
    fn canonical_ranges() {
        let e = EulerAngles::new(-1.0f64, 4.0, 13.0).canonical();
        let four_pi = 4.0 * std::f64::consts::PI;
        assert!((0.0..four_pi).contains(&e.alpha));
        assert!((0.0..four_pi).contains(&e.gamma));
        assert!((0.0..=std::f64::consts::PI).contains(&e.beta));
    }
}
