//! Decomposition of a product space into rotation/parity irreducible blocks,
//! glove pairs built from two blocks of opposite parity, and the chirality
//! operator.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::angular::{
    angular_momentum_generators, apply_parity, apply_rotation, clebsch_gordan, conjugate_by_parity, parity_eigenvalue,
    rotate_operator, FactorState, HalfInt,
};
use crate::error::{domain, GloveError, Result};
use crate::scalar::{COMPARE_TOL, OPERATOR_TOL};
use crate::{BasisLabel, Euler, LinearOperator, SpaceSpec, StateVector};

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// One copy of a `(2L+1)`-dimensional irrep with definite parity.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepBlock {
    pub two_l: u32,
    pub parity: i8,
    pub copy_index: usize,
    /// Ordered `M = L, L−1, …, −L`.
    pub basis: Vec<StateVector>,
}

impl IrrepBlock {
    pub fn l(&self) -> HalfInt {
        HalfInt::from_twice(self.two_l as i32)
    }

    pub fn dim(&self) -> usize {
        self.two_l as usize + 1
    }

    /// Highest-weight vector `|L, L⟩`.
    pub fn top(&self) -> &StateVector {
        &self.basis[0]
    }

    pub fn space(&self) -> &SpaceSpec {
        self.basis[0].space()
    }

    pub fn projector(&self) -> LinearOperator {
        LinearOperator::projector(self.space().clone(), &self.basis).expect("block vectors share a space")
    }
}

fn check_cap(space: &SpaceSpec, cap: usize) -> Result<()> {
    let dim = space.dim();
    if dim > cap {
        return Err(GloveError::Capacity { dim, cap });
    }
    Ok(())
}

type RealVec = BTreeMap<Vec<FactorState>, f64>;

struct Partial {
    two_l: u32,
    parity: i8,
    /// Row `k` holds `M = L − k`.
    rows: Vec<RealVec>,
}

#[derive(Default)]
struct CgCache(HashMap<(u32, i32, u32, i32, u32, i32), f64>);

impl CgCache {
    fn get(&mut self, t1: u32, tm1: i32, t2: u32, tm2: i32, t: u32, tm: i32) -> f64 {
        *self.0.entry((t1, tm1, t2, tm2, t, tm)).or_insert_with(|| {
            let h = HalfInt::from_twice;
            clebsch_gordan::<f64>(h(t1 as i32), h(tm1), h(t2 as i32), h(tm2), h(t as i32), h(tm))
                .expect("coupling arguments are in range")
        })
    }
}

fn couple(p: &Partial, t2: u32, p2: i8, tj: u32, cache: &mut CgCache) -> Partial {
    let t1 = p.two_l;
    let mut rows = Vec::with_capacity(tj as usize + 1);
    for k in 0..=tj {
        let tm = tj as i32 - 2 * k as i32;
        let mut acc = RealVec::new();
        for (k1, row) in p.rows.iter().enumerate() {
            let tm1 = t1 as i32 - 2 * k1 as i32;
            let tm2 = tm - tm1;
            if tm2.unsigned_abs() > t2 {
                continue;
            }
            let c = cache.get(t1, tm1, t2, tm2, tj, tm);
            if c == 0.0 {
                continue;
            }
            let extra = FactorState { two_j: t2, two_m: tm2 };
            for (label, a) in row {
                let mut key = label.clone();
                key.push(extra);
                *acc.entry(key).or_insert(0.0) += c * a;
            }
        }
        acc.retain(|_, v| v.abs() > 1e-15);
        rows.push(acc);
    }
    Partial { two_l: tj, parity: p.parity * p2, rows }
}

fn dot(a: &RealVec, b: &RealVec) -> f64 {
    a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum()
}

/// Coefficients `T` with `u_c = Σ_d T[c][d] v_d` orthonormalizing `v`.
fn gram_schmidt(tops: &[&RealVec]) -> Vec<Vec<f64>> {
    let n = tops.len();
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut done: Vec<RealVec> = Vec::with_capacity(n);
    for c in 0..n {
        let mut t = vec![0.0; n];
        t[c] = 1.0;
        let mut u = tops[c].clone();
        for (d, ud) in done.iter().enumerate() {
            let proj = dot(ud, tops[c]);
            for (k, x) in ud {
                *u.entry(k.clone()).or_insert(0.0) -= proj * x;
            }
            for (e, td) in coeffs[d].iter().enumerate() {
                t[e] -= proj * td;
            }
        }
        let norm = dot(&u, &u).sqrt();
        for x in u.values_mut() {
            *x /= norm;
        }
        for x in &mut t {
            *x /= norm;
        }
        coeffs.push(t);
        done.push(u);
    }
    coeffs
}

/// [`decompose_with_cap`] with the default cap of 4096.
pub fn decompose(space: &SpaceSpec) -> Result<Vec<IrrepBlock>> {
    decompose_with_cap(space, DEFAULT_DIMENSION_CAP)
}

/// Left-to-right Clebsch–Gordan coupling of the factors into blocks.
///
/// Blocks are ordered by descending `L`, parity `+1` first, then by copy
/// index. Repeated `(L, parity)` copies are orthonormalized on their
/// highest-weight vectors in construction order.
pub fn decompose_with_cap(space: &SpaceSpec, cap: usize) -> Result<Vec<IrrepBlock>> {
    check_cap(space, cap)?;
    let mut cache = CgCache::default();
    let factors = space.factors();
    let mut partials: Vec<Partial> = factors[0]
        .irreps()
        .into_iter()
        .map(|(tj, p)| Partial {
            two_l: tj,
            parity: p,
            rows: (0..=tj)
                .map(|k| RealVec::from([(vec![FactorState { two_j: tj, two_m: tj as i32 - 2 * k as i32 }], 1.0)]))
                .collect(),
        })
        .collect();
    for f in &factors[1..] {
        let mut next = Vec::new();
        for p in &partials {
            for (t2, p2) in f.irreps() {
                let lo = (p.two_l as i32 - t2 as i32).unsigned_abs();
                for tj in (lo..=p.two_l + t2).step_by(2) {
                    next.push(couple(p, t2, p2, tj, &mut cache));
                }
            }
        }
        partials = next;
    }

    let mut groups: BTreeMap<(std::cmp::Reverse<u32>, std::cmp::Reverse<i8>), Vec<Partial>> = BTreeMap::new();
    for p in partials {
        groups.entry((std::cmp::Reverse(p.two_l), std::cmp::Reverse(p.parity))).or_default().push(p);
    }

    let mut blocks = Vec::new();
    for ((_, _), members) in groups {
        let tops: Vec<&RealVec> = members.iter().map(|p| &p.rows[0]).collect();
        let coeffs = gram_schmidt(&tops);
        for (copy_index, t) in coeffs.iter().enumerate() {
            let first = &members[0];
            let mut basis = Vec::with_capacity(first.rows.len());
            for k in 0..first.rows.len() {
                let mut acc = RealVec::new();
                for (d, td) in t.iter().enumerate() {
                    if *td == 0.0 {
                        continue;
                    }
                    for (key, x) in &members[d].rows[k] {
                        *acc.entry(key.clone()).or_insert(0.0) += td * x;
                    }
                }
                basis.push(StateVector::from_real_terms(
                    space.clone(),
                    acc.into_iter().map(|(k, v)| (BasisLabel::new(k), v)),
                )?);
            }
            blocks.push(IrrepBlock { two_l: first.two_l, parity: first.parity, copy_index, basis });
        }
    }
    Ok(blocks)
}

/// Completes a highest-weight vector `|L, L⟩` into a block by normalized
/// lowering, `J₋|L,M⟩ = √((L+M)(L−M+1)) |L,M−1⟩`.
pub fn block_from_top(top: &StateVector, two_l: u32, parity: i8, copy_index: usize) -> Result<IrrepBlock> {
    let g = angular_momentum_generators::<f64>(top.space());
    let top = top.normalized()?;
    let l = f64::from(two_l) / 2.0;
    let j2 = g.jsquared.apply(&top)?.distance(&top.scale_real(l * (l + 1.0)))?;
    let jz = g.jz.apply(&top)?.distance(&top.scale_real(l))?;
    if j2 > 1e-9 || jz > 1e-9 || parity_eigenvalue(&top, 1e-9) != Some(parity) {
        return domain(format!("state is not a highest-weight vector with L = {l} and parity {parity}"));
    }
    let mut basis = vec![top];
    for k in 0..two_l {
        let m = l - f64::from(k);
        let coef = ((l + m) * (l - m + 1.0)).sqrt();
        let next = g.jminus.apply(basis.last().expect("nonempty"))?.scale_real(1.0 / coef);
        basis.push(next);
    }
    Ok(IrrepBlock { two_l, parity, copy_index, basis })
}

/// Multiplicities of one `L` in both parities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    #[serde(rename = "L_times_2")]
    pub two_l: u32,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceFlags {
    pub perfect_invariant_state_glove: bool,
    pub perfect_subspace_glove: bool,
}

/// Multiplicity table with the glove existence flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub dim: usize,
    /// Descending `L`.
    pub multiplicities: Vec<Multiplicity>,
    pub flags: ExistenceFlags,
}

impl ExistenceReport {
    pub fn multiplicity(&self, two_l: u32, parity: i8) -> usize {
        self.multiplicities
            .iter()
            .find(|m| m.two_l == two_l)
            .map(|m| if parity > 0 { m.plus } else { m.minus })
            .unwrap_or(0)
    }

    /// Values of `2L` carrying both parities.
    pub fn shared_two_l(&self) -> Vec<u32> {
        self.multiplicities.iter().filter(|m| m.plus > 0 && m.minus > 0).map(|m| m.two_l).collect()
    }
}

/// Exact multiplicities from weight counting: the number of `(L, p)` copies
/// equals `N_p(M = L) − N_p(M = L + 1)`.
pub fn glove_existence(space: &SpaceSpec) -> Result<ExistenceReport> {
    check_cap(space, DEFAULT_DIMENSION_CAP)?;
    let mut counts: HashMap<(i32, i8), usize> = HashMap::new();
    let labels = space.labels();
    for l in &labels {
        *counts.entry((l.total_two_m(), l.parity())).or_default() += 1;
    }
    let count = |tm: i32, p: i8| counts.get(&(tm, p)).copied().unwrap_or(0);
    let top = labels.iter().map(BasisLabel::total_two_m).max().unwrap_or(0);
    let mut multiplicities = Vec::new();
    let mut tm = top;
    while tm >= 0 {
        let plus = count(tm, 1) - count(tm + 2, 1);
        let minus = count(tm, -1) - count(tm + 2, -1);
        if plus + minus > 0 {
            multiplicities.push(Multiplicity { two_l: tm as u32, plus, minus });
        }
        tm -= 2;
    }
    let flags = ExistenceFlags {
        perfect_invariant_state_glove: multiplicities.iter().any(|m| m.two_l == 0 && m.plus > 0 && m.minus > 0),
        perfect_subspace_glove: multiplicities.iter().any(|m| m.plus > 0 && m.minus > 0),
    };
    Ok(ExistenceReport { dim: labels.len(), multiplicities, flags })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRow {
    #[serde(rename = "L_times_2")]
    pub two_l: u32,
    pub parity: i8,
    pub copy: usize,
}

/// JSON block table: `{"space", "dim", "blocks", "multiplicities", "flags"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockTable {
    pub space: String,
    pub dim: usize,
    pub blocks: Vec<BlockRow>,
    pub multiplicities: Vec<Multiplicity>,
    pub flags: ExistenceFlags,
}

pub fn block_table(space: &SpaceSpec) -> Result<BlockTable> {
    let blocks = decompose(space)?;
    let report = glove_existence(space)?;
    Ok(BlockTable {
        space: space.to_string(),
        dim: report.dim,
        blocks: blocks.iter().map(|b| BlockRow { two_l: b.two_l, parity: b.parity, copy: b.copy_index }).collect(),
        multiplicities: report.multiplicities,
        flags: report.flags,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GloveKind {
    StatePair,
    ProjectorPair,
}

/// Two parity-swapped states or subspaces.
///
/// A state pair keeps one vector per side; a projector pair keeps an
/// orthonormal basis of each subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct GlovePair {
    pub kind: GloveKind,
    /// `2L` when both sides carry a definite total angular momentum.
    pub two_l: Option<u32>,
    pub plus_basis: Vec<StateVector>,
    pub minus_basis: Vec<StateVector>,
    pub source: String,
}

impl GlovePair {
    pub fn state_pair(plus: StateVector, minus: StateVector, two_l: Option<u32>, source: impl Into<String>) -> Self {
        GlovePair {
            kind: GloveKind::StatePair,
            two_l,
            plus_basis: vec![plus],
            minus_basis: vec![minus],
            source: source.into(),
        }
    }

    pub fn projector_pair(
        plus_basis: Vec<StateVector>,
        minus_basis: Vec<StateVector>,
        two_l: Option<u32>,
        source: impl Into<String>,
    ) -> Self {
        GlovePair { kind: GloveKind::ProjectorPair, two_l, plus_basis, minus_basis, source: source.into() }
    }

    pub fn space(&self) -> &SpaceSpec {
        self.plus_basis[0].space()
    }

    /// First `+` basis vector: the state itself, or `|G⁺_{L,L}⟩`.
    pub fn plus(&self) -> &StateVector {
        &self.plus_basis[0]
    }

    pub fn minus(&self) -> &StateVector {
        &self.minus_basis[0]
    }

    pub fn plus_projector(&self) -> LinearOperator {
        LinearOperator::projector(self.space().clone(), &self.plus_basis).expect("pair vectors share a space")
    }

    pub fn minus_projector(&self) -> LinearOperator {
        LinearOperator::projector(self.space().clone(), &self.minus_basis).expect("pair vectors share a space")
    }
}

/// Builds `(ψ₊ ± ψ₋)/√2` from blocks of equal `L` and opposite parity.
pub fn construct_glove_pair(block_plus: &IrrepBlock, block_minus: &IrrepBlock) -> Result<GlovePair> {
    if block_plus.parity != 1 || block_minus.parity != -1 {
        return domain(format!(
            "glove pair needs parities (+1, -1), got ({}, {})",
            block_plus.parity, block_minus.parity
        ));
    }
    if block_plus.two_l != block_minus.two_l {
        return domain(format!("glove pair needs equal L, got {} and {}", block_plus.l(), block_minus.l()));
    }
    if block_plus.space() != block_minus.space() {
        return Err(GloveError::Dimension("blocks live in different spaces".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = Vec::with_capacity(block_plus.dim());
    let mut minus = Vec::with_capacity(block_plus.dim());
    for (a, b) in block_plus.basis.iter().zip(&block_minus.basis) {
        plus.push(a.try_add(b)?.scale_real(s));
        minus.push(a.try_sub(b)?.scale_real(s));
    }
    let source =
        format!("L = {}, copies {}(+) and {}(-)", block_plus.l(), block_plus.copy_index, block_minus.copy_index);
    let two_l = Some(block_plus.two_l);
    Ok(if block_plus.two_l == 0 {
        GlovePair::state_pair(plus.remove(0), minus.remove(0), two_l, source)
    } else {
        GlovePair::projector_pair(plus, minus, two_l, source)
    })
}

/// `γ⁺ (Π⁺ − Π⁻)`.
pub fn chirality_operator(pair: &GlovePair, gamma_plus: f64) -> Result<LinearOperator> {
    if gamma_plus == 0.0 || !gamma_plus.is_finite() {
        return domain(format!("gamma_plus must be finite and nonzero, got {gamma_plus}"));
    }
    Ok(pair.plus_projector().try_sub(&pair.minus_projector())?.scale_real(gamma_plus))
}

/// Outcome of one named invariant check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

/// Tolerances for [`verify_pair`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckTolerances {
    pub state: f64,
    pub operator: f64,
    pub rotation: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        CheckTolerances { state: COMPARE_TOL, operator: OPERATOR_TOL, rotation: 1e-9 }
    }
}

/// Orthogonality, parity swap and rotation invariance of a pair.
pub fn verify_pair(pair: &GlovePair, rotations: &[Euler], tol: CheckTolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut overlap: f64 = 0.0;
    for a in &pair.plus_basis {
        for b in &pair.minus_basis {
            overlap = overlap.max(b.inner(a)?.norm());
        }
    }
    checks.push(Check::at_most("orthogonality", overlap, tol.state));
    match pair.kind {
        GloveKind::StatePair => {
            let (plus, minus) = (pair.plus(), pair.minus());
            checks.push(Check::at_most("parity_swap_plus", apply_parity(plus).distance(minus)?, tol.state));
            checks.push(Check::at_most("parity_swap_minus", apply_parity(minus).distance(plus)?, tol.state));
            let mut worst: f64 = 0.0;
            for r in rotations {
                worst =
                    worst.max(apply_rotation(plus, r).distance(plus)?).max(apply_rotation(minus, r).distance(minus)?);
            }
            checks.push(Check::at_most("rotation_invariance", worst, tol.rotation));
        }
        GloveKind::ProjectorPair => {
            let pp = pair.plus_projector();
            let pm = pair.minus_projector();
            let idem = pp.compose(&pp)?.distance(&pp)?.max(pm.compose(&pm)?.distance(&pm)?);
            checks.push(Check::at_most("idempotent", idem, tol.operator));
            let herm = pp.distance(&pp.adjoint())?.max(pm.distance(&pm.adjoint())?);
            checks.push(Check::at_most("hermitian", herm, tol.operator));
            checks.push(Check::at_most("mutually_orthogonal", pp.compose(&pm)?.frobenius_norm(), tol.operator));
            checks.push(Check::at_most("parity_swap", conjugate_by_parity(&pp).distance(&pm)?, tol.operator));
            let mut worst: f64 = 0.0;
            for r in rotations {
                worst = worst.max(rotate_operator(&pp, r).distance(&pp)?).max(rotate_operator(&pm, r).distance(&pm)?);
            }
            checks.push(Check::at_most("rotation_commutation", worst, tol.rotation));
        }
    }
    Ok(checks)
}

/// `true` when `psi` is fixed by `Π` up to `tol`.
pub(crate) fn in_support(projector: &LinearOperator, psi: &StateVector, tol: f64) -> Result<bool> {
    Ok(projector.apply(psi)?.distance(psi)? <= tol)
}
