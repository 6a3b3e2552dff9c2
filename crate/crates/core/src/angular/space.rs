//! Tensor-product Hilbert spaces and their product basis labels.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{domain, GloveError, Result};

/// One tensor factor of a [`SpaceSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorSpec {
    /// Orbital angular momentum with all `l = 0..=l_max` present.
    Orbital {
        l_max: u32,
    },
    SpinHalf,
}

impl FactorSpec {
    pub fn dim(&self) -> usize {
        match *self {
            FactorSpec::Orbital { l_max } => ((l_max + 1) * (l_max + 1)) as usize,
            FactorSpec::SpinHalf => 2,
        }
    }

    /// Factor basis in ascending `(2j, 2m)` order.
    pub fn labels(&self) -> Vec<FactorState> {
        match *self {
            FactorSpec::Orbital { l_max } => {
                (0..=l_max as i32).flat_map(|l| (-l..=l).map(move |m| FactorState::orbital(l as u32, m))).collect()
            }
            FactorSpec::SpinHalf => vec![FactorState::spin(-1), FactorState::spin(1)],
        }
    }

    /// Irreducible `(2j, parity)` sectors of the factor, ascending in `j`.
    pub fn irreps(&self) -> Vec<(u32, i8)> {
        match *self {
            FactorSpec::Orbital { l_max } => (0..=l_max).map(|l| (2 * l, if l % 2 == 0 { 1 } else { -1 })).collect(),
            FactorSpec::SpinHalf => vec![(1, 1)],
        }
    }

    pub fn admits(&self, s: FactorState) -> bool {
        let in_multiplet = s.two_m.unsigned_abs() <= s.two_j && (s.two_j as i32 - s.two_m) % 2 == 0;
        match *self {
            FactorSpec::Orbital { l_max } => in_multiplet && s.two_j.is_multiple_of(2) && s.two_j <= 2 * l_max,
            FactorSpec::SpinHalf => in_multiplet && s.two_j == 1,
        }
    }

    pub fn is_orbital(&self) -> bool {
        matches!(self, FactorSpec::Orbital { .. })
    }
}

/// Single-factor basis state `|j m⟩` with both numbers stored doubled.
///
/// For an orbital factor `two_j = 2l`; for a spin-1/2 factor `two_j = 1` and
/// `two_m = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorState {
    pub two_j: u32,
    pub two_m: i32,
}

impl FactorState {
    /// `Y_{lm}`.
    pub const fn orbital(l: u32, m: i32) -> Self {
        FactorState { two_j: 2 * l, two_m: 2 * m }
    }

    /// Spin-1/2 state with doubled projection `ms = ±1`.
    pub const fn spin(ms: i32) -> Self {
        FactorState { two_j: 1, two_m: ms }
    }

    pub const fn up() -> Self {
        Self::spin(1)
    }

    pub const fn down() -> Self {
        Self::spin(-1)
    }
}

/// Product basis label, one [`FactorState`] per factor of the owning space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(Vec<FactorState>);

impl BasisLabel {
    pub fn new(states: Vec<FactorState>) -> Self {
        BasisLabel(states)
    }

    pub fn into_inner(self) -> Vec<FactorState> {
        self.0
    }

    /// Copy with factor `idx` replaced.
    pub fn with(&self, idx: usize, s: FactorState) -> Self {
        let mut v = self.0.clone();
        v[idx] = s;
        BasisLabel(v)
    }

    pub fn total_two_m(&self) -> i32 {
        self.0.iter().map(|s| s.two_m).sum()
    }

    /// Parity `(-1)^{Σ l}` over the orbital entries; spin entries carry `two_j = 1`
    /// and are skipped.
    pub fn parity(&self) -> i8 {
        let lsum: u32 = self.0.iter().filter(|s| s.two_j % 2 == 0).map(|s| s.two_j / 2).sum();
        if lsum.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl Deref for BasisLabel {
    type Target = [FactorState];
    fn deref(&self) -> &[FactorState] {
        &self.0
    }
}

impl From<Vec<FactorState>> for BasisLabel {
    fn from(v: Vec<FactorState>) -> Self {
        BasisLabel(v)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            if s.two_j == 1 {
                f.write_str(if s.two_m > 0 { "↑" } else { "↓" })?;
            } else {
                write!(f, "Y({},{})", s.two_j / 2, s.two_m / 2)?;
            }
        }
        Ok(())
    }
}

/// Ordered list of tensor factors plus the groups of factors declared identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    factors: Vec<FactorSpec>,
    exchange_groups: Vec<Vec<usize>>,
}

impl SpaceSpec {
    pub fn new(factors: Vec<FactorSpec>, exchange_groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; factors.len()];
        for group in &exchange_groups {
            if group.len() < 2 {
                return domain("exchange group needs at least two factors");
            }
            for &i in group {
                if i >= factors.len() {
                    return domain(format!("exchange group index {i} out of range"));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return domain(format!("factor {i} appears in more than one exchange group"));
                }
            }
            let first = factors[group[0]];
            if !first.is_orbital() || group.iter().any(|&i| factors[i] != first) {
                return domain("exchange groups must contain orbital factors with equal l_max");
            }
        }
        Ok(SpaceSpec { factors, exchange_groups })
    }

    /// Space without exchange groups.
    pub fn product(factors: Vec<FactorSpec>) -> Self {
        SpaceSpec { factors, exchange_groups: Vec::new() }
    }

    pub fn orbitals(l_max: u32, count: usize) -> Self {
        Self::product(vec![FactorSpec::Orbital { l_max }; count])
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn exchange_groups(&self) -> &[Vec<usize>] {
        &self.exchange_groups
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(FactorSpec::dim).product()
    }

    pub fn num_orbitals(&self) -> usize {
        self.factors.iter().filter(|f| f.is_orbital()).count()
    }

    /// First `k` factors, without exchange groups.
    pub fn prefix(&self, k: usize) -> SpaceSpec {
        Self::product(self.factors[..k].to_vec())
    }

    pub fn validate_label(&self, label: &BasisLabel) -> Result<()> {
        if label.len() != self.factors.len() {
            return Err(GloveError::Dimension(format!(
                "label has {} entries, space has {} factors",
                label.len(),
                self.factors.len()
            )));
        }
        for (i, (f, s)) in self.factors.iter().zip(label.iter()).enumerate() {
            if !f.admits(*s) {
                return domain(format!("label entry {i} ({s:?}) is not a basis state of {f:?}"));
            }
        }
        Ok(())
    }

    /// All product labels in lexicographic order (the Kronecker order of the
    /// factor bases).
    pub fn labels(&self) -> Vec<BasisLabel> {
        let mut out: Vec<Vec<FactorState>> = vec![Vec::with_capacity(self.factors.len())];
        for f in &self.factors {
            let fl = f.labels();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    fl.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(*s);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(BasisLabel).collect()
    }

    pub fn basis(&self) -> Basis {
        Basis::new(self)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let tok = match self.factors[i] {
                FactorSpec::Orbital { l_max } => format!("orb{l_max}"),
                FactorSpec::SpinHalf => "spin".to_string(),
            };
            match self.exchange_groups.iter().find(|g| g[0] == i) {
                Some(g) if g.iter().enumerate().all(|(k, &x)| x == i + k) => {
                    tokens.push(format!("{tok}*{}", g.len()));
                    i += g.len();
                }
                _ => {
                    tokens.push(tok);
                    i += 1;
                }
            }
        }
        f.write_str(&tokens.join(","))
    }
}

/// Parses the one-line space notation: comma-separated `orbN` and `spin`
/// tokens, where `tok*k` repeats a factor `k` times as one exchange group.
impl FromStr for SpaceSpec {
    type Err = GloveError;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut groups = Vec::new();
        for raw in s.split(',') {
            let tok = raw.trim();
            let (base, count) = match tok.split_once('*') {
                Some((b, c)) => {
                    let n: usize =
                        c.trim().parse().map_err(|_| GloveError::Domain(format!("bad repeat count in {tok:?}")))?;
                    if n == 0 {
                        return domain(format!("zero repeat count in {tok:?}"));
                    }
                    (b.trim(), Some(n))
                }
                None => (tok, None),
            };
            let factor = if base == "spin" {
                FactorSpec::SpinHalf
            } else if let Some(n) = base.strip_prefix("orb") {
                let l_max = n.parse().map_err(|_| GloveError::Domain(format!("bad orbital cutoff in {tok:?}")))?;
                FactorSpec::Orbital { l_max }
            } else {
                return domain(format!("unknown space token {tok:?}"));
            };
            let start = factors.len();
            let n = count.unwrap_or(1);
            factors.extend(std::iter::repeat_n(factor, n));
            if count.is_some() && n >= 2 {
                groups.push((start..start + n).collect());
            }
        }
        SpaceSpec::new(factors, groups)
    }
}

/// Dense indexing of the product basis.
#[derive(Clone, Debug)]
pub struct Basis {
    labels: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
}

impl Basis {
    pub fn new(space: &SpaceSpec) -> Self {
        let labels = space.labels();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Basis { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(FactorSpec::Orbital { l_max: 0 }.dim(), 1);
        assert_eq!(FactorSpec::Orbital { l_max: 3 }.dim(), 16);
        assert_eq!(FactorSpec::SpinHalf.dim(), 2);
        let s: SpaceSpec = "spin,spin,orb1".parse().unwrap();
        assert_eq!(s.dim(), 16);
        assert_eq!(s.labels().len(), 16);
    }

    #[test]
    fn labels_are_sorted() {
        let s = SpaceSpec::orbitals(1, 2);
        let labels = s.labels();
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mini_language() {
        let s: SpaceSpec = "orb1*3".parse().unwrap();
        assert_eq!(s.factors().len(), 3);
        assert_eq!(s.exchange_groups(), &[vec![0, 1, 2]]);
        assert_eq!(s.to_string(), "orb1*3");

        let s: SpaceSpec = "spin, orb2".parse().unwrap();
        assert_eq!(s.to_string(), "spin,orb2");
        assert!("orbx".parse::<SpaceSpec>().is_err());
        assert!("spin*2".parse::<SpaceSpec>().is_err());
        assert!("".parse::<SpaceSpec>().is_err());
    }

    #[test]
    fn heterogeneous_group_rejected() {
        let f = vec![FactorSpec::Orbital { l_max: 1 }, FactorSpec::Orbital { l_max: 2 }];
        assert!(SpaceSpec::new(f, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn label_validation() {
        let s: SpaceSpec = "spin,orb1".parse().unwrap();
        let ok = BasisLabel::new(vec![FactorState::up(), FactorState::orbital(1, -1)]);
        assert!(s.validate_label(&ok).is_ok());
        let bad = BasisLabel::new(vec![FactorState::up(), FactorState::orbital(2, 0)]);
        assert!(s.validate_label(&bad).is_err());
        let short = BasisLabel::new(vec![FactorState::up()]);
        assert!(matches!(s.validate_label(&short), Err(GloveError::Dimension(_))));
    }
}
