//! JSON documents for spaces, basis labels, states and sparse operators.
//!
//! ```json
//! {"space": {"factors": [{"kind": "orbital", "l_max": 1}, {"kind": "spin_half"}],
//!            "exchange_groups": []},
//!  "terms": [{"label": [{"l": 1, "m": 0}, {"ms": 1}], "re": 0.5, "im": 0.0}]}
//! ```
//!
//! Readers reject unknown fields.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::space::{BasisLabel, FactorSpec, FactorState, SpaceSpec};
use crate::error::{GloveError, Result};
use crate::{LinearOperator, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FactorDoc {
    Orbital { l_max: u32 },
    SpinHalf {},
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    factors: Vec<FactorDoc>,
    #[serde(default)]
    exchange_groups: Vec<Vec<usize>>,
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceDoc {
            factors: self
                .factors()
                .iter()
                .map(|f| match *f {
                    FactorSpec::Orbital { l_max } => FactorDoc::Orbital { l_max },
                    FactorSpec::SpinHalf => FactorDoc::SpinHalf {},
                })
                .collect(),
            exchange_groups: self.exchange_groups().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpaceDoc::deserialize(d)?;
        let factors = doc
            .factors
            .into_iter()
            .map(|f| match f {
                FactorDoc::Orbital { l_max } => FactorSpec::Orbital { l_max },
                FactorDoc::SpinHalf {} => FactorSpec::SpinHalf,
            })
            .collect();
        SpaceSpec::new(factors, doc.exchange_groups).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitalEntry {
    l: u32,
    m: i32,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinEntry {
    ms: i32,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum LabelEntry {
    Orbital(OrbitalEntry),
    Spin(SpinEntry),
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<LabelEntry> = self
            .iter()
            .map(|f| {
                if f.two_j % 2 == 1 {
                    LabelEntry::Spin(SpinEntry { ms: f.two_m })
                } else {
                    LabelEntry::Orbital(OrbitalEntry { l: f.two_j / 2, m: f.two_m / 2 })
                }
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<LabelEntry>::deserialize(d)?;
        let mut states = Vec::with_capacity(entries.len());
        for e in entries {
            states.push(match e {
                LabelEntry::Orbital(o) => FactorState::orbital(o.l, o.m),
                LabelEntry::Spin(sp) if sp.ms == 1 || sp.ms == -1 => FactorState::spin(sp.ms),
                LabelEntry::Spin(sp) => {
                    return Err(serde::de::Error::custom(format!("spin entry ms must be ±1, got {}", sp.ms)))
                }
            });
        }
        Ok(BasisLabel::new(states))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub label: BasisLabel,
    pub re: f64,
    pub im: f64,
}

/// Wire form of a [`StateVector`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub space: SpaceSpec,
    pub terms: Vec<TermDoc>,
}

impl From<&StateVector> for StateDoc {
    fn from(psi: &StateVector) -> Self {
        StateDoc {
            space: psi.space().clone(),
            terms: psi.iter().map(|(l, a)| TermDoc { label: l.clone(), re: a.re, im: a.im }).collect(),
        }
    }
}

impl TryFrom<StateDoc> for StateVector {
    type Error = GloveError;

    fn try_from(doc: StateDoc) -> Result<Self> {
        StateVector::from_terms(
            doc.space,
            doc.terms.into_iter().map(|t| (t.label, num_complex::Complex64::new(t.re, t.im))),
        )
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        StateDoc::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

pub fn state_to_json(psi: &StateVector) -> String {
    serde_json::to_string(psi).expect("state serializes")
}

pub fn state_from_json(s: &str) -> Result<StateVector> {
    let doc: StateDoc = serde_json::from_str(s)?;
    doc.try_into()
}

/// One nonzero operator entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triplet {
    pub row_label: BasisLabel,
    pub col_label: BasisLabel,
    pub re: f64,
    pub im: f64,
}

pub fn operator_triplets(op: &LinearOperator) -> Vec<Triplet> {
    op.entries().map(|(r, c, v)| Triplet { row_label: r.clone(), col_label: c.clone(), re: v.re, im: v.im }).collect()
}

pub fn operator_from_triplets(space: &SpaceSpec, triplets: &[Triplet]) -> Result<LinearOperator> {
    LinearOperator::from_entries(
        space.clone(),
        triplets.iter().map(|t| (t.row_label.clone(), t.col_label.clone(), num_complex::Complex64::new(t.re, t.im))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_documented_schema() {
        let doc = r#"{"space":{"factors":[{"kind":"orbital","l_max":1},{"kind":"spin_half"}],"exchange_groups":[]},
                      "terms":[{"label":[{"l":1,"m":0},{"ms":1}],"re":0.6,"im":0.0},
                               {"label":[{"l":0,"m":0},{"ms":-1}],"re":0.0,"im":0.8}]}"#;
        let psi = state_from_json(doc).unwrap();
        assert_eq!(psi.len(), 2);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        let back = state_from_json(&state_to_json(&psi)).unwrap();
        assert_eq!(back, psi);
    }

    #[test]
    fn rejects_unknown_fields() {
        let extra_top = r#"{"space":{"factors":[{"kind":"spin_half"}]},"terms":[],"norm":1}"#;
        assert!(state_from_json(extra_top).is_err());
        let extra_term =
            r#"{"space":{"factors":[{"kind":"spin_half"}]},"terms":[{"label":[{"ms":1}],"re":1,"im":0,"x":2}]}"#;
        assert!(state_from_json(extra_term).is_err());
        let extra_factor = r#"{"space":{"factors":[{"kind":"spin_half","l_max":3}]},"terms":[]}"#;
        assert!(state_from_json(extra_factor).is_err());
        let extra_label = r#"{"space":{"factors":[{"kind":"orbital","l_max":1}]},"terms":[{"label":[{"l":1,"m":0,"s":1}],"re":1,"im":0}]}"#;
        assert!(state_from_json(extra_label).is_err());
    }

    #[test]
    fn rejects_labels_outside_the_space() {
        let doc =
            r#"{"space":{"factors":[{"kind":"orbital","l_max":1}]},"terms":[{"label":[{"l":2,"m":0}],"re":1,"im":0}]}"#;
        assert!(state_from_json(doc).is_err());
        let doc = r#"{"space":{"factors":[{"kind":"spin_half"}]},"terms":[{"label":[{"ms":3}],"re":1,"im":0}]}"#;
        assert!(state_from_json(doc).is_err());
    }
}
