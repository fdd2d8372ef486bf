//! JSON interchange format for transducers.
//!
//! ```json
//! {
//!   "states": ["s0", "s1"],
//!   "initial": "s0",
//!   "transitions": {
//!     "s0": { "0": { "out": "", "to": "s1" }, "1": { "out": "11", "to": "s0" } },
//!     "s1": { "0": { "out": "0", "to": "s0" }, "1": { "out": "10", "to": "s0" } }
//!   }
//! }
//! ```

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use ratgroup_core::transducer::DraftEdge;
use ratgroup_core::{MachineDraft, Transducer, Violation, Word};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid machine: {0}")]
    Semantic(String),
}

/// A `0`/`1` string.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Word);

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Bits;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a string of '0' and '1'")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Bits, E> {
                Word::parse(v).map(Bits).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

/// Transition keys are the bit characters `"0"` and `"1"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct BitKey(bool);

impl Serialize for BitKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(if self.0 { "1" } else { "0" })
    }
}

impl<'de> Deserialize<'de> for BitKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "0" => Ok(BitKey(false)),
            "1" => Ok(BitKey(true)),
            other => Err(de::Error::custom(format!(
                "transition key {other:?} is not a bit ('0' or '1')"
            ))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<Bits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    to: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineFile {
    states: Vec<String>,
    initial: String,
    transitions: IndexMap<String, IndexMap<BitKey, EdgeFile>>,
}

fn describe(v: &Violation, names: &[String]) -> String {
    let name = |i: &usize| names.get(*i).map(String::as_str).unwrap_or("?");
    let bit = |b: &bool| if *b { '1' } else { '0' };
    match v {
        Violation::NoStates => "empty state set".into(),
        Violation::InitialOutOfRange { .. } => "initial state is not listed in states".into(),
        Violation::MissingTransition { state, bit: b } => {
            format!(
                "missing transition for state '{}' on {}",
                name(state),
                bit(b)
            )
        }
        Violation::MissingOutput { state, bit: b } => {
            format!("missing output for state '{}' on {}", name(state), bit(b))
        }
        Violation::DanglingTarget { state, bit: b, .. } => {
            format!(
                "transition of '{}' on {} targets an unknown state",
                name(state),
                bit(b)
            )
        }
    }
}

/// Parses a machine, returning it with its state names (index-aligned).
pub fn parse_named(text: &str) -> Result<(Transducer, Vec<String>), FormatError> {
    let file: MachineFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.states.is_empty() {
        return Err(FormatError::Semantic("empty state set".into()));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, s) in file.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            return Err(FormatError::Semantic(format!("duplicate state name '{s}'")));
        }
    }
    let initial = *index.get(file.initial.as_str()).ok_or_else(|| {
        FormatError::Semantic(format!(
            "initial state '{}' is not listed in states",
            file.initial
        ))
    })?;
    let mut draft = MachineDraft::new(file.states.len(), initial);
    for (state, edges) in &file.transitions {
        let &i = index.get(state.as_str()).ok_or_else(|| {
            FormatError::Semantic(format!("transitions given for unknown state '{state}'"))
        })?;
        for (BitKey(bit), e) in edges {
            let to = match &e.to {
                Some(name) => Some(*index.get(name.as_str()).ok_or_else(|| {
                    FormatError::Semantic(format!(
                        "transition of '{state}' on {} targets unknown state '{name}'",
                        *bit as u8
                    ))
                })?),
                None => None,
            };
            draft.edges[i][*bit as usize] = DraftEdge {
                to,
                out: e.out.as_ref().map(|b| b.0.clone()),
            };
        }
    }
    let violations = draft.validate();
    if let Some(v) = violations.first() {
        return Err(FormatError::Semantic(describe(v, &file.states)));
    }
    let t = draft.build().expect("validated");
    Ok((t, file.states))
}

pub fn parse(text: &str) -> Result<Transducer, FormatError> {
    parse_named(text).map(|(t, _)| t)
}

/// Default state names `s0, s1, …`.
pub fn default_names(t: &Transducer) -> Vec<String> {
    t.states().map(|s| s.to_string()).collect()
}

pub fn serialize_named(t: &Transducer, names: &[String]) -> String {
    let transitions = t
        .states()
        .map(|s| {
            let edges = [false, true]
                .into_iter()
                .map(|b| {
                    let e = t.edge(s, b);
                    (
                        BitKey(b),
                        EdgeFile {
                            out: Some(Bits(e.out.clone())),
                            to: Some(names[e.to.index()].clone()),
                        },
                    )
                })
                .collect();
            (names[s.index()].clone(), edges)
        })
        .collect();
    let file = MachineFile {
        states: names.to_vec(),
        initial: names[t.initial().index()].clone(),
        transitions,
    };
    serde_json::to_string_pretty(&file).expect("machine serializes")
}

/// Pretty JSON with states named `s0, s1, …` in index order.
pub fn serialize(t: &Transducer) -> String {
    serialize_named(t, &default_names(t))
}

/// The machine as a JSON value, for embedding in larger reports.
pub fn to_json_value(t: &Transducer) -> serde_json::Value {
    serde_json::from_str(&serialize(t)).expect("serialized machine is JSON")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_STATE: &str = r#"{
  "states": ["s0", "s1"],
  "initial": "s0",
  "transitions": {
    "s0": { "0": { "out": "", "to": "s1" }, "1": { "out": "11", "to": "s0" } },
    "s1": { "0": { "out": "0", "to": "s0" }, "1": { "out": "10", "to": "s0" } }
  }
}"#;

    #[test]
    fn parse_two_state() {
        let (t, names) = parse_named(TWO_STATE).unwrap();
        assert_eq!(names, ["s0", "s1"]);
        assert_eq!(t.num_states(), 2);
        assert_eq!(t.eval_prefix(&Word::parse("01").unwrap()).to_string(), "10");
    }

    #[test]
    fn round_trip() {
        let t = parse(TWO_STATE).unwrap();
        let text = serialize(&t);
        assert!(text.contains("\"out\": \"\""));
        let back = parse(&text).unwrap();
        assert!(t.is_isomorphic(&back));
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn empty_states_is_semantic_error() {
        let err = parse(r#"{"states": [], "initial": "a", "transitions": {}}"#).unwrap_err();
        assert!(matches!(err, FormatError::Semantic(m) if m.contains("empty state set")));
    }

    #[test]
    fn bad_symbol_is_syntax_error() {
        let text = TWO_STATE.replace("\"11\"", "\"12\"");
        match parse(&text).unwrap_err() {
            FormatError::Syntax {
                line,
                column,
                message,
            } => {
                assert_eq!(line, 5);
                assert!(column > 0);
                assert!(message.contains("'2'"), "{message}");
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn malformed_json_is_syntax_error() {
        assert!(matches!(
            parse("{\"states\": [").unwrap_err(),
            FormatError::Syntax { .. }
        ));
    }

    #[test]
    fn missing_transition_is_semantic_error() {
        let text = TWO_STATE.replace(r#", "1": { "out": "10", "to": "s0" }"#, "");
        let err = parse(&text).unwrap_err();
        assert!(
            matches!(&err, FormatError::Semantic(m) if m.contains("missing transition for state 's1' on 1")),
            "{err}"
        );
    }

    #[test]
    fn dangling_target_is_semantic_error() {
        let text = TWO_STATE.replace(r#""to": "s1""#, r#""to": "zz""#);
        let err = parse(&text).unwrap_err();
        assert!(
            matches!(&err, FormatError::Semantic(m) if m.contains("'zz'")),
            "{err}"
        );
    }
}
