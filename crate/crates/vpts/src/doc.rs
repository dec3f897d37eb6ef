//! The JSON document format for models, with a validating loader and a
//! canonicalizing serializer.
//!
//! A document is one JSON object:
//!
//! ```json
//! {
//!   "kind": "iovpts",
//!   "alphabet": {
//!     "calls": ["a"], "returns": ["b", "x"], "simples": [],
//!     "inputs": ["a", "b"], "outputs": ["x"]
//!   },
//!   "states": ["s0", "s1"],
//!   "initial": ["s0"],
//!   "stack_symbols": ["A"],
//!   "transitions": [
//!     {"from": "s0", "label": "a", "stack": "A", "to": "s0"},
//!     {"from": "s0", "label": "b", "stack": "_bot", "to": "s1"},
//!     {"from": "s1", "label": null, "stack": "_dia", "to": "s0"}
//!   ]
//! }
//! ```
//!
//! `kind` is `vpa`, `vpts` or `iovpts`. The transition's stack discipline
//! follows its label's class: call labels push the named symbol, return
//! labels pop it (`_bot` pops on the empty stack), simple labels carry the
//! placeholder `_dia`. A `null` label is an `ε`-move on automata and an
//! internal `ς`-move on transition systems. `finals` is allowed on automata
//! only; `inputs`/`outputs` are required exactly for `iovpts` documents.
//! Saving sorts every array and all object keys, so saved documents are
//! byte-stable.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alphabet::{PushdownAlphabet, SymbolKind, BOTTOM, PLACEHOLDER};
use crate::error::{Error, Result};
use crate::iovpts::Iovpts;
use crate::model::{Action, Machine, Transition, Vpa, Vpts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Vpa,
    Vpts,
    Iovpts,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AlphabetDoc {
    pub calls: Vec<String>,
    pub returns: Vec<String>,
    pub simples: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub label: Option<String>,
    pub stack: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub kind: ModelKind,
    pub alphabet: AlphabetDoc,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub stack_symbols: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
    pub transitions: Vec<TransitionDoc>,
}

/// A loaded model of any kind.
#[derive(Debug, Clone)]
pub enum Model {
    Vpa(Vpa),
    Vpts(Vpts),
    Iovpts(Iovpts),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Vpa(_) => ModelKind::Vpa,
            Model::Vpts(_) => ModelKind::Vpts,
            Model::Iovpts(_) => ModelKind::Iovpts,
        }
    }

    pub fn as_vpa(&self) -> Result<&Vpa> {
        match self {
            Model::Vpa(v) => Ok(v),
            _ => Err(Error::Usage(
                "this operation needs a `vpa` document".to_string(),
            )),
        }
    }

    /// The underlying transition system of a `vpts` or `iovpts` document.
    pub fn as_vpts(&self) -> Result<&Vpts> {
        match self {
            Model::Vpts(v) => Ok(v),
            Model::Iovpts(v) => Ok(v.underlying()),
            Model::Vpa(_) => Err(Error::Usage(
                "this operation needs a `vpts` or `iovpts` document".to_string(),
            )),
        }
    }

    pub fn as_iovpts(&self) -> Result<&Iovpts> {
        match self {
            Model::Iovpts(v) => Ok(v),
            _ => Err(Error::Usage(
                "this operation needs an `iovpts` document".to_string(),
            )),
        }
    }

    pub fn states_len(&self) -> usize {
        match self {
            Model::Vpa(v) => v.states().len(),
            Model::Vpts(v) => v.states().len(),
            Model::Iovpts(v) => v.underlying().states().len(),
        }
    }

    pub fn transitions_len(&self) -> usize {
        match self {
            Model::Vpa(v) => v.transitions().len(),
            Model::Vpts(v) => v.transitions().len(),
            Model::Iovpts(v) => v.underlying().transitions().len(),
        }
    }
}

/// A model plus loader diagnostics (currently: pruned unreachable states).
#[derive(Debug, Clone)]
pub struct Loaded {
    pub model: Model,
    pub warnings: Vec<String>,
}

fn unique(items: &[String], what: &str) -> Result<BTreeSet<String>> {
    let set: BTreeSet<String> = items.iter().cloned().collect();
    if set.len() != items.len() {
        return Err(Error::Schema(format!("duplicate {what} identifier")));
    }
    Ok(set)
}

fn doc_transition(
    doc: &TransitionDoc,
    alphabet: &PushdownAlphabet,
    is_vpa: bool,
) -> Result<Transition> {
    let action = match &doc.label {
        None => {
            if doc.stack != PLACEHOLDER {
                return Err(Error::Schema(format!(
                    "{} transition {} -> {} must carry the placeholder stack `{PLACEHOLDER}`",
                    if is_vpa { "an epsilon" } else { "an internal" },
                    doc.from,
                    doc.to
                )));
            }
            Action::Internal
        }
        Some(label) => match alphabet.kind_of(label) {
            Some(SymbolKind::Call) => {
                if doc.stack == PLACEHOLDER || doc.stack == BOTTOM {
                    return Err(Error::Partition(format!(
                        "push transition on `{label}` must name a stack symbol"
                    )));
                }
                Action::Push {
                    label: label.clone(),
                    symbol: doc.stack.clone(),
                }
            }
            Some(SymbolKind::Return) => Action::Pop {
                label: label.clone(),
                symbol: if doc.stack == BOTTOM {
                    None
                } else if doc.stack == PLACEHOLDER {
                    return Err(Error::Partition(format!(
                        "pop transition on `{label}` must name a stack symbol or `{BOTTOM}`"
                    )));
                } else {
                    Some(doc.stack.clone())
                },
            },
            Some(SymbolKind::Simple) => {
                if doc.stack != PLACEHOLDER {
                    return Err(Error::Partition(format!(
                        "simple transition on `{label}` must carry the placeholder `{PLACEHOLDER}`"
                    )));
                }
                Action::Simple {
                    label: label.clone(),
                }
            }
            None => {
                return Err(Error::unknown("action symbol", label, "transition"));
            }
        },
    };
    Ok(Transition {
        from: doc.from.clone(),
        action,
        to: doc.to.clone(),
    })
}

/// Validate a parsed document and build the typed model. Transition systems
/// are normalized by pruning unreachable states, reported as warnings.
pub fn document_to_model(doc: &ModelDocument) -> Result<Loaded> {
    let alphabet = PushdownAlphabet::build(
        unique(&doc.alphabet.calls, "call symbol")?,
        unique(&doc.alphabet.returns, "return symbol")?,
        unique(&doc.alphabet.simples, "simple symbol")?,
        unique(&doc.alphabet.inputs, "input symbol")?,
        unique(&doc.alphabet.outputs, "output symbol")?,
    )?;
    match doc.kind {
        ModelKind::Vpa => {
            if alphabet.has_io_view() {
                return Err(Error::Schema(
                    "`vpa` documents carry no input/output view".to_string(),
                ));
            }
        }
        ModelKind::Vpts => {
            if alphabet.has_io_view() {
                return Err(Error::Schema(
                    "`vpts` documents carry no input/output view; use `iovpts`".to_string(),
                ));
            }
            if doc.finals.is_some() {
                return Err(Error::Schema(
                    "`finals` is only allowed on `vpa` documents".to_string(),
                ));
            }
        }
        ModelKind::Iovpts => {
            if !alphabet.has_io_view() && !alphabet.is_empty() {
                return Err(Error::Schema(
                    "`iovpts` documents need `inputs` and `outputs`".to_string(),
                ));
            }
            if doc.finals.is_some() {
                return Err(Error::Schema(
                    "`finals` is only allowed on `vpa` documents".to_string(),
                ));
            }
        }
    }
    let states = unique(&doc.states, "state")?;
    let initial = unique(&doc.initial, "initial state")?;
    let stack_symbols = unique(&doc.stack_symbols, "stack symbol")?;
    let is_vpa = doc.kind == ModelKind::Vpa;
    let transitions: BTreeSet<Transition> = doc
        .transitions
        .iter()
        .map(|t| doc_transition(t, &alphabet, is_vpa))
        .collect::<Result<_>>()?;

    match doc.kind {
        ModelKind::Vpa => {
            let finals = doc.finals.clone().unwrap_or_default();
            let vpa = Vpa::new(
                alphabet,
                states,
                initial,
                stack_symbols,
                transitions,
                unique(&finals, "final state")?,
            )?;
            Ok(Loaded {
                model: Model::Vpa(vpa),
                warnings: Vec::new(),
            })
        }
        ModelKind::Vpts | ModelKind::Iovpts => {
            let vpts = Vpts::new(alphabet, states, initial, stack_symbols, transitions)?;
            let (vpts, dead) = vpts.pruned();
            let warnings = if dead.is_empty() {
                Vec::new()
            } else {
                vec![format!(
                    "pruned unreachable states: {}",
                    dead.into_iter().collect::<Vec<_>>().join(", ")
                )]
            };
            let model = if doc.kind == ModelKind::Iovpts {
                Model::Iovpts(Iovpts::new(vpts)?)
            } else {
                Model::Vpts(vpts)
            };
            Ok(Loaded { model, warnings })
        }
    }
}

fn transition_to_doc(t: &Transition) -> TransitionDoc {
    let (label, stack) = match &t.action {
        Action::Push { label, symbol } => (Some(label.clone()), symbol.clone()),
        Action::Pop { label, symbol } => (
            Some(label.clone()),
            symbol.clone().unwrap_or_else(|| BOTTOM.to_string()),
        ),
        Action::Simple { label } => (Some(label.clone()), PLACEHOLDER.to_string()),
        Action::Internal => (None, PLACEHOLDER.to_string()),
    };
    TransitionDoc {
        from: t.from.clone(),
        label,
        stack,
        to: t.to.clone(),
    }
}

fn machine_doc<M: Machine>(m: &M, kind: ModelKind, finals: Option<&BTreeSet<String>>) -> ModelDocument {
    let alphabet = m.alphabet();
    let mut transitions: Vec<TransitionDoc> =
        m.transitions().iter().map(transition_to_doc).collect();
    transitions.sort();
    ModelDocument {
        kind,
        alphabet: AlphabetDoc {
            calls: alphabet.calls().iter().cloned().collect(),
            returns: alphabet.returns().iter().cloned().collect(),
            simples: alphabet.simples().iter().cloned().collect(),
            inputs: alphabet.inputs().iter().cloned().collect(),
            outputs: alphabet.outputs().iter().cloned().collect(),
        },
        states: m.states().iter().cloned().collect(),
        initial: m.initial_states().iter().cloned().collect(),
        stack_symbols: m.stack_symbols().iter().cloned().collect(),
        finals: finals.map(|f| f.iter().cloned().collect()),
        transitions,
    }
}

/// Convert a model back into its (canonically ordered) document.
pub fn model_to_document(model: &Model) -> ModelDocument {
    match model {
        Model::Vpa(v) => machine_doc(v, ModelKind::Vpa, Some(v.finals())),
        Model::Vpts(v) => machine_doc(v, ModelKind::Vpts, None),
        Model::Iovpts(v) => machine_doc(v.underlying(), ModelKind::Iovpts, None),
    }
}

/// Sort every array of a document in place (states, symbol sets, transitions).
pub fn canonicalize(doc: &mut ModelDocument) {
    doc.alphabet.calls.sort();
    doc.alphabet.returns.sort();
    doc.alphabet.simples.sort();
    doc.alphabet.inputs.sort();
    doc.alphabet.outputs.sort();
    doc.states.sort();
    doc.initial.sort();
    doc.stack_symbols.sort();
    if let Some(finals) = &mut doc.finals {
        finals.sort();
    }
    doc.transitions.sort();
}

/// Pretty JSON with sorted object keys and sorted arrays.
pub fn to_canonical_json(doc: &ModelDocument) -> Result<String> {
    let mut doc = doc.clone();
    canonicalize(&mut doc);
    // Going through `Value` sorts the object keys.
    let value = serde_json::to_value(&doc)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

pub fn parse_document(text: &str) -> Result<ModelDocument> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)?;
    let doc = parse_document(&text)?;
    document_to_model(&doc)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let doc = model_to_document(model);
    std::fs::write(path, to_canonical_json(&doc)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC_DOC: &str = r#"{
        "kind": "iovpts",
        "alphabet": {
            "calls": ["a"], "returns": ["x", "b"], "simples": [],
            "inputs": ["b", "a"], "outputs": ["x"]
        },
        "states": ["s2", "s0", "s1"],
        "initial": ["s0"],
        "stack_symbols": ["A"],
        "transitions": [
            {"from": "s0", "label": "a", "stack": "A", "to": "s0"},
            {"from": "s0", "label": "b", "stack": "A", "to": "s1"},
            {"from": "s0", "label": "x", "stack": "A", "to": "s2"},
            {"from": "s1", "label": "a", "stack": "A", "to": "s1"},
            {"from": "s1", "label": "b", "stack": "A", "to": "s2"},
            {"from": "s2", "label": "b", "stack": "A", "to": "s1"},
            {"from": "s2", "label": "a", "stack": "A", "to": "s0"}
        ]
    }"#;

    #[test]
    fn loads_a_specification_document() {
        let doc = parse_document(SPEC_DOC).unwrap();
        let loaded = document_to_model(&doc).unwrap();
        assert!(loaded.warnings.is_empty());
        let iovpts = loaded.model.as_iovpts().unwrap();
        assert_eq!(iovpts.underlying().states().len(), 3);
        let ts = crate::semantics::traces(
            iovpts.underlying(),
            4,
            true,
            &crate::semantics::EnumLimits::default(),
        )
        .unwrap();
        assert!(ts.contains(&vec![
            "a".to_string(),
            "a".to_string(),
            "b".to_string(),
            "b".to_string()
        ]));
    }

    #[test]
    fn save_is_canonical_and_round_trips() {
        let doc = parse_document(SPEC_DOC).unwrap();
        let loaded = document_to_model(&doc).unwrap();
        let first = to_canonical_json(&model_to_document(&loaded.model)).unwrap();
        // Parsing the canonical text and saving again is byte-identical.
        let doc2 = parse_document(&first).unwrap();
        let loaded2 = document_to_model(&doc2).unwrap();
        let second = to_canonical_json(&model_to_document(&loaded2.model)).unwrap();
        assert_eq!(first, second);
        // And equals saving the canonicalized original document directly.
        let mut doc3 = parse_document(SPEC_DOC).unwrap();
        canonicalize(&mut doc3);
        assert_eq!(first, to_canonical_json(&doc3).unwrap());
    }

    #[test]
    fn partition_errors_have_their_own_code() {
        let text = SPEC_DOC.replace(r#""returns": ["x", "b"]"#, r#""returns": ["x", "b", "a"]"#);
        let doc = parse_document(&text).unwrap();
        assert_eq!(document_to_model(&doc).unwrap_err().code(), "partition");
    }

    #[test]
    fn reserved_spellings_are_rejected() {
        let text = SPEC_DOC.replace(r#""states": ["s2", "s0", "s1"]"#, r#""states": ["s2", "s0", "s1", "_tau"]"#);
        let doc = parse_document(&text).unwrap();
        assert_eq!(document_to_model(&doc).unwrap_err().code(), "reserved-id");
    }

    #[test]
    fn unknown_state_in_transition_is_flagged() {
        let text = SPEC_DOC.replace(r#"{"from": "s2", "label": "a", "stack": "A", "to": "s0"}"#,
            r#"{"from": "s2", "label": "a", "stack": "A", "to": "zz"}"#);
        let doc = parse_document(&text).unwrap();
        assert_eq!(document_to_model(&doc).unwrap_err().code(), "unknown-id");
    }

    #[test]
    fn vpts_documents_reject_finals() {
        let text = SPEC_DOC.replace(r#""stack_symbols": ["A"],"#, r#""stack_symbols": ["A"], "finals": [],"#);
        let doc = parse_document(&text).unwrap();
        assert_eq!(document_to_model(&doc).unwrap_err().code(), "schema");
    }

    #[test]
    fn unreachable_states_are_pruned_with_warning() {
        let text = SPEC_DOC.replace(r#""states": ["s2", "s0", "s1"]"#, r#""states": ["s2", "s0", "s1", "dead"]"#);
        let doc = parse_document(&text).unwrap();
        let loaded = document_to_model(&doc).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(loaded.model.states_len(), 3);
    }
}
