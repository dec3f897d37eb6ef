//! Action alphabets partitioned into call, return and simple symbols, with an
//! optional orthogonal input/output view.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved spelling for the bottom-of-stack marker `⊥`.
pub const BOTTOM: &str = "_bot";
/// Reserved spelling for the place-holder `⋄` carried by simple transitions.
pub const PLACEHOLDER: &str = "_dia";
/// Reserved spelling for the internal action `ς` (an `ε`-move on automata).
pub const INTERNAL: &str = "_tau";

/// True for the three spellings that have structural meaning in documents and
/// may never name a state, action or stack symbol.
pub fn is_reserved(id: &str) -> bool {
    id == BOTTOM || id == PLACEHOLDER || id == INTERNAL
}

pub(crate) fn check_id(id: &str, what: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::Schema(format!("empty {what} identifier")));
    }
    if is_reserved(id) {
        return Err(Error::ReservedId(id.to_string()));
    }
    if id.chars().any(char::is_whitespace) {
        return Err(Error::Schema(format!(
            "{what} identifier `{id}` contains whitespace"
        )));
    }
    Ok(())
}

/// The stack discipline a symbol dictates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Call,
    Return,
    Simple,
}

/// An action alphabet `L = L_c ∪ L_r ∪ L_i` with pairwise disjoint parts.
///
/// When the input/output view is present, `inputs ∪ outputs = L` and the two
/// sets are disjoint; otherwise both are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushdownAlphabet {
    calls: BTreeSet<String>,
    returns: BTreeSet<String>,
    simples: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    inputs: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    outputs: BTreeSet<String>,
}

impl PushdownAlphabet {
    pub fn new<I, J, K>(calls: I, returns: J, simples: K) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
        J: IntoIterator,
        J::Item: Into<String>,
        K: IntoIterator,
        K::Item: Into<String>,
    {
        Self::build(
            calls.into_iter().map(Into::into).collect(),
            returns.into_iter().map(Into::into).collect(),
            simples.into_iter().map(Into::into).collect(),
            BTreeSet::new(),
            BTreeSet::new(),
        )
    }

    pub fn with_io<I, J>(mut self, inputs: I, outputs: J) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
        J: IntoIterator,
        J::Item: Into<String>,
    {
        self.inputs = inputs.into_iter().map(Into::into).collect();
        self.outputs = outputs.into_iter().map(Into::into).collect();
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn build(
        calls: BTreeSet<String>,
        returns: BTreeSet<String>,
        simples: BTreeSet<String>,
        inputs: BTreeSet<String>,
        outputs: BTreeSet<String>,
    ) -> Result<Self> {
        let alphabet = PushdownAlphabet {
            calls,
            returns,
            simples,
            inputs,
            outputs,
        };
        alphabet.validate()?;
        Ok(alphabet)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        for id in self
            .calls
            .iter()
            .chain(&self.returns)
            .chain(&self.simples)
            .chain(&self.inputs)
            .chain(&self.outputs)
        {
            check_id(id, "action symbol")?;
        }
        for a in &self.calls {
            if self.returns.contains(a) || self.simples.contains(a) {
                return Err(Error::Partition(format!(
                    "symbol `{a}` appears in more than one of calls/returns/simples"
                )));
            }
        }
        for a in &self.returns {
            if self.simples.contains(a) {
                return Err(Error::Partition(format!(
                    "symbol `{a}` appears in more than one of calls/returns/simples"
                )));
            }
        }
        if self.has_io_view() {
            for a in &self.inputs {
                if self.outputs.contains(a) {
                    return Err(Error::Partition(format!(
                        "symbol `{a}` is declared both input and output"
                    )));
                }
            }
            let mut covered: BTreeSet<&String> = self.inputs.iter().collect();
            covered.extend(&self.outputs);
            for a in self.symbols() {
                if !covered.remove(a) {
                    return Err(Error::Partition(format!(
                        "symbol `{a}` is in the alphabet but neither input nor output"
                    )));
                }
            }
            if let Some(stray) = covered.into_iter().next() {
                return Err(Error::Partition(format!(
                    "input/output symbol `{stray}` is not in the alphabet"
                )));
            }
        }
        Ok(())
    }

    pub fn calls(&self) -> &BTreeSet<String> {
        &self.calls
    }

    pub fn returns(&self) -> &BTreeSet<String> {
        &self.returns
    }

    pub fn simples(&self) -> &BTreeSet<String> {
        &self.simples
    }

    pub fn inputs(&self) -> &BTreeSet<String> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<String> {
        &self.outputs
    }

    /// All symbols of `L`, in sorted order.
    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.calls.iter().chain(&self.returns).chain(&self.simples)
    }

    pub fn len(&self) -> usize {
        self.calls.len() + self.returns.len() + self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.kind_of(symbol).is_some()
    }

    pub fn kind_of(&self, symbol: &str) -> Option<SymbolKind> {
        if self.calls.contains(symbol) {
            Some(SymbolKind::Call)
        } else if self.returns.contains(symbol) {
            Some(SymbolKind::Return)
        } else if self.simples.contains(symbol) {
            Some(SymbolKind::Simple)
        } else {
            None
        }
    }

    pub fn has_io_view(&self) -> bool {
        !self.inputs.is_empty() || !self.outputs.is_empty()
    }

    /// Same call/return/simple partition (the input/output view is ignored).
    pub fn partition_eq(&self, other: &PushdownAlphabet) -> bool {
        self.calls == other.calls && self.returns == other.returns && self.simples == other.simples
    }

    /// Same partition and either the same or the mirrored input/output view.
    pub fn io_compatible(&self, other: &PushdownAlphabet) -> bool {
        self.partition_eq(other)
            && ((self.inputs == other.inputs && self.outputs == other.outputs)
                || (self.inputs == other.outputs && self.outputs == other.inputs))
    }

    /// Copy with the input/output view dropped (the form carried by automata).
    pub fn without_io(&self) -> Self {
        PushdownAlphabet {
            calls: self.calls.clone(),
            returns: self.returns.clone(),
            simples: self.simples.clone(),
            inputs: BTreeSet::new(),
            outputs: BTreeSet::new(),
        }
    }

    /// Copy with inputs and outputs swapped, as seen by a tester.
    pub fn mirrored_io(&self) -> Self {
        PushdownAlphabet {
            calls: self.calls.clone(),
            returns: self.returns.clone(),
            simples: self.simples.clone(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// Copy extended with one more symbol in the given class.
    pub(crate) fn with_symbol(&self, symbol: &str, kind: SymbolKind) -> Result<Self> {
        if self.contains(symbol) {
            return Err(Error::NameCollision(symbol.to_string()));
        }
        let mut out = self.clone();
        match kind {
            SymbolKind::Call => out.calls.insert(symbol.to_string()),
            SymbolKind::Return => out.returns.insert(symbol.to_string()),
            SymbolKind::Simple => out.simples.insert(symbol.to_string()),
        };
        // A fresh symbol joins the i/o view only when one is present; testers
        // treat the bookkeeping symbols as inputs they control.
        if out.has_io_view() {
            out.inputs.insert(symbol.to_string());
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for PushdownAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "calls {{{}}} returns {{{}}} simples {{{}}}",
            self.calls.iter().cloned().collect::<Vec<_>>().join(","),
            self.returns.iter().cloned().collect::<Vec<_>>().join(","),
            self.simples.iter().cloned().collect::<Vec<_>>().join(",")
        )
    }
}
