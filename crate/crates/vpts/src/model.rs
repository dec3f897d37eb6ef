//! Syntax of visibly pushdown automata and transition systems.
//!
//! A [`Vpa`] accepts words through final states; a [`Vpts`] has no acceptance
//! and instead uses the internal action `ς` where the automaton would use
//! `ε`-moves. Both share [`Transition`] and the alphabet type, so converting
//! between them is a transition-for-transition relabelling (see
//! [`crate::vpts_ops::induced_vpa`]).

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{check_id, PushdownAlphabet, SymbolKind};
use crate::error::{Error, Result};

/// A word over the action alphabet. Internal moves, when they appear in raw
/// traces, are spelled [`crate::alphabet::INTERNAL`].
pub type Word = Vec<String>;

/// Render a word the way the CLI prints witnesses: one symbol per token.
pub fn format_word(word: &[String]) -> String {
    if word.is_empty() {
        "<empty>".to_string()
    } else {
        word.join(" ")
    }
}

/// The action performed by a transition, combining the label and its stack
/// discipline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    /// Read `label ∈ L_c`, push `symbol`.
    Push { label: String, symbol: String },
    /// Read `label ∈ L_r`, pop `symbol`; `None` pops on the bottom marker,
    /// leaving the stack empty.
    Pop {
        label: String,
        symbol: Option<String>,
    },
    /// Read `label ∈ L_i`, leave the stack alone.
    Simple { label: String },
    /// `ε`-move (automata) or `ς`-move (transition systems).
    Internal,
}

impl Action {
    pub fn label(&self) -> Option<&str> {
        match self {
            Action::Push { label, .. } | Action::Pop { label, .. } | Action::Simple { label } => {
                Some(label)
            }
            Action::Internal => None,
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Action::Internal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: String,
    pub action: Action,
    pub to: String,
}

impl Transition {
    pub fn push(from: &str, label: &str, symbol: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            action: Action::Push {
                label: label.to_string(),
                symbol: symbol.to_string(),
            },
            to: to.to_string(),
        }
    }

    pub fn pop(from: &str, label: &str, symbol: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            action: Action::Pop {
                label: label.to_string(),
                symbol: Some(symbol.to_string()),
            },
            to: to.to_string(),
        }
    }

    pub fn pop_bottom(from: &str, label: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            action: Action::Pop {
                label: label.to_string(),
                symbol: None,
            },
            to: to.to_string(),
        }
    }

    pub fn simple(from: &str, label: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            action: Action::Simple {
                label: label.to_string(),
            },
            to: to.to_string(),
        }
    }

    pub fn internal(from: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            action: Action::Internal,
            to: to.to_string(),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.action {
            Action::Push { label, symbol } => {
                write!(f, "({},{}/push {},{})", self.from, label, symbol, self.to)
            }
            Action::Pop {
                label,
                symbol: Some(symbol),
            } => write!(f, "({},{}/pop {},{})", self.from, label, symbol, self.to),
            Action::Pop {
                label,
                symbol: None,
            } => write!(f, "({},{}/pop _bot,{})", self.from, label, self.to),
            Action::Simple { label } => write!(f, "({},{},{})", self.from, label, self.to),
            Action::Internal => write!(f, "({},_tau,{})", self.from, self.to),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn validate_parts(
    alphabet: &PushdownAlphabet,
    states: &BTreeSet<String>,
    initial: &BTreeSet<String>,
    stack_symbols: &BTreeSet<String>,
    transitions: &BTreeSet<Transition>,
    finals: Option<&BTreeSet<String>>,
    internal_allowed: bool,
    internal_self_loops_allowed: bool,
) -> Result<()> {
    alphabet.validate()?;
    for s in states {
        check_id(s, "state")?;
    }
    for z in stack_symbols {
        check_id(z, "stack symbol")?;
    }
    for s in initial {
        if !states.contains(s) {
            return Err(Error::unknown("state", s, "initial set"));
        }
    }
    if let Some(finals) = finals {
        for s in finals {
            if !states.contains(s) {
                return Err(Error::unknown("state", s, "final set"));
            }
        }
    }
    for t in transitions {
        if !states.contains(&t.from) {
            return Err(Error::unknown("state", &t.from, "transition source"));
        }
        if !states.contains(&t.to) {
            return Err(Error::unknown("state", &t.to, "transition target"));
        }
        match &t.action {
            Action::Push { label, symbol } => {
                if alphabet.kind_of(label) != Some(SymbolKind::Call) {
                    return Err(Error::Partition(format!(
                        "push transition {t} must carry a call symbol"
                    )));
                }
                if !stack_symbols.contains(symbol) {
                    return Err(Error::unknown("stack symbol", symbol, "push transition"));
                }
            }
            Action::Pop { label, symbol } => {
                if alphabet.kind_of(label) != Some(SymbolKind::Return) {
                    return Err(Error::Partition(format!(
                        "pop transition {t} must carry a return symbol"
                    )));
                }
                if let Some(symbol) = symbol {
                    if !stack_symbols.contains(symbol) {
                        return Err(Error::unknown("stack symbol", symbol, "pop transition"));
                    }
                }
            }
            Action::Simple { label } => {
                if alphabet.kind_of(label) != Some(SymbolKind::Simple) {
                    return Err(Error::Partition(format!(
                        "simple transition {t} must carry a simple symbol"
                    )));
                }
            }
            Action::Internal => {
                if !internal_allowed {
                    return Err(Error::Schema(format!(
                        "internal transition {t} is not allowed here"
                    )));
                }
                if !internal_self_loops_allowed && t.from == t.to {
                    return Err(Error::Schema(format!(
                        "internal self-loop {t} is not allowed in a transition system"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A visibly pushdown automaton with `ε`-moves and final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vpa {
    alphabet: PushdownAlphabet,
    states: BTreeSet<String>,
    initial: BTreeSet<String>,
    stack_symbols: BTreeSet<String>,
    transitions: BTreeSet<Transition>,
    finals: BTreeSet<String>,
}

impl Vpa {
    pub fn new(
        alphabet: PushdownAlphabet,
        states: impl IntoIterator<Item = String>,
        initial: impl IntoIterator<Item = String>,
        stack_symbols: impl IntoIterator<Item = String>,
        transitions: impl IntoIterator<Item = Transition>,
        finals: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        if alphabet.has_io_view() {
            return Err(Error::Schema(
                "automata carry no input/output view".to_string(),
            ));
        }
        let vpa = Vpa {
            alphabet,
            states: states.into_iter().collect(),
            initial: initial.into_iter().collect(),
            stack_symbols: stack_symbols.into_iter().collect(),
            transitions: transitions.into_iter().collect(),
            finals: finals.into_iter().collect(),
        };
        vpa.validate()?;
        Ok(vpa)
    }

    pub fn validate(&self) -> Result<()> {
        validate_parts(
            &self.alphabet,
            &self.states,
            &self.initial,
            &self.stack_symbols,
            &self.transitions,
            Some(&self.finals),
            true,
            true,
        )
    }

    pub fn alphabet(&self) -> &PushdownAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn stack_symbols(&self) -> &BTreeSet<String> {
        &self.stack_symbols
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn finals(&self) -> &BTreeSet<String> {
        &self.finals
    }

    pub fn has_internal_moves(&self) -> bool {
        self.transitions.iter().any(|t| t.action.is_internal())
    }

    /// The VPA accepting `∅` over the given alphabet.
    pub fn empty_language(alphabet: PushdownAlphabet) -> Result<Self> {
        Vpa::new(
            alphabet.without_io(),
            ["e0".to_string()],
            ["e0".to_string()],
            [],
            [],
            [],
        )
    }

    /// A one-state VPA accepting every word over the given alphabet.
    pub fn universal(alphabet: PushdownAlphabet) -> Result<Self> {
        let alphabet = alphabet.without_io();
        let u = "u0".to_string();
        let mut stack_symbols = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        if !alphabet.calls().is_empty() {
            stack_symbols.insert("Zu".to_string());
        }
        for a in alphabet.calls() {
            transitions.insert(Transition::push(&u, a, "Zu", &u));
        }
        for a in alphabet.returns() {
            transitions.insert(Transition::pop_bottom(&u, a, &u));
            for z in &stack_symbols {
                transitions.insert(Transition::pop(&u, a, z, &u));
            }
        }
        for a in alphabet.simples() {
            transitions.insert(Transition::simple(&u, a, &u));
        }
        Vpa::new(
            alphabet,
            [u.clone()],
            [u.clone()],
            stack_symbols,
            transitions,
            [u],
        )
    }
}

/// A visibly pushdown labeled transition system: no finals, internal `ς`-moves
/// instead of `ε`-moves, and no `ς`-self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vpts {
    alphabet: PushdownAlphabet,
    states: BTreeSet<String>,
    initial: BTreeSet<String>,
    stack_symbols: BTreeSet<String>,
    transitions: BTreeSet<Transition>,
}

impl Vpts {
    pub fn new(
        alphabet: PushdownAlphabet,
        states: impl IntoIterator<Item = String>,
        initial: impl IntoIterator<Item = String>,
        stack_symbols: impl IntoIterator<Item = String>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self> {
        let vpts = Vpts {
            alphabet,
            states: states.into_iter().collect(),
            initial: initial.into_iter().collect(),
            stack_symbols: stack_symbols.into_iter().collect(),
            transitions: transitions.into_iter().collect(),
        };
        vpts.validate()?;
        Ok(vpts)
    }

    pub fn validate(&self) -> Result<()> {
        validate_parts(
            &self.alphabet,
            &self.states,
            &self.initial,
            &self.stack_symbols,
            &self.transitions,
            None,
            true,
            false,
        )
    }

    pub fn alphabet(&self) -> &PushdownAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn stack_symbols(&self) -> &BTreeSet<String> {
        &self.stack_symbols
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn has_internal_moves(&self) -> bool {
        self.transitions.iter().any(|t| t.action.is_internal())
    }

    /// States with no path from any initial state, ignoring stack feasibility.
    /// Such states play no role in any behavior and a loader may prune them.
    pub fn unreachable_states(&self) -> BTreeSet<String> {
        let mut reached: BTreeSet<&str> = self.initial.iter().map(String::as_str).collect();
        let mut frontier: Vec<&str> = reached.iter().copied().collect();
        while let Some(s) = frontier.pop() {
            for t in &self.transitions {
                if t.from == s && reached.insert(&t.to) {
                    frontier.push(&t.to);
                }
            }
        }
        self.states
            .iter()
            .filter(|s| !reached.contains(s.as_str()))
            .cloned()
            .collect()
    }

    /// Copy with all unreachable states (and their transitions) removed.
    pub fn pruned(&self) -> (Vpts, BTreeSet<String>) {
        let dead = self.unreachable_states();
        if dead.is_empty() {
            return (self.clone(), dead);
        }
        let keep: BTreeSet<String> = self.states.difference(&dead).cloned().collect();
        let transitions: BTreeSet<Transition> = self
            .transitions
            .iter()
            .filter(|t| keep.contains(&t.from) && keep.contains(&t.to))
            .cloned()
            .collect();
        let pruned = Vpts {
            alphabet: self.alphabet.clone(),
            states: keep,
            initial: self.initial.clone(),
            stack_symbols: self.stack_symbols.clone(),
            transitions,
        };
        (pruned, dead)
    }
}

/// Shared read view over [`Vpa`] and [`Vpts`] used by the run semantics.
pub trait Machine {
    fn alphabet(&self) -> &PushdownAlphabet;
    fn states(&self) -> &BTreeSet<String>;
    fn initial_states(&self) -> &BTreeSet<String>;
    fn stack_symbols(&self) -> &BTreeSet<String>;
    fn transitions(&self) -> &BTreeSet<Transition>;
    fn is_final(&self, state: &str) -> bool;
}

impl Machine for Vpa {
    fn alphabet(&self) -> &PushdownAlphabet {
        &self.alphabet
    }
    fn states(&self) -> &BTreeSet<String> {
        &self.states
    }
    fn initial_states(&self) -> &BTreeSet<String> {
        &self.initial
    }
    fn stack_symbols(&self) -> &BTreeSet<String> {
        &self.stack_symbols
    }
    fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }
    fn is_final(&self, state: &str) -> bool {
        self.finals.contains(state)
    }
}

impl Machine for Vpts {
    fn alphabet(&self) -> &PushdownAlphabet {
        &self.alphabet
    }
    fn states(&self) -> &BTreeSet<String> {
        &self.states
    }
    fn initial_states(&self) -> &BTreeSet<String> {
        &self.initial
    }
    fn stack_symbols(&self) -> &BTreeSet<String> {
        &self.stack_symbols
    }
    fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }
    fn is_final(&self, _state: &str) -> bool {
        true
    }
}

/// Name of a product state built from a pair of component states.
pub fn product_state_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Name of a product stack symbol built from a pair of component symbols.
pub fn product_stack_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Name of the duplicated state used by the suffix-concatenation closure.
pub fn hatted_name(s: &str) -> String {
    format!("{s}^")
}

/// First name in `base, base1, base2, …` that `taken` does not contain, so
/// constructed names never collide with identifiers already in use.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|cand| !taken(cand))
        .expect("unbounded name space")
}
