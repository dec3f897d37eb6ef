//! Run semantics: configurations, elementary moves, bounded language and
//! trace enumeration.
//!
//! [`step`] and [`run_closure`] work directly on the named model. The bounded
//! enumerations compile the model into an indexed [`View`] first so that the
//! oracle-style searches stay fast at property-test scale.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::alphabet::INTERNAL;
use crate::error::{Error, Result};
use crate::model::{Action, Machine, Word};

/// A `(state, stack)` pair. The stack lists symbols topmost first and is
/// implicitly terminated by the bottom marker, which is never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: String,
    pub stack: Vec<String>,
}

impl Configuration {
    pub fn new(state: impl Into<String>, stack: impl IntoIterator<Item = String>) -> Self {
        Configuration {
            state: state.into(),
            stack: stack.into_iter().collect(),
        }
    }

    /// The configuration `(state, ⊥)`.
    pub fn at(state: impl Into<String>) -> Self {
        Configuration {
            state: state.into(),
            stack: Vec::new(),
        }
    }
}

fn check_configuration<M: Machine>(model: &M, c: &Configuration) -> Result<()> {
    if !model.states().contains(&c.state) {
        return Err(Error::unknown("state", &c.state, "configuration"));
    }
    for z in &c.stack {
        if !model.stack_symbols().contains(z) {
            return Err(Error::unknown("stack symbol", z, "configuration"));
        }
    }
    Ok(())
}

/// All configurations reachable from `c` by one elementary move on `label`.
/// `None` asks for the internal move (`ε` on automata, `ς` on transition
/// systems). Pop transitions on the bottom marker fire only when the stack is
/// empty and leave it empty.
pub fn step<M: Machine>(model: &M, c: &Configuration, label: Option<&str>) -> Result<BTreeSet<Configuration>> {
    check_configuration(model, c)?;
    if let Some(label) = label {
        if !model.alphabet().contains(label) {
            return Err(Error::unknown("action symbol", label, "step"));
        }
    }
    let mut out = BTreeSet::new();
    for t in model.transitions() {
        if t.from != c.state || t.action.label() != label {
            continue;
        }
        match &t.action {
            Action::Push { symbol, .. } => {
                let mut stack = Vec::with_capacity(c.stack.len() + 1);
                stack.push(symbol.clone());
                stack.extend(c.stack.iter().cloned());
                out.insert(Configuration::new(t.to.clone(), stack));
            }
            Action::Pop { symbol: Some(symbol), .. } => {
                if c.stack.first() == Some(symbol) {
                    out.insert(Configuration::new(t.to.clone(), c.stack[1..].to_vec()));
                }
            }
            Action::Pop { symbol: None, .. } => {
                if c.stack.is_empty() {
                    out.insert(Configuration::at(t.to.clone()));
                }
            }
            Action::Simple { .. } | Action::Internal => {
                out.insert(Configuration::new(t.to.clone(), c.stack.clone()));
            }
        }
    }
    Ok(out)
}

/// Least fixpoint of `cs` under internal moves. Internal moves never touch the
/// stack, so this is plain reachability over the internal edge graph.
pub fn run_closure<M: Machine>(model: &M, cs: &BTreeSet<Configuration>) -> Result<BTreeSet<Configuration>> {
    let mut internal_edges: HashMap<&str, Vec<&str>> = HashMap::new();
    for t in model.transitions() {
        if t.action.is_internal() {
            internal_edges.entry(&t.from).or_default().push(&t.to);
        }
    }
    let mut out = BTreeSet::new();
    for c in cs {
        check_configuration(model, c)?;
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut frontier = vec![c.state.as_str()];
        seen.insert(&c.state);
        while let Some(s) = frontier.pop() {
            for &nxt in internal_edges.get(s).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(nxt) {
                    frontier.push(nxt);
                }
            }
        }
        for s in seen {
            out.insert(Configuration::new(s.to_string(), c.stack.clone()));
        }
    }
    Ok(out)
}

/// Caps for the bounded enumerations.
#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    /// Longest word the enumeration may be asked for.
    pub max_len_cap: usize,
    /// Total number of configurations the search may touch.
    pub config_budget: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_len_cap: 10,
            config_budget: 1_000_000,
        }
    }
}

// ---------------------------------------------------------------------------
// Indexed view used by the bounded searches.
// ---------------------------------------------------------------------------

pub(crate) type Stack = Vec<u16>;
pub(crate) type ConfigSet = HashSet<(u32, Stack)>;

/// One move in indexed form. `label` is an index into [`View::labels`];
/// the internal move uses the `INTERNAL` spelling's slot.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Move {
    Push { label: u32, symbol: u16, to: u32 },
    Pop { label: u32, symbol: Option<u16>, to: u32 },
    Plain { label: u32, to: u32 },
}

pub(crate) struct View {
    pub labels: Vec<String>,
    pub internal_label: u32,
    pub state_names: Vec<String>,
    pub state_index: HashMap<String, u32>,
    pub stack_names: Vec<String>,
    pub initial: Vec<u32>,
    pub finals: Vec<bool>,
    pub moves: Vec<Vec<Move>>,
    pub internal_edges: Vec<Vec<u32>>,
}

impl View {
    pub(crate) fn build<M: Machine>(model: &M) -> View {
        let state_names: Vec<String> = model.states().iter().cloned().collect();
        let state_index: HashMap<String, u32> = state_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        let stack_names: Vec<String> = model.stack_symbols().iter().cloned().collect();
        let stack_index: HashMap<&str, u16> = stack_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u16))
            .collect();
        let mut labels: Vec<String> = model.alphabet().symbols().cloned().collect();
        let internal_label = labels.len() as u32;
        labels.push(INTERNAL.to_string());
        let label_index: HashMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();

        let mut moves: Vec<Vec<Move>> = vec![Vec::new(); state_names.len()];
        let mut internal_edges: Vec<Vec<u32>> = vec![Vec::new(); state_names.len()];
        for t in model.transitions() {
            let from = state_index[&t.from];
            let to = state_index[&t.to];
            let mv = match &t.action {
                Action::Push { label, symbol } => Move::Push {
                    label: label_index[label.as_str()],
                    symbol: stack_index[symbol.as_str()],
                    to,
                },
                Action::Pop { label, symbol } => Move::Pop {
                    label: label_index[label.as_str()],
                    symbol: symbol.as_deref().map(|s| stack_index[s]),
                    to,
                },
                Action::Simple { label } => Move::Plain {
                    label: label_index[label.as_str()],
                    to,
                },
                Action::Internal => {
                    internal_edges[from as usize].push(to);
                    Move::Plain {
                        label: internal_label,
                        to,
                    }
                }
            };
            moves[from as usize].push(mv);
        }
        let finals = state_names.iter().map(|s| model.is_final(s)).collect();
        let initial = model
            .initial_states()
            .iter()
            .map(|s| state_index[s])
            .collect();
        View {
            labels,
            internal_label,
            state_names,
            state_index,
            stack_names,
            initial,
            finals,
            moves,
            internal_edges,
        }
    }

    pub(crate) fn initial_configs(&self) -> ConfigSet {
        self.initial.iter().map(|&s| (s, Stack::new())).collect()
    }

    /// One elementary move on the given label index for every configuration.
    pub(crate) fn step_all(&self, set: &ConfigSet, label: u32) -> ConfigSet {
        let mut out = HashSet::new();
        for (state, stack) in set {
            for mv in &self.moves[*state as usize] {
                match *mv {
                    Move::Push { label: l, symbol, to } if l == label => {
                        let mut s = Vec::with_capacity(stack.len() + 1);
                        s.extend_from_slice(stack);
                        s.push(symbol);
                        out.insert((to, s));
                    }
                    Move::Pop { label: l, symbol, to } if l == label => match symbol {
                        Some(z) => {
                            if stack.last() == Some(&z) {
                                out.insert((to, stack[..stack.len() - 1].to_vec()));
                            }
                        }
                        None => {
                            if stack.is_empty() {
                                out.insert((to, Stack::new()));
                            }
                        }
                    },
                    Move::Plain { label: l, to } if l == label => {
                        out.insert((to, stack.clone()));
                    }
                    _ => {}
                }
            }
        }
        out
    }

    /// Close a configuration set under internal moves.
    pub(crate) fn close(&self, set: &mut ConfigSet) {
        let mut frontier: Vec<(u32, Stack)> = set.iter().cloned().collect();
        while let Some((state, stack)) = frontier.pop() {
            for &to in &self.internal_edges[state as usize] {
                let item = (to, stack.clone());
                if set.insert(item.clone()) {
                    frontier.push(item);
                }
            }
        }
    }

    /// Configurations reachable from `set` on observable word `w`, with
    /// internal closure interleaved. `None` when a symbol is unknown.
    pub(crate) fn after_word(&self, mut set: ConfigSet, word: &[String]) -> Result<ConfigSet> {
        self.close(&mut set);
        for sym in word {
            let label = self.label_of(sym)?;
            set = self.step_all(&set, label);
            self.close(&mut set);
            if set.is_empty() {
                break;
            }
        }
        Ok(set)
    }

    pub(crate) fn label_of(&self, sym: &str) -> Result<u32> {
        self.labels
            .iter()
            .position(|l| l == sym)
            .map(|i| i as u32)
            .filter(|&i| i != self.internal_label)
            .ok_or_else(|| Error::unknown("action symbol", sym, "word"))
    }

    pub(crate) fn config_name(&self, (state, stack): &(u32, Stack)) -> Configuration {
        Configuration::new(
            self.state_names[*state as usize].clone(),
            stack
                .iter()
                .rev()
                .map(|&z| self.stack_names[z as usize].clone()),
        )
    }
}

pub(crate) enum EnumMode {
    /// Accepted words of an automaton (internal closure interleaved).
    Language,
    /// Live observable words of a transition system.
    ObservableTraces,
    /// Live raw words, internal moves spelled `_tau`.
    RawTraces,
}

/// Breadth-first enumeration over word length. Returns the set of words of
/// length at most `max_len` that the mode keeps (accepted words or live
/// traces). Hard errors when `max_len` exceeds the cap, or when the search
/// touches more configurations than the budget allows.
pub(crate) fn enumerate(
    view: &View,
    max_len: usize,
    mode: EnumMode,
    limits: &EnumLimits,
) -> Result<BTreeSet<Word>> {
    if max_len > limits.max_len_cap {
        return Err(Error::Usage(format!(
            "requested word length {max_len} exceeds the configured cap {}",
            limits.max_len_cap
        )));
    }
    let closed = !matches!(mode, EnumMode::RawTraces);
    let letters: Vec<u32> = match mode {
        EnumMode::RawTraces => (0..view.labels.len() as u32).collect(),
        _ => (0..view.labels.len() as u32)
            .filter(|&l| l != view.internal_label)
            .collect(),
    };

    let mut budget = limits.config_budget;
    let mut spend = |n: usize| -> Result<()> {
        if n > budget {
            return Err(Error::BudgetExceeded {
                budget: limits.config_budget,
            });
        }
        budget -= n;
        Ok(())
    };

    let mut start = view.initial_configs();
    if closed {
        view.close(&mut start);
    }
    spend(start.len())?;

    let mut out: BTreeSet<Word> = BTreeSet::new();
    let keep = |set: &ConfigSet| -> bool {
        match mode {
            EnumMode::Language => set.iter().any(|(s, _)| view.finals[*s as usize]),
            _ => !set.is_empty(),
        }
    };
    if keep(&start) {
        out.insert(Vec::new());
    }

    let mut frontier: Vec<(Vec<u32>, ConfigSet)> = vec![(Vec::new(), start)];
    for _ in 0..max_len {
        let mut next_frontier = Vec::new();
        for (word, set) in &frontier {
            for &letter in &letters {
                let mut next = view.step_all(set, letter);
                if closed {
                    view.close(&mut next);
                }
                if next.is_empty() {
                    continue;
                }
                spend(next.len())?;
                let mut next_word = word.clone();
                next_word.push(letter);
                if keep(&next) {
                    out.insert(
                        next_word
                            .iter()
                            .map(|&l| view.labels[l as usize].clone())
                            .collect(),
                    );
                }
                next_frontier.push((next_word, next));
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    Ok(out)
}

/// True iff some run from an initial configuration consumes `w` and ends in a
/// final state, with any stack left over.
pub fn accepts<M: Machine>(model: &M, w: &[String]) -> Result<bool> {
    let view = View::build(model);
    let set = view.after_word(view.initial_configs(), w)?;
    Ok(set.iter().any(|(s, _)| view.finals[*s as usize]))
}

/// The accepted language restricted to words of length at most `max_len`,
/// computed by breadth-first configuration exploration.
pub fn enumerate_language<M: Machine>(
    model: &M,
    max_len: usize,
    limits: &EnumLimits,
) -> Result<BTreeSet<Word>> {
    let view = View::build(model);
    enumerate(&view, max_len, EnumMode::Language, limits)
}

/// Traces of a transition system up to `max_len`. With `observable` set the
/// internal moves are erased (the `h_ς` morphism); otherwise they appear as
/// `_tau` letters and count toward the length bound.
pub fn traces<M: Machine>(
    model: &M,
    max_len: usize,
    observable: bool,
    limits: &EnumLimits,
) -> Result<BTreeSet<Word>> {
    let view = View::build(model);
    let mode = if observable {
        EnumMode::ObservableTraces
    } else {
        EnumMode::RawTraces
    };
    enumerate(&view, max_len, mode, limits)
}

/// Replay an exact sequence of letters (observable symbols or `_tau`), one
/// elementary move per letter, with no implicit closure.
pub fn replay<M: Machine>(
    model: &M,
    from: &Configuration,
    letters: &[String],
) -> Result<BTreeSet<Configuration>> {
    let mut set = BTreeSet::from([from.clone()]);
    for letter in letters {
        let label = if letter == INTERNAL { None } else { Some(letter.as_str()) };
        let mut next = BTreeSet::new();
        for c in &set {
            next.extend(step(model, c, label)?);
        }
        set = next;
        if set.is_empty() {
            break;
        }
    }
    Ok(set)
}

/// Erase the given letters from a word (the `h_B` morphism for singletons,
/// applied repeatedly).
pub fn erase(word: &[String], letters: &[&str]) -> Word {
    word.iter()
        .filter(|l| !letters.contains(&l.as_str()))
        .cloned()
        .collect()
}

/// Observable configurations reachable from `from` by observable word `w`
/// (internal closure interleaved). The general form of `after` shared by
/// automata and transition systems.
pub fn reach<M: Machine>(
    model: &M,
    from: &BTreeSet<Configuration>,
    w: &[String],
) -> Result<BTreeSet<Configuration>> {
    let view = View::build(model);
    let mut start = HashSet::new();
    for c in from {
        check_configuration(model, c)?;
        let state = view.state_index[&c.state];
        let stack: Stack = c
            .stack
            .iter()
            .rev()
            .map(|z| {
                view.stack_names
                    .iter()
                    .position(|n| n == z)
                    .map(|i| i as u16)
                    .expect("stack symbol checked above")
            })
            .collect();
        start.insert((state, stack));
    }
    let set = view.after_word(start, w)?;
    Ok(set.iter().map(|c| view.config_name(c)).collect())
}

/// `w` is an observable trace of the model (for automata: some run consumes
/// `w`, final or not).
pub fn has_observable_trace<M: Machine>(model: &M, w: &[String]) -> Result<bool> {
    let view = View::build(model);
    Ok(!view.after_word(view.initial_configs(), w)?.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BfsLimits {
    pub stack_bound: usize,
    pub config_budget: usize,
}

pub(crate) enum BfsOutcome {
    Exhausted(ConfigSet),
    BudgetHit(ConfigSet),
}

/// Plain configuration BFS with a stack-depth bound, used by bounded checks
/// and as an independent oracle in tests.
pub(crate) fn bfs_configurations(view: &View, start: ConfigSet, limits: BfsLimits) -> BfsOutcome {
    let mut seen = start.clone();
    let mut queue: VecDeque<(u32, Stack)> = start.into_iter().collect();
    let mut spent = queue.len();
    while let Some((state, stack)) = queue.pop_front() {
        for mv in &view.moves[state as usize] {
            let next = match *mv {
                Move::Push { symbol, to, .. } => {
                    if stack.len() >= limits.stack_bound {
                        continue;
                    }
                    let mut s = stack.clone();
                    s.push(symbol);
                    (to, s)
                }
                Move::Pop { symbol, to, .. } => match symbol {
                    Some(z) => {
                        if stack.last() != Some(&z) {
                            continue;
                        }
                        (to, stack[..stack.len() - 1].to_vec())
                    }
                    None => {
                        if !stack.is_empty() {
                            continue;
                        }
                        (to, Stack::new())
                    }
                },
                Move::Plain { to, .. } => (to, stack.clone()),
            };
            if seen.insert(next.clone()) {
                spent += 1;
                if spent > limits.config_budget {
                    return BfsOutcome::BudgetHit(seen);
                }
                queue.push_back(next);
            }
        }
    }
    BfsOutcome::Exhausted(seen)
}
