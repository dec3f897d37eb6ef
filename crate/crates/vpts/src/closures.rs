//! The closure algebra on visibly pushdown automata: determinism checking,
//! ε-removal (plain and determinism-preserving), synchronous product,
//! intersection, non-blocking completion, union, complement, suffix
//! concatenation and emptiness with witness extraction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::alphabet::INTERNAL;
use crate::balanced::{saturate, SaturationStats};
use crate::error::{Error, Result};
use crate::model::{
    hatted_name, product_stack_name, product_state_name, Action, Transition, Vpa, Word,
};
use crate::semantics::{accepts, erase, Move, View};

/// One witness of nondeterminism.
#[derive(Debug, Clone)]
pub enum Violation {
    /// More than one initial state.
    MultiInitial { states: Vec<String> },
    /// Two push transitions with the same source and label but different
    /// stack symbol or target.
    PushConflict { first: Transition, second: Transition },
    /// Two pop or simple (or internal) transitions with the same source,
    /// label and stack symbol but different targets.
    PopSimpleConflict { first: Transition, second: Transition },
    /// A labeled transition next to an internal move out of the same state.
    EpsConflict { labeled: Transition, internal: Transition },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MultiInitial { .. } => "multi-initial",
            Violation::PushConflict { .. } => "push-conflict",
            Violation::PopSimpleConflict { .. } => "pop-simple-conflict",
            Violation::EpsConflict { .. } => "eps-conflict",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MultiInitial { states } => {
                write!(f, "multi-initial: {{{}}}", states.join(","))
            }
            Violation::PushConflict { first, second } => {
                write!(f, "push-conflict: {first} vs {second}")
            }
            Violation::PopSimpleConflict { first, second } => {
                write!(f, "pop-simple-conflict: {first} vs {second}")
            }
            Violation::EpsConflict { labeled, internal } => {
                write!(f, "eps-conflict: {labeled} vs {internal}")
            }
        }
    }
}

/// Verdict of the syntactic determinism check.
#[derive(Debug, Clone)]
pub struct DeterminismReport {
    pub deterministic: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for DeterminismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deterministic {
            write!(f, "deterministic")
        } else {
            let items: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", items.join("; "))
        }
    }
}

/// Check the syntactic determinism conditions: at most one initial state, no
/// two pushes from the same state on the same label, no two pops or simples
/// from the same state on the same label and stack symbol, and no labeled
/// transition beside an internal move.
pub fn check_deterministic(vpa: &Vpa) -> DeterminismReport {
    let mut violations = Vec::new();
    if vpa.initial().len() > 1 {
        violations.push(Violation::MultiInitial {
            states: vpa.initial().iter().cloned().collect(),
        });
    }

    let mut pushes: BTreeMap<(&str, &str), Vec<&Transition>> = BTreeMap::new();
    let mut pops: BTreeMap<(&str, &str, Option<&str>), Vec<&Transition>> = BTreeMap::new();
    let mut simples: BTreeMap<(&str, &str), Vec<&Transition>> = BTreeMap::new();
    let mut internals: BTreeMap<&str, Vec<&Transition>> = BTreeMap::new();
    for t in vpa.transitions() {
        match &t.action {
            Action::Push { label, .. } => {
                pushes.entry((&t.from, label)).or_default().push(t);
            }
            Action::Pop { label, symbol } => {
                pops.entry((&t.from, label, symbol.as_deref()))
                    .or_default()
                    .push(t);
            }
            Action::Simple { label } => {
                simples.entry((&t.from, label)).or_default().push(t);
            }
            Action::Internal => internals.entry(&t.from).or_default().push(t),
        }
    }
    for group in pushes.values() {
        if group.len() > 1 {
            violations.push(Violation::PushConflict {
                first: group[0].clone(),
                second: group[1].clone(),
            });
        }
    }
    for group in pops.values().chain(simples.values()) {
        if group.len() > 1 {
            violations.push(Violation::PopSimpleConflict {
                first: group[0].clone(),
                second: group[1].clone(),
            });
        }
    }
    for group in internals.values() {
        if group.len() > 1 {
            violations.push(Violation::PopSimpleConflict {
                first: group[0].clone(),
                second: group[1].clone(),
            });
        }
    }
    for (state, group) in &internals {
        if let Some(labeled) = vpa
            .transitions()
            .iter()
            .find(|t| t.from == *state && !t.action.is_internal())
        {
            violations.push(Violation::EpsConflict {
                labeled: labeled.clone(),
                internal: group[0].clone(),
            });
        }
    }
    DeterminismReport {
        deterministic: violations.is_empty(),
        violations,
    }
}

fn require_deterministic(vpa: &Vpa, context: &str) -> Result<()> {
    let report = check_deterministic(vpa);
    if report.deterministic {
        Ok(())
    } else {
        Err(Error::NotDeterministic {
            context: context.to_string(),
            report,
        })
    }
}

/// States reachable from each state through internal moves alone (including
/// the state itself).
fn epsilon_closures(vpa: &Vpa) -> BTreeMap<String, BTreeSet<String>> {
    let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for t in vpa.transitions() {
        if t.action.is_internal() {
            edges.entry(&t.from).or_default().push(&t.to);
        }
    }
    let mut out = BTreeMap::new();
    for s in vpa.states() {
        let mut seen: BTreeSet<String> = BTreeSet::from([s.clone()]);
        let mut frontier = vec![s.as_str()];
        while let Some(cur) = frontier.pop() {
            for &nxt in edges.get(cur).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(nxt.to_string()) {
                    frontier.push(nxt);
                }
            }
        }
        out.insert(s.clone(), seen);
    }
    out
}

/// Equivalent automaton with no ε-moves and the same states: every labeled
/// transition is duplicated across the ε-closures of its endpoints, and the
/// initial set is closed.
pub fn remove_epsilon(vpa: &Vpa) -> Result<Vpa> {
    if !vpa.has_internal_moves() {
        return Ok(vpa.clone());
    }
    let closures = epsilon_closures(vpa);
    let mut reaches: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (r, set) in &closures {
        for s in set {
            reaches.entry(s).or_default().push(r);
        }
    }
    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for t in vpa.transitions() {
        if t.action.is_internal() {
            continue;
        }
        for &r in reaches.get(t.from.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
            for p in &closures[&t.to] {
                transitions.insert(Transition {
                    from: r.to_string(),
                    action: t.action.clone(),
                    to: p.clone(),
                });
            }
        }
    }
    let initial: BTreeSet<String> = vpa
        .initial()
        .iter()
        .flat_map(|s| closures[s].iter().cloned())
        .collect();
    Vpa::new(
        vpa.alphabet().clone(),
        vpa.states().iter().cloned(),
        initial,
        vpa.stack_symbols().iter().cloned(),
        transitions,
        vpa.finals().iter().cloned(),
    )
}

/// Equivalent deterministic automaton with no ε-moves: first contract
/// ε-cycles (merging their states), then splice out the remaining acyclic
/// ε-edges innermost first. State count never grows.
pub fn remove_epsilon_deterministic(vpa: &Vpa) -> Result<Vpa> {
    require_deterministic(vpa, "remove_epsilon_deterministic")?;
    if !vpa.has_internal_moves() {
        return Ok(vpa.clone());
    }

    // Internal moves of a deterministic automaton form a partial function.
    let eps_next: BTreeMap<&str, &str> = vpa
        .transitions()
        .iter()
        .filter(|t| t.action.is_internal())
        .map(|t| (t.from.as_str(), t.to.as_str()))
        .collect();

    // Find the (disjoint) cycles of the functional graph by path walking.
    let mut rep_of: BTreeMap<String, String> = BTreeMap::new();
    let mut in_cycle: BTreeSet<String> = BTreeSet::new();
    let mut color: BTreeMap<&str, u8> = BTreeMap::new(); // 1 on path, 2 done
    for start in vpa.states() {
        if color.contains_key(start.as_str()) {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut cur = start.as_str();
        loop {
            color.insert(cur, 1);
            path.push(cur);
            let Some(&next) = eps_next.get(cur) else { break };
            match color.get(next) {
                Some(1) => {
                    let pos = path.iter().position(|&s| s == next).unwrap();
                    let rep = path[pos..].iter().min().unwrap().to_string();
                    for s in &path[pos..] {
                        in_cycle.insert(s.to_string());
                        rep_of.insert(s.to_string(), rep.clone());
                    }
                    break;
                }
                Some(_) => break,
                None => cur = next,
            }
        }
        for s in path {
            color.insert(s, 2);
        }
    }

    let rep = |s: &str| -> String {
        rep_of.get(s).cloned().unwrap_or_else(|| s.to_string())
    };

    let mut states: BTreeSet<String> = vpa.states().iter().map(|s| rep(s)).collect();
    let mut finals: BTreeSet<String> = vpa.finals().iter().map(|s| rep(s)).collect();
    let mut initial: BTreeSet<String> = vpa.initial().iter().map(|s| rep(s)).collect();
    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for t in vpa.transitions() {
        // Cycle states carry only their ε-edge; those edges disappear with
        // the merge.
        if t.action.is_internal() && in_cycle.contains(&t.from) {
            continue;
        }
        transitions.insert(Transition {
            from: rep(&t.from),
            action: t.action.clone(),
            to: rep(&t.to),
        });
    }

    // Splice out the remaining (acyclic) ε-edges, innermost first.
    let innermost_eps = |transitions: &BTreeSet<Transition>| {
        transitions
            .iter()
            .filter(|t| t.action.is_internal())
            .find(|t| {
                !transitions
                    .iter()
                    .any(|u| u.from == t.to && u.action.is_internal())
            })
            .cloned()
    };
    while let Some(edge) = innermost_eps(&transitions) {
        transitions.remove(&edge);
        let copied: Vec<Transition> = transitions
            .iter()
            .filter(|t| t.from == edge.to)
            .map(|t| Transition {
                from: edge.from.clone(),
                action: t.action.clone(),
                to: t.to.clone(),
            })
            .collect();
        transitions.extend(copied);
        if initial.contains(&edge.from) && !finals.contains(&edge.from) {
            initial = BTreeSet::from([edge.to.clone()]);
        }
        if finals.contains(&edge.to) {
            finals.insert(edge.from.clone());
        }
    }

    states.extend(initial.iter().cloned());
    Vpa::new(
        vpa.alphabet().clone(),
        states,
        initial,
        vpa.stack_symbols().iter().cloned(),
        transitions,
        finals,
    )
}

fn paired_states(a: &Vpa, b: &Vpa) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for s in a.states() {
        for q in b.states() {
            if !out.insert(product_state_name(s, q)) {
                return Err(Error::NameCollision(product_state_name(s, q)));
            }
        }
    }
    Ok(out)
}

fn product_with_finals(
    a: &Vpa,
    b: &Vpa,
    finals: impl Fn(&str, &str) -> bool,
) -> Result<Vpa> {
    if !a.alphabet().partition_eq(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "product requires identical alphabet partitions ({} vs {})",
            a.alphabet(),
            b.alphabet()
        )));
    }
    let states = paired_states(a, b)?;
    let mut stack_symbols = BTreeSet::new();
    for z in a.stack_symbols() {
        for w in b.stack_symbols() {
            if !stack_symbols.insert(product_stack_name(z, w)) {
                return Err(Error::NameCollision(product_stack_name(z, w)));
            }
        }
    }

    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for ta in a.transitions() {
        let Some(label) = ta.action.label() else { continue };
        for tb in b.transitions() {
            if tb.action.label() != Some(label) {
                continue;
            }
            let from = product_state_name(&ta.from, &tb.from);
            let to = product_state_name(&ta.to, &tb.to);
            match (&ta.action, &tb.action) {
                (Action::Push { symbol: za, .. }, Action::Push { symbol: zb, .. }) => {
                    transitions.insert(Transition::push(
                        &from,
                        label,
                        &product_stack_name(za, zb),
                        &to,
                    ));
                }
                (
                    Action::Pop { symbol: Some(za), .. },
                    Action::Pop { symbol: Some(zb), .. },
                ) => {
                    transitions.insert(Transition::pop(
                        &from,
                        label,
                        &product_stack_name(za, zb),
                        &to,
                    ));
                }
                (Action::Pop { symbol: None, .. }, Action::Pop { symbol: None, .. }) => {
                    transitions.insert(Transition::pop_bottom(&from, label, &to));
                }
                (Action::Simple { .. }, Action::Simple { .. }) => {
                    transitions.insert(Transition::simple(&from, label, &to));
                }
                _ => {}
            }
        }
    }
    // Interleaved ε-moves: one side steps, the other stays put.
    for ta in a.transitions().iter().filter(|t| t.action.is_internal()) {
        for q in b.states() {
            transitions.insert(Transition::internal(
                &product_state_name(&ta.from, q),
                &product_state_name(&ta.to, q),
            ));
        }
    }
    for tb in b.transitions().iter().filter(|t| t.action.is_internal()) {
        for s in a.states() {
            transitions.insert(Transition::internal(
                &product_state_name(s, &tb.from),
                &product_state_name(s, &tb.to),
            ));
        }
    }

    let initial: BTreeSet<String> = a
        .initial()
        .iter()
        .flat_map(|s| b.initial().iter().map(move |q| product_state_name(s, q)))
        .collect();
    let final_states: BTreeSet<String> = a
        .states()
        .iter()
        .flat_map(|s| {
            b.states()
                .iter()
                .filter(|q| finals(s, q))
                .map(move |q| product_state_name(s, q))
        })
        .collect();
    Vpa::new(
        a.alphabet().clone(),
        states,
        initial,
        stack_symbols,
        transitions,
        final_states,
    )
}

/// The synchronous product: runs of the product project to runs of both
/// factors; a word is accepted iff both factors accept it.
pub fn product(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    product_with_finals(a, b, |s, q| a.finals().contains(s) && b.finals().contains(q))
}

/// `L(a) ∩ L(b)`, with exactly `|a| · |b|` states.
pub fn intersect(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    product(a, b)
}

/// Equivalent automaton that can consume every input word from every state.
/// Adds exactly one sink state (named `_sink` unless taken); determinism and
/// ε-freeness are preserved.
pub fn make_non_blocking(vpa: &Vpa) -> Result<Vpa> {
    let sink = crate::model::fresh_name("_sink", |n| vpa.states().contains(n));
    let alphabet = vpa.alphabet().clone();
    let mut stack_symbols = vpa.stack_symbols().clone();
    if stack_symbols.is_empty() && !alphabet.calls().is_empty() {
        // The construction needs some pushable symbol; mint one.
        stack_symbols.insert("_nb".to_string());
    }
    let fixed_z = stack_symbols.iter().next().cloned();

    let mut has_internal_out: BTreeSet<&str> = BTreeSet::new();
    let mut enabled_simple: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut enabled_call: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut enabled_pop: BTreeSet<(&str, &str, Option<&str>)> = BTreeSet::new();
    for t in vpa.transitions() {
        match &t.action {
            Action::Internal => {
                has_internal_out.insert(&t.from);
            }
            Action::Simple { label } => {
                enabled_simple.insert((&t.from, label));
            }
            Action::Push { label, .. } => {
                enabled_call.insert((&t.from, label));
            }
            Action::Pop { label, symbol } => {
                enabled_pop.insert((&t.from, label, symbol.as_deref()));
            }
        }
    }

    let mut transitions = vpa.transitions().clone();
    for s in vpa.states() {
        if has_internal_out.contains(s.as_str()) {
            continue;
        }
        for a in alphabet.simples() {
            if !enabled_simple.contains(&(s.as_str(), a.as_str())) {
                transitions.insert(Transition::simple(s, a, &sink));
            }
        }
        for a in alphabet.calls() {
            if !enabled_call.contains(&(s.as_str(), a.as_str())) {
                transitions.insert(Transition::push(s, a, fixed_z.as_ref().unwrap(), &sink));
            }
        }
        for a in alphabet.returns() {
            for z in stack_symbols.iter().map(Some).chain([None]) {
                if !enabled_pop.contains(&(s.as_str(), a.as_str(), z.map(String::as_str))) {
                    match z {
                        Some(z) => transitions.insert(Transition::pop(s, a, z, &sink)),
                        None => transitions.insert(Transition::pop_bottom(s, a, &sink)),
                    };
                }
            }
        }
    }
    for a in alphabet.simples() {
        transitions.insert(Transition::simple(&sink, a, &sink));
    }
    for a in alphabet.calls() {
        transitions.insert(Transition::push(&sink, a, fixed_z.as_ref().unwrap(), &sink));
    }
    for a in alphabet.returns() {
        for z in &stack_symbols {
            transitions.insert(Transition::pop(&sink, a, z, &sink));
        }
        transitions.insert(Transition::pop_bottom(&sink, a, &sink));
    }

    let mut states = vpa.states().clone();
    states.insert(sink);
    Vpa::new(
        alphabet,
        states,
        vpa.initial().iter().cloned(),
        stack_symbols,
        transitions,
        vpa.finals().iter().cloned(),
    )
}

/// Equivalent ε-free automaton, staying deterministic when the input is.
fn eps_free(vpa: &Vpa) -> Result<Vpa> {
    if !vpa.has_internal_moves() {
        Ok(vpa.clone())
    } else if check_deterministic(vpa).deterministic {
        remove_epsilon_deterministic(vpa)
    } else {
        remove_epsilon(vpa)
    }
}

/// `L(a) ∪ L(b)`: the product of the non-blocking completions, accepting when
/// either side accepts. The factors are normalized to ε-free form first (the
/// completion cannot unblock a state that only has ε-moves out), so the
/// result has at most `(n+1)(m+1)` states.
pub fn union(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    let na = make_non_blocking(&eps_free(a)?)?;
    let nb = make_non_blocking(&eps_free(b)?)?;
    product_with_finals(&na, &nb, |s, q| {
        na.finals().contains(s) || nb.finals().contains(q)
    })
}

/// The complement of a deterministic automaton: normalize to a deterministic
/// ε-free form, complete it, and swap the final states. At most `n+1` states.
pub fn complement(vpa: &Vpa) -> Result<Vpa> {
    require_deterministic(vpa, "complement")?;
    let base = remove_epsilon_deterministic(vpa)?;
    let complete = make_non_blocking(&base)?;
    let finals: BTreeSet<String> = complete
        .states()
        .iter()
        .filter(|s| !complete.finals().contains(*s))
        .cloned()
        .collect();
    Vpa::new(
        complete.alphabet().clone(),
        complete.states().iter().cloned(),
        complete.initial().iter().cloned(),
        complete.stack_symbols().iter().cloned(),
        complete.transitions().iter().cloned(),
        finals,
    )
}

/// `L(vpa)·B` for a set of single symbols `B ⊆ L`: duplicate every state `s`
/// as `s^`, divert `B`-transitions leaving final states to the duplicates,
/// and make the duplicates the only final states. At most `2n+2` states,
/// ε-free and non-blocking.
pub fn concat_suffix(vpa: &Vpa, suffix: &BTreeSet<String>) -> Result<Vpa> {
    for b in suffix {
        if !vpa.alphabet().contains(b) {
            return Err(Error::unknown("action symbol", b, "suffix set"));
        }
    }
    let base = remove_epsilon(vpa)?;
    let base = make_non_blocking(&base)?;

    let mut states = base.states().clone();
    let mut hat_of: BTreeMap<&str, String> = BTreeMap::new();
    for s in base.states() {
        let hat = crate::model::fresh_name(&hatted_name(s), |n| states.contains(n));
        states.insert(hat.clone());
        hat_of.insert(s, hat);
    }
    let in_suffix = |label: &str| suffix.contains(label);
    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for t in base.transitions() {
        let label = t.action.label().expect("base is ε-free");
        // From the base copy: divert suffix symbols leaving finals into the
        // hatted copy.
        if base.finals().contains(&t.from) && in_suffix(label) {
            transitions.insert(Transition {
                from: t.from.clone(),
                action: t.action.clone(),
                to: hat_of[t.to.as_str()].clone(),
            });
        } else {
            transitions.insert(t.clone());
        }
        // From the hatted copy: stay hatted exactly when the same move would
        // again read a suffix symbol out of a final base state.
        let hatted_to = if base.finals().contains(&t.from) && in_suffix(label) {
            hat_of[t.to.as_str()].clone()
        } else {
            t.to.clone()
        };
        transitions.insert(Transition {
            from: hat_of[t.from.as_str()].clone(),
            action: t.action.clone(),
            to: hatted_to,
        });
    }
    let finals: BTreeSet<String> = hat_of.values().cloned().collect();
    Vpa::new(
        base.alphabet().clone(),
        states,
        base.initial().iter().cloned(),
        base.stack_symbols().iter().cloned(),
        transitions,
        finals,
    )
}

/// Result of the emptiness check.
#[derive(Debug, Clone)]
pub struct Emptiness {
    pub empty: bool,
    /// An accepted word when the language is nonempty, validated by replay.
    pub witness: Option<Word>,
    pub stats: SaturationStats,
}

/// Decide `L(vpa) = ∅` by saturating the balanced-run relation and then
/// searching the surface graph it induces: moves between empty-stack
/// configurations (balanced excursions and pops on the bottom marker)
/// followed by a climb of unmatched pushes.
pub fn is_empty(vpa: &Vpa) -> Result<Emptiness> {
    let view = View::build(vpa);
    let n = view.state_names.len();
    let sat = saturate(&view, None);

    #[derive(Clone)]
    enum Edge {
        Balanced,
        Letter(u32),
    }

    // Phase 1: empty-stack configurations reachable from the initial states.
    let mut parent: Vec<Option<(u32, Edge)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for &s in &view.initial {
        if !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
    }
    let mut bottom_order: Vec<u32> = Vec::new();
    while let Some(p) = queue.pop_front() {
        bottom_order.push(p);
        // Single-letter pop edges first, so short witnesses come out first.
        for mv in &view.moves[p as usize] {
            if let Move::Pop {
                label,
                symbol: None,
                to,
            } = *mv
            {
                if !seen[to as usize] {
                    seen[to as usize] = true;
                    parent[to as usize] = Some((p, Edge::Letter(label)));
                    queue.push_back(to);
                }
            }
        }
        for &q in sat.successors(p) {
            if !seen[q as usize] {
                seen[q as usize] = true;
                parent[q as usize] = Some((p, Edge::Balanced));
                queue.push_back(q);
            }
        }
    }

    // Phase 2: climb unmatched pushes from any surface state. Pops on the
    // bottom marker can no longer fire above the surface.
    let mut climb_parent: Vec<Option<(u32, Edge)>> = vec![None; n];
    let mut climb_seen = vec![false; n];
    let mut climb_root: Vec<Option<u32>> = vec![None; n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for &p in &bottom_order {
        climb_seen[p as usize] = true;
        climb_root[p as usize] = Some(p);
        queue.push_back(p);
    }
    let mut hit: Option<u32> = bottom_order
        .iter()
        .copied()
        .find(|&p| view.finals[p as usize]);
    while hit.is_none() {
        let Some(p) = queue.pop_front() else { break };
        let visit = |q: u32,
                         edge: Edge,
                         climb_seen: &mut Vec<bool>,
                         climb_parent: &mut Vec<Option<(u32, Edge)>>,
                         climb_root: &mut Vec<Option<u32>>,
                         queue: &mut VecDeque<u32>|
         -> Option<u32> {
            if climb_seen[q as usize] {
                return None;
            }
            climb_seen[q as usize] = true;
            climb_parent[q as usize] = Some((p, edge));
            climb_root[q as usize] = climb_root[p as usize];
            queue.push_back(q);
            view.finals[q as usize].then_some(q)
        };
        for &q in sat.successors(p) {
            if let Some(f) = visit(
                q,
                Edge::Balanced,
                &mut climb_seen,
                &mut climb_parent,
                &mut climb_root,
                &mut queue,
            ) {
                hit = Some(f);
                break;
            }
        }
        if hit.is_some() {
            break;
        }
        for mv in &view.moves[p as usize] {
            if let Move::Push { label, to, .. } = *mv {
                if let Some(f) = visit(
                    to,
                    Edge::Letter(label),
                    &mut climb_seen,
                    &mut climb_parent,
                    &mut climb_root,
                    &mut queue,
                ) {
                    hit = Some(f);
                    break;
                }
            }
        }
    }

    let Some(final_state) = hit else {
        return Ok(Emptiness {
            empty: true,
            witness: None,
            stats: sat.stats,
        });
    };

    // Reconstruct: climb segment back to its surface root, then the surface
    // segment back to an initial state.
    let mut pieces_rev: Vec<Word> = Vec::new();
    let mut cur = final_state;
    while climb_root[cur as usize] != Some(cur) {
        let (prev, edge) = climb_parent[cur as usize].clone().expect("climb parent");
        pieces_rev.push(match edge {
            Edge::Balanced => sat.decode(prev, cur),
            Edge::Letter(l) => vec![view.labels[l as usize].clone()],
        });
        cur = prev;
    }
    while parent[cur as usize].is_some() {
        let (prev, edge) = parent[cur as usize].clone().expect("surface parent");
        pieces_rev.push(match edge {
            Edge::Balanced => sat.decode(prev, cur),
            Edge::Letter(l) => vec![view.labels[l as usize].clone()],
        });
        cur = prev;
    }
    let mut word: Word = Vec::new();
    for piece in pieces_rev.into_iter().rev() {
        word.extend(piece);
    }
    let word = erase(&word, &[INTERNAL]);
    if !accepts(vpa, &word)? {
        return Err(Error::Internal(format!(
            "emptiness witness `{}` is not accepted",
            crate::model::format_word(&word)
        )));
    }
    Ok(Emptiness {
        empty: false,
        witness: Some(word),
        stats: sat.stats,
    })
}
