//! Operations on transition systems: determinism checking, the contraction
//! construction, and the conversions between systems and automata.
//!
//! Contraction removes pop transitions that no reachable configuration can
//! ever fire. Reachability of `(state, top-of-stack)` slots is computed with
//! an implicit context-free grammar over nonterminal triples `[s, Z, p]`
//! ("from `s` with `Z` on top, control returns to `p` when `Z` is popped");
//! only two relations of that grammar matter and are computed directly: the
//! triples that can derive a terminal-only string, and the triples that can
//! appear leftmost in a derivation rooted at an initial state.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::closures::{check_deterministic, DeterminismReport};
use crate::error::{Error, Result};
use crate::model::{Action, Transition, Vpa, Vpts};
use crate::semantics::{bfs_configurations, BfsLimits, BfsOutcome, EnumLimits, View};

/// The automaton induced by a transition system: identical transitions with
/// `ς` read as `ε`, every state final.
pub fn induced_vpa(vpts: &Vpts) -> Vpa {
    Vpa::new(
        vpts.alphabet().without_io(),
        vpts.states().iter().cloned(),
        vpts.initial().iter().cloned(),
        vpts.stack_symbols().iter().cloned(),
        vpts.transitions().iter().cloned(),
        vpts.states().iter().cloned(),
    )
    .expect("a valid transition system induces a valid automaton")
}

/// The transition system induced by an automaton whose states are all final.
/// `ε`-self-loops, which are semantically vacuous, are dropped.
pub fn induced_vpts(vpa: &Vpa) -> Result<Vpts> {
    if vpa.finals() != vpa.states() {
        return Err(Error::Precondition(
            "a transition system is induced only by an automaton with all states final"
                .to_string(),
        ));
    }
    Vpts::new(
        vpa.alphabet().clone(),
        vpa.states().iter().cloned(),
        vpa.initial().iter().cloned(),
        vpa.stack_symbols().iter().cloned(),
        vpa.transitions()
            .iter()
            .filter(|t| !(t.action.is_internal() && t.from == t.to))
            .cloned(),
    )
}

/// Outcome of [`check_vpts_deterministic`].
#[derive(Debug, Clone)]
pub struct VptsDeterminism {
    /// The bounded semantic verdict: every observable word up to the bound
    /// leads to at most one configuration.
    pub deterministic: bool,
    /// The sufficient syntactic condition: no internal moves and a
    /// deterministic induced automaton.
    pub syntactic: bool,
    /// Report from the induced automaton's determinism check.
    pub vpa_report: DeterminismReport,
}

/// Two-layer determinism check for a transition system: the syntactic
/// sufficient condition, plus a bounded semantic check enumerating observable
/// words up to `max_len` and demanding a unique reached configuration each.
pub fn check_vpts_deterministic(vpts: &Vpts, max_len: usize) -> Result<VptsDeterminism> {
    let vpa_report = check_deterministic(&induced_vpa(vpts));
    let syntactic = !vpts.has_internal_moves() && vpa_report.deterministic;

    let limits = EnumLimits::default();
    let view = View::build(vpts);
    let letters: Vec<u32> = (0..view.labels.len() as u32)
        .filter(|&l| l != view.internal_label)
        .collect();
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
    view.close(&mut start);
    spend(start.len())?;
    let mut deterministic = start.len() <= 1;
    let mut frontier = vec![start];
    'outer: for _ in 0..max_len {
        let mut next_frontier = Vec::new();
        for set in &frontier {
            for &letter in &letters {
                let mut next = view.step_all(set, letter);
                view.close(&mut next);
                if next.is_empty() {
                    continue;
                }
                spend(next.len())?;
                if next.len() > 1 {
                    deterministic = false;
                    break 'outer;
                }
                next_frontier.push(next);
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    Ok(VptsDeterminism {
        deterministic,
        syntactic,
        vpa_report,
    })
}

/// Nonterminal of the implicit grammar. `Bottom(s)` is `[s,⊥,−]`;
/// `Inner(s,z,p)` is `[s,Z,p]` with `Z` a real stack symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nt {
    Bottom(u32),
    Inner(u32, u16, u32),
}

struct Grammar<'a> {
    view: &'a View,
    /// Nonterminals occurring leftmost in some derivation from the start.
    leftmost: HashSet<Nt>,
}

impl<'a> Grammar<'a> {
    fn build(view: &'a View) -> Grammar<'a> {
        let n = view.state_names.len() as u32;

        // Discover the nonterminal space from the initial symbols.
        let mut reachable: HashSet<Nt> = HashSet::new();
        let mut work: VecDeque<Nt> = VecDeque::new();
        let add = |nt: Nt, reachable: &mut HashSet<Nt>, work: &mut VecDeque<Nt>| {
            if reachable.insert(nt) {
                work.push_back(nt);
            }
        };
        for &s in &view.initial {
            add(Nt::Bottom(s), &mut reachable, &mut work);
        }
        while let Some(nt) = work.pop_front() {
            let s = match nt {
                Nt::Bottom(s) => s,
                Nt::Inner(s, _, _) => s,
            };
            for mv in &view.moves[s as usize] {
                match *mv {
                    crate::semantics::Move::Push { symbol, to, .. } => {
                        for r in 0..n {
                            add(Nt::Inner(to, symbol, r), &mut reachable, &mut work);
                            let second = match nt {
                                Nt::Bottom(_) => Nt::Bottom(r),
                                Nt::Inner(_, z, p) => Nt::Inner(r, z, p),
                            };
                            add(second, &mut reachable, &mut work);
                        }
                    }
                    crate::semantics::Move::Plain { to, .. } => {
                        let child = match nt {
                            Nt::Bottom(_) => Nt::Bottom(to),
                            Nt::Inner(_, z, p) => Nt::Inner(to, z, p),
                        };
                        add(child, &mut reachable, &mut work);
                    }
                    crate::semantics::Move::Pop { symbol, to, .. } => match (nt, symbol) {
                        (Nt::Bottom(_), None) => {
                            add(Nt::Bottom(to), &mut reachable, &mut work);
                        }
                        _ => {
                            // An inner pop production is terminal-only; a
                            // mismatched pop yields no production.
                        }
                    },
                }
            }
        }

        // Terminal-deriving nonterminals, by fixpoint sweeps. Bottom triples
        // never qualify: each of their productions keeps a bottom triple.
        let mut gen: HashSet<Nt> = HashSet::new();
        for &nt in &reachable {
            if let Nt::Inner(s, z, p) = nt {
                let direct = view.moves[s as usize].iter().any(|mv| {
                    matches!(*mv, crate::semantics::Move::Pop { symbol: Some(w), to, .. }
                        if w == z && to == p)
                });
                if direct {
                    gen.insert(nt);
                }
            }
        }
        loop {
            let mut changed = false;
            for &nt in &reachable {
                if gen.contains(&nt) {
                    continue;
                }
                let Nt::Inner(s, z, p) = nt else { continue };
                let mut productive = false;
                for mv in &view.moves[s as usize] {
                    match *mv {
                        crate::semantics::Move::Plain { to, .. } => {
                            if gen.contains(&Nt::Inner(to, z, p)) {
                                productive = true;
                                break;
                            }
                        }
                        crate::semantics::Move::Push { symbol, to, .. } => {
                            for r in 0..n {
                                if gen.contains(&Nt::Inner(to, symbol, r))
                                    && gen.contains(&Nt::Inner(r, z, p))
                                {
                                    productive = true;
                                    break;
                                }
                            }
                            if productive {
                                break;
                            }
                        }
                        crate::semantics::Move::Pop { .. } => {}
                    }
                }
                if productive {
                    gen.insert(nt);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // Leftmost-reachable nonterminals.
        let mut leftmost: HashSet<Nt> = HashSet::new();
        let mut work: VecDeque<Nt> = VecDeque::new();
        for &s in &view.initial {
            let nt = Nt::Bottom(s);
            if leftmost.insert(nt) {
                work.push_back(nt);
            }
        }
        while let Some(nt) = work.pop_front() {
            let s = match nt {
                Nt::Bottom(s) => s,
                Nt::Inner(s, _, _) => s,
            };
            let add = |child: Nt, leftmost: &mut HashSet<Nt>, work: &mut VecDeque<Nt>| {
                if leftmost.insert(child) {
                    work.push_back(child);
                }
            };
            for mv in &view.moves[s as usize] {
                match *mv {
                    crate::semantics::Move::Push { symbol, to, .. } => {
                        for r in 0..n {
                            let first = Nt::Inner(to, symbol, r);
                            add(first, &mut leftmost, &mut work);
                            if gen.contains(&first) {
                                let second = match nt {
                                    Nt::Bottom(_) => Nt::Bottom(r),
                                    Nt::Inner(_, z, p) => Nt::Inner(r, z, p),
                                };
                                add(second, &mut leftmost, &mut work);
                            }
                        }
                    }
                    crate::semantics::Move::Plain { to, .. } => {
                        let child = match nt {
                            Nt::Bottom(_) => Nt::Bottom(to),
                            Nt::Inner(_, z, p) => Nt::Inner(to, z, p),
                        };
                        add(child, &mut leftmost, &mut work);
                    }
                    crate::semantics::Move::Pop { symbol, to, .. } => {
                        if matches!(nt, Nt::Bottom(_)) && symbol.is_none() {
                            add(Nt::Bottom(to), &mut leftmost, &mut work);
                        }
                    }
                }
            }
        }

        Grammar { view, leftmost }
    }

    /// `(state, top-of-stack)` slots that some reachable configuration
    /// realizes; `None` is the empty stack.
    fn reachable_tops(&self) -> HashSet<(u32, Option<u16>)> {
        self.leftmost
            .iter()
            .map(|nt| match *nt {
                Nt::Bottom(s) => (s, None),
                Nt::Inner(s, z, _) => (s, Some(z)),
            })
            .collect()
    }

    fn keeps(&self, t: &Transition) -> bool {
        let s = self.view.state_index[&t.from];
        match &t.action {
            Action::Pop { symbol, .. } => {
                let q = self.view.state_index[&t.to];
                match symbol {
                    Some(z) => {
                        let zi = self
                            .view
                            .stack_names
                            .iter()
                            .position(|n| n == z)
                            .expect("validated symbol") as u16;
                        self.leftmost.contains(&Nt::Inner(s, zi, q))
                    }
                    None => self.leftmost.contains(&Nt::Bottom(s)),
                }
            }
            _ => self
                .leftmost
                .iter()
                .any(|nt| matches!(*nt, Nt::Bottom(x) | Nt::Inner(x, _, _) if x == s)),
        }
    }
}

/// Result of [`contract`].
#[derive(Debug, Clone)]
pub struct ContractionReport {
    pub result: Vpts,
    pub removed_transitions: BTreeSet<Transition>,
    pub removed_states: BTreeSet<String>,
}

/// Build an equivalent contracted system: every pop transition of the result
/// is fired by some reachable configuration, traces are preserved exactly,
/// and determinism is preserved.
pub fn contract(vpts: &Vpts) -> Result<ContractionReport> {
    let view = View::build(vpts);
    let grammar = Grammar::build(&view);

    let kept: BTreeSet<Transition> = vpts
        .transitions()
        .iter()
        .filter(|t| grammar.keeps(t))
        .cloned()
        .collect();

    // Prune states unreachable in the graph of kept transitions.
    let mut live: BTreeSet<String> = vpts.initial().iter().cloned().collect();
    let mut frontier: Vec<String> = live.iter().cloned().collect();
    let mut by_source: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for t in &kept {
        by_source.entry(&t.from).or_default().push(&t.to);
    }
    while let Some(s) = frontier.pop() {
        for &to in by_source.get(s.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
            if live.insert(to.to_string()) {
                frontier.push(to.to_string());
            }
        }
    }
    drop(by_source);
    let states: BTreeSet<String> = vpts
        .states()
        .iter()
        .filter(|s| live.contains(s.as_str()))
        .cloned()
        .collect();
    let transitions: BTreeSet<Transition> = kept
        .into_iter()
        .filter(|t| live.contains(t.from.as_str()) && live.contains(t.to.as_str()))
        .collect();

    let removed_transitions: BTreeSet<Transition> = vpts
        .transitions()
        .iter()
        .filter(|t| !transitions.contains(*t))
        .cloned()
        .collect();
    let removed_states: BTreeSet<String> = vpts
        .states()
        .iter()
        .filter(|s| !states.contains(*s))
        .cloned()
        .collect();

    let result = Vpts::new(
        vpts.alphabet().clone(),
        states,
        vpts.initial().iter().cloned(),
        vpts.stack_symbols().iter().cloned(),
        transitions,
    )?;
    Ok(ContractionReport {
        result,
        removed_transitions,
        removed_states,
    })
}

/// Is every pop transition fired by some reachable configuration?
///
/// `budget = 0` runs the exact grammar-based check. A positive budget runs a
/// bounded configuration search instead and fails with a budget error when
/// the exploration is cut short while unwitnessed pops remain.
pub fn is_contracted(vpts: &Vpts, budget: usize) -> Result<bool> {
    let view = View::build(vpts);
    let pops: Vec<(&Transition, u32, Option<u16>)> = vpts
        .transitions()
        .iter()
        .filter(|t| matches!(t.action, Action::Pop { .. }))
        .map(|t| {
            let s = view.state_index[&t.from];
            let z = match &t.action {
                Action::Pop { symbol: Some(z), .. } => Some(
                    view.stack_names
                        .iter()
                        .position(|n| n == z)
                        .expect("validated symbol") as u16,
                ),
                _ => None,
            };
            (t, s, z)
        })
        .collect();
    if pops.is_empty() {
        return Ok(true);
    }

    if budget == 0 {
        let grammar = Grammar::build(&view);
        let tops = grammar.reachable_tops();
        return Ok(pops.iter().all(|(_, s, z)| tops.contains(&(*s, *z))));
    }

    let outcome = bfs_configurations(
        &view,
        view.initial_configs(),
        BfsLimits {
            stack_bound: usize::MAX,
            config_budget: budget,
        },
    );
    let (set, complete) = match outcome {
        BfsOutcome::Exhausted(set) => (set, true),
        BfsOutcome::BudgetHit(set) => (set, false),
    };
    let tops: HashSet<(u32, Option<u16>)> = set
        .iter()
        .map(|(s, stack)| (*s, stack.last().copied()))
        .collect();
    let all_witnessed = pops.iter().all(|(_, s, z)| tops.contains(&(*s, *z)));
    if all_witnessed {
        Ok(true)
    } else if complete {
        Ok(false)
    } else {
        Err(Error::BudgetExceeded { budget })
    }
}
