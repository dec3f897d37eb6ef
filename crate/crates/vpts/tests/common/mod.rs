//! Shared helpers for the integration suites: corpus paths, seeded random
//! model generators, and oracles implemented independently of the library's
//! search code paths.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;
use vpts::doc::{load_model, Model};
use vpts::{
    Action, Configuration, Iovpts, Machine, PushdownAlphabet, Transition, Vpa, Vpts, Word,
};

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

pub fn load(name: &str) -> Model {
    let loaded = load_model(model_path(name)).unwrap_or_else(|e| panic!("loading {name}: {e}"));
    assert!(
        loaded.warnings.is_empty(),
        "unexpected warnings for {name}: {:?}",
        loaded.warnings
    );
    loaded.model
}

pub fn load_iovpts(name: &str) -> Iovpts {
    load(name).as_iovpts().unwrap().clone()
}

pub fn load_vpa(name: &str) -> Vpa {
    load(name).as_vpa().unwrap().clone()
}

pub fn w(s: &str) -> Word {
    if s.is_empty() {
        Vec::new()
    } else {
        s.split_whitespace().map(str::to_string).collect()
    }
}

/// All words over the alphabet up to the given length.
pub fn words_up_to(alphabet: &PushdownAlphabet, len: usize) -> Vec<Word> {
    let symbols: Vec<String> = alphabet.symbols().cloned().collect();
    let mut all: Vec<Word> = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for word in &frontier {
            for s in &symbols {
                let mut w = word.clone();
                w.push(s.clone());
                next.push(w);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

// ---------------------------------------------------------------------------
// Random model generation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
pub struct GenCfg {
    pub max_states: usize,
    pub n_calls: usize,
    pub n_returns: usize,
    pub n_simples: usize,
    pub max_stack: usize,
    pub transitions_per_state: f64,
    pub allow_internal: bool,
    pub allow_pop_bottom: bool,
}

impl GenCfg {
    /// Small automata for the closure oracle suite: at most 5 states, 2 stack
    /// symbols, 4 action symbols.
    pub fn closure() -> Self {
        GenCfg {
            max_states: 5,
            n_calls: 1,
            n_returns: 2,
            n_simples: 1,
            max_stack: 2,
            transitions_per_state: 2.0,
            allow_internal: true,
            allow_pop_bottom: true,
        }
    }

    /// Systems for the balanced-run suite: at most 8 states, 3 stack
    /// symbols, no pops on the bottom marker.
    pub fn balanced() -> Self {
        GenCfg {
            max_states: 8,
            n_calls: 2,
            n_returns: 2,
            n_simples: 1,
            max_stack: 3,
            transitions_per_state: 1.8,
            allow_internal: true,
            allow_pop_bottom: false,
        }
    }

    /// Systems for the contraction suite.
    pub fn contraction() -> Self {
        GenCfg {
            max_states: 6,
            n_calls: 1,
            n_returns: 2,
            n_simples: 1,
            max_stack: 2,
            transitions_per_state: 2.0,
            allow_internal: true,
            allow_pop_bottom: true,
        }
    }

    pub fn alphabet(&self) -> PushdownAlphabet {
        PushdownAlphabet::new(
            (0..self.n_calls).map(|k| format!("c{k}")),
            (0..self.n_returns).map(|k| format!("r{k}")),
            (0..self.n_simples).map(|k| format!("i{k}")),
        )
        .unwrap()
    }
}

pub struct RawModel {
    pub alphabet: PushdownAlphabet,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub stack: Vec<String>,
    pub transitions: Vec<Transition>,
}

fn random_raw(rng: &mut StdRng, cfg: &GenCfg) -> RawModel {
    let n = rng.gen_range(2..=cfg.max_states);
    let states: Vec<String> = (0..n).map(|k| format!("p{k}")).collect();
    let g = rng.gen_range(1..=cfg.max_stack);
    let stack: Vec<String> = (0..g).map(|k| format!("Z{k}")).collect();
    let alphabet = cfg.alphabet();
    let calls: Vec<String> = alphabet.calls().iter().cloned().collect();
    let returns: Vec<String> = alphabet.returns().iter().cloned().collect();
    let simples: Vec<String> = alphabet.simples().iter().cloned().collect();

    let n_transitions = ((n as f64) * cfg.transitions_per_state).round() as usize;
    let mut transitions = Vec::new();
    for _ in 0..n_transitions {
        let from = &states[rng.gen_range(0..n)];
        let to = &states[rng.gen_range(0..n)];
        let family = rng.gen_range(0..100);
        if family < 30 && !calls.is_empty() {
            let label = &calls[rng.gen_range(0..calls.len())];
            let z = &stack[rng.gen_range(0..g)];
            transitions.push(Transition::push(from, label, z, to));
        } else if family < 65 && !returns.is_empty() {
            let label = &returns[rng.gen_range(0..returns.len())];
            if cfg.allow_pop_bottom && rng.gen_bool(0.3) {
                transitions.push(Transition::pop_bottom(from, label, to));
            } else {
                let z = &stack[rng.gen_range(0..g)];
                transitions.push(Transition::pop(from, label, z, to));
            }
        } else if family < 90 && !simples.is_empty() {
            let label = &simples[rng.gen_range(0..simples.len())];
            transitions.push(Transition::simple(from, label, to));
        } else if cfg.allow_internal && from != to {
            transitions.push(Transition::internal(from, to));
        }
    }
    let initial = vec![states[0].clone()];
    RawModel {
        alphabet,
        states,
        initial,
        stack,
        transitions,
    }
}

/// A random automaton, possibly nondeterministic and with ε-moves.
pub fn random_vpa(rng: &mut StdRng, cfg: &GenCfg) -> Vpa {
    let raw = random_raw(rng, cfg);
    let finals: Vec<String> = raw
        .states
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    Vpa::new(
        raw.alphabet,
        raw.states,
        raw.initial,
        raw.stack,
        raw.transitions,
        finals,
    )
    .expect("generated automaton is well-formed")
}

/// A random deterministic automaton; a state carrying an ε-move carries
/// nothing else.
pub fn random_deterministic_vpa(rng: &mut StdRng, cfg: &GenCfg, with_eps: bool) -> Vpa {
    let n = rng.gen_range(2..=cfg.max_states);
    let states: Vec<String> = (0..n).map(|k| format!("p{k}")).collect();
    let g = rng.gen_range(1..=cfg.max_stack);
    let stack: Vec<String> = (0..g).map(|k| format!("Z{k}")).collect();
    let alphabet = cfg.alphabet();

    let mut transitions = Vec::new();
    for from in &states {
        if with_eps && rng.gen_bool(0.2) {
            let to = &states[rng.gen_range(0..n)];
            transitions.push(Transition::internal(from, to));
            continue;
        }
        for label in alphabet.calls() {
            if rng.gen_bool(0.5) {
                let z = &stack[rng.gen_range(0..g)];
                let to = &states[rng.gen_range(0..n)];
                transitions.push(Transition::push(from, label, z, to));
            }
        }
        for label in alphabet.returns() {
            for z in stack.iter().map(Some).chain([None]) {
                if rng.gen_bool(0.4) {
                    let to = &states[rng.gen_range(0..n)];
                    transitions.push(match z {
                        Some(z) => Transition::pop(from, label, z, to),
                        None => Transition::pop_bottom(from, label, to),
                    });
                }
            }
        }
        for label in alphabet.simples() {
            if rng.gen_bool(0.5) {
                let to = &states[rng.gen_range(0..n)];
                transitions.push(Transition::simple(from, label, to));
            }
        }
    }
    let finals: Vec<String> = states
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    Vpa::new(
        alphabet,
        states.clone(),
        [states[0].clone()],
        stack,
        transitions,
        finals,
    )
    .expect("generated automaton is well-formed")
}

/// A random transition system (internal moves allowed, self-loops avoided).
pub fn random_vpts(rng: &mut StdRng, cfg: &GenCfg) -> Vpts {
    let raw = random_raw(rng, cfg);
    Vpts::new(
        raw.alphabet,
        raw.states,
        raw.initial,
        raw.stack,
        raw.transitions,
    )
    .expect("generated system is well-formed")
}

// ---------------------------------------------------------------------------
// Independent configuration-search oracle
// ---------------------------------------------------------------------------

/// Plain breadth-first search over configurations with a stack-depth bound,
/// written directly against the model's transition set. Returns the states
/// reached with an empty stack from `(from, ⊥)`.
pub fn bfs_empty_stack_reach<M: Machine>(model: &M, from: &str, stack_bound: usize) -> BTreeSet<String> {
    let states: Vec<&String> = model.states().iter().collect();
    let index = |s: &str| states.iter().position(|t| t.as_str() == s).unwrap();
    let stack_names: Vec<&String> = model.stack_symbols().iter().collect();
    let sym = |z: &str| stack_names.iter().position(|t| t.as_str() == z).unwrap() as u8;

    let mut by_source: Vec<Vec<&Transition>> = vec![Vec::new(); states.len()];
    for t in model.transitions() {
        by_source[index(&t.from)].push(t);
    }

    let start = (index(from), Vec::<u8>::new());
    let mut seen: HashSet<(usize, Vec<u8>)> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<(usize, Vec<u8>)> = VecDeque::from([start]);
    let mut reached = BTreeSet::from([from.to_string()]);
    while let Some((state, stack)) = queue.pop_front() {
        for t in &by_source[state] {
            let next = match &t.action {
                Action::Push { symbol, .. } => {
                    if stack.len() >= stack_bound {
                        continue;
                    }
                    let mut s = stack.clone();
                    s.push(sym(symbol));
                    (index(&t.to), s)
                }
                Action::Pop { symbol: Some(symbol), .. } => {
                    if stack.last() != Some(&sym(symbol)) {
                        continue;
                    }
                    (index(&t.to), stack[..stack.len() - 1].to_vec())
                }
                Action::Pop { symbol: None, .. } => {
                    if !stack.is_empty() {
                        continue;
                    }
                    (index(&t.to), Vec::new())
                }
                Action::Simple { .. } | Action::Internal => (index(&t.to), stack.clone()),
            };
            if seen.insert(next.clone()) {
                if next.1.is_empty() {
                    reached.insert(states[next.0].clone());
                }
                queue.push_back(next);
            }
        }
    }
    reached
}

/// Replay a raw witness (observable symbols and `_tau`) and check it induces
/// a balanced run between the two states.
pub fn witness_is_balanced_run(model: &Vpts, from: &str, to: &str, word: &[String]) -> bool {
    vpts::replay(model, &Configuration::at(from), word)
        .unwrap()
        .contains(&Configuration::at(to))
}
