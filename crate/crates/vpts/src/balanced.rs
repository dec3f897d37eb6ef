//! Saturation-based search for balanced runs, the two stack-normalizing
//! transformations, and the end-to-end `ioco`-style conformance check.
//!
//! A balanced run is a run `(p,⊥) ⇒σ (q,⊥)`. The search fills a matrix `R`
//! indexed by state pairs: a nonzero entry codes a word inducing a balanced
//! run between the pair, built from three constructors (a single simple or
//! internal step, the concatenation of two balanced runs through a midpoint,
//! and a push/pop pair wrapped around an inner balanced run). Entries are
//! never reset, so every pair enters the worklist at most once.

use std::collections::{BTreeSet, VecDeque};

use crate::alphabet::{SymbolKind, INTERNAL};
use crate::error::{Error, Result};
use crate::iovpts::{build_fault_model, cross_product, Iovpts};
use crate::model::{format_word, product_state_name, Action, Transition, Vpts, Word};
use crate::semantics::{reach, Configuration, Move, View};

/// Counters from one saturation run.
#[derive(Debug, Clone, Copy, Default)]
pub struct SaturationStats {
    /// Total pairs pushed onto the worklist.
    pub pairs_enqueued: usize,
    /// Largest number of times any single pair was enqueued (must be 1).
    pub max_enqueues_per_pair: u32,
    /// Pairs with a nonzero entry when the run stopped.
    pub nonzero_pairs: usize,
}

#[derive(Debug, Clone, Copy)]
enum Code {
    /// One simple or internal transition labeled `label`.
    Simple { label: u32 },
    /// Balanced run to `mid`, then balanced run from `mid`.
    Split { mid: u32 },
    /// `push` label, the balanced run between `inner_from` and `inner_to`
    /// (empty when they coincide), then `pop` label.
    Wrap {
        push: u32,
        inner_from: u32,
        inner_to: u32,
        pop: u32,
    },
}

pub(crate) struct Saturation {
    n: usize,
    r: Vec<u32>,
    codes: Vec<Code>,
    succ: Vec<Vec<u32>>,
    labels: Vec<String>,
    pub(crate) stats: SaturationStats,
}

impl Saturation {
    #[inline]
    fn idx(&self, p: u32, q: u32) -> usize {
        p as usize * self.n + q as usize
    }

    pub(crate) fn nonzero(&self, p: u32, q: u32) -> bool {
        self.r[self.idx(p, q)] != 0
    }

    /// States `q` with a balanced run from `p`, in discovery order.
    pub(crate) fn successors(&self, p: u32) -> &[u32] {
        &self.succ[p as usize]
    }

    /// The word coded at `(p,q)`; internal steps appear as `_tau` letters.
    /// Iterative so that long witnesses cannot overflow the call stack.
    pub(crate) fn decode(&self, p: u32, q: u32) -> Word {
        enum Item {
            Pair(u32, u32),
            Lit(u32),
        }
        let mut out = Vec::new();
        let mut work = vec![Item::Pair(p, q)];
        while let Some(item) = work.pop() {
            match item {
                Item::Lit(l) => out.push(self.labels[l as usize].clone()),
                Item::Pair(p, q) => {
                    let e = self.r[self.idx(p, q)];
                    assert!(e != 0, "decode of an empty entry");
                    match self.codes[(e - 1) as usize] {
                        Code::Simple { label } => out.push(self.labels[label as usize].clone()),
                        Code::Split { mid } => {
                            work.push(Item::Pair(mid, q));
                            work.push(Item::Pair(p, mid));
                        }
                        Code::Wrap {
                            push,
                            inner_from,
                            inner_to,
                            pop,
                        } => {
                            work.push(Item::Lit(pop));
                            if inner_from != inner_to {
                                work.push(Item::Pair(inner_from, inner_to));
                            }
                            work.push(Item::Lit(push));
                        }
                    }
                }
            }
        }
        out
    }
}

struct SatState {
    n: usize,
    r: Vec<u32>,
    codes: Vec<Code>,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
    counts: Vec<u8>,
    queue: VecDeque<(u32, u32)>,
    stats: SaturationStats,
}

impl SatState {
    fn set(&mut self, p: u32, q: u32, code: Code) {
        let idx = p as usize * self.n + q as usize;
        debug_assert_eq!(self.r[idx], 0);
        self.codes.push(code);
        self.r[idx] = self.codes.len() as u32;
        self.succ[p as usize].push(q);
        self.pred[q as usize].push(p);
        self.counts[idx] = self.counts[idx].saturating_add(1);
        self.stats.pairs_enqueued += 1;
        self.stats.max_enqueues_per_pair =
            self.stats.max_enqueues_per_pair.max(self.counts[idx] as u32);
        self.queue.push_back((p, q));
    }
}

/// Run the saturation over the indexed view. Pop transitions on the bottom
/// marker never take part in a level-uniform balanced run and are ignored;
/// callers that promise their absence enforce it themselves. Stops early once
/// `target` has a nonzero entry.
pub(crate) fn saturate(view: &View, target: Option<(u32, u32)>) -> Saturation {
    let n = view.state_names.len();
    let mut st = SatState {
        n,
        r: vec![0; n * n],
        codes: Vec::new(),
        succ: vec![Vec::new(); n],
        pred: vec![Vec::new(); n],
        counts: vec![0; n * n],
        queue: VecDeque::new(),
        stats: SaturationStats::default(),
    };

    // In[p]: pushes into p, as (source, label, symbol).
    // Out[p]: pops out of p, as (label, symbol, target).
    let mut in_pushes: Vec<Vec<(u32, u32, u16)>> = vec![Vec::new(); n];
    let mut out_pops: Vec<Vec<(u32, u16, u32)>> = vec![Vec::new(); n];

    for p in 0..n as u32 {
        for mv in &view.moves[p as usize] {
            match *mv {
                Move::Plain { label, to } => {
                    if p != to && st.r[p as usize * n + to as usize] == 0 {
                        st.set(p, to, Code::Simple { label });
                    }
                }
                Move::Pop {
                    label,
                    symbol: Some(z),
                    to,
                } => out_pops[p as usize].push((label, z, to)),
                Move::Pop { symbol: None, .. } => {}
                Move::Push { label, symbol, to } => {
                    in_pushes[to as usize].push((p, label, symbol));
                    // A push immediately followed by a matching pop is a
                    // balanced run on its own.
                    for mv2 in &view.moves[to as usize] {
                        if let Move::Pop {
                            label: b,
                            symbol: Some(w),
                            to: r2,
                        } = *mv2
                        {
                            if w == symbol && p != r2 && st.r[p as usize * n + r2 as usize] == 0 {
                                st.set(
                                    p,
                                    r2,
                                    Code::Wrap {
                                        push: label,
                                        inner_from: to,
                                        inner_to: to,
                                        pop: b,
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    loop {
        if let Some((ti, te)) = target {
            if st.r[ti as usize * n + te as usize] != 0 {
                break;
            }
        }
        let Some((p, q)) = st.queue.pop_front() else {
            break;
        };
        // New balanced runs ending at q: prefix a run that reaches p.
        let mut i = 0;
        while i < st.pred[p as usize].len() {
            let s = st.pred[p as usize][i];
            if s != q && st.r[s as usize * n + q as usize] == 0 {
                st.set(s, q, Code::Split { mid: p });
            }
            i += 1;
        }
        // New balanced runs starting at p: append a run leaving q.
        let mut i = 0;
        while i < st.succ[q as usize].len() {
            let t = st.succ[q as usize][i];
            if p != t && st.r[p as usize * n + t as usize] == 0 {
                st.set(p, t, Code::Split { mid: q });
            }
            i += 1;
        }
        // Wrap with a push into p and a matching pop out of q.
        for &(s, a, z) in &in_pushes[p as usize] {
            for &(b, w, t) in &out_pops[q as usize] {
                if w == z && s != t && st.r[s as usize * n + t as usize] == 0 {
                    st.set(
                        s,
                        t,
                        Code::Wrap {
                            push: a,
                            inner_from: p,
                            inner_to: q,
                            pop: b,
                        },
                    );
                }
            }
        }
    }

    st.stats.nonzero_pairs = st.r.iter().filter(|&&e| e != 0).count();
    Saturation {
        n,
        r: st.r,
        codes: st.codes,
        succ: st.succ,
        labels: view.labels.clone(),
        stats: st.stats,
    }
}

/// Result of [`find_balanced_run`].
#[derive(Debug, Clone)]
pub struct BalancedRunOutcome {
    /// A word inducing a balanced run, with internal moves spelled `_tau`;
    /// `None` when no balanced run exists.
    pub witness: Option<Word>,
    pub stats: SaturationStats,
}

/// Search for a word `σ` with `(from,⊥) ⇒σ (to,⊥)`.
///
/// Requires `from ≠ to` and a system without pop transitions on the bottom
/// marker (apply [`transform_no_empty_pops`] first when necessary).
pub fn find_balanced_run(vpts: &Vpts, from: &str, to: &str) -> Result<BalancedRunOutcome> {
    if !vpts.states().contains(from) {
        return Err(Error::unknown("state", from, "balanced-run source"));
    }
    if !vpts.states().contains(to) {
        return Err(Error::unknown("state", to, "balanced-run target"));
    }
    if from == to {
        return Err(Error::Precondition(
            "balanced-run endpoints must be distinct states".to_string(),
        ));
    }
    if vpts
        .transitions()
        .iter()
        .any(|t| matches!(t.action, Action::Pop { symbol: None, .. }))
    {
        return Err(Error::Precondition(
            "the system has pop transitions on the empty stack; eliminate them first".to_string(),
        ));
    }
    let view = View::build(vpts);
    let fi = view.state_index[from];
    let ti = view.state_index[to];
    let sat = saturate(&view, Some((fi, ti)));
    let witness = sat.nonzero(fi, ti).then(|| sat.decode(fi, ti));
    Ok(BalancedRunOutcome {
        witness,
        stats: sat.stats,
    })
}

fn fresh_state(vpts: &Vpts, base: &str) -> String {
    crate::model::fresh_name(base, |n| vpts.states().contains(n))
}

fn fresh_action(vpts: &Vpts, base: &str) -> String {
    crate::model::fresh_name(base, |n| vpts.alphabet().contains(n))
}

/// Result of [`transform_empty_stack`]: the extended system, the drain state
/// reachable exactly when a fail state is, and the minted pop symbol.
#[derive(Debug, Clone)]
pub struct EmptyStackTransform {
    pub vpts: Vpts,
    pub drain: String,
    pub pop_symbol: String,
}

/// Reduce "a fail state is reachable with any stack" to balanced-run
/// reachability: every state in `fail_states` gets an internal edge to a new
/// state `_f1` that pops the whole stack with a fresh return symbol `_pop1`
/// and steps to the drain `_f2` on the bottom marker. Names shift to the next
/// free spelling when taken.
pub fn transform_empty_stack(
    vpts: &Vpts,
    fail_states: &BTreeSet<String>,
) -> Result<EmptyStackTransform> {
    if fail_states.is_empty() {
        return Err(Error::Precondition(
            "transform_empty_stack needs at least one fail state".to_string(),
        ));
    }
    for s in fail_states {
        if !vpts.states().contains(s) {
            return Err(Error::unknown("state", s, "fail set"));
        }
    }
    let f1 = fresh_state(vpts, "_f1");
    let f2 = fresh_state(vpts, "_f2");
    let pop_symbol = fresh_action(vpts, "_pop1");
    let alphabet = vpts.alphabet().with_symbol(&pop_symbol, SymbolKind::Return)?;

    let mut states: BTreeSet<String> = vpts.states().clone();
    states.insert(f1.clone());
    states.insert(f2.clone());
    let mut transitions = vpts.transitions().clone();
    for s in fail_states {
        transitions.insert(Transition::internal(s, &f1));
    }
    for z in vpts.stack_symbols() {
        transitions.insert(Transition::pop(&f1, &pop_symbol, z, &f1));
    }
    transitions.insert(Transition::pop_bottom(&f1, &pop_symbol, &f2));

    let out = Vpts::new(
        alphabet,
        states,
        vpts.initial().iter().cloned(),
        vpts.stack_symbols().iter().cloned(),
        transitions,
    )?;
    Ok(EmptyStackTransform {
        vpts: out,
        drain: f2,
        pop_symbol,
    })
}

/// Result of [`transform_no_empty_pops`]: the rewritten system, its new
/// unique initial state, and the minted padding symbols.
#[derive(Debug, Clone)]
pub struct NoEmptyPopsTransform {
    pub vpts: Vpts,
    pub start: String,
    pub push_symbol: String,
    pub stack_symbol: String,
}

/// Remove pop transitions on the bottom marker: a new initial state `_s0`
/// pumps a fresh stack symbol `_Z2` with a fresh call symbol `_push2` and
/// connects internally to the old initial states, while every pop on the
/// bottom marker is redirected to pop `_Z2` instead.
pub fn transform_no_empty_pops(vpts: &Vpts) -> Result<NoEmptyPopsTransform> {
    let s0 = fresh_state(vpts, "_s0");
    let stack_symbol =
        crate::model::fresh_name("_Z2", |n| vpts.stack_symbols().contains(n));
    let push_symbol = fresh_action(vpts, "_push2");
    let alphabet = vpts.alphabet().with_symbol(&push_symbol, SymbolKind::Call)?;

    let mut states = vpts.states().clone();
    states.insert(s0.clone());
    let mut stack_symbols = vpts.stack_symbols().clone();
    stack_symbols.insert(stack_symbol.clone());

    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for t in vpts.transitions() {
        match &t.action {
            Action::Pop { label, symbol: None } => {
                transitions.insert(Transition::pop(&t.from, label, &stack_symbol, &t.to));
            }
            _ => {
                transitions.insert(t.clone());
            }
        }
    }
    transitions.insert(Transition::push(&s0, &push_symbol, &stack_symbol, &s0));
    for s in vpts.initial() {
        transitions.insert(Transition::internal(&s0, s));
    }

    let out = Vpts::new(alphabet, states, [s0.clone()], stack_symbols, transitions)?;
    Ok(NoEmptyPopsTransform {
        vpts: out,
        start: s0,
        push_symbol,
        stack_symbol,
    })
}

/// Sizes reported alongside a verdict: the transformed system the saturation
/// ran on and the number of worklist entries it consumed.
#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineStats {
    pub states: usize,
    pub transitions: usize,
    pub saturation_pairs: usize,
}

/// Outcome of a conformance check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub conforms: bool,
    /// An observable word demonstrating the failure; present iff the check
    /// failed, and always validated by replay before being returned.
    pub witness: Option<Word>,
    pub diagnostics: String,
    pub stats: PipelineStats,
}

/// Search the cross product of a tester and an implementation for a run into
/// a fail state, returning the observable word that reaches it.
pub(crate) fn fail_reachability(
    tester: &Iovpts,
    fail_state: &str,
    imp: &Iovpts,
) -> Result<(Option<Word>, PipelineStats)> {
    let cross = cross_product(tester, imp)?;
    let fail_states: BTreeSet<String> = imp
        .underlying()
        .states()
        .iter()
        .map(|q| product_state_name(fail_state, q))
        .filter(|s| cross.states().contains(s))
        .collect();
    let mut stats = PipelineStats {
        states: cross.states().len(),
        transitions: cross.transitions().len(),
        saturation_pairs: 0,
    };
    if fail_states.is_empty() {
        return Ok((None, stats));
    }
    let emptied = transform_empty_stack(&cross, &fail_states)?;
    let prepared = transform_no_empty_pops(&emptied.vpts)?;
    stats.states = prepared.vpts.states().len();
    stats.transitions = prepared.vpts.transitions().len();
    let outcome = find_balanced_run(&prepared.vpts, &prepared.start, &emptied.drain)?;
    stats.saturation_pairs = outcome.stats.pairs_enqueued;

    let Some(raw) = outcome.witness else {
        return Ok((None, stats));
    };
    let observable = crate::semantics::erase(
        &raw,
        &[
            prepared.push_symbol.as_str(),
            emptied.pop_symbol.as_str(),
            INTERNAL,
        ],
    );

    // Replay the observable word on the cross product and confirm it reaches
    // a fail configuration.
    let start: BTreeSet<Configuration> = cross
        .initial()
        .iter()
        .map(|s| Configuration::at(s.clone()))
        .collect();
    let reached = reach(&cross, &start, &observable)?;
    if !reached.iter().any(|c| fail_states.contains(&c.state)) {
        return Err(Error::Internal(format!(
            "extracted witness `{}` does not replay to a fail state",
            format_word(&observable)
        )));
    }
    Ok((Some(observable), stats))
}

/// Decide whether `imp` conforms to `spec` in the `ioco` sense: after every
/// observable trace of the specification, the implementation may only emit
/// outputs the specification also allows.
///
/// The pipeline contracts the specification, builds its fault model, takes
/// the cross product with the implementation, reduces fail-state
/// reachability to a balanced-run search, and extracts a validated witness
/// on failure.
pub fn check_ioco(spec: &Iovpts, imp: &Iovpts) -> Result<Verdict> {
    if !spec.alphabet().partition_eq(imp.alphabet())
        || spec.alphabet().inputs() != imp.alphabet().inputs()
        || spec.alphabet().outputs() != imp.alphabet().outputs()
    {
        return Err(Error::AlphabetMismatch(
            "specification and implementation must share the same alphabet and i/o view"
                .to_string(),
        ));
    }
    let contracted = crate::vpts_ops::contract(spec.underlying())?;
    let spec_c = Iovpts::new(contracted.result)?;
    let fault = build_fault_model(&spec_c)?;
    let (witness, stats) = fail_reachability(fault.model(), fault.fail_state(), imp)?;

    match witness {
        None => Ok(Verdict {
            conforms: true,
            witness: None,
            diagnostics: "no fail run exists in the fault-model cross product".to_string(),
            stats,
        }),
        Some(word) => {
            // The witness must be an implementation trace that leaves the
            // specification's language exactly at its final output symbol.
            if !crate::semantics::has_observable_trace(imp.underlying(), &word)? {
                return Err(Error::Internal(format!(
                    "witness `{}` is not an implementation trace",
                    format_word(&word)
                )));
            }
            if crate::semantics::has_observable_trace(spec.underlying(), &word)? {
                return Err(Error::Internal(format!(
                    "witness `{}` is a specification trace",
                    format_word(&word)
                )));
            }
            let valid_shape = match word.split_last() {
                Some((last, prefix)) => {
                    spec.alphabet().outputs().contains(last)
                        && crate::semantics::has_observable_trace(spec.underlying(), prefix)?
                }
                None => false,
            };
            if !valid_shape {
                return Err(Error::Internal(format!(
                    "witness `{}` is not a specification trace extended by one output",
                    format_word(&word)
                )));
            }
            Ok(Verdict {
                conforms: false,
                diagnostics: format!(
                    "implementation emits `{}` after a specified trace the specification does not allow",
                    word.last().cloned().unwrap_or_default()
                ),
                witness: Some(word),
                stats,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::PushdownAlphabet;
    use crate::model::Transition;

    fn w(s: &str) -> Word {
        if s.is_empty() {
            Vec::new()
        } else {
            s.split_whitespace().map(str::to_string).collect()
        }
    }

    fn simple_vpts(transitions: Vec<Transition>, states: &[&str]) -> Vpts {
        let alphabet =
            PushdownAlphabet::new(["a", "c"], ["b", "d"], ["i", "j"]).unwrap();
        Vpts::new(
            alphabet,
            states.iter().map(|s| s.to_string()),
            [states[0].to_string()],
            ["Z".into(), "W".into()],
            transitions,
        )
        .unwrap()
    }

    #[test]
    fn direct_simple_transition_is_a_balanced_run() {
        let m = simple_vpts(vec![Transition::simple("p", "i", "q")], &["p", "q"]);
        let out = find_balanced_run(&m, "p", "q").unwrap();
        assert_eq!(out.witness, Some(w("i")));
    }

    #[test]
    fn push_pop_pair_is_a_balanced_run() {
        let m = simple_vpts(
            vec![
                Transition::push("p", "a", "Z", "q"),
                Transition::pop("q", "b", "Z", "r"),
            ],
            &["p", "q", "r"],
        );
        let out = find_balanced_run(&m, "p", "r").unwrap();
        assert_eq!(out.witness, Some(w("a b")));
    }

    #[test]
    fn mismatched_stack_symbols_block_the_wrap() {
        let m = simple_vpts(
            vec![
                Transition::push("p", "a", "Z", "q"),
                Transition::pop("q", "b", "W", "r"),
            ],
            &["p", "q", "r"],
        );
        let out = find_balanced_run(&m, "p", "r").unwrap();
        assert!(out.witness.is_none());
    }

    #[test]
    fn nested_run_decodes_inner_word() {
        // p -a push Z-> q, q -i-> t, t -b pop Z-> r : witness a i b.
        let m = simple_vpts(
            vec![
                Transition::push("p", "a", "Z", "q"),
                Transition::simple("q", "i", "t"),
                Transition::pop("t", "b", "Z", "r"),
            ],
            &["p", "q", "t", "r"],
        );
        let out = find_balanced_run(&m, "p", "r").unwrap();
        assert_eq!(out.witness, Some(w("a i b")));
    }

    #[test]
    fn internal_moves_appear_as_tau() {
        let m = simple_vpts(vec![Transition::internal("p", "q")], &["p", "q"]);
        let out = find_balanced_run(&m, "p", "q").unwrap();
        assert_eq!(out.witness, Some(w("_tau")));
    }

    #[test]
    fn preconditions_are_enforced() {
        let m = simple_vpts(vec![Transition::pop_bottom("p", "b", "q")], &["p", "q"]);
        assert_eq!(
            find_balanced_run(&m, "p", "q").unwrap_err().code(),
            "precondition"
        );
        let m = simple_vpts(vec![], &["p", "q"]);
        assert_eq!(
            find_balanced_run(&m, "p", "p").unwrap_err().code(),
            "precondition"
        );
        assert_eq!(
            find_balanced_run(&m, "p", "zz").unwrap_err().code(),
            "unknown-id"
        );
    }

    #[test]
    fn empty_stack_transform_reaches_drain() {
        // fail is reached with stack [Z, Z]; after the transform, _f2 must be
        // reachable by a balanced run.
        let m = simple_vpts(
            vec![
                Transition::push("p", "a", "Z", "q"),
                Transition::push("q", "a", "Z", "fail"),
            ],
            &["p", "q", "fail"],
        );
        let emptied = transform_empty_stack(&m, &BTreeSet::from(["fail".to_string()])).unwrap();
        assert_eq!(emptied.drain, "_f2");
        let prepared = transform_no_empty_pops(&emptied.vpts).unwrap();
        let run = find_balanced_run(&prepared.vpts, &prepared.start, &emptied.drain).unwrap();
        let word = run.witness.expect("fail is reachable");
        // k pops with the fresh symbol: two for the Zs, one for the bottom.
        assert_eq!(word.iter().filter(|l| *l == "_pop1").count(), 3);
        assert_eq!(
            crate::semantics::erase(&word, &["_push2", "_pop1", INTERNAL]),
            w("a a")
        );
    }

    #[test]
    fn unreachable_fail_state_stays_unreachable() {
        let m = simple_vpts(vec![Transition::simple("p", "i", "q")], &["p", "q", "fail"]);
        let emptied = transform_empty_stack(&m, &BTreeSet::from(["fail".to_string()])).unwrap();
        let prepared = transform_no_empty_pops(&emptied.vpts).unwrap();
        assert!(
            find_balanced_run(&prepared.vpts, &prepared.start, &emptied.drain)
                .unwrap()
                .witness
                .is_none()
        );
    }

    #[test]
    fn fresh_names_shift_on_collision() {
        let m = simple_vpts(vec![], &["p", "_f1", "_f2"]);
        let emptied = transform_empty_stack(&m, &BTreeSet::from(["p".to_string()])).unwrap();
        assert_eq!(emptied.drain, "_f21");
        assert!(emptied.vpts.states().contains("_f11"));
    }

    #[test]
    fn bottom_pops_are_replaced() {
        let m = simple_vpts(
            vec![
                Transition::pop_bottom("p", "b", "q"),
                Transition::pop("p", "b", "Z", "q"),
            ],
            &["p", "q"],
        );
        let prepared = transform_no_empty_pops(&m).unwrap();
        let out = &prepared.vpts;
        assert_eq!(prepared.start, "_s0");
        assert!(out
            .transitions()
            .iter()
            .all(|t| !matches!(t.action, Action::Pop { symbol: None, .. })));
        // The original pop on Z is untouched, the bottom pop now pops _Z2.
        assert!(out.transitions().contains(&Transition::pop("p", "b", "_Z2", "q")));
        assert!(out.transitions().contains(&Transition::pop("p", "b", "Z", "q")));
    }
}
