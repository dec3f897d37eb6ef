//! Input/output transition systems, the `after`/`out` functions, fault-model
//! construction, cross products and the `passes` relation.

use std::collections::BTreeSet;

use crate::balanced::{fail_reachability, Verdict};
use crate::closures::product;
use crate::error::{Error, Result};
use crate::model::{Action, Transition, Vpts};
use crate::semantics::{reach, step, Configuration};
use crate::vpts_ops::{check_vpts_deterministic, induced_vpa, induced_vpts};

/// A transition system whose alphabet carries a complete input/output view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iovpts {
    vpts: Vpts,
}

impl Iovpts {
    pub fn new(vpts: Vpts) -> Result<Self> {
        if !vpts.alphabet().has_io_view() && !vpts.alphabet().is_empty() {
            return Err(Error::Schema(
                "an input/output system needs the input/output view on its alphabet".to_string(),
            ));
        }
        Ok(Iovpts { vpts })
    }

    pub fn underlying(&self) -> &Vpts {
        &self.vpts
    }

    pub fn alphabet(&self) -> &crate::alphabet::PushdownAlphabet {
        self.vpts.alphabet()
    }

    pub fn into_vpts(self) -> Vpts {
        self.vpts
    }

    /// The initial configurations `(s,⊥)`.
    pub fn initial_configurations(&self) -> BTreeSet<Configuration> {
        self.vpts
            .initial()
            .iter()
            .map(|s| Configuration::at(s.clone()))
            .collect()
    }
}

/// All configurations reachable from `from` by observable word `w`, with
/// internal moves absorbed.
pub fn after(m: &Iovpts, from: &BTreeSet<Configuration>, w: &[String]) -> Result<BTreeSet<Configuration>> {
    reach(&m.vpts, from, w)
}

/// The output symbols enabled at some configuration of `cs`. `after` already
/// closes over internal moves, so no extra closure happens here.
pub fn out(m: &Iovpts, cs: &BTreeSet<Configuration>) -> Result<BTreeSet<String>> {
    let mut enabled = BTreeSet::new();
    for c in cs {
        for l in m.alphabet().outputs() {
            if enabled.contains(l) {
                continue;
            }
            if !step(&m.vpts, c, Some(l))?.is_empty() {
                enabled.insert(l.clone());
            }
        }
    }
    Ok(enabled)
}

/// A tester with a distinguished sink `fail` state, reached exactly by the
/// behaviors a conforming implementation must avoid. Inputs and outputs are
/// reversed with respect to the specification it was built from.
#[derive(Debug, Clone)]
pub struct FaultModel {
    model: Iovpts,
    fail_state: String,
}

impl FaultModel {
    pub fn model(&self) -> &Iovpts {
        &self.model
    }

    pub fn fail_state(&self) -> &str {
        &self.fail_state
    }

    /// Assemble a fault model from parts, for loading saved testers. The fail
    /// state must exist and be a sink.
    pub fn from_parts(model: Iovpts, fail_state: String) -> Result<Self> {
        if !model.underlying().states().contains(&fail_state) {
            return Err(Error::unknown("state", &fail_state, "fault model"));
        }
        if model
            .underlying()
            .transitions()
            .iter()
            .any(|t| t.from == fail_state)
        {
            return Err(Error::Precondition(format!(
                "fail state `{fail_state}` must be a sink"
            )));
        }
        Ok(FaultModel { model, fail_state })
    }
}

/// Build the canonical complete fault model of a deterministic specification:
/// one fresh `_fail` sink plus, for every state and every output symbol the
/// specification does not allow there, a transition into `_fail`. Output
/// call symbols push a fixed stack symbol (the least one, minting `_nb` when
/// the specification has none); output return symbols get one fail transition
/// per uncovered stack symbol including the bottom marker.
pub fn build_fault_model(spec: &Iovpts) -> Result<FaultModel> {
    let det = check_vpts_deterministic(spec.underlying(), 0)?;
    if spec.underlying().has_internal_moves() || !det.vpa_report.deterministic {
        return Err(Error::NotDeterministic {
            context: "fault-model construction needs a deterministic specification".to_string(),
            report: det.vpa_report,
        });
    }
    let fail = crate::model::fresh_name("_fail", |n| spec.underlying().states().contains(n));
    let vpts = spec.underlying();
    let alphabet = vpts.alphabet();
    let outputs = alphabet.outputs().clone();

    let mut stack_symbols = vpts.stack_symbols().clone();
    let needs_push_symbol = outputs.iter().any(|l| alphabet.calls().contains(l));
    if stack_symbols.is_empty() && needs_push_symbol {
        stack_symbols.insert("_nb".to_string());
    }
    let fixed_z = stack_symbols.iter().next().cloned();

    let mut has_push: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut has_pop: BTreeSet<(&str, &str, Option<&str>)> = BTreeSet::new();
    let mut has_simple: BTreeSet<(&str, &str)> = BTreeSet::new();
    for t in vpts.transitions() {
        match &t.action {
            Action::Push { label, .. } => {
                has_push.insert((&t.from, label));
            }
            Action::Pop { label, symbol } => {
                has_pop.insert((&t.from, label, symbol.as_deref()));
            }
            Action::Simple { label } => {
                has_simple.insert((&t.from, label));
            }
            Action::Internal => unreachable!("checked above"),
        }
    }

    let mut transitions = vpts.transitions().clone();
    for s in vpts.states() {
        for l in &outputs {
            if alphabet.calls().contains(l) {
                if !has_push.contains(&(s.as_str(), l.as_str())) {
                    transitions.insert(Transition::push(s, l, fixed_z.as_ref().unwrap(), &fail));
                }
            } else if alphabet.returns().contains(l) {
                for z in stack_symbols.iter().map(Some).chain([None]) {
                    if !has_pop.contains(&(s.as_str(), l.as_str(), z.map(String::as_str))) {
                        match z {
                            Some(z) => transitions.insert(Transition::pop(s, l, z, &fail)),
                            None => transitions.insert(Transition::pop_bottom(s, l, &fail)),
                        };
                    }
                }
            } else if !has_simple.contains(&(s.as_str(), l.as_str())) {
                transitions.insert(Transition::simple(s, l, &fail));
            }
        }
    }

    let mut states = vpts.states().clone();
    states.insert(fail.clone());
    let tester = Vpts::new(
        alphabet.mirrored_io(),
        states,
        vpts.initial().iter().cloned(),
        stack_symbols,
        transitions,
    )?;
    Ok(FaultModel {
        model: Iovpts::new(tester)?,
        fail_state: fail,
    })
}

/// The cross product of two systems over the same action alphabet (their
/// input/output views may be mirrored): the transition system induced by the
/// product of the induced automata.
pub fn cross_product(t: &Iovpts, i: &Iovpts) -> Result<Vpts> {
    if !t.alphabet().io_compatible(i.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "cross product requires the same alphabet with equal or mirrored i/o".to_string(),
        ));
    }
    let p = product(&induced_vpa(t.underlying()), &induced_vpa(i.underlying()))?;
    induced_vpts(&p)
}

/// Does the implementation pass the tester: no run of the cross product
/// reaches the fail state. On failure the verdict carries the observable word
/// that reaches it, validated by replay.
pub fn passes(imp: &Iovpts, tester: &FaultModel) -> Result<Verdict> {
    let (witness, stats) = fail_reachability(&tester.model, &tester.fail_state, imp)?;
    Ok(match witness {
        None => Verdict {
            conforms: true,
            witness: None,
            diagnostics: "no run of the cross product reaches the fail state".to_string(),
            stats,
        },
        Some(word) => Verdict {
            conforms: false,
            diagnostics: format!(
                "the cross product reaches the fail state on `{}`",
                crate::model::format_word(&word)
            ),
            witness: Some(word),
            stats,
        },
    })
}
