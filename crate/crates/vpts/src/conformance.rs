//! The general `(D,F)` visible-conformance relation: an implementation
//! conforms when its observable traces inside the "desired" language `D` are
//! all specified, and none of its observable traces inside the "forbidden"
//! language `F` is specified. Conformance is decided through the unique
//! complete test suite `T = (D ∩ comp otr(S)) ∪ (F ∩ otr(S))`.

use crate::balanced::{PipelineStats, Verdict};
use crate::closures::{
    check_deterministic, complement, concat_suffix, intersect, is_empty, union,
};
use crate::error::{Error, Result};
use crate::iovpts::Iovpts;
use crate::model::{format_word, Vpa};
use crate::semantics::has_observable_trace;
use crate::vpts_ops::{contract, induced_vpa};

/// The pair of languages a conformance check is relative to, both given as
/// deterministic automata over the models' action alphabet.
#[derive(Debug, Clone)]
pub struct ConformanceSpec {
    pub desired: Vpa,
    pub forbidden: Vpa,
}

impl ConformanceSpec {
    pub fn new(desired: Vpa, forbidden: Vpa) -> Result<Self> {
        if !desired.alphabet().partition_eq(forbidden.alphabet()) {
            return Err(Error::AlphabetMismatch(
                "desired and forbidden languages must share the alphabet".to_string(),
            ));
        }
        Ok(ConformanceSpec { desired, forbidden })
    }

    /// The instance whose conformance relation coincides with the
    /// `ioco`-style relation: `D = otr(spec)·L_U`, `F = ∅`.
    pub fn for_ioco(spec: &Iovpts) -> Result<Self> {
        let desired = observable_suffix_language(spec, spec.alphabet().outputs())?;
        let forbidden = Vpa::empty_language(desired.alphabet().clone())?;
        ConformanceSpec::new(desired, forbidden)
    }
}

/// The automaton accepting `otr(spec)·B` for a one-symbol suffix set `B`, a
/// common shape for desired-behavior languages.
pub fn observable_suffix_language(
    spec: &Iovpts,
    suffix: &std::collections::BTreeSet<String>,
) -> Result<Vpa> {
    let contracted = contract(spec.underlying())?;
    concat_suffix(&induced_vpa(&contracted.result), suffix)
}

/// A complete test suite: deterministic, non-blocking, ε-free, accepting
/// exactly the faulty observable behaviors.
#[derive(Debug, Clone)]
pub struct TestSuiteVpa {
    suite: Vpa,
    state_bound: usize,
}

impl TestSuiteVpa {
    pub fn suite(&self) -> &Vpa {
        &self.suite
    }

    /// The bound `(n_S·n_F + 1)(n_S·n_D + n_D + 1)` the construction is
    /// guaranteed to respect, with `n_S` the contracted specification size.
    pub fn state_bound(&self) -> usize {
        self.state_bound
    }
}

fn deterministic_spec_vpa(spec: &Iovpts, context: &str) -> Result<Vpa> {
    let contracted = contract(spec.underlying())?.result;
    let vpa = induced_vpa(&contracted);
    let report = check_deterministic(&vpa);
    if contracted.has_internal_moves() || !report.deterministic {
        return Err(Error::NotDeterministic {
            context: context.to_string(),
            report,
        });
    }
    Ok(vpa)
}

/// Build the unique complete test suite for the specification and `(D,F)`:
/// intersect `F` with the specification's observable language, intersect `D`
/// with its complement, and take the union.
pub fn build_test_suite(spec: &Iovpts, cs: &ConformanceSpec) -> Result<TestSuiteVpa> {
    let spec_vpa = deterministic_spec_vpa(spec, "test-suite construction")?;
    if !spec_vpa.alphabet().partition_eq(cs.desired.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "conformance languages must share the specification alphabet".to_string(),
        ));
    }
    for (vpa, name) in [(&cs.desired, "desired"), (&cs.forbidden, "forbidden")] {
        let report = check_deterministic(vpa);
        if !report.deterministic {
            return Err(Error::NotDeterministic {
                context: format!("the {name} language must be a deterministic automaton"),
                report,
            });
        }
    }

    let spec_complement = complement(&spec_vpa)?;
    let forbidden_part = intersect(&cs.forbidden, &spec_vpa)?;
    let desired_part = intersect(&cs.desired, &spec_complement)?;
    let suite = union(&forbidden_part, &desired_part)?;

    let n_s = spec_vpa.states().len();
    let n_d = cs.desired.states().len();
    let n_f = cs.forbidden.states().len();
    let state_bound = (n_s * n_f + 1) * (n_s * n_d + n_d + 1);
    if suite.states().len() > state_bound {
        return Err(Error::Internal(format!(
            "suite has {} states, above the bound {state_bound}",
            suite.states().len()
        )));
    }
    Ok(TestSuiteVpa { suite, state_bound })
}

/// Does the implementation adhere to the suite: no observable implementation
/// trace is a test case.
pub fn adheres(imp: &Iovpts, suite: &TestSuiteVpa) -> Result<bool> {
    let imp_vpa = induced_vpa(&contract(imp.underlying())?.result);
    let overlap = intersect(&imp_vpa, suite.suite())?;
    Ok(is_empty(&overlap)?.empty)
}

/// Decide `(D,F)` visible conformance of `imp` to `spec`, with a validated
/// witness on failure.
///
/// The refutation direction is exact for any implementation. A `conforms`
/// verdict for a nondeterministic implementation is flagged in the
/// diagnostics, since the complexity analysis behind this procedure assumes
/// deterministic implementations.
pub fn check_conf(imp: &Iovpts, spec: &Iovpts, cs: &ConformanceSpec) -> Result<Verdict> {
    if !spec.alphabet().partition_eq(imp.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "specification and implementation must share the alphabet".to_string(),
        ));
    }
    let suite = build_test_suite(spec, cs)?;
    let imp_vpa = induced_vpa(&contract(imp.underlying())?.result);
    let imp_report = check_deterministic(&imp_vpa);

    let overlap = intersect(&imp_vpa, suite.suite())?;
    let emptiness = is_empty(&overlap)?;
    let stats = PipelineStats {
        states: overlap.states().len(),
        transitions: overlap.transitions().len(),
        saturation_pairs: emptiness.stats.pairs_enqueued,
    };
    match emptiness.witness {
        None => {
            let mut diagnostics =
                "no observable implementation trace is a test case".to_string();
            if !imp_report.deterministic {
                diagnostics.push_str(
                    "; note: the implementation is nondeterministic, outside the stated \
                     hypothesis of the polynomial procedure",
                );
            }
            Ok(Verdict {
                conforms: true,
                witness: None,
                diagnostics,
                stats,
            })
        }
        Some(word) => {
            if !has_observable_trace(imp.underlying(), &word)? {
                return Err(Error::Internal(format!(
                    "witness `{}` is not an implementation trace",
                    format_word(&word)
                )));
            }
            if !crate::semantics::accepts(suite.suite(), &word)? {
                return Err(Error::Internal(format!(
                    "witness `{}` is not in the test suite",
                    format_word(&word)
                )));
            }
            Ok(Verdict {
                conforms: false,
                diagnostics: "an observable implementation trace is a test case".to_string(),
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
    use crate::model::{Transition, Vpts, Word};
    use crate::semantics::{accepts, enumerate_language, EnumLimits};

    fn w(s: &str) -> Word {
        if s.is_empty() {
            Vec::new()
        } else {
            s.split_whitespace().map(str::to_string).collect()
        }
    }

    fn io_alphabet() -> PushdownAlphabet {
        PushdownAlphabet::new(["a"], ["b", "x"], [] as [&str; 0])
            .unwrap()
            .with_io(["a", "b"], ["x"])
            .unwrap()
    }

    fn plain_alphabet() -> PushdownAlphabet {
        PushdownAlphabet::new(["a"], ["b", "x"], [] as [&str; 0]).unwrap()
    }

    fn spec_abx() -> Iovpts {
        Iovpts::new(
            Vpts::new(
                io_alphabet(),
                ["s0".into(), "s1".into(), "s2".into()],
                ["s0".into()],
                ["A".into()],
                [
                    Transition::push("s0", "a", "A", "s0"),
                    Transition::pop("s0", "b", "A", "s1"),
                    Transition::pop("s0", "x", "A", "s2"),
                    Transition::push("s1", "a", "A", "s1"),
                    Transition::pop("s1", "b", "A", "s2"),
                    Transition::pop("s2", "b", "A", "s1"),
                    Transition::push("s2", "a", "A", "s0"),
                ],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn impl_abx() -> Iovpts {
        Iovpts::new(
            Vpts::new(
                io_alphabet(),
                ["q0".into(), "q1".into(), "q2".into()],
                ["q0".into()],
                ["A".into()],
                [
                    Transition::push("q0", "a", "A", "q0"),
                    Transition::pop("q0", "b", "A", "q1"),
                    Transition::pop("q0", "x", "A", "q2"),
                    Transition::push("q1", "a", "A", "q1"),
                    Transition::pop("q1", "b", "A", "q2"),
                    Transition::pop("q2", "b", "A", "q1"),
                    Transition::push("q2", "a", "A", "q0"),
                    Transition::pop_bottom("q2", "x", "q1"),
                ],
            )
            .unwrap(),
        )
        .unwrap()
    }

    /// {aⁿbⁿx : n ≥ 0}.
    fn desired_anbnx() -> Vpa {
        Vpa::new(
            plain_alphabet(),
            ["d0".into(), "d1".into(), "d2".into()],
            ["d0".into()],
            ["A".into()],
            [
                Transition::push("d0", "a", "A", "d0"),
                Transition::pop("d0", "b", "A", "d1"),
                Transition::pop_bottom("d0", "x", "d2"),
                Transition::pop("d1", "b", "A", "d1"),
                Transition::pop_bottom("d1", "x", "d2"),
            ],
            ["d2".into()],
        )
        .unwrap()
    }

    /// {aⁿbⁿ⁺¹ : n ≥ 0}.
    fn forbidden_extra_b() -> Vpa {
        Vpa::new(
            plain_alphabet(),
            ["f0".into(), "f1".into(), "f2".into()],
            ["f0".into()],
            ["A".into()],
            [
                Transition::push("f0", "a", "A", "f0"),
                Transition::pop("f0", "b", "A", "f1"),
                Transition::pop_bottom("f0", "b", "f2"),
                Transition::pop("f1", "b", "A", "f1"),
                Transition::pop_bottom("f1", "b", "f2"),
            ],
            ["f2".into()],
        )
        .unwrap()
    }

    fn example_cs() -> ConformanceSpec {
        ConformanceSpec::new(desired_anbnx(), forbidden_extra_b()).unwrap()
    }

    #[test]
    fn empty_languages_make_everything_conform() {
        let spec = spec_abx();
        let e = Vpa::empty_language(plain_alphabet()).unwrap();
        let cs = ConformanceSpec::new(e.clone(), e).unwrap();
        let suite = build_test_suite(&spec, &cs).unwrap();
        assert!(
            enumerate_language(suite.suite(), 6, &EnumLimits::default())
                .unwrap()
                .is_empty()
        );
        // Adherence to an empty suite is vacuous.
        assert!(adheres(&impl_abx(), &suite).unwrap());
        let verdict = check_conf(&impl_abx(), &spec, &cs).unwrap();
        assert!(verdict.conforms);
    }

    #[test]
    fn suite_accepts_the_discriminating_word() {
        let spec = spec_abx();
        let suite = build_test_suite(&spec, &example_cs()).unwrap();
        assert!(accepts(suite.suite(), &w("a a b b x")).unwrap());
        assert!(suite.suite().states().len() <= suite.state_bound());
        let report = check_deterministic(suite.suite());
        assert!(report.deterministic);
        assert!(!suite.suite().has_internal_moves());
    }

    #[test]
    fn faulty_implementation_fails_and_isomorphic_conforms() {
        let spec = spec_abx();
        let cs = example_cs();
        let verdict = check_conf(&impl_abx(), &spec, &cs).unwrap();
        assert!(!verdict.conforms);
        let witness = verdict.witness.unwrap();
        assert!(accepts(&cs.desired, &witness).unwrap());

        let isomorphic = spec_abx();
        let verdict = check_conf(&isomorphic, &spec, &cs).unwrap();
        assert!(verdict.conforms, "{}", verdict.diagnostics);
    }

    #[test]
    fn forbidden_everything_fails_at_the_empty_word() {
        // F = Σ*, D = ∅: ε is an observable trace of both models, so the
        // suite contains ε and conformance fails with the empty witness.
        let spec = spec_abx();
        let cs = ConformanceSpec::new(
            Vpa::empty_language(plain_alphabet()).unwrap(),
            Vpa::universal(plain_alphabet()).unwrap(),
        )
        .unwrap();
        let verdict = check_conf(&impl_abx(), &spec, &cs).unwrap();
        assert!(!verdict.conforms);
        assert_eq!(verdict.witness, Some(Vec::new()));
    }

    #[test]
    fn adherence_agrees_with_conformance() {
        let spec = spec_abx();
        let cs = example_cs();
        let suite = build_test_suite(&spec, &cs).unwrap();
        assert!(!adheres(&impl_abx(), &suite).unwrap());
        assert!(adheres(&spec_abx(), &suite).unwrap());
    }

    #[test]
    fn ioco_instance_matches_suite_language() {
        // D = otr(S)·L_U with F = ∅ gives the suite comp otr(S) ∩ otr(S)L_U.
        let spec = spec_abx();
        let cs = ConformanceSpec::for_ioco(&spec).unwrap();
        let suite = build_test_suite(&spec, &cs).unwrap();
        let limits = EnumLimits::default();
        let got = enumerate_language(suite.suite(), 6, &limits).unwrap();
        assert!(got.contains(&w("x")));
        assert!(got.contains(&w("a b x")));
        assert!(got.contains(&w("a a b b x")));
        assert!(!got.contains(&w("a b")));
        // Every member leaves otr(S) exactly at its final output.
        for word in &got {
            assert_eq!(word.last().map(String::as_str), Some("x"));
            assert!(!has_observable_trace(spec.underlying(), word).unwrap());
            assert!(has_observable_trace(spec.underlying(), &word[..word.len() - 1]).unwrap());
        }
    }

    #[test]
    fn nondeterministic_spec_is_rejected() {
        let alphabet = io_alphabet();
        let spec = Iovpts::new(
            Vpts::new(
                alphabet,
                ["p".into(), "q".into(), "r".into()],
                ["p".into()],
                ["A".into()],
                [
                    Transition::push("p", "a", "A", "q"),
                    Transition::push("p", "a", "A", "r"),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            build_test_suite(&spec, &example_cs()).unwrap_err().code(),
            "not-deterministic"
        );
    }
}
