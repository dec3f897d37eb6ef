//! Visibly pushdown models and conformance checking.
//!
//! The crate implements, over a common alphabet type partitioned into call,
//! return and simple symbols:
//!
//! - visibly pushdown automata ([`Vpa`]) with their run semantics, a bounded
//!   language oracle, and the closure algebra (ε-removal, determinization
//!   checks, product, intersection, non-blocking completion, union,
//!   complement, suffix concatenation, emptiness with witness extraction);
//! - visibly pushdown labeled transition systems ([`Vpts`]) with trace
//!   semantics, the contraction construction, and the conversions between
//!   systems and automata;
//! - input/output systems ([`Iovpts`]), fault models, and the `ioco`-style
//!   conformance checker built on a saturation search for balanced runs;
//! - the general `(D,F)` visible-conformance relation with complete
//!   test-suite construction and a polynomial decision procedure;
//! - a canonical JSON document format for all three model kinds.
//!
//! The `vpts-cli` crate exposes the same operations as a command-line tool.

pub mod alphabet;
pub mod balanced;
pub mod closures;
pub mod conformance;
pub mod doc;
pub mod error;
pub mod iovpts;
pub mod model;
pub mod semantics;
pub mod vpts_ops;

pub use alphabet::{PushdownAlphabet, SymbolKind, BOTTOM, INTERNAL, PLACEHOLDER};
pub use balanced::{
    check_ioco, find_balanced_run, transform_empty_stack, transform_no_empty_pops,
    BalancedRunOutcome, EmptyStackTransform, NoEmptyPopsTransform, PipelineStats,
    SaturationStats, Verdict,
};
pub use closures::{
    check_deterministic, complement, concat_suffix, intersect, is_empty, make_non_blocking,
    product, remove_epsilon, remove_epsilon_deterministic, union, DeterminismReport, Emptiness,
    Violation,
};
pub use conformance::{
    adheres, build_test_suite, check_conf, observable_suffix_language, ConformanceSpec,
    TestSuiteVpa,
};
pub use error::{Error, Result};
pub use iovpts::{after, build_fault_model, cross_product, out, passes, FaultModel, Iovpts};
pub use model::{format_word, Action, Machine, Transition, Vpa, Vpts, Word};
pub use semantics::{
    accepts, enumerate_language, erase, has_observable_trace, reach, replay, run_closure, step,
    traces, Configuration, EnumLimits,
};
pub use vpts_ops::{
    check_vpts_deterministic, contract, induced_vpa, induced_vpts, is_contracted,
    ContractionReport, VptsDeterminism,
};
