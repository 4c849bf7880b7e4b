//! Model checking of terminating and non-terminating transition systems
//! against LTLf specifications.
//!
//! The crate is organized around one pipeline: LTLf formulas
//! ([`formula`]) compile to finite-word automata and prefix safety
//! automata ([`compile`], [`automata`]); transition systems and Moore
//! transducers ([`systems`]) are checked against them ([`modelcheck`]);
//! and [`hardness`] generates the stress families used to exercise the
//! pipeline end to end.

pub mod automata;
pub mod compile;
pub mod formula;
pub mod hardness;
pub mod modelcheck;
pub mod systems;

pub use automata::{
    dba_accepts_lasso, determinize, make_accepting_sinks, minimize, minimize_dba, nfa_accepts,
    parse_aut, render_aut, safety_equiv, safety_tighten, swap_acceptance, to_dot, AutAutomaton,
    AutParseError, AutomatonError, Dfa, Nfa, SafetyDba, SafetyEquiv,
};
pub use compile::{
    image_dba, image_dba_over, in_fragment, lazy_prefix_dba, ltlf_to_dfa, ltlf_to_dfa_over,
    ltlf_to_nfa, ltlf_to_nfa_over, prefix_dba, prefix_dba_over, translate_fragment, CompileError,
    LazyPrefixDba, TokenId,
};
pub use hardness::{
    fn_member, gen_phi_n, gen_tm_instance, ln_member, parse_tm, render_tm, simulate_tm, Dir,
    HardnessError, TmInstance, TmOutcome, TuringMachineSpec, PHI_ATOMS,
};
pub use modelcheck::{
    bounded_oracle_check, certify_counterexample, check_nonterminating, check_terminating,
    parse_cex, render_cex, CertifyError, CexParseError, CheckError, CheckStats, Counterexample,
    FinitePath, LassoPath, Outcome, Verdict,
};
pub use systems::{
    moore_to_ts, moore_to_ts_with, parse_moore, parse_ts, render_moore, render_ts, MooreMachine,
    SystemError, TransitionSystem, TsKind,
};
pub use formula::{
    enumerate_traces, evaluate, evaluate_ltl_on_lasso, parse_formula, random_formula,
    render_formula, to_nnf, Dialect, Formula, Lasso, Restrict, Trace,
};
