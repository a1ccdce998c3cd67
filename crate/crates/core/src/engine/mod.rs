//! Equation generation, propagation, elimination and branching over the
//! values of a multiplicative function on prime powers.
//!
//! Values live in the rationals, so a split only follows the rational roots
//! of its eliminant; other roots are reported in the verdict notes.

mod eliminate;
mod equation;
mod roots;
mod run;
mod state;
mod trace;
mod verify;
mod witness;

pub use eliminate::{eliminate, eliminate_polys, Elimination, Tier};
pub use equation::{
    generate_equations, generate_equations_with_cap, push_equations_for, Equation, Provenance,
    DEFAULT_REPRESENTATION_CAP,
};
pub use roots::{irrational_degree, rational_roots, roots_of_coefficients};
pub use run::{
    explore, run_uniqueness, site_names, uniqueness_system, verdict, Budget, EngineConfig,
    EngineError, Exploration, Outcome, Survivor, Verdict, WITNESS_COUNT_CAP,
};
pub use state::{BranchState, Limits, Status, StepsExhausted, System};
pub use trace::{
    coefficient_strings, replay, Event, Inputs, Output, ReplayError, ReplaySummary, Rule, Trace,
    TraceError, TraceRecord,
};
pub use verify::{identity_table, verify_assignment, VerifyReport, Violation};
pub use witness::{search_nonidentity, WitnessSearch};
