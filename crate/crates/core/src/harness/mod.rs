//! Executable checks of the structure theory over generated and exhaustively
//! enumerated instances, plus hypothesis-dropping counterexample search.

pub mod checks;
pub mod config;
pub mod families;
pub mod report;
pub mod search;
pub mod suite;

pub use checks::{judge, replay, Analysis, Outcome, Probe};
pub use config::{CheckId, TrialConfig};
pub use families::{enumerate_semimodules, gen_b_linear_operator, gen_semimodule, Family, GenMode};
pub use report::{CheckReport, CheckSummary, InstanceRecord, ModuleWitness, Status, SuiteReport, Witness};
pub use search::{
    counterexample_search, counterexample_search_in, Counterexample, Hypothesis, SearchReport, SearchSpace,
};
pub use suite::run_suite;
