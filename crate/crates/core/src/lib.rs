//! Diagnosability analysis for distributed systems modelled as safe
//! labelled Petri nets.
//!
//! Components are finite automata over a shared alphabet; the system is
//! their synchronized product. A fault is diagnosable when every infinite
//! faulty run can be told apart, by its observation, from every fault-free
//! run. Checks can run on the whole system or component by component.

pub mod analysis;
pub mod composition;
pub mod error;
mod graph;
pub mod io;
pub mod model;
pub mod orchestrator;
pub mod unfolding;
pub mod verifier;

pub use analysis::{
    brute_force_oracle, check_eventually_fault, is_diagnosable, CheckOptions, Method,
    OracleOutcome, Stats, Status, Verdict, Witness,
};
pub use composition::{component_view, fault_free, product, system_net, ProductNet, SystemSpec};
pub use error::{Error, Result};
pub use orchestrator::{
    aggregate, check_component, run_distributed, run_distributed_for, run_global, run_global_for,
    DistributedOptions, Report,
};
pub use verifier::{build_verifier, VerifierNet};
