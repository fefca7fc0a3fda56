//! Core data model: actions, automata, safe labelled nets, markings,
//! reachability and observable projection.

mod action;
mod assumptions;
mod automaton;
mod lasso;
mod net;
mod reach;

pub use action::{Action, AlphabetPartition};
pub use assumptions::{validate_assumptions, AssumptionReport};
pub use automaton::{Automaton, AutomatonBuilder, Edge, StateId};
pub use lasso::{obs, obs_lasso, obs_word, Lasso, Word};
pub use net::{LabelledNet, Marking, NetBuilder, PlaceId, Transition, TransitionId};
pub use reach::{Budget, GraphEdge, ReachabilityGraph, DEFAULT_NODE_LIMIT, NODE_LIMIT_ENV};
