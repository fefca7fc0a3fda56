use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::Action;

/// Index of a state inside its [`Automaton`].
pub type StateId = usize;

/// One element of the transition relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: StateId,
    pub action: Action,
    pub target: StateId,
}

/// A component specification. The transition relation may be
/// nondeterministic (two `f` edges leaving one state are allowed).
///
/// States are kept in creation order; the initial state is always index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    states: Vec<String>,
    edges: Vec<Edge>,
}

impl Automaton {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// The actions occurring on transitions.
    pub fn alphabet(&self) -> BTreeSet<Action> {
        self.edges.iter().map(|e| e.action.clone()).collect()
    }

    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == q)
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut order = vec![self.initial()];
        seen[self.initial()] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for (_, e) in self.outgoing(q) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    order.push(e.target);
                }
            }
        }
        order
    }
}

/// Incremental builder; states are created on first mention.
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    name: String,
    states: Vec<String>,
    edges: Vec<Edge>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>, initial: impl Into<String>) -> Self {
        AutomatonBuilder {
            name: name.into(),
            states: vec![initial.into()],
            edges: Vec::new(),
        }
    }

    fn state(&mut self, name: &str) -> StateId {
        match self.states.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                self.states.push(name.to_string());
                self.states.len() - 1
            }
        }
    }

    pub fn has_edge(&self, source: &str, action: &Action, target: &str) -> bool {
        self.edges.iter().any(|e| {
            self.states[e.source] == source
                && &e.action == action
                && self.states[e.target] == target
        })
    }

    pub fn edge(mut self, source: &str, action: impl Into<Action>, target: &str) -> Self {
        self.push_edge(source, action.into(), target);
        self
    }

    pub fn push_edge(&mut self, source: &str, action: Action, target: &str) {
        let source = self.state(source);
        let target = self.state(target);
        self.edges.push(Edge {
            source,
            action,
            target,
        });
    }

    pub fn build(self) -> Result<Automaton> {
        if self.name.is_empty() || self.name.chars().any(char::is_whitespace) {
            return Err(Error::Malformed(format!(
                "invalid component name {:?}",
                self.name
            )));
        }
        Ok(Automaton {
            name: self.name,
            states: self.states,
            edges: self.edges,
        })
    }
}
