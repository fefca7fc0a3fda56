use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{LabelledNet, Marking, TransitionId};

/// Default cap on explored markings.
pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_NODE_LIMIT`].
pub const NODE_LIMIT_ENV: &str = "DIANET_NODE_LIMIT";

/// Exploration limits shared by every state-space traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

impl Budget {
    pub fn new(node_limit: usize) -> Self {
        Budget { node_limit }
    }

    /// Reads `DIANET_NODE_LIMIT`, falling back to the default when unset.
    pub fn from_env() -> std::result::Result<Self, String> {
        match std::env::var(NODE_LIMIT_ENV) {
            Ok(v) => {
                v.trim().parse::<usize>().map(Budget::new).map_err(|_| {
                    format!("{NODE_LIMIT_ENV} must be a non-negative integer, got {v:?}")
                })
            }
            Err(_) => Ok(Budget::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub transition: TransitionId,
    pub to: usize,
}

/// Explicit reachability graph. Node 0 is the initial marking; nodes are
/// numbered in BFS discovery order and edges are listed in the order they
/// were found, so two builds of the same net are identical.
#[derive(Debug, Clone)]
pub struct ReachabilityGraph {
    markings: Vec<Marking>,
    index: HashMap<Marking, usize>,
    edges: Vec<GraphEdge>,
    succ: Vec<Vec<usize>>,
}

impl ReachabilityGraph {
    pub fn build(net: &LabelledNet, budget: Budget) -> Result<Self> {
        let mut g = ReachabilityGraph {
            markings: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            succ: Vec::new(),
        };
        g.intern(net.initial().clone(), budget)?;
        let mut next = 0;
        while next < g.markings.len() {
            let m = g.markings[next].clone();
            for t in net.enabled(&m) {
                let m2 = net.fire(&m, t)?;
                let to = g.intern(m2, budget)?;
                g.succ[next].push(g.edges.len());
                g.edges.push(GraphEdge {
                    from: next,
                    transition: t,
                    to,
                });
            }
            next += 1;
        }
        Ok(g)
    }

    fn intern(&mut self, m: Marking, budget: Budget) -> Result<usize> {
        let n = self.markings.len();
        match self.index.entry(m) {
            Entry::Occupied(e) => Ok(*e.get()),
            Entry::Vacant(e) => {
                if n >= budget.node_limit {
                    return Err(Error::ExplorationBudgetExceeded {
                        limit: budget.node_limit,
                    });
                }
                self.markings.push(e.key().clone());
                e.insert(n);
                self.succ.push(Vec::new());
                Ok(n)
            }
        }
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.markings.len()
    }

    pub fn node_of(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Outgoing edges of `node`, in canonical transition order.
    pub fn successors(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.succ[node].iter().map(move |&e| &self.edges[e])
    }
}
