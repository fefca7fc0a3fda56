//! Independent reference check: explores pairs of runs directly, without
//! building the verifier net.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::kosaraju_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::composition::fault_free_mapped;
use crate::error::{Error, Result};
use crate::model::{
    Action, AlphabetPartition, Budget, LabelledNet, Lasso, ReachabilityGraph, TransitionId,
};

/// A move of the pair: what each side fires (at most one transition each).
type Move = (Option<TransitionId>, Option<TransitionId>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Diagnosable,
    /// A faulty run and a fault-free run with the same observation.
    NonDiagnosable(Lasso<TransitionId>, Lasso<TransitionId>),
}

/// Searches for a faulty infinite run and a fault-free infinite run with
/// equal observations, over pairs `(M1, M2, faulted)`. Gives up with
/// [`Error::ExplorationBudgetExceeded`] when pairs lie deeper than `depth`.
pub fn brute_force_oracle(
    net: &LabelledNet,
    f: &Action,
    sigma: &AlphabetPartition,
    depth: usize,
) -> Result<OracleOutcome> {
    sigma.require_fault(f)?;
    let (clean, clean_map) = fault_free_mapped(net, f);
    let g1 = ReachabilityGraph::build(net, Budget::default())?;
    let g2 = ReachabilityGraph::build(&clean, Budget::default())?;

    let mut graph: DiGraph<(usize, usize, bool), Move> = DiGraph::new();
    let mut index: HashMap<(usize, usize, bool), NodeIndex> = HashMap::new();
    let mut parent: HashMap<NodeIndex, (NodeIndex, Move)> = HashMap::new();
    let root = graph.add_node((0, 0, false));
    index.insert((0, 0, false), root);
    let mut queue = VecDeque::from([(root, 0usize)]);

    while let Some((node, d)) = queue.pop_front() {
        let (n1, n2, faulted) = graph[node];
        let mut moves: Vec<((usize, usize, bool), Move)> = Vec::new();
        for e in g1.successors(n1) {
            let a = net.label(e.transition);
            if sigma.is_observable(a) {
                for e2 in g2
                    .successors(n2)
                    .filter(|e2| clean.label(e2.transition) == a)
                {
                    moves.push((
                        (e.to, e2.to, faulted),
                        (Some(e.transition), Some(clean_map[e2.transition.index()])),
                    ));
                }
            } else {
                moves.push(((e.to, n2, faulted || a == f), (Some(e.transition), None)));
            }
        }
        for e2 in g2.successors(n2) {
            if !sigma.is_observable(clean.label(e2.transition)) {
                moves.push((
                    (n1, e2.to, faulted),
                    (None, Some(clean_map[e2.transition.index()])),
                ));
            }
        }
        for (state, mv) in moves {
            let next = match index.get(&state) {
                Some(&n) => n,
                None => {
                    if d + 1 > depth {
                        return Err(Error::ExplorationBudgetExceeded { limit: depth });
                    }
                    let n = graph.add_node(state);
                    index.insert(state, n);
                    parent.insert(n, (node, mv));
                    queue.push_back((n, d + 1));
                    n
                }
            };
            graph.add_edge(node, next, mv);
        }
    }

    for scc in kosaraju_scc(&graph) {
        let cyclic = scc.len() > 1 || graph.find_edge(scc[0], scc[0]).is_some();
        let Some(&anchor) = scc.iter().find(|&&n| graph[n].2) else {
            continue;
        };
        if !cyclic {
            continue;
        }
        let mut stem = Vec::new();
        let mut cur = anchor;
        while let Some(&(p, mv)) = parent.get(&cur) {
            stem.push(mv);
            cur = p;
        }
        stem.reverse();
        let cycle = cycle_through(&graph, anchor, &scc);
        let side = |moves: &[Move], first: bool| -> Vec<TransitionId> {
            moves
                .iter()
                .filter_map(|&(a, b)| if first { a } else { b })
                .collect()
        };
        let make = |first: bool| -> Result<Lasso<TransitionId>> {
            Lasso::new(side(&stem, first), side(&cycle, first))
                .map_err(|_| Error::UnobservableCycle)
        };
        return Ok(OracleOutcome::NonDiagnosable(make(true)?, make(false)?));
    }
    Ok(OracleOutcome::Diagnosable)
}

/// Some cycle from `anchor` back to itself inside its component.
fn cycle_through(
    graph: &DiGraph<(usize, usize, bool), Move>,
    anchor: NodeIndex,
    scc: &[NodeIndex],
) -> Vec<Move> {
    let mut prev: HashMap<NodeIndex, (NodeIndex, Move)> = HashMap::new();
    let mut queue = VecDeque::new();
    for e in graph.edges(anchor) {
        use petgraph::visit::EdgeRef;
        if e.target() == anchor {
            return vec![*e.weight()];
        }
        if scc.contains(&e.target()) && !prev.contains_key(&e.target()) {
            prev.insert(e.target(), (anchor, *e.weight()));
            queue.push_back(e.target());
        }
    }
    while let Some(n) = queue.pop_front() {
        for e in graph.edges(n) {
            use petgraph::visit::EdgeRef;
            let t = e.target();
            if t == anchor {
                let mut path = vec![*e.weight()];
                let mut cur = n;
                while cur != anchor {
                    let (p, mv) = prev[&cur];
                    path.push(mv);
                    cur = p;
                }
                path.reverse();
                return path;
            }
            if scc.contains(&t) && !prev.contains_key(&t) {
                prev.insert(t, (n, *e.weight()));
                queue.push_back(t);
            }
        }
    }
    unreachable!("anchor lies on a cycle of its component")
}
