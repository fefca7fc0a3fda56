use std::fmt;

use crate::model::{AlphabetPartition, Automaton, StateId};

/// Outcome of checking liveness and absence of unobservable cycles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssumptionReport {
    pub component: String,
    /// Reachable states without an outgoing transition.
    pub dead_states: Vec<String>,
    /// One unobservable cycle, as a list of states, if any exists.
    pub unobservable_cycle: Option<Vec<String>>,
}

impl AssumptionReport {
    pub fn is_clean(&self) -> bool {
        self.dead_states.is_empty() && self.unobservable_cycle.is_none()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for q in &self.dead_states {
            v.push(format!(
                "component {}: state {q} has no outgoing transition",
                self.component
            ));
        }
        if let Some(c) = &self.unobservable_cycle {
            v.push(format!(
                "component {}: unobservable cycle through {}",
                self.component,
                c.join(" -> ")
            ));
        }
        v
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "component {}: ok", self.component);
        }
        write!(f, "{}", self.violations().join("\n"))
    }
}

/// Checks that every reachable state can move and that the unobservable
/// transitions form no cycle. Violations are reported, never fatal.
pub fn validate_assumptions(a: &Automaton, sigma: &AlphabetPartition) -> AssumptionReport {
    let reachable = a.reachable_states();
    let dead_states = reachable
        .iter()
        .filter(|&&q| a.outgoing(q).next().is_none())
        .map(|&q| a.states()[q].clone())
        .collect();

    AssumptionReport {
        component: a.name().to_string(),
        dead_states,
        unobservable_cycle: unobservable_cycle(a, sigma)
            .map(|c| c.into_iter().map(|q| a.states()[q].clone()).collect()),
    }
}

fn unobservable_cycle(a: &Automaton, sigma: &AlphabetPartition) -> Option<Vec<StateId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let n = a.states().len();
    let mut colour = vec![Colour::White; n];
    let succ: Vec<Vec<StateId>> = (0..n)
        .map(|q| {
            a.outgoing(q)
                .filter(|(_, e)| !sigma.is_observable(&e.action))
                .map(|(_, e)| e.target)
                .collect()
        })
        .collect();

    for root in 0..n {
        if colour[root] != Colour::White {
            continue;
        }
        // iterative DFS keeping the grey path on `path`
        let mut path: Vec<(StateId, usize)> = vec![(root, 0)];
        colour[root] = Colour::Grey;
        while let Some(&mut (q, ref mut next)) = path.last_mut() {
            if let Some(&r) = succ[q].get(*next) {
                *next += 1;
                match colour[r] {
                    Colour::White => {
                        colour[r] = Colour::Grey;
                        path.push((r, 0));
                    }
                    Colour::Grey => {
                        let start = path.iter().position(|(s, _)| *s == r).unwrap();
                        let mut cycle: Vec<StateId> =
                            path[start..].iter().map(|(s, _)| *s).collect();
                        cycle.push(r);
                        return Some(cycle);
                    }
                    Colour::Black => {}
                }
            } else {
                colour[q] = Colour::Black;
                path.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Action, AutomatonBuilder};

    fn sigma() -> AlphabetPartition {
        AlphabetPartition::new(
            [Action::from("o1")],
            [Action::from("f")],
            [Action::from("f")],
        )
        .unwrap()
    }

    #[test]
    fn fault_self_loop_is_an_unobservable_cycle() {
        let a = AutomatonBuilder::new("X", "q0")
            .edge("q0", "f", "q0")
            .build()
            .unwrap();
        let r = validate_assumptions(&a, &sigma());
        assert!(r.dead_states.is_empty());
        assert_eq!(r.unobservable_cycle, Some(vec!["q0".into(), "q0".into()]));
    }

    #[test]
    fn chain_without_exit_is_not_live() {
        let a = AutomatonBuilder::new("X", "q0")
            .edge("q0", "o1", "q1")
            .build()
            .unwrap();
        let r = validate_assumptions(&a, &sigma());
        assert_eq!(r.dead_states, vec!["q1".to_string()]);
        assert!(r.unobservable_cycle.is_none());
        assert!(!r.is_clean());
    }
}
