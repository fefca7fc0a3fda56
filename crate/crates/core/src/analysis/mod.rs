//! Diagnosability of a single net for a single fault, via the verifier.

mod oracle;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    obs_lasso, Action, AlphabetPartition, Budget, LabelledNet, Lasso, ReachabilityGraph,
    TransitionId,
};
use crate::unfolding;
use crate::verifier::{build_verifier, VerifierNet};

pub use oracle::{brute_force_oracle, OracleOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Diagnosable,
    NonDiagnosable,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Diagnosable => "diagnosable",
            Status::NonDiagnosable => "non_diagnosable",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "global")]
    Global,
    #[serde(rename = "distributed:thm1")]
    DistributedNonDiagnosable,
    #[serde(rename = "distributed:thm2")]
    DistributedDiagnosable,
    #[serde(rename = "distributed")]
    Distributed,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Global => "global",
            Method::DistributedNonDiagnosable => "distributed:thm1",
            Method::DistributedDiagnosable => "distributed:thm2",
            Method::Distributed => "distributed",
        })
    }
}

/// Work counters. Deliberately free of timings so reports are reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Verifier markings explored, summed over all checks.
    pub markings: usize,
    /// Number of verifier constructions and searches.
    pub checks: usize,
}

impl std::ops::AddAssign for Stats {
    fn add_assign(&mut self, rhs: Stats) {
        self.markings += rhs.markings;
        self.checks += rhs.checks;
    }
}

/// A pair of runs that look the same but differ on the fault.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The common observation, in shortest form.
    pub observation: Lasso<Action>,
    /// Labels of the faulty run.
    pub faulty: Lasso<Action>,
    /// Labels of the fault-free run.
    pub fault_free: Lasso<Action>,
    /// Transition names of the faulty run in the checked net.
    pub faulty_run: Lasso<String>,
    /// Transition names of the fault-free run in the checked net.
    pub fault_free_run: Lasso<String>,
    /// The verifier lasso, by display label (`f^1`, `u^2`, `o`, ...).
    pub verifier: Lasso<String>,
    #[serde(skip)]
    key: WitnessKey,
}

/// Ordering used to choose between witnesses: total length, then loop, then stem.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
struct WitnessKey {
    len: usize,
    cycle: Vec<(String, String)>,
    stem: Vec<(String, String)>,
}

impl Witness {
    /// Checks that both runs replay on `net` (matched by transition name)
    /// and produce the recorded observation.
    pub fn replays_on(&self, net: &LabelledNet, sigma: &AlphabetPartition) -> Result<()> {
        for (run, labels) in [
            (&self.faulty_run, &self.faulty),
            (&self.fault_free_run, &self.fault_free),
        ] {
            let ids = resolve(net, run)?;
            crate::verifier::replay_lasso(net, &ids)?;
            if &ids.map(|&t| net.label(t).clone()) != labels {
                return Err(Error::InvalidRun("labels do not match the net".into()));
            }
            if !obs_lasso(labels, sigma)?.same_word(&self.observation) {
                return Err(Error::InvalidRun("observation mismatch".into()));
            }
        }
        Ok(())
    }

    /// True when `self` is preferred over `other` as a reported witness.
    pub fn precedes(&self, other: &Witness) -> bool {
        self.key < other.key
    }
}

fn resolve(net: &LabelledNet, run: &Lasso<String>) -> Result<Lasso<TransitionId>> {
    let find = |n: &String| {
        net.transition_by_name(n)
            .ok_or_else(|| Error::InvalidRun(format!("no transition named {n}")))
    };
    Ok(Lasso {
        stem: run.stem.iter().map(find).collect::<Result<_>>()?,
        cycle: run.cycle.iter().map(find).collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub fault: Action,
    pub status: Status,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: Stats,
    /// Whether a global check was run because the distributed one was inconclusive.
    pub fallback_used: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Emitted when the verifier has no infinite run at all, so diagnosability
/// holds for lack of anything to distinguish.
pub const VACUOUS_VERIFIER: &str = "vacuous verifier: no infinite run";

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub budget: Budget,
    /// Skip the state-space search when an unfolding prefix shows that no
    /// fault event is reachable in the verifier.
    pub prefilter: bool,
}

/// Result of searching a verifier for a run that eventually fires a fault.
#[derive(Debug, Clone)]
pub struct FaultSearch {
    pub lasso: Option<Lasso<TransitionId>>,
    pub markings: usize,
    pub has_infinite_run: bool,
}

/// Searches the verifier for an infinite run containing an `f^1` event.
///
/// When several exist, the one returned has the fewest transitions; among
/// those the loop, then the stem, is least by (display label, transition id).
pub fn search_fault_lasso(v: &VerifierNet, budget: Budget) -> Result<FaultSearch> {
    let g = ReachabilityGraph::build(&v.net, budget)?;
    let mut order: Vec<TransitionId> = v.net.transition_ids().collect();
    order.sort_by_cached_key(|&t| (v.display_label(t), t));
    let mut rank = vec![0u32; order.len()];
    for (r, t) in order.iter().enumerate() {
        rank[t.index()] = r as u32;
    }
    let mut succ: Vec<Vec<(u32, usize, bool)>> = (0..g.node_count())
        .map(|n| {
            g.successors(n)
                .map(|e| {
                    (
                        rank[e.transition.index()],
                        e.to,
                        v.is_fault_event(e.transition),
                    )
                })
                .collect()
        })
        .collect();
    for s in &mut succ {
        s.sort_unstable();
    }
    let by_rank = &order;
    let rg = search::RankedGraph { succ };
    let out = search::search(&rg);
    let to_ids = |p: &[(usize, usize)]| -> Vec<TransitionId> {
        p.iter()
            .map(|&(u, i)| by_rank[rg.succ[u][i].0 as usize])
            .collect()
    };
    Ok(FaultSearch {
        lasso: out.lasso.map(|l| Lasso {
            stem: to_ids(&l.stem),
            cycle: to_ids(&l.cycle),
        }),
        markings: g.node_count(),
        has_infinite_run: out.has_infinite_run,
    })
}

/// Returns a verifier lasso that eventually fires `f^1`, if any.
pub fn check_eventually_fault(
    v: &VerifierNet,
    budget: Budget,
) -> Result<Option<Lasso<TransitionId>>> {
    Ok(search_fault_lasso(v, budget)?.lasso)
}

/// Builds the reported witness from a verifier lasso.
pub fn witness_from_lasso(
    v: &VerifierNet,
    lasso: &Lasso<TransitionId>,
    sigma: &AlphabetPartition,
) -> Result<Witness> {
    let (faulty, clean) = v.split_trace(lasso)?;
    let base = &v.base;
    let labels = |l: &Lasso<TransitionId>| l.map(|&t| base.label(t).clone());
    let names = |l: &Lasso<TransitionId>| l.map(|&t| base.transition(t).name.to_string());
    let faulty_labels = labels(&faulty);
    let clean_labels = labels(&clean);
    let observation = obs_lasso(&faulty_labels, sigma)?.normalized();
    debug_assert!(obs_lasso(&clean_labels, sigma)?.same_word(&observation));
    let key_of = |ts: &[TransitionId]| -> Vec<(String, String)> {
        ts.iter()
            .map(|&t| (v.display_label(t), v.net.transition(t).name.to_string()))
            .collect()
    };
    Ok(Witness {
        observation,
        faulty: faulty_labels,
        fault_free: clean_labels,
        faulty_run: names(&faulty),
        fault_free_run: names(&clean),
        verifier: lasso.map(|&t| v.display_label(t)),
        key: WitnessKey {
            len: lasso.len(),
            cycle: key_of(&lasso.cycle),
            stem: key_of(&lasso.stem),
        },
    })
}

/// Decides whether `f` is diagnosable in `net`.
pub fn is_diagnosable(
    net: &LabelledNet,
    f: &Action,
    sigma: &AlphabetPartition,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let v = build_verifier(net, f, sigma)?;
    let verdict = |status, witness, markings, warnings| Verdict {
        fault: f.clone(),
        status,
        method: Method::Global,
        witness,
        stats: Stats {
            markings,
            checks: 1,
        },
        fallback_used: false,
        warnings,
    };
    if opts.prefilter {
        let prefix = unfolding::unfold(&v.net, opts.budget)?;
        if !unfolding::fault_reachable(&prefix, f) {
            return Ok(verdict(
                Status::Diagnosable,
                None,
                prefix.events().len(),
                Vec::new(),
            ));
        }
    }
    let found = search_fault_lasso(&v, opts.budget)?;
    match found.lasso {
        Some(l) => {
            let w = witness_from_lasso(&v, &l, sigma)?;
            Ok(verdict(
                Status::NonDiagnosable,
                Some(w),
                found.markings,
                Vec::new(),
            ))
        }
        None => {
            let warnings = if found.has_infinite_run {
                Vec::new()
            } else {
                vec![VACUOUS_VERIFIER.to_string()]
            };
            Ok(verdict(Status::Diagnosable, None, found.markings, warnings))
        }
    }
}
