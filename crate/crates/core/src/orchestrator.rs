//! Distributed diagnosis: per-component checks, run in parallel, combined
//! into a system verdict.
//!
//! For every fault `f` and component `i` two checks are run: `A_i` on its
//! own, and the view `N^i` (`A_i` against the fault-free rest of the
//! system). A non-diagnosable view implies the system is non-diagnosable;
//! if every local check and every view is diagnosable, so is the system.
//! Anything else is inconclusive and may fall back to a global check.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{is_diagnosable, CheckOptions, Method, Stats, Status, Verdict};
use crate::composition::{automaton_to_net, component_view, system_net, SystemSpec};
use crate::error::{Error, Result};
use crate::model::Action;

/// Outcome of the two checks for one component and one fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentCheck {
    pub component: usize,
    pub fault: Action,
    /// `A_i` alone.
    pub local: std::result::Result<Verdict, Error>,
    /// The view `N^i`.
    pub view: std::result::Result<Verdict, Error>,
}

/// Runs both checks for component `i` and fault `f`. Construction errors
/// (unknown component, `f` not a fault) are returned; exploration errors
/// are recorded in the result.
pub fn check_component(
    spec: &SystemSpec,
    i: usize,
    f: &Action,
    opts: &CheckOptions,
) -> Result<ComponentCheck> {
    let view_net = component_view(spec, i, f)?;
    let a = &spec.components()[i];
    let local = if a.alphabet().contains(f) {
        is_diagnosable(&automaton_to_net(a), f, spec.sigma(), opts)
    } else {
        // the fault cannot occur, so it is trivially diagnosable
        Ok(Verdict {
            fault: f.clone(),
            status: Status::Diagnosable,
            method: Method::Global,
            witness: None,
            stats: Stats::default(),
            fallback_used: false,
            warnings: Vec::new(),
        })
    };
    let view = is_diagnosable(&view_net.net, f, spec.sigma(), opts);
    Ok(ComponentCheck {
        component: i,
        fault: f.clone(),
        local,
        view,
    })
}

/// Combines the checks of every component for fault `f`.
///
/// The verdict is inconclusive when some check failed or when neither
/// rule applies; no fallback is attempted here.
pub fn aggregate(spec: &SystemSpec, f: &Action, results: &[ComponentCheck]) -> Result<Verdict> {
    let n = spec.components().len();
    let mut per: Vec<Option<&ComponentCheck>> = vec![None; n];
    for r in results.iter().filter(|r| &r.fault == f) {
        if r.component >= n {
            return Err(Error::NoSuchComponent {
                index: r.component,
                len: n,
            });
        }
        per[r.component] = Some(r);
    }
    let mut checks = Vec::with_capacity(n);
    for (i, r) in per.into_iter().enumerate() {
        checks.push(r.ok_or_else(|| Error::IncompleteResults {
            component: i,
            fault: f.to_string(),
        })?);
    }

    let mut stats = Stats::default();
    let mut warnings = Vec::new();
    let mut witness = None;
    let mut all_diagnosable = true;
    for c in &checks {
        let name = spec.components()[c.component].name();
        for (what, r) in [("local", &c.local), ("view", &c.view)] {
            match r {
                Ok(v) => {
                    stats += v.stats;
                    all_diagnosable &= v.status == Status::Diagnosable;
                    warnings.extend(v.warnings.iter().map(|w| format!("{name} ({what}): {w}")));
                }
                Err(e) => {
                    all_diagnosable = false;
                    warnings.push(format!("{name} ({what}): {e}"));
                }
            }
        }
        if let Ok(v) = &c.view {
            if let Some(w) = &v.witness {
                if witness.as_ref().is_none_or(|best| w.precedes(best)) {
                    witness = Some(w.clone());
                }
            }
        }
    }

    let (status, method) = if witness.is_some() {
        (Status::NonDiagnosable, Method::DistributedNonDiagnosable)
    } else if all_diagnosable {
        (Status::Diagnosable, Method::DistributedDiagnosable)
    } else {
        (Status::Inconclusive, Method::Distributed)
    };
    Ok(Verdict {
        fault: f.clone(),
        status,
        method,
        witness,
        stats,
        fallback_used: false,
        warnings,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DistributedOptions {
    pub check: CheckOptions,
    /// Run a global check when the distributed verdict is inconclusive.
    pub fallback: bool,
    /// Worker threads; results do not depend on this.
    pub jobs: usize,
}

impl Default for DistributedOptions {
    fn default() -> Self {
        DistributedOptions {
            check: CheckOptions::default(),
            fallback: true,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Per-component summary included in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub component: String,
    pub fault: Action,
    pub local: String,
    pub view: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub system: String,
    pub verdicts: Vec<Verdict>,
    /// Faults for which the global fallback was run.
    pub fallback_used: Vec<Action>,
    pub components: Vec<ComponentSummary>,
}

fn outcome(r: &std::result::Result<Verdict, Error>) -> String {
    match r {
        Ok(v) => v.status.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Checks every fault of the system with the distributed method.
pub fn run_distributed(spec: &SystemSpec, opts: &DistributedOptions) -> Result<Report> {
    let faults: Vec<Action> = spec.sigma().faults().iter().cloned().collect();
    run_distributed_for(spec, &faults, opts)
}

/// Like [`run_distributed`], restricted to `faults`.
pub fn run_distributed_for(
    spec: &SystemSpec,
    faults: &[Action],
    opts: &DistributedOptions,
) -> Result<Report> {
    for f in faults {
        spec.sigma().require_fault(f)?;
    }
    let pairs: Vec<(usize, Action)> = faults
        .iter()
        .flat_map(|f| (0..spec.components().len()).map(move |i| (i, f.clone())))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Malformed(format!("cannot start worker pool: {e}")))?;
    let results: Vec<ComponentCheck> = pool.install(|| {
        pairs
            .par_iter()
            .map(|(i, f)| check_component(spec, *i, f, &opts.check))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut verdicts = Vec::new();
    let mut fallback_used = Vec::new();
    for f in faults {
        let mut v = aggregate(spec, f, &results)?;
        if v.status == Status::Inconclusive && opts.fallback {
            fallback_used.push(f.clone());
            let stats = v.stats;
            let mut warnings = std::mem::take(&mut v.warnings);
            v = match system_net(spec)
                .and_then(|n| is_diagnosable(&n.net, f, spec.sigma(), &opts.check))
            {
                Ok(mut g) => {
                    g.stats += stats;
                    warnings.append(&mut g.warnings);
                    g
                }
                Err(e) => {
                    warnings.push(format!("global fallback: {e}"));
                    v
                }
            };
            v.warnings = warnings;
            v.fallback_used = true;
        }
        verdicts.push(v);
    }
    let components = results
        .iter()
        .map(|r| ComponentSummary {
            component: spec.components()[r.component].name().to_string(),
            fault: r.fault.clone(),
            local: outcome(&r.local),
            view: outcome(&r.view),
        })
        .collect();
    Ok(Report {
        system: spec.name().to_string(),
        verdicts,
        fallback_used,
        components,
    })
}

/// Checks every fault on the full system net.
pub fn run_global(spec: &SystemSpec, opts: &CheckOptions) -> Result<Report> {
    let faults: Vec<Action> = spec.sigma().faults().iter().cloned().collect();
    run_global_for(spec, &faults, opts)
}

/// Like [`run_global`], restricted to `faults`.
pub fn run_global_for(spec: &SystemSpec, faults: &[Action], opts: &CheckOptions) -> Result<Report> {
    let net = system_net(spec)?;
    let verdicts = faults
        .iter()
        .map(|f| is_diagnosable(&net.net, f, spec.sigma(), opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        system: spec.name().to_string(),
        verdicts,
        fallback_used: Vec::new(),
        components: Vec::new(),
    })
}
