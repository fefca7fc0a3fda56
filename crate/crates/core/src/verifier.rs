//! Twin-plant verifier: a net synchronized with its own fault-free replica
//! on observable transitions.

use crate::composition::fault_free_mapped;
use crate::error::{Error, Result};
use crate::model::{
    Action, AlphabetPartition, LabelledNet, Lasso, Marking, NetBuilder, PlaceId, TransitionId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Replica {
    First,
    Second,
}

impl Replica {
    pub fn tag(self) -> &'static str {
        match self {
            Replica::First => "^1",
            Replica::Second => "^2",
        }
    }
}

/// Where a verifier transition comes from, in terms of the checked net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifierOrigin {
    /// An unobservable transition of one replica.
    Local(Replica, TransitionId),
    /// An observable transition of replica 1 fused with one of replica 2.
    Fused(TransitionId, TransitionId),
}

#[derive(Debug, Clone)]
pub struct VerifierNet {
    pub net: LabelledNet,
    /// The net the verifier was built from.
    pub base: LabelledNet,
    pub fault: Action,
    pub origin: Vec<VerifierOrigin>,
    /// Replica and base place of every verifier place.
    pub place_origin: Vec<(Replica, PlaceId)>,
    /// The `f^1` transitions.
    pub fault_events: Vec<TransitionId>,
}

impl VerifierNet {
    /// Display label: fused transitions show the bare action, replica-local
    /// ones carry a `^1` / `^2` suffix.
    pub fn display_label(&self, t: TransitionId) -> String {
        let label = self.net.label(t);
        match self.origin[t.index()] {
            VerifierOrigin::Fused(..) => label.to_string(),
            VerifierOrigin::Local(r, _) => format!("{label}{}", r.tag()),
        }
    }

    pub fn is_fault_event(&self, t: TransitionId) -> bool {
        self.fault_events.binary_search(&t).is_ok()
    }

    /// Splits a verifier lasso into the pair of base-net lassos it encodes:
    /// fused transitions go to both sides, local ones to their replica.
    pub fn split_trace(
        &self,
        lasso: &Lasso<TransitionId>,
    ) -> Result<(Lasso<TransitionId>, Lasso<TransitionId>)> {
        replay_lasso(&self.net, lasso)?;
        let side = |seq: &[TransitionId], r: Replica| -> Vec<TransitionId> {
            seq.iter()
                .filter_map(|t| match self.origin[t.index()] {
                    VerifierOrigin::Fused(a, b) => Some(if r == Replica::First { a } else { b }),
                    VerifierOrigin::Local(r2, a) if r2 == r => Some(a),
                    VerifierOrigin::Local(..) => None,
                })
                .collect()
        };
        let make = |r: Replica| -> Result<Lasso<TransitionId>> {
            let cycle = side(&lasso.cycle, r);
            if cycle.is_empty() {
                return Err(Error::UnobservableCycle);
            }
            Ok(Lasso {
                stem: side(&lasso.stem, r),
                cycle,
            })
        };
        Ok((make(Replica::First)?, make(Replica::Second)?))
    }
}

/// Builds the verifier of `net` for fault `f`.
///
/// Replica 1 is a copy of `net`; replica 2 is its `f`-fault-free version.
/// Every observable transition of replica 1 is fused with every replica-2
/// transition carrying the same label. Unobservable transitions are kept
/// per replica; `f` therefore only occurs in replica 1.
pub fn build_verifier(
    net: &LabelledNet,
    f: &Action,
    sigma: &AlphabetPartition,
) -> Result<VerifierNet> {
    sigma.require_fault(f)?;
    let (second, second_map) = fault_free_mapped(net, f);

    let mut b = NetBuilder::new(format!("V({})", net.name()));
    let mut place_origin = Vec::new();
    let first_places: Vec<PlaceId> = net
        .place_ids()
        .map(|p| {
            place_origin.push((Replica::First, p));
            b.place(
                format!("{}^1", net.place_name(p)),
                net.initial().contains(p),
            )
        })
        .collect();
    let second_places: Vec<PlaceId> = second
        .place_ids()
        .map(|p| {
            let base = net
                .place_by_name(second.place_name(p))
                .expect("sub-net place");
            place_origin.push((Replica::Second, base));
            b.place(
                format!("{}^2", second.place_name(p)),
                second.initial().contains(p),
            )
        })
        .collect();
    let map1 = |ps: &[PlaceId]| {
        ps.iter()
            .map(|p| first_places[p.index()])
            .collect::<Vec<_>>()
    };
    let map2 = |ps: &[PlaceId]| {
        ps.iter()
            .map(|p| second_places[p.index()])
            .collect::<Vec<_>>()
    };

    let mut origin = Vec::new();
    let mut fault_events = Vec::new();
    for t in net.transition_ids() {
        let tr = net.transition(t);
        if sigma.is_observable(&tr.label) {
            for u in second
                .transition_ids()
                .filter(|&u| second.label(u) == &tr.label)
            {
                let tr2 = second.transition(u);
                b.transition(
                    format!("{}|{}", tr.name, tr2.name),
                    tr.label.clone(),
                    map1(&tr.preset).into_iter().chain(map2(&tr2.preset)),
                    map1(&tr.postset).into_iter().chain(map2(&tr2.postset)),
                );
                origin.push(VerifierOrigin::Fused(t, second_map[u.index()]));
            }
        } else {
            let id = b.transition(
                format!("{}^1", tr.name),
                tr.label.clone(),
                map1(&tr.preset),
                map1(&tr.postset),
            );
            if &tr.label == f {
                fault_events.push(id);
            }
            origin.push(VerifierOrigin::Local(Replica::First, t));
        }
    }
    for u in second.transition_ids() {
        let tr2 = second.transition(u);
        if !sigma.is_observable(&tr2.label) {
            b.transition(
                format!("{}^2", tr2.name),
                tr2.label.clone(),
                map2(&tr2.preset),
                map2(&tr2.postset),
            );
            origin.push(VerifierOrigin::Local(
                Replica::Second,
                second_map[u.index()],
            ));
        }
    }

    Ok(VerifierNet {
        net: b.build()?,
        base: net.clone(),
        fault: f.clone(),
        origin,
        place_origin,
        fault_events,
    })
}

/// Replays a lasso of transitions on `net`, returning the loop's anchor
/// marking when the stem fires and the loop returns to where it started.
pub fn replay_lasso(net: &LabelledNet, lasso: &Lasso<TransitionId>) -> Result<Marking> {
    let invalid = |e: Error| Error::InvalidRun(e.to_string());
    let m = net
        .fire_sequence(net.initial(), &lasso.stem)
        .map_err(invalid)?;
    if lasso.cycle.is_empty() {
        return Err(Error::InvalidRun("lasso loop must be non-empty".into()));
    }
    if net.fire_sequence(&m, &lasso.cycle).map_err(invalid)? != m {
        return Err(Error::InvalidRun(
            "loop does not return to its starting marking".into(),
        ));
    }
    Ok(m)
}
