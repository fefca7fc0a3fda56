//! Complete finite prefixes of the unfolding of a safe net.
//!
//! Events are added in a total adequate order (size, then Parikh vector,
//! then Foata normal form, all on transition ids). An event is a cut-off
//! when its local configuration reaches a marking already reached by a
//! smaller local configuration; cut-offs are kept but not extended.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::model::{Action, Budget, LabelledNet, Marking, PlaceId, TransitionId};

#[derive(Debug, Clone)]
pub struct Condition {
    pub place: PlaceId,
    /// Producing event; `None` for initial conditions.
    pub producer: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Event {
    pub transition: TransitionId,
    pub label: Action,
    pub preset: Vec<usize>,
    pub postset: Vec<usize>,
    pub cutoff: bool,
    /// Marking reached by the local configuration.
    pub marking: Marking,
}

#[derive(Debug, Clone)]
pub struct OccurrenceNet {
    conditions: Vec<Condition>,
    events: Vec<Event>,
    initial: Vec<usize>,
}

impl OccurrenceNet {
    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Conditions of the initial cut.
    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn cutoffs(&self) -> impl Iterator<Item = usize> + '_ {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.cutoff)
            .map(|(i, _)| i)
    }
}

/// Key of a local configuration in the adequate order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OrderKey {
    size: usize,
    /// Transition ids of the configuration, sorted.
    parikh: Vec<u32>,
    /// Foata levels, each sorted.
    foata: Vec<Vec<u32>>,
    /// Creation number; makes the order total even on degenerate ties.
    seq: usize,
}

/// Parikh comparison: at the smallest transition where the counts differ,
/// the configuration with fewer occurrences is smaller.
fn parikh_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            // `a` has an occurrence of the smaller id `x` that `b` lacks
            (Some(x), Some(y)) => {
                return if x < y {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }
}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| parikh_cmp(&self.parikh, &other.parikh))
            .then_with(|| {
                for (x, y) in self.foata.iter().zip(&other.foata) {
                    let c = parikh_cmp(x, y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.foata.len().cmp(&other.foata.len())
            })
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A possible extension waiting to be added.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Extension {
    key: OrderKey,
    transition: TransitionId,
    preset: Vec<usize>,
    /// Local configuration without the new event.
    history: BTreeSet<usize>,
}

impl Ord for Extension {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Extension {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Builder<'a> {
    net: &'a LabelledNet,
    occ: OccurrenceNet,
    /// Conditions concurrent with each condition.
    co: Vec<BTreeSet<usize>>,
    /// Conditions in the postset of a cut-off; never extended.
    frozen: Vec<bool>,
    /// Local configuration of every added event (including itself).
    local: Vec<BTreeSet<usize>>,
    level: Vec<usize>,
    seen: HashSet<(TransitionId, Vec<usize>)>,
    pending: BTreeSet<Extension>,
    markings: HashSet<Marking>,
    seq: usize,
}

impl<'a> Builder<'a> {
    fn add_condition(&mut self, place: PlaceId, producer: Option<usize>) -> usize {
        self.occ.conditions.push(Condition { place, producer });
        self.co.push(BTreeSet::new());
        self.frozen.push(false);
        self.occ.conditions.len() - 1
    }

    fn history_of(&self, preset: &[usize]) -> BTreeSet<usize> {
        let mut h = BTreeSet::new();
        for &c in preset {
            if let Some(e) = self.occ.conditions[c].producer {
                h.extend(self.local[e].iter().copied());
            }
        }
        h
    }

    fn propose(&mut self, t: TransitionId, mut preset: Vec<usize>) {
        preset.sort_unstable();
        if !self.seen.insert((t, preset.clone())) {
            return;
        }
        let history = self.history_of(&preset);
        let mut parikh: Vec<u32> = history
            .iter()
            .map(|&e| self.occ.events[e].transition.0)
            .chain([t.0])
            .collect();
        parikh.sort_unstable();
        let mut foata: Vec<Vec<u32>> = Vec::new();
        for &e in &history {
            let l = self.level[e];
            if foata.len() <= l {
                foata.resize(l + 1, Vec::new());
            }
            foata[l].push(self.occ.events[e].transition.0);
        }
        let own = self.event_level(&preset);
        if foata.len() <= own {
            foata.resize(own + 1, Vec::new());
        }
        foata[own].push(t.0);
        for lvl in &mut foata {
            lvl.sort_unstable();
        }
        self.seq += 1;
        self.pending.insert(Extension {
            key: OrderKey {
                size: history.len() + 1,
                parikh,
                foata,
                seq: self.seq,
            },
            transition: t,
            preset,
            history,
        });
    }

    fn event_level(&self, preset: &[usize]) -> usize {
        preset
            .iter()
            .filter_map(|&c| self.occ.conditions[c].producer)
            .map(|e| self.level[e] + 1)
            .max()
            .unwrap_or(0)
    }

    fn marking_of(&self, local: &BTreeSet<usize>) -> Marking {
        let mut consumed = HashSet::new();
        let mut live: Vec<usize> = self.occ.initial.clone();
        for &e in local {
            consumed.extend(self.occ.events[e].preset.iter().copied());
            live.extend(self.occ.events[e].postset.iter().copied());
        }
        live.into_iter()
            .filter(|c| !consumed.contains(c))
            .map(|c| self.occ.conditions[c].place)
            .collect()
    }

    /// Proposes every extension whose preset uses at least one of `fresh`.
    fn extensions_from(&mut self, fresh: &[usize]) {
        let net = self.net;
        for &b in fresh {
            let p = self.occ.conditions[b].place;
            for t in net.transition_ids() {
                let pre = &net.transition(t).preset;
                if !pre.contains(&p) {
                    continue;
                }
                let options: Vec<Vec<usize>> = pre
                    .iter()
                    .map(|&q| {
                        if q == p {
                            vec![b]
                        } else {
                            self.co[b]
                                .iter()
                                .copied()
                                .filter(|&c| self.occ.conditions[c].place == q && !self.frozen[c])
                                .collect()
                        }
                    })
                    .collect();
                let mut found = Vec::new();
                self.combine(&options, &mut Vec::new(), &mut found);
                for preset in found {
                    self.propose(t, preset);
                }
            }
        }
    }

    fn combine(&self, options: &[Vec<usize>], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((first, rest)) = options.split_first() else {
            out.push(chosen.clone());
            return;
        };
        for &c in first {
            if chosen.iter().all(|&d| self.co[d].contains(&c)) {
                chosen.push(c);
                self.combine(rest, chosen, out);
                chosen.pop();
            }
        }
    }

    fn add_event(&mut self, ext: Extension, budget: Budget) -> Result<()> {
        if self.occ.events.len() >= budget.node_limit {
            return Err(Error::ExplorationBudgetExceeded {
                limit: budget.node_limit,
            });
        }
        let id = self.occ.events.len();
        let mut local = ext.history;
        local.insert(id);
        let level = self.event_level(&ext.preset);
        let tr = self.net.transition(ext.transition);
        // co-set shared by the new conditions: concurrent with all of the preset
        let mut common: Option<BTreeSet<usize>> = None;
        for &c in &ext.preset {
            common = Some(match common {
                None => self.co[c].clone(),
                Some(s) => s.intersection(&self.co[c]).copied().collect(),
            });
        }
        let common = common.unwrap_or_default();
        self.occ.events.push(Event {
            transition: ext.transition,
            label: tr.label.clone(),
            preset: ext.preset,
            postset: Vec::new(),
            cutoff: false,
            marking: Marking::empty(),
        });
        self.local.push(local);
        self.level.push(level);
        let post: Vec<usize> = tr
            .postset
            .clone()
            .into_iter()
            .map(|p| self.add_condition(p, Some(id)))
            .collect();
        for &c in &post {
            let mut s = common.clone();
            s.extend(post.iter().copied().filter(|&d| d != c));
            for &d in &common {
                self.co[d].insert(c);
            }
            self.co[c] = s;
        }
        self.occ.events[id].postset = post.clone();
        let marking = self.marking_of(&self.local[id]);
        let cutoff = !self.markings.insert(marking.clone());
        let ev = &mut self.occ.events[id];
        ev.cutoff = cutoff;
        ev.marking = marking;
        if cutoff {
            for &c in &post {
                self.frozen[c] = true;
            }
        } else {
            self.extensions_from(&post);
        }
        Ok(())
    }
}

/// Builds a complete finite prefix of the unfolding of `net`. At most
/// `budget.node_limit` events are created.
pub fn unfold(net: &LabelledNet, budget: Budget) -> Result<OccurrenceNet> {
    let mut b = Builder {
        net,
        occ: OccurrenceNet {
            conditions: Vec::new(),
            events: Vec::new(),
            initial: Vec::new(),
        },
        co: Vec::new(),
        frozen: Vec::new(),
        local: Vec::new(),
        level: Vec::new(),
        seen: HashSet::new(),
        pending: BTreeSet::new(),
        markings: HashSet::from([net.initial().clone()]),
        seq: 0,
    };
    let init: Vec<usize> = net
        .initial()
        .places()
        .iter()
        .map(|&p| b.add_condition(p, None))
        .collect();
    for &c in &init {
        b.co[c] = init.iter().copied().filter(|&d| d != c).collect();
    }
    b.occ.initial = init.clone();
    b.extensions_from(&init);
    while let Some(ext) = b.pending.pop_first() {
        b.add_event(ext, budget)?;
    }
    Ok(b.occ)
}

/// All markings represented by cuts of the prefix.
pub fn prefix_markings(prefix: &OccurrenceNet) -> BTreeSet<Marking> {
    let to_marking = |cut: &BTreeSet<usize>| -> Marking {
        cut.iter().map(|&c| prefix.conditions[c].place).collect()
    };
    let start: BTreeSet<usize> = prefix.initial.iter().copied().collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut out = BTreeSet::from([to_marking(&start)]);
    let mut stack = vec![start];
    while let Some(cut) = stack.pop() {
        for e in &prefix.events {
            if e.preset.iter().all(|c| cut.contains(c)) {
                let mut next = cut.clone();
                for c in &e.preset {
                    next.remove(c);
                }
                next.extend(e.postset.iter().copied());
                if seen.insert(next.clone()) {
                    out.insert(to_marking(&next));
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// Whether some event of the prefix is labelled `f`.
pub fn fault_reachable(prefix: &OccurrenceNet, f: &Action) -> bool {
    prefix.events.iter().any(|e| &e.label == f)
}
