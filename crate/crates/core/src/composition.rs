//! Building nets from component automata: translation, synchronized
//! product, fault-free reduction and per-component views.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph;
use crate::model::{
    Action, AlphabetPartition, Automaton, Budget, LabelledNet, NetBuilder, PlaceId,
    ReachabilityGraph, TransitionId, Word,
};

/// A system: ordered components over a shared alphabet partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    name: String,
    components: Vec<Automaton>,
    sigma: AlphabetPartition,
}

impl SystemSpec {
    pub fn new(
        name: impl Into<String>,
        components: Vec<Automaton>,
        sigma: AlphabetPartition,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Malformed(
                "a system needs at least one component".into(),
            ));
        }
        let mut names = HashSet::new();
        for c in &components {
            if !names.insert(c.name()) {
                return Err(Error::Malformed(format!(
                    "duplicate component `{}`",
                    c.name()
                )));
            }
            if let Some(a) = c.alphabet().iter().find(|a| !sigma.contains(a)) {
                return Err(Error::UnknownAction(a.to_string()));
            }
        }
        let alphabets: Vec<_> = components.iter().map(Automaton::alphabet).collect();
        check_shared_unobservable(&alphabets, &sigma, |i| components[i].name().to_string())?;
        Ok(SystemSpec {
            name: name.into(),
            components,
            sigma,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[Automaton] {
        &self.components
    }

    pub fn sigma(&self) -> &AlphabetPartition {
        &self.sigma
    }

    pub fn alphabets(&self) -> Vec<BTreeSet<Action>> {
        self.components.iter().map(Automaton::alphabet).collect()
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name() == name)
    }

    fn component(&self, i: usize) -> Result<&Automaton> {
        self.components.get(i).ok_or(Error::NoSuchComponent {
            index: i,
            len: self.components.len(),
        })
    }
}

fn check_shared_unobservable(
    alphabets: &[BTreeSet<Action>],
    sigma: &AlphabetPartition,
    name_of: impl Fn(usize) -> String,
) -> Result<()> {
    for a in sigma.unobservable() {
        if sigma.is_fault(a) {
            continue;
        }
        let sharing: Vec<usize> = (0..alphabets.len())
            .filter(|&i| alphabets[i].contains(a))
            .collect();
        if sharing.len() >= 2 {
            return Err(Error::SharedUnobservable {
                action: a.to_string(),
                components: sharing.into_iter().map(name_of).collect(),
            });
        }
    }
    Ok(())
}

/// A product net together with the provenance of its nodes.
#[derive(Debug, Clone)]
pub struct ProductNet {
    pub net: LabelledNet,
    /// For each transition, its participants as (component, local transition).
    pub origin: Vec<Vec<(usize, TransitionId)>>,
    /// Owning component of each place.
    pub component_of_place: Vec<usize>,
    /// Number of composed components.
    pub components: usize,
}

impl ProductNet {
    /// The local transition of component `i` taking part in `t`, if any.
    pub fn participant(&self, t: TransitionId, i: usize) -> Option<TransitionId> {
        self.origin[t.index()]
            .iter()
            .find(|(c, _)| *c == i)
            .map(|(_, lt)| *lt)
    }

    /// Projects a run of the product (stem plus possibly empty loop) onto
    /// component `i`, returning that component's local transitions.
    ///
    /// The run is replayed first; a run that does not fire, or a loop that
    /// does not return to its starting marking, yields `InvalidRun`.
    pub fn project_run(
        &self,
        stem: &[TransitionId],
        cycle: &[TransitionId],
        i: usize,
    ) -> Result<Word<TransitionId>> {
        if i >= self.components {
            return Err(Error::NoSuchComponent {
                index: i,
                len: self.components,
            });
        }
        let invalid = |e: Error| Error::InvalidRun(e.to_string());
        let m = self
            .net
            .fire_sequence(self.net.initial(), stem)
            .map_err(invalid)?;
        if !cycle.is_empty() {
            let back = self.net.fire_sequence(&m, cycle).map_err(invalid)?;
            if back != m {
                return Err(Error::InvalidRun(
                    "loop does not return to its starting marking".into(),
                ));
            }
        }
        let local = |seq: &[TransitionId]| -> Vec<TransitionId> {
            seq.iter().filter_map(|&t| self.participant(t, i)).collect()
        };
        Ok(Word::from_parts(local(stem), local(cycle)))
    }
}

/// Translates an automaton into a net with one place per state and one
/// transition per edge. Place `q` of component `A` is named `A.q`; edge `k`
/// (0-based) becomes transition `A.t{k+1}`.
pub fn automaton_to_net(a: &Automaton) -> LabelledNet {
    let mut b = NetBuilder::new(a.name());
    let places: Vec<PlaceId> = a
        .states()
        .iter()
        .enumerate()
        .map(|(i, q)| b.place(format!("{}.{}", a.name(), q), i == a.initial()))
        .collect();
    for (k, e) in a.edges().iter().enumerate() {
        b.transition(
            format!("{}.t{}", a.name(), k + 1),
            e.action.clone(),
            [places[e.source]],
            [places[e.target]],
        );
    }
    b.build()
        .expect("automaton translation yields a well-formed net")
}

/// Synchronized product of labelled nets.
///
/// Observable labels present in two or more alphabets are fused: one
/// transition per tuple of participants, one from each sharing component,
/// and the participants themselves are dropped. All other transitions are
/// copied. Fault labels never synchronize, even when shared.
pub fn product(
    nets: &[LabelledNet],
    alphabets: &[BTreeSet<Action>],
    sigma: &AlphabetPartition,
) -> Result<ProductNet> {
    assert_eq!(nets.len(), alphabets.len(), "one alphabet per net");
    check_shared_unobservable(alphabets, sigma, |i| nets[i].name().to_string())?;

    let sharers = |a: &Action| -> Vec<usize> {
        (0..nets.len())
            .filter(|&i| alphabets[i].contains(a))
            .collect()
    };

    let name = nets
        .iter()
        .map(LabelledNet::name)
        .collect::<Vec<_>>()
        .join("×");
    let mut b = NetBuilder::new(name);
    let mut place_map: Vec<Vec<PlaceId>> = Vec::with_capacity(nets.len());
    let mut component_of_place = Vec::new();
    for (c, net) in nets.iter().enumerate() {
        place_map.push(
            net.place_ids()
                .map(|p| {
                    component_of_place.push(c);
                    b.place(net.place_name(p), net.initial().contains(p))
                })
                .collect(),
        );
    }

    let mut origin = Vec::new();
    let mut fused_labels: HashSet<Action> = HashSet::new();
    for (c, net) in nets.iter().enumerate() {
        for t in net.transition_ids() {
            let tr = net.transition(t);
            let share = sharers(&tr.label);
            if sigma.is_observable(&tr.label) && share.len() >= 2 {
                if !fused_labels.insert(tr.label.clone()) {
                    continue;
                }
                let choices: Vec<Vec<TransitionId>> = share
                    .iter()
                    .map(|&s| {
                        nets[s]
                            .transition_ids()
                            .filter(|&u| nets[s].label(u) == &tr.label)
                            .collect()
                    })
                    .collect();
                for tuple in cartesian(&choices) {
                    let parts: Vec<(usize, TransitionId)> =
                        share.iter().copied().zip(tuple).collect();
                    let name = parts
                        .iter()
                        .map(|&(s, u)| nets[s].transition(u).name.as_str())
                        .collect::<Vec<_>>()
                        .join("×");
                    let pre = parts.iter().flat_map(|&(s, u)| {
                        nets[s]
                            .transition(u)
                            .preset
                            .iter()
                            .map(|p| place_map[s][p.index()])
                            .collect::<Vec<_>>()
                    });
                    let post = parts.iter().flat_map(|&(s, u)| {
                        nets[s]
                            .transition(u)
                            .postset
                            .iter()
                            .map(|p| place_map[s][p.index()])
                            .collect::<Vec<_>>()
                    });
                    b.transition(name, tr.label.clone(), pre, post);
                    origin.push(parts);
                }
            } else {
                b.transition(
                    tr.name.clone(),
                    tr.label.clone(),
                    tr.preset.iter().map(|p| place_map[c][p.index()]),
                    tr.postset.iter().map(|p| place_map[c][p.index()]),
                );
                origin.push(vec![(c, t)]);
            }
        }
    }

    Ok(ProductNet {
        net: b.build()?,
        origin,
        component_of_place,
        components: nets.len(),
    })
}

/// All tuples drawn from `choices`, first position most significant.
fn cartesian<T: Copy>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect()
    })
}

/// Removes every transition that occurs on no infinite run, then every
/// place no remaining transition touches. Infinite traces are unchanged.
pub fn prune_unreachable(pn: &ProductNet, budget: Budget) -> Result<ProductNet> {
    let net = &pn.net;
    let g = ReachabilityGraph::build(net, budget)?;
    let succ: Vec<Vec<usize>> = (0..g.node_count())
        .map(|v| g.successors(v).map(|e| e.to).collect())
        .collect();
    let live = graph::infinite_future(&succ);
    let mut keep_t = vec![false; net.transitions().len()];
    for e in g.edges() {
        if live[e.to] {
            keep_t[e.transition.index()] = true;
        }
    }
    let mut keep_p = vec![false; net.places().len()];
    for t in net.transition_ids().filter(|t| keep_t[t.index()]) {
        let tr = net.transition(t);
        for p in tr.preset.iter().chain(&tr.postset) {
            keep_p[p.index()] = true;
        }
    }

    let mut b = NetBuilder::new(net.name());
    let mut place_map = vec![None; net.places().len()];
    let mut component_of_place = Vec::new();
    for p in net.place_ids().filter(|p| keep_p[p.index()]) {
        place_map[p.index()] = Some(b.place(net.place_name(p), net.initial().contains(p)));
        component_of_place.push(pn.component_of_place[p.index()]);
    }
    let mut origin = Vec::new();
    for t in net.transition_ids().filter(|t| keep_t[t.index()]) {
        let tr = net.transition(t);
        b.transition(
            tr.name.clone(),
            tr.label.clone(),
            tr.preset.iter().map(|p| place_map[p.index()].unwrap()),
            tr.postset.iter().map(|p| place_map[p.index()].unwrap()),
        );
        origin.push(pn.origin[t.index()].clone());
    }
    Ok(ProductNet {
        net: b.build()?,
        origin,
        component_of_place,
        components: pn.components,
    })
}

/// The `f`-fault-free version of a net: the forward closure from the
/// initial marking through transitions not labelled `f`.
pub fn fault_free(net: &LabelledNet, f: &Action) -> LabelledNet {
    fault_free_mapped(net, f).0
}

/// Like [`fault_free`], also returning the original id of every kept
/// transition (in the order of the new net).
pub fn fault_free_mapped(net: &LabelledNet, f: &Action) -> (LabelledNet, Vec<TransitionId>) {
    let mut reached = vec![false; net.places().len()];
    for p in net.initial().places() {
        reached[p.index()] = true;
    }
    let mut pending: Vec<TransitionId> = net.transition_ids().collect();
    let mut kept = Vec::new();
    while let Some(pos) = pending
        .iter()
        .position(|&t| net.transition(t).preset.iter().all(|p| reached[p.index()]))
    {
        let t = pending.remove(pos);
        if net.label(t) != f {
            for p in &net.transition(t).postset {
                reached[p.index()] = true;
            }
            kept.push(t);
        }
    }
    kept.sort_unstable();

    let mut b = NetBuilder::new(format!("{}^{}", net.name(), f));
    let mut place_map = vec![None; net.places().len()];
    for p in net.place_ids().filter(|p| reached[p.index()]) {
        place_map[p.index()] = Some(b.place(net.place_name(p), net.initial().contains(p)));
    }
    for &t in &kept {
        let tr = net.transition(t);
        b.transition(
            tr.name.clone(),
            tr.label.clone(),
            tr.preset.iter().map(|p| place_map[p.index()].unwrap()),
            tr.postset.iter().map(|p| place_map[p.index()].unwrap()),
        );
    }
    (b.build().expect("sub-net of a well-formed net"), kept)
}

/// The full system net `N = N_{A_1} × … × N_{A_n}`.
pub fn system_net(spec: &SystemSpec) -> Result<ProductNet> {
    let nets: Vec<LabelledNet> = spec.components().iter().map(automaton_to_net).collect();
    product(&nets, &spec.alphabets(), spec.sigma())
}

/// The view `N^i`: component `i` composed with the `f`-fault-free versions
/// of all other components, synchronizing on the original alphabets.
/// Participants in `origin` refer to the edges of the original automata.
pub fn component_view(spec: &SystemSpec, i: usize, f: &Action) -> Result<ProductNet> {
    spec.component(i)?;
    spec.sigma().require_fault(f)?;
    let mut nets = Vec::with_capacity(spec.components().len());
    let mut maps: Vec<Option<Vec<TransitionId>>> = Vec::new();
    for (j, a) in spec.components().iter().enumerate() {
        let net = automaton_to_net(a);
        if j == i {
            nets.push(net);
            maps.push(None);
        } else {
            let (reduced, map) = fault_free_mapped(&net, f);
            nets.push(reduced);
            maps.push(Some(map));
        }
    }
    let mut pn = product(&nets, &spec.alphabets(), spec.sigma())?;
    for parts in &mut pn.origin {
        for (c, t) in parts.iter_mut() {
            if let Some(map) = &maps[*c] {
                *t = map[t.index()];
            }
        }
    }
    Ok(pn)
}

/// Local trace of component `i` for a projected run, as actions.
pub fn local_trace(a: &Automaton, run: &Word<TransitionId>) -> Word<Action> {
    let label = |t: &TransitionId| a.edges()[t.index()].action.clone();
    match run {
        Word::Finite(v) => Word::Finite(v.iter().map(label).collect()),
        Word::Infinite(l) => Word::Infinite(l.map(label)),
    }
}

/// Transitions of the product grouped by label (used in tests and DOT).
pub fn transitions_by_label(net: &LabelledNet) -> BTreeMap<Action, Vec<TransitionId>> {
    let mut m: BTreeMap<Action, Vec<TransitionId>> = BTreeMap::new();
    for t in net.transition_ids() {
        m.entry(net.label(t).clone()).or_default().push(t);
    }
    m
}
