use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::Action;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub u32);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TransitionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A marking of a safe net: the set of marked places, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking(Vec<PlaceId>);

impl Marking {
    pub fn empty() -> Self {
        Marking(Vec::new())
    }

    pub fn contains(&self, p: PlaceId) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn places(&self) -> &[PlaceId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_superset(&self, places: &[PlaceId]) -> bool {
        places.iter().all(|p| self.contains(*p))
    }
}

impl FromIterator<PlaceId> for Marking {
    fn from_iter<I: IntoIterator<Item = PlaceId>>(iter: I) -> Self {
        let mut v: Vec<PlaceId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Marking(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub label: Action,
    pub preset: Vec<PlaceId>,
    pub postset: Vec<PlaceId>,
}

/// A safe labelled Petri net with an initial marking.
///
/// Places and transitions are identified by their creation index, which is
/// also the canonical iteration order everywhere in the crate.
#[derive(Clone, PartialEq, Eq)]
pub struct LabelledNet {
    name: String,
    places: Vec<String>,
    transitions: Vec<Transition>,
    initial: Marking,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
}

impl fmt::Debug for LabelledNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabelledNet")
            .field("name", &self.name)
            .field("places", &self.places)
            .field("transitions", &self.transitions)
            .field("initial", &self.initial)
            .finish()
    }
}

impl LabelledNet {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn place_ids(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len() as u32).map(PlaceId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len() as u32).map(TransitionId)
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.index()]
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.index()]
    }

    pub fn label(&self, t: TransitionId) -> &Action {
        &self.transitions[t.index()].label
    }

    pub fn place_by_name(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    /// Builds a marking from place names; panics on unknown names.
    pub fn marking_of(&self, names: &[&str]) -> Marking {
        names
            .iter()
            .map(|n| {
                self.place_by_name(n)
                    .unwrap_or_else(|| panic!("no place named {n}"))
            })
            .collect()
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> bool {
        m.is_superset(&self.transitions[t.index()].preset)
    }

    /// Transitions enabled in `m`, in canonical order.
    pub fn enabled(&self, m: &Marking) -> Vec<TransitionId> {
        self.transition_ids()
            .filter(|t| self.is_enabled(m, *t))
            .collect()
    }

    /// Fires `t` from `m`: `(m \ •t) ∪ t•`.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking> {
        let tr = &self.transitions[t.index()];
        if !m.is_superset(&tr.preset) {
            return Err(Error::NotEnabled {
                transition: tr.name.clone(),
            });
        }
        let mut next: Vec<PlaceId> = m
            .places()
            .iter()
            .copied()
            .filter(|p| tr.preset.binary_search(p).is_err())
            .collect();
        for &p in &tr.postset {
            if next.contains(&p) {
                return Err(Error::SafenessViolation {
                    transition: tr.name.clone(),
                    place: self.places[p.index()].clone(),
                });
            }
            next.push(p);
        }
        next.sort_unstable();
        Ok(Marking(next))
    }

    /// Fires a sequence, returning the final marking.
    pub fn fire_sequence(&self, m: &Marking, seq: &[TransitionId]) -> Result<Marking> {
        seq.iter().try_fold(m.clone(), |m, &t| self.fire(&m, t))
    }

    /// Place names of a marking, in canonical order.
    pub fn marking_names(&self, m: &Marking) -> Vec<&str> {
        m.places().iter().map(|p| self.place_name(*p)).collect()
    }
}

/// Builder for [`LabelledNet`].
#[derive(Debug, Clone, Default)]
pub struct NetBuilder {
    name: String,
    places: Vec<String>,
    marked: Vec<PlaceId>,
    transitions: Vec<Transition>,
}

impl NetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn place(&mut self, name: impl Into<String>, marked: bool) -> PlaceId {
        let id = PlaceId(self.places.len() as u32);
        self.places.push(name.into());
        if marked {
            self.marked.push(id);
        }
        id
    }

    pub fn transition(
        &mut self,
        name: impl Into<String>,
        label: Action,
        preset: impl IntoIterator<Item = PlaceId>,
        postset: impl IntoIterator<Item = PlaceId>,
    ) -> TransitionId {
        let mut preset: Vec<PlaceId> = preset.into_iter().collect();
        let mut postset: Vec<PlaceId> = postset.into_iter().collect();
        preset.sort_unstable();
        preset.dedup();
        postset.sort_unstable();
        postset.dedup();
        let id = TransitionId(self.transitions.len() as u32);
        self.transitions.push(Transition {
            name: name.into(),
            label,
            preset,
            postset,
        });
        id
    }

    pub fn build(self) -> Result<LabelledNet> {
        let mut place_index = HashMap::with_capacity(self.places.len());
        for (i, p) in self.places.iter().enumerate() {
            if place_index.insert(p.clone(), PlaceId(i as u32)).is_some() {
                return Err(Error::Malformed(format!("duplicate place `{p}`")));
            }
        }
        let mut transition_index = HashMap::with_capacity(self.transitions.len());
        for (i, t) in self.transitions.iter().enumerate() {
            if transition_index
                .insert(t.name.clone(), TransitionId(i as u32))
                .is_some()
            {
                return Err(Error::Malformed(format!(
                    "duplicate transition `{}`",
                    t.name
                )));
            }
            if t.preset.is_empty() || t.postset.is_empty() {
                return Err(Error::Malformed(format!(
                    "transition `{}` needs a non-empty preset and postset",
                    t.name
                )));
            }
            let n = self.places.len();
            if t.preset.iter().chain(&t.postset).any(|p| p.index() >= n) {
                return Err(Error::Malformed(format!(
                    "transition `{}` refers to an unknown place",
                    t.name
                )));
            }
        }
        Ok(LabelledNet {
            name: self.name,
            places: self.places,
            transitions: self.transitions,
            initial: self.marked.into_iter().collect(),
            place_index,
            transition_index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_net() -> LabelledNet {
        let mut b = NetBuilder::new("n");
        let p = b.place("p", true);
        let q = b.place("q", false);
        b.transition("t", Action::from("a"), [p], [p]);
        b.transition("s", Action::from("b"), [p], [q]);
        b.build().unwrap()
    }

    #[test]
    fn empty_marking_enables_nothing() {
        assert!(loop_net().enabled(&Marking::empty()).is_empty());
    }

    #[test]
    fn self_loop_keeps_marking() {
        let n = loop_net();
        let m0 = n.initial().clone();
        assert_eq!(n.fire(&m0, TransitionId(0)).unwrap(), m0);
    }

    #[test]
    fn firing_a_disabled_transition_fails() {
        let n = loop_net();
        let m = n.marking_of(&["q"]);
        assert!(matches!(
            n.fire(&m, TransitionId(1)),
            Err(Error::NotEnabled { .. })
        ));
    }

    #[test]
    fn unsafe_firing_is_detected() {
        let n = loop_net();
        let m = n.marking_of(&["p", "q"]);
        assert!(matches!(
            n.fire(&m, TransitionId(1)),
            Err(Error::SafenessViolation { .. })
        ));
    }

    #[test]
    fn builder_rejects_empty_presets_and_duplicates() {
        let mut b = NetBuilder::new("n");
        let p = b.place("p", true);
        b.transition("t", Action::from("a"), [], [p]);
        assert!(b.build().is_err());

        let mut b = NetBuilder::new("n");
        b.place("p", true);
        b.place("p", false);
        assert!(b.build().is_err());
    }
}
