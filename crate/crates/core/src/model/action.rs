use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An action name. Cheap to clone; compares by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    /// Builds an action, rejecting empty names and names containing whitespace.
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::Malformed(format!("invalid action name {name:?}")));
        }
        Ok(Action(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl From<&str> for Action {
    /// Panics on invalid names; meant for literals.
    fn from(name: &str) -> Self {
        Action::new(name).expect("invalid action literal")
    }
}

/// Observable / unobservable split of the global alphabet, plus the faults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetPartition {
    observable: BTreeSet<Action>,
    unobservable: BTreeSet<Action>,
    faults: BTreeSet<Action>,
}

impl AlphabetPartition {
    pub fn new(
        observable: impl IntoIterator<Item = Action>,
        unobservable: impl IntoIterator<Item = Action>,
        faults: impl IntoIterator<Item = Action>,
    ) -> Result<Self> {
        let observable: BTreeSet<_> = observable.into_iter().collect();
        let unobservable: BTreeSet<_> = unobservable.into_iter().collect();
        let faults: BTreeSet<_> = faults.into_iter().collect();
        if let Some(a) = observable.intersection(&unobservable).next() {
            return Err(Error::PartitionOverlap(a.to_string()));
        }
        if let Some(f) = faults.difference(&unobservable).next() {
            return Err(Error::FaultNotUnobservable(f.to_string()));
        }
        Ok(AlphabetPartition {
            observable,
            unobservable,
            faults,
        })
    }

    pub fn observable(&self) -> &BTreeSet<Action> {
        &self.observable
    }

    pub fn unobservable(&self) -> &BTreeSet<Action> {
        &self.unobservable
    }

    pub fn faults(&self) -> &BTreeSet<Action> {
        &self.faults
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.observable.contains(a) || self.unobservable.contains(a)
    }

    pub fn is_observable(&self, a: &Action) -> bool {
        self.observable.contains(a)
    }

    pub fn is_fault(&self, a: &Action) -> bool {
        self.faults.contains(a)
    }

    /// Errors with `NotAFault` unless `f` is a declared fault.
    pub fn require_fault(&self, f: &Action) -> Result<()> {
        if self.is_fault(f) {
            Ok(())
        } else {
            Err(Error::NotAFault(f.to_string()))
        }
    }
}
