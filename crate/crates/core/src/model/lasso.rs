use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Action, AlphabetPartition};

/// A finitely presented infinite word: `stem · loop^ω`, with a non-empty loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Lasso<T> {
    pub stem: Vec<T>,
    #[serde(rename = "loop")]
    pub cycle: Vec<T>,
}

impl<T: Clone + PartialEq> Lasso<T> {
    pub fn new(stem: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidRun("lasso loop must be non-empty".into()));
        }
        Ok(Lasso { stem, cycle })
    }

    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.stem.iter().chain(&self.cycle)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.iter().any(|y| y == x)
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> Lasso<U> {
        Lasso {
            stem: self.stem.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(&mut f).collect(),
        }
    }

    /// The unique shortest presentation of the same infinite word: the loop
    /// is reduced to its primitive root and the stem is rolled back into it.
    pub fn normalized(&self) -> Lasso<T> {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.cycle[i] == self.cycle[i - p]))
            .unwrap_or(n);
        let mut cycle: Vec<T> = self.cycle[..period].to_vec();
        let mut stem = self.stem.clone();
        while let Some(last) = stem.last() {
            if *last != cycle[cycle.len() - 1] {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        Lasso { stem, cycle }
    }

    /// True when both lassos denote the same infinite word.
    pub fn same_word(&self, other: &Lasso<T>) -> bool {
        self.normalized() == other.normalized()
    }
}

/// A trace that is either finite or a lasso; component projections of an
/// infinite product trace can be finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word<T> {
    Finite(Vec<T>),
    Infinite(Lasso<T>),
}

impl<T: Clone + PartialEq> Word<T> {
    /// Builds a word from a stem and a possibly empty loop.
    pub fn from_parts(stem: Vec<T>, cycle: Vec<T>) -> Self {
        if cycle.is_empty() {
            Word::Finite(stem)
        } else {
            Word::Infinite(Lasso { stem, cycle })
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        match self {
            Word::Finite(v) => v.contains(x),
            Word::Infinite(l) => l.contains(x),
        }
    }
}

/// Observable projection of a finite action sequence.
pub fn obs(trace: &[Action], sigma: &AlphabetPartition) -> Result<Vec<Action>> {
    let mut out = Vec::with_capacity(trace.len());
    for a in trace {
        if !sigma.contains(a) {
            return Err(Error::UnknownAction(a.to_string()));
        }
        if sigma.is_observable(a) {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// Observable projection of a lasso. A loop without observable actions is
/// reported as [`Error::UnobservableCycle`].
pub fn obs_lasso(trace: &Lasso<Action>, sigma: &AlphabetPartition) -> Result<Lasso<Action>> {
    let stem = obs(&trace.stem, sigma)?;
    let cycle = obs(&trace.cycle, sigma)?;
    if cycle.is_empty() {
        return Err(Error::UnobservableCycle);
    }
    Ok(Lasso { stem, cycle })
}

/// Observable projection of a finite-or-infinite word.
pub fn obs_word(trace: &Word<Action>, sigma: &AlphabetPartition) -> Result<Word<Action>> {
    match trace {
        Word::Finite(v) => Ok(Word::Finite(obs(v, sigma)?)),
        Word::Infinite(l) => Ok(Word::Infinite(obs_lasso(l, sigma)?)),
    }
}
