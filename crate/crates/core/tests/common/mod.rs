#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use dianet::composition::SystemSpec;
use dianet::io::parse_system;
use dianet::model::{
    Action, AlphabetPartition, Automaton, AutomatonBuilder, LabelledNet, TransitionId,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> SystemSpec {
    let path = fixture_dir().join(format!("{name}.dn"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_system(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every fixture, sorted by file name.
pub fn fixtures() -> Vec<(String, SystemSpec)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "dn").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| (n.clone(), fixture(&n)))
        .collect()
}

pub fn act(s: &str) -> Action {
    Action::from(s)
}

pub fn f() -> Action {
    act("f")
}

pub fn words(s: &str) -> Vec<Action> {
    s.split_whitespace().map(Action::from).collect()
}

pub fn idx(spec: &SystemSpec, name: &str) -> usize {
    spec.component_index(name).expect("component exists")
}

/// A single-component system holding `spec`'s component `name`.
pub fn alone(spec: &SystemSpec, name: &str) -> SystemSpec {
    let a = spec.components()[idx(spec, name)].clone();
    SystemSpec::new(name, vec![a], spec.sigma().clone()).unwrap()
}

/// All firing sequences of length at most `k` from the initial marking.
pub fn traces(net: &LabelledNet, k: usize) -> Vec<Vec<TransitionId>> {
    let mut out = vec![Vec::new()];
    let mut stack = vec![(net.initial().clone(), Vec::new())];
    while let Some((m, seq)) = stack.pop() {
        if seq.len() == k {
            continue;
        }
        for t in net.enabled(&m) {
            let mut s2 = seq.clone();
            s2.push(t);
            out.push(s2.clone());
            stack.push((net.fire(&m, t).unwrap(), s2));
        }
    }
    out
}

pub fn names(net: &LabelledNet, seq: &[TransitionId]) -> Vec<String> {
    seq.iter()
        .map(|&t| net.transition(t).name.to_string())
        .collect()
}

pub fn labels(net: &LabelledNet, seq: &[TransitionId]) -> Vec<Action> {
    seq.iter().map(|&t| net.label(t).clone()).collect()
}

pub fn observe(seq: &[Action], sigma: &AlphabetPartition) -> Vec<Action> {
    seq.iter()
        .filter(|a| sigma.is_observable(a))
        .cloned()
        .collect()
}

/// Synchronized product of automata, built directly on state tuples:
/// observable actions shared by several components move them together,
/// everything else interleaves. Returns (states, labelled edges).
/// States of a product as tuples, and its labelled edges.
pub type Product = (Vec<Vec<usize>>, Vec<(usize, Action, usize)>);

pub fn automata_product(components: &[Automaton], sigma: &AlphabetPartition) -> Product {
    let alph: Vec<BTreeSet<Action>> = components.iter().map(Automaton::alphabet).collect();
    let start = vec![0; components.len()];
    let mut index = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut edges = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let s = states[next].clone();
        let mut moves: Vec<(Action, Vec<usize>)> = Vec::new();
        let actions: BTreeSet<Action> = alph.iter().flatten().cloned().collect();
        for a in actions {
            let sharing: Vec<usize> = (0..components.len())
                .filter(|&i| alph[i].contains(&a))
                .collect();
            if sigma.is_observable(&a) {
                // every sharing component picks one of its a-edges
                let mut combos: Vec<Vec<usize>> = vec![s.clone()];
                for &i in &sharing {
                    let mut grown = Vec::new();
                    for c in &combos {
                        for (_, e) in components[i].outgoing(s[i]).filter(|(_, e)| e.action == a) {
                            let mut c2 = c.clone();
                            c2[i] = e.target;
                            grown.push(c2);
                        }
                    }
                    combos = grown;
                }
                moves.extend(combos.into_iter().map(|c| (a.clone(), c)));
            } else {
                for &i in &sharing {
                    for (_, e) in components[i].outgoing(s[i]).filter(|(_, e)| e.action == a) {
                        let mut c2 = s.clone();
                        c2[i] = e.target;
                        moves.push((a.clone(), c2));
                    }
                }
            }
        }
        for (a, t) in moves {
            let n = states.len();
            let to = *index.entry(t.clone()).or_insert_with(|| {
                states.push(t);
                n
            });
            edges.push((next, a, to));
        }
        next += 1;
    }
    (states, edges)
}

/// Direct diagnosability check on an automaton: pairs of states, the
/// second copy never taking `f` and staying among states reachable without
/// `f`; non-diagnosable iff a cycle of pairs is reachable after `f`.
pub fn automaton_diagnosable(a: &Automaton, f: &Action, sigma: &AlphabetPartition) -> bool {
    let start = (0usize, 0usize, false);
    let mut seen = HashMap::from([(start, 0usize)]);
    let mut order = vec![start];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut i = 0;
    while i < order.len() {
        let (x, y, flag) = order[i];
        let mut next = Vec::new();
        for (_, e) in a.outgoing(x) {
            if sigma.is_observable(&e.action) {
                for (_, e2) in a.outgoing(y).filter(|(_, e2)| e2.action == e.action) {
                    next.push((e.target, e2.target, flag));
                }
            } else {
                next.push((e.target, y, flag || &e.action == f));
            }
        }
        for (_, e2) in a.outgoing(y) {
            if !sigma.is_observable(&e2.action) && &e2.action != f {
                next.push((x, e2.target, flag));
            }
        }
        for s in next {
            let n = order.len();
            let id = *seen.entry(s).or_insert_with(|| {
                order.push(s);
                succ.push(Vec::new());
                n
            });
            succ[i].push(id);
        }
        i += 1;
    }
    // a flagged pair on a cycle: flagged pairs only reach flagged pairs
    let flagged: Vec<usize> = (0..order.len()).filter(|&n| order[n].2).collect();
    for &n in &flagged {
        let mut stack = succ[n].clone();
        let mut visited = BTreeSet::new();
        while let Some(m) = stack.pop() {
            if m == n {
                return false;
            }
            if visited.insert(m) {
                stack.extend(succ[m].iter().copied());
            }
        }
    }
    true
}

/// Parameters of a random system.
pub struct RandomShape {
    pub components: std::ops::RangeInclusive<usize>,
    pub states: std::ops::RangeInclusive<usize>,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            components: 2..=3,
            states: 2..=6,
        }
    }
}

/// A random system satisfying the modelling assumptions: every state has
/// a successor, and unobservable steps only go to higher-numbered states,
/// so there are no unobservable cycles. At most 3 observable actions, one
/// private unobservable action per component and at most 2 faults (8
/// actions in total).
pub fn random_system(seed: u64, shape: &RandomShape) -> SystemSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(shape.components.clone());
    let n_obs = rng.gen_range(2..=3);
    let n_faults = rng.gen_range(1..=2);
    let obs: Vec<Action> = (0..n_obs)
        .map(|i| Action::new(&format!("o{i}")).unwrap())
        .collect();
    let faults: Vec<Action> = (1..=n_faults)
        .map(|i| Action::new(&format!("f{i}")).unwrap())
        .collect();
    let private: Vec<Action> = (0..n)
        .map(|i| Action::new(&format!("u{i}")).unwrap())
        .collect();

    let mut components = Vec::new();
    for (c, own) in private.iter().enumerate() {
        let k = rng.gen_range(shape.states.clone());
        let name = |s: usize| format!("s{s}");
        let mut edges: BTreeSet<(usize, Action, usize)> = BTreeSet::new();
        for s in 0..k {
            let out = rng.gen_range(1..=2);
            for _ in 0..out {
                let roll: f64 = rng.gen();
                if s + 1 < k && roll < 0.35 {
                    let target = rng.gen_range(s + 1..k);
                    let a = if rng.gen_bool(0.5) {
                        faults.choose(&mut rng).unwrap().clone()
                    } else {
                        own.clone()
                    };
                    edges.insert((s, a, target));
                } else {
                    let target = rng.gen_range(0..k);
                    edges.insert((s, obs.choose(&mut rng).unwrap().clone(), target));
                }
            }
        }
        let mut b = AutomatonBuilder::new(format!("C{c}"), name(0));
        // group by source so states get created in index order when possible
        let by_src: BTreeMap<usize, Vec<(Action, usize)>> =
            edges.into_iter().fold(BTreeMap::new(), |mut m, (s, a, t)| {
                m.entry(s).or_default().push((a, t));
                m
            });
        for (s, outs) in by_src {
            for (a, t) in outs {
                b.push_edge(&name(s), a, &name(t));
            }
        }
        components.push(b.build().unwrap());
    }
    let mut unobs = private.clone();
    unobs.extend(faults.iter().cloned());
    let sigma = AlphabetPartition::new(obs, unobs, faults).unwrap();
    SystemSpec::new(format!("random{seed}"), components, sigma).unwrap()
}

/// Shortest path search helper: BFS distances over a successor function.
pub fn bfs<T: Clone + Eq + std::hash::Hash>(start: T, succ: impl Fn(&T) -> Vec<T>) -> Vec<T> {
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut q = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(x) = q.pop_front() {
        for y in succ(&x) {
            if seen.insert(y.clone()) {
                q.push_back(y);
            }
        }
        out.push(x);
    }
    out
}
