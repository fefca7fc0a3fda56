//! Fault-lasso search on an explicit reachability graph.
//!
//! A lasso is an accepted witness when it contains at least one fault edge.
//! Among all such lassos the search returns the one with the fewest
//! transitions; ties are broken by the loop (lexicographically, on edge
//! ranks) and then by the stem.

use std::collections::VecDeque;

use crate::graph;

const INF: usize = usize::MAX;

/// A rooted graph whose edges carry a rank (the tie-break key) and a fault flag.
pub(crate) struct RankedGraph {
    /// Per node: (rank, target, is_fault), sorted by rank.
    pub succ: Vec<Vec<(u32, usize, bool)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FoundLasso {
    /// Edges as (source node, index into `succ[source]`).
    pub stem: Vec<(usize, usize)>,
    pub cycle: Vec<(usize, usize)>,
}

pub(crate) struct SearchOutcome {
    pub lasso: Option<FoundLasso>,
    /// Whether any infinite path exists at all.
    pub has_infinite_run: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Case {
    /// Fault in the stem, any loop.
    FaultInStem,
    /// Any stem, fault in the loop.
    FaultInLoop,
}

struct StateGraph<'a> {
    g: &'a RankedGraph,
    pred: Vec<Vec<(usize, bool)>>,
}

impl<'a> StateGraph<'a> {
    fn new(g: &'a RankedGraph) -> Self {
        let mut pred = vec![Vec::new(); g.succ.len()];
        for (u, es) in g.succ.iter().enumerate() {
            for &(_, v, f) in es {
                pred[v].push((u, f));
            }
        }
        StateGraph { g, pred }
    }

    fn n(&self) -> usize {
        self.g.succ.len()
    }

    /// BFS over (node, flag) states from `start`; `allowed` restricts nodes.
    fn forward(
        &self,
        start: (usize, bool),
        allowed: impl Fn(usize) -> bool,
        depth: usize,
    ) -> Vec<[usize; 2]> {
        let mut dist = vec![[INF; 2]; self.n()];
        dist[start.0][start.1 as usize] = 0;
        let mut q = VecDeque::from([start]);
        while let Some((u, fl)) = q.pop_front() {
            let d = dist[u][fl as usize];
            if d >= depth {
                continue;
            }
            for &(_, v, f) in &self.g.succ[u] {
                if !allowed(v) {
                    continue;
                }
                let nf = fl || f;
                if dist[v][nf as usize] == INF {
                    dist[v][nf as usize] = d + 1;
                    q.push_back((v, nf));
                }
            }
        }
        dist
    }

    /// Distance from every state to the nearest target state.
    fn backward(&self, targets: &[(usize, bool)]) -> Vec<[usize; 2]> {
        let mut dist = vec![[INF; 2]; self.n()];
        let mut q = VecDeque::new();
        for &(v, fl) in targets {
            dist[v][fl as usize] = 0;
            q.push_back((v, fl));
        }
        while let Some((v, fl)) = q.pop_front() {
            let d = dist[v][fl as usize];
            for &(u, f) in &self.pred[v] {
                // (u, pf) --f--> (v, pf || f) must equal (v, fl)
                for pf in [false, true] {
                    if (pf || f) == fl && dist[u][pf as usize] == INF {
                        dist[u][pf as usize] = d + 1;
                        q.push_back((u, pf));
                    }
                }
            }
        }
        dist
    }

    /// Lexicographically least path of exactly `len` edges from `start` to
    /// a target, given backward distances to the targets.
    fn greedy(&self, start: (usize, bool), len: usize, back: &[[usize; 2]]) -> Vec<(usize, usize)> {
        let (mut u, mut fl) = start;
        let mut path = Vec::with_capacity(len);
        for remaining in (1..=len).rev() {
            let (i, &(_, v, f)) = self.g.succ[u]
                .iter()
                .enumerate()
                .find(|(_, &(_, v, f))| back[v][(fl || f) as usize] == remaining - 1)
                .expect("a shortest completion exists");
            path.push((u, i));
            u = v;
            fl = fl || f;
        }
        path
    }
}

pub(crate) fn search(g: &RankedGraph) -> SearchOutcome {
    let n = g.succ.len();
    let plain: Vec<Vec<usize>> = g
        .succ
        .iter()
        .map(|es| es.iter().map(|&(_, v, _)| v).collect())
        .collect();
    let live = graph::infinite_future(&plain);
    let has_infinite_run = n > 0 && live[0];
    let exists = g.succ.iter().flatten().any(|&(_, v, f)| f && live[v]);
    if !exists {
        return SearchOutcome {
            lasso: None,
            has_infinite_run,
        };
    }

    let comp = graph::tarjan_scc(&plain);
    let cyclic = graph::cyclic_nodes(&plain);
    let sg = StateGraph::new(g);
    let from_root = sg.forward((0, false), |_| true, INF);
    let d_any = |m: usize| from_root[m][0].min(from_root[m][1]);

    let mut order: Vec<usize> = (0..n).filter(|&m| cyclic[m] && d_any(m) != INF).collect();
    order.sort_by_key(|&m| (d_any(m), m));

    let mut best = INF;
    // (total, anchor, case, stem length, loop length)
    let mut candidates: Vec<(usize, usize, Case, usize, usize)> = Vec::new();
    for &m in &order {
        let dm = d_any(m);
        if best != INF && dm + 1 > best {
            break;
        }
        let depth = if best == INF { INF } else { best - dm };
        // shortest loops through m: start from m's successors inside its SCC
        let mut loops = [INF; 2];
        for &(_, v, f) in &g.succ[m] {
            if comp[v] != comp[m] {
                continue;
            }
            let dist = sg.forward((v, f), |w| comp[w] == comp[m], depth.saturating_sub(1));
            for fl in 0..2 {
                if dist[m][fl] != INF {
                    loops[fl] = loops[fl].min(dist[m][fl] + 1);
                }
            }
        }
        let any_loop = loops[0].min(loops[1]);
        let mut consider = |total: usize, case: Case, s: usize, c: usize| {
            if total < best {
                best = total;
                candidates.retain(|x| x.0 <= best);
            }
            if total == best {
                candidates.push((total, m, case, s, c));
            }
        };
        if from_root[m][1] != INF && any_loop != INF {
            consider(
                from_root[m][1] + any_loop,
                Case::FaultInStem,
                from_root[m][1],
                any_loop,
            );
        }
        if loops[1] != INF {
            consider(dm + loops[1], Case::FaultInLoop, dm, loops[1]);
        }
    }

    let rank =
        |p: &[(usize, usize)]| -> Vec<u32> { p.iter().map(|&(u, i)| g.succ[u][i].0).collect() };
    type Ranked = (Vec<u32>, Vec<u32>, FoundLasso);
    let mut chosen: Option<Ranked> = None;
    for &(_, m, case, s, c) in &candidates {
        let (stem_targets, loop_targets) = match case {
            Case::FaultInStem => (vec![(m, true)], vec![(m, false), (m, true)]),
            Case::FaultInLoop => (vec![(m, false), (m, true)], vec![(m, true)]),
        };
        let stem = sg.greedy((0, false), s, &sg.backward(&stem_targets));
        let cycle = sg.greedy((m, false), c, &sg.backward(&loop_targets));
        let key = (rank(&cycle), rank(&stem));
        if chosen
            .as_ref()
            .is_none_or(|(kc, ks, _)| key < (kc.clone(), ks.clone()))
        {
            chosen = Some((key.0, key.1, FoundLasso { stem, cycle }));
        }
    }

    SearchOutcome {
        lasso: chosen.map(|(_, _, l)| l),
        has_infinite_run,
    }
}
