//! Graphviz export of nets, verifiers and unfolding prefixes.
//!
//! Places are circles carrying their name as an external label (a marked
//! place shows a token); transitions are boxes labelled with their action.

use std::fmt::Write as _;

use crate::model::LabelledNet;
use crate::unfolding::OccurrenceNet;
use crate::verifier::VerifierNet;

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                q.push('\\');
                q.push(c);
            }
            '\n' => q.push_str("\\n"),
            _ => q.push(c),
        }
    }
    q.push('"');
    q
}

struct Graph {
    out: String,
}

impl Graph {
    fn new(name: &str) -> Self {
        let mut out = format!("digraph {} {{\n", quote(name));
        out.push_str("  rankdir=LR;\n");
        Graph { out }
    }

    fn place(&mut self, id: &str, name: &str, marked: bool) {
        let label = if marked { "●" } else { "" };
        let _ = writeln!(
            self.out,
            "  {} [shape=circle, label={}, xlabel={}];",
            quote(id),
            quote(label),
            quote(name)
        );
    }

    fn transition(&mut self, id: &str, label: &str, dashed: bool) {
        let style = if dashed { ", style=dashed" } else { "" };
        let _ = writeln!(
            self.out,
            "  {} [shape=box, label={}{style}];",
            quote(id),
            quote(label)
        );
    }

    fn arc(&mut self, from: &str, to: &str) {
        let _ = writeln!(self.out, "  {} -> {};", quote(from), quote(to));
    }

    fn finish(mut self) -> String {
        self.out.push_str("}\n");
        self.out
    }
}

fn net_with_labels(net: &LabelledNet, label: impl Fn(usize) -> String) -> String {
    let mut g = Graph::new(net.name());
    let pid = |i: usize| format!("p{i}");
    let tid = |i: usize| format!("t{i}");
    for p in net.place_ids() {
        g.place(
            &pid(p.index()),
            net.place_name(p),
            net.initial().contains(p),
        );
    }
    for t in net.transition_ids() {
        g.transition(&tid(t.index()), &label(t.index()), false);
        let tr = net.transition(t);
        for p in &tr.preset {
            g.arc(&pid(p.index()), &tid(t.index()));
        }
        for p in &tr.postset {
            g.arc(&tid(t.index()), &pid(p.index()));
        }
    }
    g.finish()
}

pub fn net_dot(net: &LabelledNet) -> String {
    net_with_labels(net, |t| net.transitions()[t].label.to_string())
}

/// Verifier transitions are labelled `a` when fused and `a^1` / `a^2` otherwise.
pub fn verifier_dot(v: &VerifierNet) -> String {
    net_with_labels(&v.net, |t| {
        v.display_label(crate::model::TransitionId(t as u32))
    })
}

/// Conditions are labelled with their place, events with their action;
/// cut-off events are dashed.
pub fn prefix_dot(prefix: &OccurrenceNet, net: &LabelledNet) -> String {
    let mut g = Graph::new(&format!("prefix({})", net.name()));
    let cid = |i: usize| format!("c{i}");
    let eid = |i: usize| format!("e{i}");
    for (i, c) in prefix.conditions().iter().enumerate() {
        g.place(&cid(i), net.place_name(c.place), c.producer.is_none());
    }
    for (i, e) in prefix.events().iter().enumerate() {
        g.transition(&eid(i), e.label.as_str(), e.cutoff);
        for &c in &e.preset {
            g.arc(&cid(c), &eid(i));
        }
        for &c in &e.postset {
            g.arc(&eid(i), &cid(c));
        }
    }
    g.finish()
}
