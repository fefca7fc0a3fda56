mod common;

use std::collections::BTreeSet;

use common::*;
use dianet::composition::{
    automaton_to_net, component_view, fault_free, product, prune_unreachable, system_net,
};
use dianet::model::{AutomatonBuilder, Budget, LabelledNet, NetBuilder, ReachabilityGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn name_set(net: &LabelledNet) -> (BTreeSet<String>, BTreeSet<String>) {
    (
        net.places().iter().cloned().collect(),
        net.transitions()
            .iter()
            .map(|t| t.name.to_string())
            .collect(),
    )
}

fn count_label(net: &LabelledNet, label: &str) -> usize {
    net.transitions()
        .iter()
        .filter(|t| t.label.as_str() == label)
        .count()
}

#[test]
fn component_b_translates_to_four_places_and_six_transitions() {
    let spec = fixture("ab");
    let b = automaton_to_net(&spec.components()[idx(&spec, "B")]);
    assert_eq!(b.places().len(), 4);
    assert_eq!(b.transitions().len(), 6);
    assert_eq!(b.initial().len(), 1);
    assert_eq!(b.marking_names(b.initial()), ["B.q0"]);
}

#[test]
fn one_state_automaton_gives_one_place() {
    let a = AutomatonBuilder::new("Z", "q").build().unwrap();
    let net = automaton_to_net(&a);
    assert_eq!(net.places().len(), 1);
    assert!(net.transitions().is_empty());
}

#[test]
fn translated_reachability_graph_matches_the_automaton() {
    for (_, spec) in fixtures() {
        for a in spec.components() {
            let net = automaton_to_net(a);
            let g = ReachabilityGraph::build(&net, Budget::default()).unwrap();
            assert_eq!(g.node_count(), a.reachable_states().len(), "{}", a.name());
            // node = marking {A.q}; edges correspond one to one with reachable edges
            let mut from_graph: Vec<(String, String, String)> = g
                .edges()
                .iter()
                .map(|e| {
                    (
                        net.marking_names(&g.markings()[e.from])[0].to_string(),
                        net.label(e.transition).to_string(),
                        net.marking_names(&g.markings()[e.to])[0].to_string(),
                    )
                })
                .collect();
            let reach: BTreeSet<usize> = a.reachable_states().into_iter().collect();
            let mut from_automaton: Vec<(String, String, String)> = a
                .edges()
                .iter()
                .filter(|e| reach.contains(&e.source))
                .map(|e| {
                    (
                        format!("{}.{}", a.name(), a.states()[e.source]),
                        e.action.to_string(),
                        format!("{}.{}", a.name(), a.states()[e.target]),
                    )
                })
                .collect();
            from_graph.sort();
            from_automaton.sort();
            assert_eq!(from_graph, from_automaton);
        }
    }
}

#[test]
fn component_a_reaches_four_markings() {
    let spec = fixture("ab");
    let net = automaton_to_net(&spec.components()[idx(&spec, "A")]);
    let g = ReachabilityGraph::build(&net, Budget::default()).unwrap();
    assert_eq!(g.node_count(), 4);
}

#[test]
fn faults_never_synchronize() {
    let n1 = system_net(&fixture("ab")).unwrap();
    // A's two f edges and B's single f edge stay separate
    assert_eq!(count_label(&n1.net, "f"), 3);
    for t in n1
        .net
        .transition_ids()
        .filter(|&t| n1.net.label(t).as_str() == "f")
    {
        assert_eq!(n1.origin[t.index()].len(), 1);
    }
}

#[test]
fn product_of_one_net_is_that_net() {
    let spec = fixture("cd");
    let c = automaton_to_net(&spec.components()[0]);
    let alph = vec![spec.components()[0].alphabet()];
    let p = product(std::slice::from_ref(&c), &alph, spec.sigma()).unwrap();
    assert_eq!(name_set(&p.net), name_set(&c));
    assert_eq!(p.net.initial(), c.initial());
    for t in c.transition_ids() {
        let t2 = p.net.transition_by_name(&c.transition(t).name).unwrap();
        assert_eq!(p.net.transition(t2), c.transition(t));
    }
}

#[test]
fn fused_transitions_have_one_participant_per_sharing_component() {
    for (_, spec) in fixtures() {
        let pn = system_net(&spec).unwrap();
        let alph = spec.alphabets();
        for t in pn.net.transition_ids() {
            let label = pn.net.label(t);
            let parts = &pn.origin[t.index()];
            let expected = if spec.sigma().is_observable(label) {
                alph.iter().filter(|a| a.contains(label)).count()
            } else {
                1
            };
            assert_eq!(parts.len(), expected, "{}", pn.net.transition(t).name);
        }
    }
}

/// Finds a lasso of `net` whose labels are exactly `stem · cycle`.
fn has_lasso(net: &LabelledNet, stem: &str, cycle: &str) -> bool {
    let stem = words(stem);
    let cycle = words(cycle);
    let all: Vec<_> = stem.iter().chain(&cycle).cloned().collect();
    fn go(
        net: &LabelledNet,
        m: dianet::model::Marking,
        rest: &[dianet::model::Action],
        k: usize,
        anchor: Option<dianet::model::Marking>,
        stem_len: usize,
    ) -> bool {
        let anchor = if k == stem_len {
            Some(m.clone())
        } else {
            anchor
        };
        let Some((a, tail)) = rest.split_first() else {
            return anchor.as_ref() == Some(&m);
        };
        net.enabled(&m)
            .into_iter()
            .filter(|&t| net.label(t) == a)
            .any(|t| {
                go(
                    net,
                    net.fire(&m, t).unwrap(),
                    tail,
                    k + 1,
                    anchor.clone(),
                    stem_len,
                )
            })
    }
    go(net, net.initial().clone(), &all, 0, None, stem.len())
}

#[test]
fn n2_contains_the_confusable_runs() {
    let n2 = system_net(&fixture("cd")).unwrap();
    assert!(has_lasso(&n2.net, "o2 u2", "o4"));
    assert!(has_lasso(&n2.net, "o2 f u2", "o4"));
    assert!(!has_lasso(&n2.net, "o2 f", "o3 o4"));
}

#[test]
fn pruning_n2_keeps_two_of_four_o3_fusions() {
    let n2 = system_net(&fixture("cd")).unwrap();
    let o3_fused = |net: &LabelledNet| {
        net.transitions()
            .iter()
            .filter(|t| t.label.as_str() == "o3" && t.name.contains('×'))
            .count()
    };
    assert_eq!(o3_fused(&n2.net), 4);
    let pruned = prune_unreachable(&n2, Budget::default()).unwrap();
    assert_eq!(o3_fused(&pruned.net), 2);
    let again = prune_unreachable(&pruned, Budget::default()).unwrap();
    assert_eq!(name_set(&again.net), name_set(&pruned.net));
}

#[test]
fn pruned_view_b_has_only_the_fault_and_the_o1_loop() {
    let spec = fixture("ab");
    let view = component_view(&spec, idx(&spec, "B"), &f()).unwrap();
    let pruned = prune_unreachable(&view, Budget::default()).unwrap();
    assert_eq!(pruned.net.places().len(), 2);
    assert_eq!(pruned.net.transitions().len(), 2);
    let labels: Vec<&str> = pruned
        .net
        .transitions()
        .iter()
        .map(|t| t.label.as_str())
        .collect();
    assert_eq!(labels, ["f", "o1"]);
    assert!(has_lasso(&pruned.net, "f", "o1"));
}

#[test]
fn pruning_preserves_traces_that_can_continue_forever() {
    // Every infinite run's finite prefixes survive pruning; compare the sets
    // of traces of length 6 that extend to length 12 in the original.
    for (_, spec) in fixtures() {
        let pn = system_net(&spec).unwrap();
        let pruned = prune_unreachable(&pn, Budget::default()).unwrap();
        let long: BTreeSet<Vec<String>> = traces(&pn.net, 10)
            .into_iter()
            .filter(|s| s.len() == 10)
            .map(|s| names(&pn.net, &s[..5]))
            .collect();
        let kept: BTreeSet<Vec<String>> = traces(&pruned.net, 5)
            .into_iter()
            .filter(|s| s.len() == 5)
            .map(|s| names(&pruned.net, &s))
            .collect();
        assert!(long.is_subset(&kept), "{}", spec.name());
        // and pruning adds nothing
        let all: BTreeSet<Vec<String>> = traces(&pn.net, 5)
            .into_iter()
            .map(|s| names(&pn.net, &s))
            .collect();
        assert!(kept.is_subset(&all));
    }
}

#[test]
fn fault_free_of_a_is_a_single_marked_place() {
    let spec = fixture("ab");
    let a = automaton_to_net(&spec.components()[idx(&spec, "A")]);
    let ff = fault_free(&a, &f());
    assert_eq!(ff.places(), ["A.q0"]);
    assert!(ff.transitions().is_empty());
    assert_eq!(ff.initial().len(), 1);
}

#[test]
fn fault_free_of_c_drops_the_faulty_branch() {
    let spec = fixture("cd");
    let c = automaton_to_net(&spec.components()[idx(&spec, "C")]);
    let ff = fault_free(&c, &f());
    assert_eq!(ff.places().len(), 4);
    let mut labels: Vec<&str> = ff.transitions().iter().map(|t| t.label.as_str()).collect();
    labels.sort();
    assert_eq!(labels, ["o1", "o2", "o3", "o4", "u2"]);
    assert!(!ff.places().contains(&"C.q3".to_string()));
}

#[test]
fn fault_free_without_faults_is_the_identity() {
    let spec = fixture("ab");
    let n = automaton_to_net(&spec.components()[idx(&spec, "B")]);
    let ff = fault_free(&n, &act("u9"));
    assert_eq!(name_set(&ff), name_set(&n));
}

#[test]
fn fault_free_never_enables_a_fault() {
    for (_, spec) in fixtures() {
        let n = system_net(&spec).unwrap().net;
        for fault in spec.sigma().faults() {
            let ff = fault_free(&n, fault);
            assert!(ff.transitions().iter().all(|t| &t.label != fault));
        }
    }
}

#[test]
fn fault_free_does_not_depend_on_transition_order() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (_, spec) in fixtures() {
        let n = system_net(&spec).unwrap().net;
        let reference = name_set(&fault_free(&n, &f_of(&spec)));
        for _ in 0..5 {
            let mut order: Vec<_> = n.transition_ids().collect();
            order.shuffle(&mut rng);
            let mut b = NetBuilder::new(n.name());
            for p in n.place_ids() {
                b.place(n.place_name(p), n.initial().contains(p));
            }
            for t in order {
                let tr = n.transition(t);
                b.transition(
                    tr.name.clone(),
                    tr.label.clone(),
                    tr.preset.clone(),
                    tr.postset.clone(),
                );
            }
            let shuffled = b.build().unwrap();
            assert_eq!(name_set(&fault_free(&shuffled, &f_of(&spec))), reference);
        }
    }
}

fn f_of(spec: &dianet::SystemSpec) -> dianet::model::Action {
    spec.sigma().faults().iter().next().unwrap().clone()
}

#[test]
fn view_d_of_n2_is_c_fault_free_times_d() {
    let spec = fixture("cd");
    let view = component_view(&spec, idx(&spec, "D"), &f()).unwrap();
    let c = automaton_to_net(&spec.components()[0]);
    let d = automaton_to_net(&spec.components()[1]);
    let expected = product(&[fault_free(&c, &f()), d], &spec.alphabets(), spec.sigma()).unwrap();
    assert_eq!(name_set(&view.net), name_set(&expected.net));
    assert_eq!(view.net.initial(), expected.net.initial());
}

#[test]
fn view_of_a_single_component_is_its_net() {
    let spec = alone(&fixture("cd"), "C");
    let view = component_view(&spec, 0, &f()).unwrap();
    assert_eq!(
        name_set(&view.net),
        name_set(&automaton_to_net(&spec.components()[0]))
    );
}

#[test]
fn view_index_is_checked() {
    let spec = fixture("cd");
    assert!(matches!(
        component_view(&spec, 5, &f()),
        Err(dianet::Error::NoSuchComponent { index: 5, len: 2 })
    ));
}

// Enumeration checks on bounded traces.

const DEPTH: usize = 8;

#[test]
fn projections_keep_faults_and_observations() {
    for name in ["ab", "cd"] {
        let spec = fixture(name);
        let pn = system_net(&spec).unwrap();
        let sigma = spec.sigma();
        let all = traces(&pn.net, DEPTH);
        let by_obs = {
            let mut m: std::collections::BTreeMap<Vec<_>, Vec<usize>> = Default::default();
            for (k, s) in all.iter().enumerate() {
                m.entry(observe(&labels(&pn.net, s), sigma))
                    .or_default()
                    .push(k);
            }
            m
        };
        for s in &all {
            for (i, a) in spec.components().iter().enumerate() {
                let local = pn.project_run(s, &[], i).unwrap();
                let dianet::model::Word::Finite(local) = local else {
                    unreachable!()
                };
                let local_labels: Vec<_> = local
                    .iter()
                    .map(|t| a.edges()[t.index()].action.clone())
                    .collect();
                // a fault in the projection is a fault in the run
                if local_labels.contains(&f()) {
                    assert!(labels(&pn.net, s).contains(&f()));
                }
            }
        }
        // runs with equal observations have equal observations per component
        for group in by_obs.values() {
            for i in 0..spec.components().len() {
                let a = &spec.components()[i];
                let local_obs = |k: usize| {
                    let dianet::model::Word::Finite(l) = pn.project_run(&all[k], &[], i).unwrap()
                    else {
                        unreachable!()
                    };
                    observe(
                        &l.iter()
                            .map(|t| a.edges()[t.index()].action.clone())
                            .collect::<Vec<_>>(),
                        sigma,
                    )
                };
                let first = local_obs(group[0]);
                for &k in &group[1..] {
                    assert_eq!(local_obs(k), first);
                }
            }
        }
    }
}

#[test]
fn view_traces_are_system_traces_with_fault_free_partners() {
    for name in ["ab", "cd"] {
        let spec = fixture(name);
        let n = system_net(&spec).unwrap();
        let expected_from_n = |i: usize| -> BTreeSet<Vec<String>> {
            traces(&n.net, DEPTH)
                .into_iter()
                .filter(|s| {
                    s.iter().all(|&t| {
                        n.origin[t.index()].iter().all(|&(c, lt)| {
                            c == i || spec.components()[c].edges()[lt.index()].action != f()
                        })
                    })
                })
                .map(|s| names(&n.net, &s))
                .collect()
        };
        for i in 0..spec.components().len() {
            let view = component_view(&spec, i, &f()).unwrap();
            let got: BTreeSet<Vec<String>> = traces(&view.net, DEPTH)
                .into_iter()
                .map(|s| names(&view.net, &s))
                .collect();
            assert_eq!(got, expected_from_n(i), "{name} view {i}");
        }
    }
}

#[test]
fn product_net_matches_the_automata_product() {
    for name in ["ab", "cd", "abcd", "two_faults"] {
        let spec = fixture(name);
        let pn = system_net(&spec).unwrap();
        let g = ReachabilityGraph::build(&pn.net, Budget::default()).unwrap();
        let (states, edges) = automata_product(spec.components(), spec.sigma());
        assert_eq!(g.node_count(), states.len(), "{name}");
        // map each tuple to the marking {A_i.q_i}
        let marking_of = |s: &Vec<usize>| {
            let names: Vec<String> = spec
                .components()
                .iter()
                .zip(s)
                .map(|(a, &q)| format!("{}.{}", a.name(), a.states()[q]))
                .collect();
            pn.net
                .marking_of(&names.iter().map(String::as_str).collect::<Vec<_>>())
        };
        let node: Vec<usize> = states
            .iter()
            .map(|s| g.node_of(&marking_of(s)).expect("reachable"))
            .collect();
        let mut from_net: Vec<(usize, String, usize)> = g
            .edges()
            .iter()
            .map(|e| (e.from, pn.net.label(e.transition).to_string(), e.to))
            .collect();
        let mut from_automata: Vec<(usize, String, usize)> = edges
            .iter()
            .map(|(x, a, y)| (node[*x], a.to_string(), node[*y]))
            .collect();
        from_net.sort();
        from_automata.sort();
        assert_eq!(from_net, from_automata, "{name}");
    }
}

#[test]
fn product_names_are_stable() {
    let n2 = system_net(&fixture("cd")).unwrap();
    assert!(n2.net.transition_by_name("C.t2×D.t1").is_some());
    assert_eq!(n2.net.name(), "C×D");
}
