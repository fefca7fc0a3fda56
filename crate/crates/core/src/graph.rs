//! Small directed-graph helpers over adjacency lists.

/// Strongly connected components (iterative Tarjan). Returns the component
/// index of every node; components are numbered in reverse topological order.
pub fn tarjan_scc(succ: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, i)) = call.last() {
            if let Some(&w) = succ[v].get(i) {
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Nodes lying on some cycle (in a non-trivial SCC or with a self-loop).
pub fn cyclic_nodes(succ: &[Vec<usize>]) -> Vec<bool> {
    let comp = tarjan_scc(succ);
    let mut size = vec![0usize; succ.len()];
    for &c in &comp {
        size[c] += 1;
    }
    (0..succ.len())
        .map(|v| size[comp[v]] > 1 || succ[v].contains(&v))
        .collect()
}

/// Nodes from which an infinite path starts, i.e. that can reach a cycle.
pub fn infinite_future(succ: &[Vec<usize>]) -> Vec<bool> {
    let mut live = cyclic_nodes(succ);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut work: Vec<usize> = (0..succ.len()).filter(|&v| live[v]).collect();
    while let Some(w) = work.pop() {
        for &v in &pred[w] {
            if !live[v] {
                live[v] = true;
                work.push(v);
            }
        }
    }
    live
}
