//! Strongly connected components, condensation, and per-component periods.
//!
//! The maximal internally chain transitive sets of a pseudo-orbit graph are
//! exactly its components that carry a cycle (period > 0).

use std::collections::VecDeque;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::graph::TransitionGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SccDecomposition {
    /// Component id per vertex. Components are numbered by smallest member.
    pub component: Vec<usize>,
    /// Members of each component, ascending.
    pub components: Vec<Vec<usize>>,
    /// Condensation edges between distinct components, sorted.
    pub dag_edges: Vec<(usize, usize)>,
    /// gcd of the cycle lengths in each component; 0 when it has no cycle.
    pub periods: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn has_cycle(&self, c: usize) -> bool {
        self.periods[c] > 0
    }

    /// One component containing every vertex, and at least one cycle.
    pub fn is_strongly_connected_with_cycle(&self) -> bool {
        self.components.len() == 1 && self.periods[0] > 0
    }
}

/// Iterative Tarjan.
fn tarjan(graph: &TransitionGraph) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = graph.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(w) = graph.successor_at(v, *pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(comp);
            }
        }
    }
    out
}

pub fn scc_decompose(graph: &TransitionGraph) -> SccDecomposition {
    let n = graph.len();
    let mut components = tarjan(graph);
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_by_key(|c| c[0]);
    let mut component = vec![0; n];
    for (id, c) in components.iter().enumerate() {
        for &v in c {
            component[v] = id;
        }
    }

    let mut dag_edges = Vec::new();
    for u in 0..n {
        for w in graph.successors(u) {
            if component[u] != component[w] {
                dag_edges.push((component[u], component[w]));
            }
        }
    }
    dag_edges.sort_unstable();
    dag_edges.dedup();

    let periods = components
        .iter()
        .enumerate()
        .map(|(id, members)| component_period(graph, &component, id, members))
        .collect();

    SccDecomposition {
        component,
        components,
        dag_edges,
        periods,
    }
}

/// gcd of `level(u) + 1 − level(v)` over edges `u → v` inside the component,
/// with levels from a BFS rooted at its smallest member.
fn component_period(graph: &TransitionGraph, component: &[usize], id: usize, members: &[usize]) -> usize {
    let root = members[0];
    let mut level = vec![usize::MAX; graph.len()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in graph.successors(u) {
            if component[w] != id {
                continue;
            }
            if level[w] == usize::MAX {
                level[w] = level[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut g: usize = 0;
    for &u in members {
        for w in graph.successors(u) {
            if component[w] == id {
                g = g.gcd(&(level[u] + 1).abs_diff(level[w]));
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> TransitionGraph {
        TransitionGraph::from_successors((0..n).map(|i| vec![((i + 1) % n) as u32]).collect())
    }

    #[test]
    fn four_cycle_has_period_four() {
        let d = scc_decompose(&cycle(4));
        assert_eq!(d.components, vec![vec![0, 1, 2, 3]]);
        assert_eq!(d.periods, vec![4]);
        assert!(d.is_strongly_connected_with_cycle());
    }

    #[test]
    fn identity_gives_singletons_with_loops() {
        let g = TransitionGraph::from_successors((0..3).map(|i| vec![i]).collect());
        let d = scc_decompose(&g);
        assert_eq!(d.len(), 3);
        assert_eq!(d.periods, vec![1, 1, 1]);
        assert!(d.dag_edges.is_empty());
    }

    #[test]
    fn constant_map_condensation() {
        // everything falls into vertex 1, which has a loop
        let g = TransitionGraph::from_successors(vec![vec![1], vec![1], vec![1]]);
        let d = scc_decompose(&g);
        assert_eq!(d.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(d.periods, vec![0, 1, 0]);
        assert_eq!(d.dag_edges, vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn mixed_cycle_lengths() {
        // cycles of length 2 and 3 through 0
        let g = TransitionGraph::from_successors(vec![vec![1, 2], vec![0], vec![3], vec![0]]);
        assert_eq!(scc_decompose(&g).periods, vec![1]);
        // cycles of length 2 and 4
        let h = TransitionGraph::from_successors(vec![vec![1, 2], vec![0], vec![3], vec![4], vec![0]]);
        assert_eq!(scc_decompose(&h).periods, vec![2]);
    }
}
