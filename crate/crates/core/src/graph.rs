//! Sparse directed graphs over dense vertex ids `0..n`.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use crate::relation::BitMatrix;

/// Directed graph with sorted successor lists.
///
/// Every pseudo-orbit graph in this crate (base, iterate, product, hyperspace)
/// is a `TransitionGraph`; chains and analyses work over any of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    succ: Vec<Vec<u32>>,
    dead: Vec<usize>,
    fingerprint: u64,
}

impl TransitionGraph {
    /// Builds from successor lists; lists are sorted and deduplicated.
    pub fn from_successors(mut succ: Vec<Vec<u32>>) -> Self {
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let dead = succ
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| i)
            .collect();
        let mut h = DefaultHasher::new();
        succ.hash(&mut h);
        Self {
            succ,
            dead,
            fingerprint: h.finish(),
        }
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        Self::from_successors(m.rows().iter().map(|r| r.ones().map(|j| j as u32).collect()).collect())
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::empty(self.len());
        for (i, s) in self.succ.iter().enumerate() {
            for &j in s {
                m.set(i, j as usize, true);
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[v].iter().map(|&w| w as usize)
    }

    pub fn successor_at(&self, v: usize, i: usize) -> Option<usize> {
        self.succ[v].get(i).map(|&w| w as usize)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.len() && self.succ[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Vertices with no outgoing edge. Chains cannot be extended from them.
    pub fn dead_vertices(&self) -> &[usize] {
        &self.dead
    }

    pub fn has_dead_vertices(&self) -> bool {
        !self.dead.is_empty()
    }

    /// Content hash; equal graphs have equal fingerprints.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn predecessors(&self) -> Vec<Vec<u32>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (u, s) in self.succ.iter().enumerate() {
            for &v in s {
                pred[v as usize].push(u as u32);
            }
        }
        pred
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.len() == other.len() && (0..self.len()).all(|u| self.successors(u).all(|v| other.has_edge(u, v)))
    }

    /// BFS distances (in steps, `>= 1`) from `source` to every vertex;
    /// `None` when unreachable by a path with at least one edge.
    pub fn step_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for w in self.successors(source) {
            if dist[w].is_none() {
                dist[w] = Some(1);
                queue.push_back(w);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("queued vertices have a distance");
            for w in self.successors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
