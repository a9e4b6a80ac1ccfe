//! Certified pseudo-orbits (chains) and searches over transition graphs.
//!
//! A chain `x_0, ..., x_m` has `m >= 1` steps and every step is an edge
//! `x_i → x_{i+1}`, i.e. `(f(x_i), x_{i+1}) ∈ D`. A single point is not a
//! chain, so a chain from `x` to itself needs a genuine cycle.
//!
//! Witnesses are deterministic: among all admissible chains the searches
//! return the lexicographically smallest one.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::TransitionGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    #[serde(skip)]
    graph: u64,
    points: Vec<usize>,
}

impl Chain {
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Number of steps (points minus one).
    pub fn length(&self) -> usize {
        self.points.len() - 1
    }

    pub fn first(&self) -> usize {
        self.points[0]
    }

    pub fn last(&self) -> usize {
        *self.points.last().expect("chains are non-empty")
    }

    pub fn graph_fingerprint(&self) -> u64 {
        self.graph
    }

    pub fn into_points(self) -> Vec<usize> {
        self.points
    }

    /// `Γ1 + Γ2`: joins at the shared point; lengths add.
    pub fn concatenate(&self, other: &Chain) -> Result<Chain> {
        if self.graph != other.graph {
            return Err(invalid("cannot concatenate chains from different graphs"));
        }
        if self.last() != other.first() {
            return Err(Error::EndpointMismatch {
                left_end: self.last(),
                right_start: other.first(),
            });
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Ok(Chain {
            graph: self.graph,
            points,
        })
    }
}

/// Certifies `points` as a chain in `graph`.
pub fn validate_chain(graph: &TransitionGraph, points: &[usize]) -> Result<Chain> {
    if points.len() < 2 {
        return Err(invalid("a chain needs at least two points"));
    }
    if let Some(&bad) = points.iter().find(|&&p| p >= graph.len()) {
        return Err(invalid(format!("vertex {bad} out of range 0..{}", graph.len())));
    }
    if let Some(step) = points.windows(2).position(|w| !graph.has_edge(w[0], w[1])) {
        return Err(Error::NotAChain { step });
    }
    Ok(Chain {
        graph: graph.fingerprint(),
        points: points.to_vec(),
    })
}

fn certified(graph: &TransitionGraph, points: Vec<usize>) -> Chain {
    debug_assert!(validate_chain(graph, &points).is_ok());
    Chain {
        graph: graph.fingerprint(),
        points,
    }
}

fn check_vertex(graph: &TransitionGraph, v: usize) -> Result<()> {
    if v < graph.len() {
        Ok(())
    } else {
        Err(invalid(format!("vertex {v} out of range 0..{}", graph.len())))
    }
}

/// Distances (possibly zero) from every vertex to `target`, via reverse BFS.
fn distances_to(graph: &TransitionGraph, pred: &[Vec<u32>], target: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.len()];
    dist[target] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued");
        for &u in &pred[v] {
            let u = u as usize;
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Shortest chain from `x` to `y` (at least one step), lexicographically
/// smallest among the shortest.
pub fn find_chain(graph: &TransitionGraph, x: usize, y: usize) -> Result<Chain> {
    check_vertex(graph, x)?;
    check_vertex(graph, y)?;
    let pred = graph.predecessors();
    let dist = distances_to(graph, &pred, y);
    let first = graph
        .successors(x)
        .filter_map(|w| dist[w].map(|d| (d, w)))
        .min()
        .ok_or(Error::NoChain { from: x, to: y })?;
    let mut points = vec![x, first.1];
    let mut cur = first.1;
    let mut remaining = first.0;
    while remaining > 0 {
        cur = graph
            .successors(cur)
            .find(|&w| dist[w] == Some(remaining - 1))
            .expect("BFS layers are consistent");
        points.push(cur);
        remaining -= 1;
    }
    Ok(certified(graph, points))
}

/// Layers `B_k = {v : some chain of exactly k steps runs from v to target}`
/// for `k = 0..=max`.
fn backward_layers(graph: &TransitionGraph, pred: &[Vec<u32>], target: usize, max: usize) -> Vec<FixedBitSet> {
    let n = graph.len();
    let mut layers = Vec::with_capacity(max + 1);
    let mut cur = FixedBitSet::with_capacity(n);
    cur.insert(target);
    layers.push(cur);
    for _ in 0..max {
        let prev = layers.last().expect("non-empty");
        let mut next = FixedBitSet::with_capacity(n);
        for v in prev.ones() {
            for &u in &pred[v] {
                next.insert(u as usize);
            }
        }
        layers.push(next);
    }
    layers
}

fn walk_layers(graph: &TransitionGraph, layers: &[FixedBitSet], start: usize, steps: usize) -> Vec<usize> {
    let mut points = Vec::with_capacity(steps + 1);
    points.push(start);
    let mut cur = start;
    for k in (0..steps).rev() {
        cur = graph
            .successors(cur)
            .find(|&w| layers[k].contains(w))
            .expect("layer membership guarantees a successor");
        points.push(cur);
    }
    points
}

/// A chain from `x` to `y` with exactly `n` steps, if one exists.
pub fn find_chain_exact_length(graph: &TransitionGraph, x: usize, y: usize, n: usize) -> Result<Option<Chain>> {
    check_vertex(graph, x)?;
    check_vertex(graph, y)?;
    if n < 1 {
        return Err(invalid("exact-length search needs n >= 1"));
    }
    let pred = graph.predecessors();
    let layers = backward_layers(graph, &pred, y, n);
    if !layers[n].contains(x) {
        return Ok(None);
    }
    Ok(Some(certified(graph, walk_layers(graph, &layers, x, n))))
}

/// Every `n <= max_len` for which a cycle of exactly `n` steps passes through `z`.
pub fn cycle_lengths_through(graph: &TransitionGraph, z: usize, max_len: usize) -> Result<Vec<usize>> {
    check_vertex(graph, z)?;
    if max_len < 1 {
        return Err(invalid("max_len must be >= 1"));
    }
    let n = graph.len();
    let mut reach = FixedBitSet::with_capacity(n);
    reach.insert(z);
    let mut lengths = Vec::new();
    for k in 1..=max_len {
        let mut next = FixedBitSet::with_capacity(n);
        for v in reach.ones() {
            for w in graph.successors(v) {
                next.insert(w);
            }
        }
        if next.contains(z) {
            lengths.push(k);
        }
        if next.count_ones(..) == 0 {
            break;
        }
        reach = next;
    }
    Ok(lengths)
}

/// Two cycles through `z` whose lengths are co-prime, both at most `max_len`.
///
/// Prefers the pair of lengths `(r, r + 1)`: for a successor `w` of `z`,
/// chains of a common length `r` from `z` and from `w` back to `z` give
/// cycles of lengths `r` and `r + 1`. Falls back to a scan of achievable
/// cycle lengths.
pub fn coprime_cycles(graph: &TransitionGraph, z: usize, max_len: usize) -> Result<Option<(Chain, Chain)>> {
    check_vertex(graph, z)?;
    if max_len < 2 {
        return Err(invalid("co-prime cycle search needs max_len >= 2"));
    }
    let pred = graph.predecessors();
    let layers = backward_layers(graph, &pred, z, max_len - 1);

    let mut best: Option<(usize, usize)> = None;
    for w in graph.successors(z) {
        if let Some(r) = (1..max_len).find(|&r| layers[r].contains(z) && layers[r].contains(w)) {
            if best.is_none_or(|(br, _)| r < br) {
                best = Some((r, w));
            }
        }
    }
    if let Some((r, w)) = best {
        let short = walk_layers(graph, &layers, z, r);
        let mut long = vec![z];
        long.extend(walk_layers(graph, &layers, w, r));
        return Ok(Some((certified(graph, short), certified(graph, long))));
    }

    let lengths = cycle_lengths_through(graph, z, max_len)?;
    for (i, &a) in lengths.iter().enumerate() {
        if let Some(&b) = lengths[i + 1..].iter().find(|&&b| a.gcd(&b) == 1) {
            let layers = backward_layers(graph, &pred, z, b);
            let first = walk_layers(graph, &layers, z, a);
            let second = walk_layers(graph, &layers, z, b);
            return Ok(Some((certified(graph, first), certified(graph, second))));
        }
    }
    Ok(None)
}
