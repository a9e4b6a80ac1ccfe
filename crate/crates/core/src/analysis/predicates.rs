//! Decision procedures for chain properties at a fixed entourage.
//!
//! Every positive verdict carries a witness and every negative verdict a
//! counterexample. Both can be re-checked against a rebuilt graph with
//! [`check_result`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::scc::scc_decompose;
use crate::chains::{coprime_cycles, find_chain, validate_chain, Chain};
use crate::error::{invalid, Result};
use crate::graph::TransitionGraph;
use crate::hyperspace::{build_hyper_transition_graph, HyperSystem};
use crate::scalar::Scalar;
use crate::system::{build_transition_graph, MapSystem, ProductSystem};
use crate::uniform::{Entourage, EntourageLabel};

/// Which graph a witness lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GraphKind {
    Base,
    Iterate(usize),
    Product(usize),
    Hyper(usize),
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Base => write!(f, "base"),
            GraphKind::Iterate(n) => write!(f, "iterate:{n}"),
            GraphKind::Product(n) => write!(f, "product:{n}"),
            GraphKind::Hyper(n) => write!(f, "hyper:{n}"),
        }
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "base" {
            return Ok(GraphKind::Base);
        }
        let (kind, n) = s.split_once(':').ok_or_else(|| format!("bad graph kind `{s}`"))?;
        let n: usize = n.parse().map_err(|_| format!("bad graph order in `{s}`"))?;
        if n == 0 {
            return Err(format!("graph order must be >= 1 in `{s}`"));
        }
        match kind {
            "iterate" => Ok(GraphKind::Iterate(n)),
            "product" => Ok(GraphKind::Product(n)),
            "hyper" => Ok(GraphKind::Hyper(n)),
            _ => Err(format!("bad graph kind `{s}`")),
        }
    }
}

impl From<GraphKind> for String {
    fn from(k: GraphKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for GraphKind {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

/// Chains from `root` to every vertex and back, packed as two BFS trees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningCertificate {
    pub root: usize,
    /// Tree edges `out_parent[v] → v` leading out of the root.
    pub out_parent: Vec<Option<usize>>,
    /// Tree edges `v → in_next[v]` leading into the root.
    pub in_next: Vec<Option<usize>>,
    pub root_cycle: Chain,
}

impl SpanningCertificate {
    /// The chain `x → root → y` spelled out by the two trees.
    pub fn chain(&self, graph: &TransitionGraph, x: usize, y: usize) -> Result<Chain> {
        if x == self.root && y == self.root {
            return Ok(self.root_cycle.clone());
        }
        let mut points = vec![x];
        let mut cur = x;
        while cur != self.root {
            cur = self.in_next[cur].ok_or_else(|| invalid("broken in-tree"))?;
            points.push(cur);
        }
        let mut tail = vec![y];
        let mut cur = y;
        while cur != self.root {
            cur = self.out_parent[cur].ok_or_else(|| invalid("broken out-tree"))?;
            tail.push(cur);
        }
        tail.pop();
        points.extend(tail.into_iter().rev());
        validate_chain(graph, &points)
    }

    pub fn validate(&self, graph: &TransitionGraph) -> std::result::Result<(), String> {
        let n = graph.len();
        if self.root >= n || self.out_parent.len() != n || self.in_next.len() != n {
            return Err("certificate does not match the graph size".into());
        }
        let cycle = validate_chain(graph, self.root_cycle.points()).map_err(|e| e.to_string())?;
        if cycle.first() != self.root || cycle.last() != self.root {
            return Err("root cycle does not start and end at the root".into());
        }
        for (name, tree, forward) in [("out", &self.out_parent, false), ("in", &self.in_next, true)] {
            for v in 0..n {
                let mut cur = v;
                let mut steps = 0;
                while cur != self.root {
                    let next = tree[cur].ok_or_else(|| format!("{name}-tree misses vertex {cur}"))?;
                    if next >= n {
                        return Err(format!("{name}-tree points outside the graph"));
                    }
                    let ok = if forward {
                        graph.has_edge(cur, next)
                    } else {
                        graph.has_edge(next, cur)
                    };
                    if !ok {
                        return Err(format!("{name}-tree uses a non-edge at {cur}"));
                    }
                    cur = next;
                    steps += 1;
                    if steps > n {
                        return Err(format!("{name}-tree has a cycle"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Spanning(SpanningCertificate),
    /// Maximal internally chain transitive sets.
    Components {
        sets: Vec<Vec<usize>>,
    },
    /// Smallest `N` with chains of every length `>= N` between all pairs.
    MinimalLength {
        n: usize,
    },
    /// Exact-length `n` chains from `u` cover every vertex.
    ExactLength {
        u: Vec<usize>,
        n: usize,
    },
    /// A cycle through each recurrent vertex.
    Cycles {
        chains: Vec<Chain>,
    },
    CyclePair {
        vertex: usize,
        short: Chain,
        long: Chain,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    NoChain {
        from: usize,
        to: usize,
    },
    /// Strongly connected with this period (> 1).
    Period {
        period: usize,
    },
    /// The reachable sets from `u` repeat (`R_start = R_{start+period}`)
    /// without ever covering the carrier.
    ReachableSetsCycle {
        u: Vec<usize>,
        start: usize,
        period: usize,
    },
    /// No covering length up to `cap`.
    CapExceeded {
        u: Vec<usize>,
        cap: usize,
    },
    NotRecurrent {
        vertex: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence<W> {
    pub graph: GraphKind,
    #[serde(flatten)]
    pub item: W,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPropertyResult {
    pub property: String,
    pub graph: GraphKind,
    pub epsilon: String,
    pub verdict: bool,
    pub witnesses: Vec<Evidence<Witness>>,
    pub counterexample: Option<Evidence<Counterexample>>,
    /// Search bounds and derived numbers (`cap`, `n_max`, `minimal_n`, ...).
    pub bounds: BTreeMap<String, usize>,
    /// Per-vertex flags, for recurrence.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex_flags: Option<Vec<bool>>,
}

impl ChainPropertyResult {
    fn new(property: &str, graph: GraphKind) -> Self {
        Self {
            property: property.to_string(),
            graph,
            epsilon: String::new(),
            verdict: false,
            witnesses: Vec::new(),
            counterexample: None,
            bounds: BTreeMap::new(),
            vertex_flags: None,
        }
    }

    fn witness(mut self, graph: GraphKind, item: Witness) -> Self {
        self.witnesses.push(Evidence { graph, item });
        self
    }

    fn refute(mut self, graph: GraphKind, item: Counterexample) -> Self {
        self.verdict = false;
        self.counterexample = Some(Evidence { graph, item });
        self
    }

    fn bound(mut self, key: &str, value: usize) -> Self {
        self.bounds.insert(key.to_string(), value);
        self
    }

    pub fn with_epsilon(mut self, epsilon: String) -> Self {
        self.epsilon = epsilon;
        self
    }
}

pub fn epsilon_label<T: Scalar>(entourage: &Entourage<T>) -> String {
    match entourage.label() {
        EntourageLabel::Metric(eps) => eps.to_string(),
        EntourageLabel::Explicit => "explicit".to_string(),
    }
}

fn reversed(graph: &TransitionGraph) -> TransitionGraph {
    TransitionGraph::from_successors(graph.predecessors())
}

/// Either a spanning certificate, or a pair with no chain between them.
///
/// Vertex 0 is the hub: the graph is chain transitive iff 0 reaches every
/// vertex and every vertex reaches 0, each by at least one step.
pub fn chain_transitivity(graph: &TransitionGraph) -> std::result::Result<SpanningCertificate, Counterexample> {
    let n = graph.len();
    assert!(n > 0, "graphs over a carrier are non-empty");
    let from_root = graph.step_distances(0);
    if let Some(y) = from_root.iter().position(Option::is_none) {
        return Err(Counterexample::NoChain { from: 0, to: y });
    }
    let rev = reversed(graph);
    let to_root = rev.step_distances(0);
    if let Some(x) = to_root.iter().position(Option::is_none) {
        return Err(Counterexample::NoChain { from: x, to: 0 });
    }
    Ok(SpanningCertificate {
        root: 0,
        out_parent: bfs_tree(graph, 0),
        in_next: bfs_tree(&rev, 0),
        root_cycle: find_chain(graph, 0, 0).expect("0 reaches itself"),
    })
}

/// BFS tree from `root`; `parent[v]` is the vertex that discovered `v`.
fn bfs_tree(graph: &TransitionGraph, root: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; graph.len()];
    let mut seen = FixedBitSet::with_capacity(graph.len());
    seen.insert(root);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in graph.successors(u) {
            if !seen.put(w) {
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

pub fn transitive_on_graph(graph: &TransitionGraph, kind: GraphKind) -> ChainPropertyResult {
    let r = ChainPropertyResult::new("transitive", kind);
    match chain_transitivity(graph) {
        Ok(cert) => {
            let mut r = r.witness(kind, Witness::Spanning(cert));
            r.verdict = true;
            r
        }
        Err(c) => r.refute(kind, c),
    }
}

/// Maximal internally chain transitive sets: components carrying a cycle.
pub fn internally_chain_transitive_sets(graph: &TransitionGraph) -> Vec<Vec<usize>> {
    let d = scc_decompose(graph);
    d.components
        .iter()
        .zip(&d.periods)
        .filter(|(_, &p)| p > 0)
        .map(|(c, _)| c.clone())
        .collect()
}

pub fn internal_on_graph(graph: &TransitionGraph, kind: GraphKind) -> ChainPropertyResult {
    let sets = internally_chain_transitive_sets(graph);
    let count = sets.len();
    let mut r = ChainPropertyResult::new("internal", kind)
        .witness(kind, Witness::Components { sets })
        .bound("count", count);
    // The verdict records whether any internally chain transitive set exists.
    r.verdict = count > 0;
    r
}

/// Wielandt's bound `N² − 2N + 2` on the exponent of a primitive graph.
pub fn wielandt_bound(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        n * n - 2 * n + 2
    }
}

/// The smallest `N` such that the `N`-th boolean power of the adjacency
/// matrix is all-true, scanning up to `cap`.
pub fn minimal_mixing_length(graph: &TransitionGraph, cap: usize) -> Option<usize> {
    let m = graph.to_matrix();
    let mut power = m.clone();
    for k in 1..=cap {
        if power.is_full() {
            return Some(k);
        }
        power = power.compose(&m);
    }
    None
}

pub fn mixing_on_graph(graph: &TransitionGraph, kind: GraphKind) -> ChainPropertyResult {
    let cap = wielandt_bound(graph.len());
    let r = ChainPropertyResult::new("mixing", kind).bound("cap", cap);
    let cert = match chain_transitivity(graph) {
        Ok(cert) => cert,
        Err(c) => return r.refute(kind, c),
    };
    let period = scc_decompose(graph).periods[0];
    if period > 1 {
        return r
            .refute(kind, Counterexample::Period { period })
            .bound("period", period);
    }
    match minimal_mixing_length(graph, cap) {
        Some(n) => {
            let mut r = r
                .witness(kind, Witness::Spanning(cert))
                .witness(kind, Witness::MinimalLength { n })
                .bound("minimal_n", n)
                .bound("period", 1);
            r.verdict = true;
            r
        }
        // Unreachable for primitive graphs.
        None => r.refute(kind, Counterexample::Period { period }),
    }
}

/// Chain transitivity of the tensor square.
pub fn weak_mixing_on_graph(graph: &TransitionGraph) -> ChainPropertyResult {
    let square = crate::system::tensor_power(graph, 2);
    let mut r = transitive_on_graph(&square, GraphKind::Product(2));
    r.property = "weak_mixing".into();
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Covers(usize),
    Cycles { start: usize, period: usize },
    CapExceeded,
}

pub fn successor_image(graph: &TransitionGraph, set: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(graph.len());
    for v in set.ones() {
        for w in graph.successors(v) {
            out.insert(w);
        }
    }
    out
}

/// Iterates `R_0 = U`, `R_{k+1} = succ(R_k)` until some `R_k` with `k >= 1`
/// is everything, the sequence repeats, or `cap` is reached.
pub fn exact_cover_length(graph: &TransitionGraph, u: &[usize], cap: usize) -> ExactOutcome {
    let n = graph.len();
    let mut r = FixedBitSet::with_capacity(n);
    r.extend(u.iter().copied());
    let mut seen = HashMap::new();
    seen.insert(r.clone(), 0usize);
    for k in 1..=cap {
        r = successor_image(graph, &r);
        if r.count_ones(..) == n {
            return ExactOutcome::Covers(k);
        }
        if let Some(&j) = seen.get(&r) {
            return ExactOutcome::Cycles {
                start: j,
                period: k - j,
            };
        }
        seen.insert(r.clone(), k);
    }
    ExactOutcome::CapExceeded
}

pub fn exact_on_graph(
    graph: &TransitionGraph,
    kind: GraphKind,
    u: &[usize],
    cap: usize,
) -> Result<ChainPropertyResult> {
    if u.is_empty() {
        return Err(invalid("exactness needs a non-empty U"));
    }
    if let Some(&bad) = u.iter().find(|&&x| x >= graph.len()) {
        return Err(invalid(format!("vertex {bad} of U out of range 0..{}", graph.len())));
    }
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    let r = ChainPropertyResult::new("exact", kind).bound("cap", cap);
    Ok(match exact_cover_length(graph, &u, cap) {
        ExactOutcome::Covers(n) => {
            let mut r = r.witness(kind, Witness::ExactLength { u, n }).bound("n_e", n);
            r.verdict = true;
            r
        }
        ExactOutcome::Cycles { start, period } => {
            r.refute(kind, Counterexample::ReachableSetsCycle { u, start, period })
        }
        ExactOutcome::CapExceeded => r.refute(kind, Counterexample::CapExceeded { u, cap }),
    })
}

/// Exactness from every singleton, which at a fixed entourage stands in for
/// every non-empty open set.
pub fn exact_everywhere_on_graph(graph: &TransitionGraph, kind: GraphKind, cap: usize) -> ChainPropertyResult {
    let mut r = ChainPropertyResult::new("exact", kind).bound("cap", cap);
    let mut worst = 0;
    for x in 0..graph.len() {
        let single = exact_on_graph(graph, kind, &[x], cap).expect("valid singleton");
        match single.counterexample {
            Some(c) => return r.refute(c.graph, c.item),
            None => {
                worst = worst.max(single.bounds["n_e"]);
                r.witnesses.extend(single.witnesses);
            }
        }
    }
    r.verdict = true;
    r.bound("max_n_e", worst)
}

/// `recurrent[x]` iff `x` lies on a cycle.
pub fn recurrent_vertices(graph: &TransitionGraph) -> Vec<bool> {
    let d = scc_decompose(graph);
    d.component.iter().map(|&c| d.periods[c] > 0).collect()
}

pub fn recurrent_on_graph(graph: &TransitionGraph, kind: GraphKind) -> ChainPropertyResult {
    let flags = recurrent_vertices(graph);
    let mut r = ChainPropertyResult::new("recurrent", kind);
    let chains = flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(x, _)| find_chain(graph, x, x).expect("recurrent vertices have cycles"))
        .collect();
    r = r.witness(kind, Witness::Cycles { chains });
    if let Some(x) = flags.iter().position(|&f| !f) {
        r = r.refute(kind, Counterexample::NotRecurrent { vertex: x });
    } else {
        r.verdict = true;
    }
    r.vertex_flags = Some(flags);
    r
}

/// A co-prime cycle pair at every vertex, or the first vertex without one.
pub fn coprime_everywhere(graph: &TransitionGraph, max_len: usize) -> std::result::Result<Vec<Witness>, usize> {
    (0..graph.len())
        .map(|z| match coprime_cycles(graph, z, max_len).expect("valid vertex") {
            Some((short, long)) => Ok(Witness::CyclePair { vertex: z, short, long }),
            None => Err(z),
        })
        .collect()
}

// System-level wrappers.

pub fn is_chain_transitive<T: Scalar>(system: &MapSystem<T>, e: &Entourage<T>) -> Result<ChainPropertyResult> {
    let g = build_transition_graph(system, e)?;
    Ok(transitive_on_graph(&g, GraphKind::Base).with_epsilon(epsilon_label(e)))
}

pub fn internally_chain_transitive_subsets<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
) -> Result<Vec<Vec<usize>>> {
    Ok(internally_chain_transitive_sets(&build_transition_graph(system, e)?))
}

pub fn is_chain_mixing<T: Scalar>(system: &MapSystem<T>, e: &Entourage<T>) -> Result<ChainPropertyResult> {
    let g = build_transition_graph(system, e)?;
    Ok(mixing_on_graph(&g, GraphKind::Base).with_epsilon(epsilon_label(e)))
}

pub fn is_chain_weakly_mixing<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    budget: usize,
) -> Result<ChainPropertyResult> {
    let mut r = is_product_transitive(system, e, 2, budget)?;
    r.property = "weak_mixing".into();
    Ok(r)
}

/// Transitivity of `f^n` for `n = 1..=n_max`; reports the first failure.
pub fn is_totally_chain_transitive<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    n_max: usize,
) -> Result<ChainPropertyResult> {
    if n_max < 1 {
        return Err(invalid("n_max must be >= 1"));
    }
    let mut r = ChainPropertyResult::new("totally_transitive", GraphKind::Base)
        .bound("n_max", n_max)
        .with_epsilon(epsilon_label(e));
    for n in 1..=n_max {
        let kind = if n == 1 { GraphKind::Base } else { GraphKind::Iterate(n) };
        let g = build_transition_graph(&system.iterate(n)?, e)?;
        match chain_transitivity(&g) {
            Ok(cert) => r = r.witness(kind, Witness::Spanning(cert)),
            Err(c) => return Ok(r.refute(kind, c).bound("first_failing_n", n)),
        }
    }
    r.verdict = true;
    Ok(r)
}

pub fn is_exact_by_chains<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    u: &[usize],
    cap: Option<usize>,
) -> Result<ChainPropertyResult> {
    let g = build_transition_graph(system, e)?;
    let cap = cap.unwrap_or(g.len() * g.len());
    Ok(exact_on_graph(&g, GraphKind::Base, u, cap)?.with_epsilon(epsilon_label(e)))
}

pub fn is_exact_from_every_point<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    cap: Option<usize>,
) -> Result<ChainPropertyResult> {
    let g = build_transition_graph(system, e)?;
    let cap = cap.unwrap_or(g.len() * g.len());
    Ok(exact_everywhere_on_graph(&g, GraphKind::Base, cap).with_epsilon(epsilon_label(e)))
}

pub fn is_chain_recurrent<T: Scalar>(system: &MapSystem<T>, e: &Entourage<T>) -> Result<ChainPropertyResult> {
    let g = build_transition_graph(system, e)?;
    Ok(recurrent_on_graph(&g, GraphKind::Base).with_epsilon(epsilon_label(e)))
}

pub fn is_product_transitive<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    n: usize,
    budget: usize,
) -> Result<ChainPropertyResult> {
    let product = ProductSystem::new(system.clone(), n, budget)?;
    let g = product.transition_graph(e)?;
    let mut r = transitive_on_graph(&g, GraphKind::Product(n)).with_epsilon(epsilon_label(e));
    r.property = "product_transitive".into();
    Ok(r)
}

pub fn is_hyper_transitive<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    n: usize,
    budget: usize,
) -> Result<ChainPropertyResult> {
    let hs = HyperSystem::new(system.clone(), n, budget)?;
    let g = build_hyper_transition_graph(&hs, e)?;
    let mut r = transitive_on_graph(&g, GraphKind::Hyper(n)).with_epsilon(epsilon_label(e));
    r.property = "hyper_transitive".into();
    Ok(r)
}

/// Rebuilds the graph a witness refers to.
pub fn rebuild_graph<T: Scalar>(
    system: &MapSystem<T>,
    e: &Entourage<T>,
    kind: GraphKind,
    budget: usize,
) -> Result<TransitionGraph> {
    match kind {
        GraphKind::Base => build_transition_graph(system, e),
        GraphKind::Iterate(n) => build_transition_graph(&system.iterate(n)?, e),
        GraphKind::Product(n) => ProductSystem::new(system.clone(), n, budget)?.transition_graph(e),
        GraphKind::Hyper(n) => {
            let hs = HyperSystem::new(system.clone(), n, budget)?;
            build_hyper_transition_graph(&hs, e)
        }
    }
}

pub fn check_witness(graph: &TransitionGraph, w: &Witness) -> std::result::Result<(), String> {
    let n = graph.len();
    match w {
        Witness::Spanning(cert) => cert.validate(graph),
        Witness::Components { sets } => {
            if *sets == internally_chain_transitive_sets(graph) {
                Ok(())
            } else {
                Err("component list does not match the graph".into())
            }
        }
        Witness::MinimalLength { n: k } => {
            let m = graph.to_matrix();
            let mut power = m.clone();
            for _ in 1..*k {
                if power.is_full() {
                    return Err(format!("a power below {k} is already full"));
                }
                power = power.compose(&m);
            }
            if power.is_full() && power.compose(&m).is_full() {
                Ok(())
            } else {
                Err(format!("powers {k} and {} are not both full", k + 1))
            }
        }
        Witness::ExactLength { u, n: k } => {
            let mut r = FixedBitSet::with_capacity(n);
            r.extend(u.iter().copied().filter(|&x| x < n));
            for _ in 0..*k {
                r = successor_image(graph, &r);
            }
            if *k >= 1 && r.count_ones(..) == n {
                Ok(())
            } else {
                Err(format!("chains of length {k} from U do not cover the carrier"))
            }
        }
        Witness::Cycles { chains } => chains.iter().try_for_each(|c| {
            let c = validate_chain(graph, c.points()).map_err(|e| e.to_string())?;
            if c.first() == c.last() {
                Ok(())
            } else {
                Err("cycle does not close".into())
            }
        }),
        Witness::CyclePair { vertex, short, long } => {
            for c in [short, long] {
                let c = validate_chain(graph, c.points()).map_err(|e| e.to_string())?;
                if c.first() != *vertex || c.last() != *vertex {
                    return Err("cycle pair does not pass through its vertex".into());
                }
            }
            if num_integer::gcd(short.length(), long.length()) == 1 {
                Ok(())
            } else {
                Err("cycle lengths are not co-prime".into())
            }
        }
    }
}

pub fn check_counterexample(graph: &TransitionGraph, c: &Counterexample) -> std::result::Result<(), String> {
    let n = graph.len();
    let in_range = |v: usize| {
        if v < n {
            Ok(())
        } else {
            Err(format!("vertex {v} out of range"))
        }
    };
    let no_chain = |from: usize, to: usize| {
        in_range(from)?;
        in_range(to)?;
        if graph.step_distances(from)[to].is_none() {
            Ok(())
        } else {
            Err(format!("a chain from {from} to {to} exists"))
        }
    };
    match c {
        Counterexample::NoChain { from, to } => no_chain(*from, *to),
        Counterexample::NotRecurrent { vertex } => no_chain(*vertex, *vertex),
        Counterexample::Period { period } => {
            let d = scc_decompose(graph);
            if d.len() == 1 && d.periods[0] == *period && *period > 1 {
                Ok(())
            } else {
                Err(format!("graph is not strongly connected with period {period}"))
            }
        }
        Counterexample::ReachableSetsCycle { u, start, period } => {
            u.iter().try_for_each(|&v| in_range(v))?;
            if u.is_empty() || *period == 0 {
                return Err("empty U or zero period".into());
            }
            let mut r = FixedBitSet::with_capacity(n);
            r.extend(u.iter().copied());
            let mut seq = vec![r.clone()];
            for _ in 0..start + period {
                r = successor_image(graph, &r);
                if r.count_ones(..) == n {
                    return Err("reachable sets cover the carrier".into());
                }
                seq.push(r.clone());
            }
            if seq[*start] == seq[start + period] {
                Ok(())
            } else {
                Err("reachable sets do not repeat as claimed".into())
            }
        }
        Counterexample::CapExceeded { u, cap } => {
            u.iter().try_for_each(|&v| in_range(v))?;
            match exact_cover_length(graph, u, *cap) {
                ExactOutcome::Covers(k) => Err(format!("covers at length {k}")),
                _ => Ok(()),
            }
        }
    }
}

/// Re-checks every witness and the counterexample of `result`, fetching
/// graphs through `graph_of`.
pub fn check_result(
    result: &ChainPropertyResult,
    mut graph_of: impl FnMut(GraphKind) -> Result<TransitionGraph>,
) -> std::result::Result<(), String> {
    let mut cache: HashMap<GraphKind, TransitionGraph> = HashMap::new();
    let mut get = |k: GraphKind| -> std::result::Result<TransitionGraph, String> {
        if let Some(g) = cache.get(&k) {
            return Ok(g.clone());
        }
        let g = graph_of(k).map_err(|e| e.to_string())?;
        cache.insert(k, g.clone());
        Ok(g)
    };
    if result.verdict && result.counterexample.is_some() {
        return Err("positive verdict with a counterexample".into());
    }
    if !result.verdict && result.counterexample.is_none() && result.property != "internal" {
        return Err("negative verdict without a counterexample".into());
    }
    if result.verdict && result.witnesses.is_empty() {
        return Err("positive verdict without a witness".into());
    }
    for w in &result.witnesses {
        check_witness(&get(w.graph)?, &w.item).map_err(|e| format!("{} witness: {e}", w.graph))?;
    }
    if let Some(c) = &result.counterexample {
        check_counterexample(&get(c.graph)?, &c.item).map_err(|e| format!("{} counterexample: {e}", c.graph))?;
    }
    Ok(())
}
