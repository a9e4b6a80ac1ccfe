//! Induced dynamics on finite subsets.
//!
//! `F_n(X)` holds the non-empty subsets with at most `n` points; on a finite
//! carrier `F_N(X)` is the whole hyperspace `2^X`. Subsets are related by the
//! lifted entourage `2^E`: `A ⊆ E[A′]` and `A′ ⊆ E[A]`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::chains::Chain;
use crate::error::{invalid, Error, Result};
use crate::graph::TransitionGraph;
use crate::relation::bitset_from;
use crate::scalar::Scalar;
use crate::system::{build_transition_graph, FactorMap, MapSystem, ProductSystem};
use crate::uniform::{Carrier, Entourage, Metric, PointData};

/// Canonical finite subset: sorted, distinct, non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubset(Vec<usize>);

impl FiniteSubset {
    pub fn new(mut points: Vec<usize>) -> Result<Self> {
        points.sort_unstable();
        points.dedup();
        if points.is_empty() {
            return Err(invalid("subsets of the hyperspace are non-empty"));
        }
        Ok(Self(points))
    }

    pub fn singleton(x: usize) -> Self {
        Self(vec![x])
    }

    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    fn bits(&self, n: usize) -> FixedBitSet {
        bitset_from(n, self.0.iter().copied())
    }
}

/// `Σ_{k=1..n} C(N, k)`, saturating.
pub fn hyperspace_size(points: usize, n: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=n.min(points) {
        binom = binom.saturating_mul((points - k + 1) as u128) / k as u128;
        total = total.saturating_add(binom);
    }
    total
}

fn combinations(pool: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=pool.len() - need {
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k <= pool.len() {
        rec(pool, k, 0, &mut Vec::with_capacity(k), out);
    }
}

/// All non-empty subsets of `0..points` with at most `n` elements, by size
/// and then lexicographically.
pub fn enumerate_fn(points: usize, n: usize, budget: usize) -> Result<Vec<FiniteSubset>> {
    if n < 1 || n > points {
        return Err(invalid(format!("need 1 <= n <= {points}, got n = {n}")));
    }
    let size = hyperspace_size(points, n);
    if size > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("hyperspace F_{n} over {points} points"),
            size,
            cap: budget,
        });
    }
    let pool: Vec<usize> = (0..points).collect();
    let mut raw = Vec::with_capacity(size as usize);
    for k in 1..=n {
        combinations(&pool, k, &mut raw);
    }
    Ok(raw.into_iter().map(FiniteSubset).collect())
}

/// `(A, A′) ∈ 2^E ⟺ A ⊆ E[A′] and A′ ⊆ E[A]`.
pub fn hyper_entourage_related<T: Scalar>(a: &FiniteSubset, b: &FiniteSubset, entourage: &Entourage<T>) -> bool {
    let n = entourage.len();
    let ea = entourage.cross_section_bits(&a.bits(n));
    let eb = entourage.cross_section_bits(&b.bits(n));
    a.points().iter().all(|&x| eb.contains(x)) && b.points().iter().all(|&y| ea.contains(y))
}

/// The induced map `f_n` on `F_n(X)`.
#[derive(Debug, Clone)]
pub struct HyperSystem<T> {
    base: MapSystem<T>,
    n: usize,
    subsets: Vec<FiniteSubset>,
    index: HashMap<FiniteSubset, usize>,
}

impl<T: Scalar> HyperSystem<T> {
    pub fn new(base: MapSystem<T>, n: usize, budget: usize) -> Result<Self> {
        let subsets = enumerate_fn(base.len(), n, budget)?;
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self {
            base,
            n,
            subsets,
            index,
        })
    }

    /// `2^X`, i.e. `F_N(X)`.
    pub fn full(base: MapSystem<T>, budget: usize) -> Result<Self> {
        let n = base.len();
        Self::new(base, n, budget)
    }

    pub fn base(&self) -> &MapSystem<T> {
        &self.base
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[FiniteSubset] {
        &self.subsets
    }

    pub fn subset(&self, id: usize) -> &FiniteSubset {
        &self.subsets[id]
    }

    pub fn id_of(&self, subset: &FiniteSubset) -> Option<usize> {
        self.index.get(subset).copied()
    }

    pub fn singleton_id(&self, x: usize) -> usize {
        // singletons come first in graded order
        x
    }

    /// `f(A)` for table maps; `None` for builtin maps (images are ambient).
    pub fn image(&self, a: &FiniteSubset) -> Option<FiniteSubset> {
        let t = self.base.as_table()?;
        Some(FiniteSubset::new(a.points().iter().map(|&x| t[x]).collect()).expect("non-empty"))
    }

    /// The same dynamics as a table system on a discrete carrier of subset ids.
    pub fn as_table_system(&self) -> Result<MapSystem<T>> {
        let table = self
            .subsets
            .iter()
            .map(|a| {
                self.image(a)
                    .and_then(|b| self.id_of(&b))
                    .ok_or_else(|| invalid("hyperspace table needs a table base map"))
            })
            .collect::<Result<Vec<_>>>()?;
        let carrier = Carrier::new(
            self.subsets
                .iter()
                .map(|s| PointData::Label(format!("{:?}", s.points())))
                .collect(),
            Metric::Discrete,
        )?;
        MapSystem::table(carrier, table)
    }
}

/// Graph on subset ids with an edge `A → A′` iff `(f(A), A′) ∈ 2^E`.
///
/// For builtin maps `f(A)` is a set of ambient points and both containments
/// compare ambient images with carrier points through `d <= eps`.
pub fn build_hyper_transition_graph<T: Scalar>(
    hs: &HyperSystem<T>,
    entourage: &Entourage<T>,
) -> Result<TransitionGraph> {
    entourage.require_symmetric()?;
    let base = build_transition_graph(&hs.base, entourage)?;
    Ok(hyper_graph_from_base(hs, &base))
}

/// Lifts a base transition graph (built from a symmetric entourage) to `F_n`.
///
/// With `E` symmetric, `f(A) ⊆ E[A′]` says every `a ∈ A` has a successor in
/// `A′`, and `A′ ⊆ E[f(A)]` says every point of `A′` is a successor of some
/// `a ∈ A`.
pub fn hyper_graph_from_base<T: Scalar>(hs: &HyperSystem<T>, base: &TransitionGraph) -> TransitionGraph {
    let n = base.len();
    let succ = hs
        .subsets
        .par_iter()
        .map(|a| {
            let mut pool = FixedBitSet::with_capacity(n);
            for &x in a.points() {
                for w in base.successors(x) {
                    pool.insert(w);
                }
            }
            let pool: Vec<usize> = pool.ones().collect();
            let rows: Vec<FixedBitSet> = a.points().iter().map(|&x| bitset_from(n, base.successors(x))).collect();
            let mut out = Vec::new();
            let mut cands = Vec::new();
            for k in 1..=hs.n.min(pool.len()) {
                cands.clear();
                combinations(&pool, k, &mut cands);
                for c in &cands {
                    if rows.iter().all(|r| c.iter().any(|&y| r.contains(y))) {
                        let id = hs.index[&FiniteSubset(c.clone())];
                        out.push(id as u32);
                    }
                }
            }
            out
        })
        .collect();
    TransitionGraph::from_successors(succ)
}

/// Definition-level edge test for table systems: `(f(A), A′) ∈ 2^E`.
pub fn hyper_edge_by_definition<T: Scalar>(
    hs: &HyperSystem<T>,
    entourage: &Entourage<T>,
    a: usize,
    b: usize,
) -> Option<bool> {
    let fa = hs.image(hs.subset(a))?;
    Some(hyper_entourage_related(&fa, hs.subset(b), entourage))
}

/// Turns a hyperspace chain `A_0, ..., A_k` with `x ∈ A_0`, `y ∈ A_k` into a
/// base chain `x = a_0, ..., a_k = y` with `a_i ∈ A_i`.
///
/// Selection runs forward, taking the smallest admissible point of each
/// `A_{i+1}`; if it does not end at `y`, a backward pass from `y` through the
/// points reachable from `x` inside the layers repairs it. Always succeeds
/// when `A_0 = {x}` or `A_k = {y}`.
pub fn select_base_chain_from_hyper_chain<T: Scalar>(
    base: &TransitionGraph,
    hs: &HyperSystem<T>,
    hyper_chain: &Chain,
    x: usize,
    y: usize,
) -> Result<Chain> {
    let layers: Vec<&FiniteSubset> = hyper_chain.points().iter().map(|&id| hs.subset(id)).collect();
    let k = layers.len() - 1;
    if !layers[0].contains(x) || !layers[k].contains(y) {
        return Err(invalid("endpoints must lie in the first and last subsets"));
    }

    let mut forward = vec![x];
    for (i, layer) in layers.iter().enumerate().skip(1) {
        let prev = *forward.last().expect("non-empty");
        match layer.points().iter().find(|&&p| base.has_edge(prev, p)) {
            Some(&p) => forward.push(p),
            None => return Err(Error::SelectionFailed { step: i - 1 }),
        }
    }
    if forward[k] == y {
        return crate::chains::validate_chain(base, &forward);
    }

    let mut reach: Vec<Vec<usize>> = vec![vec![x]];
    for layer in layers.iter().skip(1) {
        let prev = reach.last().expect("non-empty");
        let next: Vec<usize> = layer
            .points()
            .iter()
            .copied()
            .filter(|&p| prev.iter().any(|&q| base.has_edge(q, p)))
            .collect();
        reach.push(next);
    }
    if !reach[k].contains(&y) {
        return Err(Error::SelectionFailed { step: k });
    }
    let mut points = vec![y];
    for i in (0..k).rev() {
        let after = *points.last().expect("non-empty");
        let p = reach[i]
            .iter()
            .copied()
            .find(|&q| base.has_edge(q, after))
            .ok_or(Error::SelectionFailed { step: i })?;
        points.push(p);
    }
    points.reverse();
    crate::chains::validate_chain(base, &points)
}

/// `h(x_1, ..., x_n) = {x_1, ..., x_n}`.
pub fn tuple_to_set(tuple: &[usize]) -> FiniteSubset {
    FiniteSubset::new(tuple.to_vec()).expect("tuples are non-empty")
}

/// The factor map `h : X^(n) → F_n(X)` between the table forms of the
/// product and hyperspace systems. Needs a table base map.
pub fn tuple_to_set_factor<T: Scalar>(product: &ProductSystem<T>, hyper: &HyperSystem<T>) -> Result<FactorMap<T>> {
    if product.order() != hyper.bound() {
        return Err(invalid("product order and hyperspace bound differ"));
    }
    if product.base().as_table() != hyper.base().as_table() || !product.base().is_table() {
        return Err(invalid("factor map needs the same table base map"));
    }
    let h = (0..product.len())
        .map(|id| {
            hyper
                .id_of(&tuple_to_set(&product.decode(id)))
                .expect("tuple sets have at most n points")
        })
        .collect();
    let source = product_table_system(product)?;
    let target = hyper.as_table_system()?;
    FactorMap::new(source, target, h)
}

fn product_table_system<T: Scalar>(product: &ProductSystem<T>) -> Result<MapSystem<T>> {
    let table = (0..product.len())
        .map(|id| {
            product
                .map_tuple(&product.decode(id))
                .map(|t| product.encode(&t))
                .ok_or_else(|| invalid("product table needs a table base map"))
        })
        .collect::<Result<Vec<_>>>()?;
    let carrier = Carrier::new(
        (0..product.len())
            .map(|id| PointData::Label(format!("{:?}", product.decode(id))))
            .collect(),
        Metric::Discrete,
    )?;
    MapSystem::table(carrier, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{find_chain, validate_chain};
    use crate::relation::BitMatrix;
    use crate::system::{Builtin, DEFAULT_VERTEX_BUDGET};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn rotation4() -> MapSystem<Q> {
        MapSystem::builtin(Carrier::circle_grid(4).unwrap(), Builtin::Rotation(q(1, 4))).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_fn(4, 1, 100).unwrap().len(), 4);
        let f2 = enumerate_fn(4, 2, 100).unwrap();
        assert_eq!(f2.len(), 10);
        assert_eq!(f2[4].points(), &[0, 1]);
        assert_eq!(enumerate_fn(5, 5, 100).unwrap().len(), 31);
        assert!(matches!(enumerate_fn(20, 10, 1000), Err(Error::BudgetExceeded { .. })));
        assert!(enumerate_fn(4, 5, 100).is_err());
        assert_eq!(hyperspace_size(64, 2), 64 + 2016);
    }

    #[test]
    fn lifted_entourage_examples() {
        let c = Carrier::line((0..5).map(|k| q(k, 4)).collect()).unwrap();
        let wide = Entourage::metric(&c, q(3, 10)).unwrap();
        let narrow = Entourage::metric(&c, q(1, 5)).unwrap();
        let s = |v: &[usize]| FiniteSubset::new(v.to_vec()).unwrap();
        assert!(hyper_entourage_related(&s(&[1]), &s(&[2]), &wide));
        assert!(!hyper_entourage_related(&s(&[1]), &s(&[2]), &narrow));
        assert!(hyper_entourage_related(&s(&[0, 1]), &s(&[0]), &wide));
        assert!(hyper_entourage_related(&s(&[0, 3]), &s(&[0, 3]), &narrow));
    }

    #[test]
    fn identity_hyper_graph_has_only_loops() {
        let c: Carrier<Q> = Carrier::interval_grid(4).unwrap();
        let s = MapSystem::table(c.clone(), vec![0, 1, 2, 3]).unwrap();
        let hs = HyperSystem::new(s, 3, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = build_hyper_transition_graph(&hs, &Entourage::diagonal(&c)).unwrap();
        for v in 0..g.len() {
            assert_eq!(g.successors(v).collect::<Vec<_>>(), vec![v]);
        }
    }

    #[test]
    fn rotation_pairs() {
        let s = rotation4();
        let e = Entourage::metric(s.carrier(), q(1, 100)).unwrap();
        let hs = HyperSystem::new(s.clone(), 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = build_hyper_transition_graph(&hs, &e).unwrap();
        assert_eq!(g.len(), 10);
        let id = |v: &[usize]| hs.id_of(&FiniteSubset::new(v.to_vec()).unwrap()).unwrap();
        assert_eq!(g.successors(id(&[0, 2])).collect::<Vec<_>>(), vec![id(&[1, 3])]);
        assert_eq!(g.successors(id(&[1, 3])).collect::<Vec<_>>(), vec![id(&[0, 2])]);
        // singleton embedding
        let base = build_transition_graph(&s, &e).unwrap();
        for x in 0..4 {
            let lifted: Vec<usize> = g.successors(x).filter(|&v| v < 4).collect();
            assert_eq!(lifted, base.successors(x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn non_symmetric_entourage_rejected() {
        let c: Carrier<Q> = Carrier::discrete(3).unwrap();
        let s = MapSystem::table(c.clone(), vec![1, 2, 0]).unwrap();
        let hs = HyperSystem::new(s, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let mut r = BitMatrix::identity(3);
        r.set(0, 1, true);
        let e = Entourage::explicit(&c, r).unwrap();
        assert_eq!(build_hyper_transition_graph(&hs, &e), Err(Error::NonSymmetricEntourage));
    }

    #[test]
    fn graph_matches_definition_on_tables() {
        let c: Carrier<Q> = Carrier::line(vec![q(0, 1), q(1, 3), q(1, 2), q(1, 1)]).unwrap();
        let s = MapSystem::table(c.clone(), vec![2, 3, 0, 1]).unwrap();
        let e = Entourage::metric(&c, q(1, 2)).unwrap();
        let hs = HyperSystem::full(s, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = build_hyper_transition_graph(&hs, &e).unwrap();
        for a in 0..hs.len() {
            for b in 0..hs.len() {
                assert_eq!(g.has_edge(a, b), hyper_edge_by_definition(&hs, &e, a, b).unwrap());
            }
        }
    }

    #[test]
    fn selection_from_singleton_chain() {
        let s = rotation4();
        let e = Entourage::metric(s.carrier(), q(1, 100)).unwrap();
        let base = build_transition_graph(&s, &e).unwrap();
        let hs = HyperSystem::new(s, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = build_hyper_transition_graph(&hs, &e).unwrap();
        let hc = find_chain(&g, 0, 2).unwrap();
        let bc = select_base_chain_from_hyper_chain(&base, &hs, &hc, 0, 2).unwrap();
        assert_eq!(bc.points(), hc.points());
    }

    #[test]
    fn selection_through_pairs() {
        // 0 → {0, 1}, 1 → {2}, 2 → {2}; hyper chain {0} → {0,1} → {1,2}.
        // Greedy forward selection ends at 1, the backward pass repairs it.
        let c: Carrier<Q> = Carrier::discrete(3).unwrap();
        let base = TransitionGraph::from_successors(vec![vec![0, 1], vec![2], vec![2]]);
        let s = MapSystem::table(c, vec![0, 2, 2]).unwrap();
        let hs = HyperSystem::new(s, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = hyper_graph_from_base(&hs, &base);
        let id01 = hs.id_of(&FiniteSubset::new(vec![0, 1]).unwrap()).unwrap();
        let id12 = hs.id_of(&FiniteSubset::new(vec![1, 2]).unwrap()).unwrap();
        assert!(!g.has_edge(id01, 2));
        let hc = validate_chain(&g, &[0, id01, id12]).unwrap();
        let bc = select_base_chain_from_hyper_chain(&base, &hs, &hc, 0, 2).unwrap();
        assert_eq!(bc.points(), &[0, 1, 2]);
        assert_eq!(bc.length(), 2);
    }

    #[test]
    fn tuple_factor_on_rotation_table() {
        let s = rotation4().sample_to_table().unwrap();
        let p = ProductSystem::new(s.clone(), 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let hs = HyperSystem::new(s, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let fm = tuple_to_set_factor(&p, &hs).unwrap();
        let delta = Entourage::diagonal(fm.target().carrier());
        assert_eq!(fm.check_semiconjugacy(&delta).unwrap(), None);
        assert_eq!(tuple_to_set(&[3, 3]).points(), &[3]);
        assert_eq!(tuple_to_set(&[0, 2, 0]).points(), &[0, 2]);
    }

    #[test]
    fn full_hyperspace_is_power_set() {
        let c: Carrier<Q> = Carrier::discrete(4).unwrap();
        let s = MapSystem::table(c, vec![1, 2, 3, 0]).unwrap();
        let full = HyperSystem::full(s.clone(), DEFAULT_VERTEX_BUDGET).unwrap();
        let f4 = HyperSystem::new(s, 4, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(full.len(), 15);
        assert_eq!(full.subsets(), f4.subsets());
    }
}
