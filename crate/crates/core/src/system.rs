//! Self-maps of finite carriers and the pseudo-orbit graphs they induce.
//!
//! For builtin maps the chain condition compares the true ambient image
//! `f(x)` with carrier points; images are never snapped to the grid.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::TransitionGraph;
use crate::relation::BitMatrix;
use crate::scalar::Scalar;
use crate::uniform::{Carrier, Entourage, Metric};

/// Default cap on the number of vertices of product and hyperspace graphs.
pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// Maps given by a formula on the line or circle.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin<T> {
    /// `x ↦ 1 − |1 − 2x|`
    Tent,
    /// `x ↦ r·x·(1 − x)`
    Logistic(T),
    /// `x ↦ x + s mod 1`
    Rotation(T),
    Identity,
    Constant(T),
}

impl<T: Scalar> Builtin<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Tent => "tent",
            Builtin::Logistic(_) => "logistic",
            Builtin::Rotation(_) => "rotation",
            Builtin::Identity => "identity",
            Builtin::Constant(_) => "constant",
        }
    }

    pub fn eval(&self, x: &T) -> T {
        match self {
            Builtin::Tent => T::one() - (T::one() - T::two() * x.clone()).abs(),
            Builtin::Logistic(r) => r.clone() * x.clone() * (T::one() - x.clone()),
            Builtin::Rotation(s) => (x.clone() + s.clone()).frac(),
            Builtin::Identity => x.clone(),
            Builtin::Constant(c) => c.clone(),
        }
    }

    /// A Lipschitz constant on `[0, 1]` (on the circle for rotations).
    pub fn lipschitz(&self) -> T {
        match self {
            Builtin::Tent => T::two(),
            Builtin::Logistic(r) => r.abs(),
            Builtin::Rotation(_) | Builtin::Identity => T::one(),
            Builtin::Constant(_) => T::zero(),
        }
    }

    fn check_carrier(&self, carrier: &Carrier<T>) -> Result<()> {
        let metric = carrier.metric();
        let one_d = carrier.is_one_dimensional();
        let ok = match self {
            Builtin::Tent | Builtin::Logistic(_) => matches!(metric, Metric::Euclidean) && one_d,
            Builtin::Rotation(_) => matches!(metric, Metric::Circle),
            Builtin::Identity => one_d,
            Builtin::Constant(c) => match metric {
                Metric::Circle => *c >= T::zero() && *c < T::one(),
                Metric::Euclidean => one_d,
                _ => false,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!(
                "builtin map '{}' is incompatible with the {} metric",
                self.name(),
                metric.name()
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemMap<T> {
    /// `f(i) = table[i]`.
    Table(Vec<usize>),
    /// The builtin composed `iterations` times in the ambient space.
    Builtin { map: Builtin<T>, iterations: usize },
}

/// Image of a carrier point: another carrier point, or an ambient point.
#[derive(Debug, Clone, PartialEq)]
pub enum Image<T> {
    Point(usize),
    Ambient(T),
}

/// A carrier together with a self-map.
#[derive(Debug, Clone)]
pub struct MapSystem<T> {
    carrier: Carrier<T>,
    map: SystemMap<T>,
}

impl<T: Scalar> MapSystem<T> {
    pub fn table(carrier: Carrier<T>, table: Vec<usize>) -> Result<Self> {
        if table.len() != carrier.len() {
            return Err(invalid(format!(
                "map table has {} entries for {} points",
                table.len(),
                carrier.len()
            )));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= carrier.len()) {
            return Err(invalid(format!("map table entry {i} = {v} out of range")));
        }
        Ok(Self {
            carrier,
            map: SystemMap::Table(table),
        })
    }

    pub fn builtin(carrier: Carrier<T>, map: Builtin<T>) -> Result<Self> {
        map.check_carrier(&carrier)?;
        Ok(Self {
            carrier,
            map: SystemMap::Builtin { map, iterations: 1 },
        })
    }

    pub fn carrier(&self) -> &Carrier<T> {
        &self.carrier
    }

    pub fn map(&self) -> &SystemMap<T> {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn is_table(&self) -> bool {
        matches!(self.map, SystemMap::Table(_))
    }

    pub fn as_table(&self) -> Option<&[usize]> {
        match &self.map {
            SystemMap::Table(t) => Some(t),
            SystemMap::Builtin { .. } => None,
        }
    }

    /// Evaluates the (iterated) builtin at an ambient point. `None` for tables.
    pub fn eval_ambient(&self, x: &T) -> Option<T> {
        match &self.map {
            SystemMap::Table(_) => None,
            SystemMap::Builtin { map, iterations } => {
                let mut y = x.clone();
                for _ in 0..*iterations {
                    y = map.eval(&y);
                }
                Some(y)
            }
        }
    }

    pub fn image(&self, x: usize) -> Image<T> {
        match &self.map {
            SystemMap::Table(t) => Image::Point(t[x]),
            SystemMap::Builtin { .. } => {
                let coord = self.carrier.coord(x).expect("builtin carriers are 1-D");
                Image::Ambient(self.eval_ambient(coord).expect("builtin"))
            }
        }
    }

    /// Ambient images of all carrier points (tables give carrier coordinates
    /// when the carrier is 1-D).
    pub fn ambient_images(&self) -> Option<Vec<T>> {
        (0..self.len())
            .map(|x| match self.image(x) {
                Image::Ambient(v) => Some(v),
                Image::Point(p) => self.carrier.coord(p).cloned(),
            })
            .collect()
    }

    /// Largest distance from an image `f(x)` to its nearest carrier point.
    /// Zero for tables.
    pub fn covering_radius(&self) -> Option<T> {
        if self.is_table() {
            return Some(T::zero());
        }
        self.carrier.covering_radius_of(&self.ambient_images()?)
    }

    /// The chain condition `(f(x), y) ∈ E`.
    pub fn image_related(&self, x: usize, y: usize, entourage: &Entourage<T>) -> Result<bool> {
        match self.image(x) {
            Image::Point(p) => Ok(entourage.contains(p, y)),
            Image::Ambient(v) => {
                let eps = builtin_threshold(entourage)?;
                let d = self.carrier.ambient_distance(&v, y).expect("builtin carriers are 1-D");
                Ok(T::le_tol(&d, eps))
            }
        }
    }

    /// `f^n`: table self-composition, or the builtin composed `n` times in the
    /// ambient space (not a power of the transition graph).
    pub fn iterate(&self, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("iterate needs n >= 1"));
        }
        let map = match &self.map {
            SystemMap::Table(t) => {
                let table = (0..t.len()).map(|x| (0..n).fold(x, |y, _| t[y])).collect();
                SystemMap::Table(table)
            }
            SystemMap::Builtin { map, iterations } => SystemMap::Builtin {
                map: map.clone(),
                iterations: iterations * n,
            },
        };
        Ok(Self {
            carrier: self.carrier.clone(),
            map,
        })
    }

    /// Rounds every image to its nearest carrier point (smallest index on ties).
    pub fn sample_to_table(&self) -> Result<Self> {
        let table = (0..self.len())
            .map(|x| match self.image(x) {
                Image::Point(p) => Ok(p),
                Image::Ambient(v) => self
                    .carrier
                    .nearest(&v)
                    .ok_or_else(|| invalid("carrier has no ambient coordinates")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::table(self.carrier.clone(), table)
    }

    /// Pullback modulus of continuity: the largest metric entourage `W`
    /// (threshold taken among carrier distances) with
    /// `(a, b) ∈ W ⟹ d(f(a), f(b)) <= eps` on carrier pairs.
    pub fn continuity_modulus(&self, eps: &T) -> Result<Entourage<T>> {
        let n = self.len();
        let image_close = |a: usize, b: usize| -> Result<bool> {
            match (self.image(a), self.image(b)) {
                (Image::Point(p), Image::Point(q)) => Ok(self.carrier.within(p, q, eps)),
                (Image::Ambient(u), Image::Ambient(v)) => {
                    let d = self
                        .carrier
                        .ambient_pair_distance(&u, &v)
                        .ok_or_else(|| invalid("no ambient distance on this carrier"))?;
                    Ok(T::le_tol(&d, eps))
                }
                _ => unreachable!("a system has one kind of image"),
            }
        };
        let mut bad: Option<T> = None;
        for a in 0..n {
            for b in 0..n {
                if !image_close(a, b)? {
                    let k = self.carrier.distance_key(a, b);
                    bad = Some(match bad {
                        Some(m) => T::min_of(m, k),
                        None => k,
                    });
                }
            }
        }
        let relation = BitMatrix::from_fn(n, |a, b| match &bad {
            Some(limit) => self.carrier.distance_key(a, b) < *limit,
            None => true,
        });
        Entourage::explicit(&self.carrier, relation)
    }
}

fn builtin_threshold<T: Scalar>(entourage: &Entourage<T>) -> Result<&T> {
    entourage
        .epsilon()
        .ok_or_else(|| invalid("builtin maps need a metric entourage to compare ambient images"))
}

/// Graph with an edge `x → y` iff `(f(x), y) ∈ E`.
pub fn build_transition_graph<T: Scalar>(system: &MapSystem<T>, entourage: &Entourage<T>) -> Result<TransitionGraph> {
    entourage.check_carrier(system.carrier())?;
    if !system.is_table() {
        builtin_threshold(entourage)?;
    }
    let n = system.len();
    let succ = (0..n)
        .into_par_iter()
        .map(|x| {
            (0..n)
                .filter(|&y| system.image_related(x, y, entourage).expect("validated"))
                .map(|y| y as u32)
                .collect::<Vec<u32>>()
        })
        .collect();
    Ok(TransitionGraph::from_successors(succ))
}

/// The n-fold product system `f^(n)` on tuples, with the box entourage
/// (all coordinates related). Tuples are numbered in lexicographic order,
/// first coordinate most significant.
#[derive(Debug, Clone)]
pub struct ProductSystem<T> {
    base: MapSystem<T>,
    n: usize,
    size: usize,
}

impl<T: Scalar> ProductSystem<T> {
    pub fn new(base: MapSystem<T>, n: usize, budget: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("product needs n >= 1"));
        }
        let size = (base.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: format!("product system of order {n}"),
                size,
                cap: budget,
            });
        }
        Ok(Self {
            base,
            n,
            size: size as usize,
        })
    }

    pub fn base(&self) -> &MapSystem<T> {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn decode(&self, mut id: usize) -> Vec<usize> {
        let b = self.base.len();
        let mut t = vec![0; self.n];
        for slot in t.iter_mut().rev() {
            *slot = id % b;
            id /= b;
        }
        t
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        let b = self.base.len();
        tuple.iter().fold(0, |acc, &x| acc * b + x)
    }

    /// `f^(n)` applied to a tuple; `None` for builtin base maps.
    pub fn map_tuple(&self, tuple: &[usize]) -> Option<Vec<usize>> {
        let t = self.base.as_table()?;
        Some(tuple.iter().map(|&x| t[x]).collect())
    }

    /// Box entourage on tuples.
    pub fn related(&self, entourage: &Entourage<T>, u: &[usize], v: &[usize]) -> bool {
        u.iter().zip(v).all(|(&a, &b)| entourage.contains(a, b))
    }

    /// Tensor power of the base transition graph.
    pub fn transition_graph(&self, entourage: &Entourage<T>) -> Result<TransitionGraph> {
        let base = build_transition_graph(&self.base, entourage)?;
        Ok(tensor_power(&base, self.n))
    }
}

/// `n`-fold tensor (categorical) power of a graph, tuples in lexicographic order.
pub fn tensor_power(base: &TransitionGraph, n: usize) -> TransitionGraph {
    let b = base.len();
    let size = b.pow(n as u32);
    let succ = (0..size)
        .into_par_iter()
        .map(|id| {
            let mut coords = vec![0usize; n];
            let mut rest = id;
            for slot in coords.iter_mut().rev() {
                *slot = rest % b;
                rest /= b;
            }
            let mut out: Vec<u32> = vec![0];
            for &c in &coords {
                let next: Vec<u32> = base.successors(c).map(|w| w as u32).collect();
                out = out
                    .iter()
                    .flat_map(|&prefix| next.iter().map(move |&w| prefix * b as u32 + w))
                    .collect();
            }
            out
        })
        .collect();
    TransitionGraph::from_successors(succ)
}

/// An onto map `h` from the source carrier to the target carrier.
#[derive(Debug, Clone)]
pub struct FactorMap<T> {
    source: MapSystem<T>,
    target: MapSystem<T>,
    h: Vec<usize>,
}

impl<T: Scalar> FactorMap<T> {
    pub fn new(source: MapSystem<T>, target: MapSystem<T>, h: Vec<usize>) -> Result<Self> {
        if h.len() != source.len() {
            return Err(Error::InvalidFactorMap(format!(
                "h has {} entries for {} source points",
                h.len(),
                source.len()
            )));
        }
        let mut hit = vec![false; target.len()];
        for (i, &y) in h.iter().enumerate() {
            if y >= target.len() {
                return Err(Error::InvalidFactorMap(format!("h({i}) = {y} out of range")));
            }
            hit[y] = true;
        }
        if let Some(missed) = hit.iter().position(|&b| !b) {
            return Err(Error::InvalidFactorMap(format!(
                "h is not onto: target point {missed} has no preimage"
            )));
        }
        Ok(Self { source, target, h })
    }

    pub fn source(&self) -> &MapSystem<T> {
        &self.source
    }

    pub fn target(&self) -> &MapSystem<T> {
        &self.target
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    fn image_index(system: &MapSystem<T>, x: usize) -> Result<usize> {
        match system.image(x) {
            Image::Point(p) => Ok(p),
            Image::Ambient(v) => system
                .carrier()
                .nearest(&v)
                .ok_or_else(|| invalid("carrier has no ambient coordinates")),
        }
    }

    /// Checks `(h(f(x)), g(h(x))) ∈ E` for every source point. Returns the
    /// first violating source index, or `None` when the square commutes.
    /// Ambient source images are rounded to the nearest source point.
    pub fn check_semiconjugacy(&self, target_entourage: &Entourage<T>) -> Result<Option<usize>> {
        target_entourage.check_carrier(self.target.carrier())?;
        for x in 0..self.source.len() {
            let hfx = self.h[Self::image_index(&self.source, x)?];
            let hx = self.h[x];
            // (g(h(x)), h(f(x))) ∈ E
            if !self.target.image_related(hx, hfx, target_entourage)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// `H⁻¹(E) = {(a, b) : (h(a), h(b)) ∈ E}` on the source carrier.
    pub fn pullback(&self, target_entourage: &Entourage<T>) -> Result<Entourage<T>> {
        target_entourage.check_carrier(self.target.carrier())?;
        let n = self.source.len();
        let relation = BitMatrix::from_fn(n, |a, b| target_entourage.contains(self.h[a], self.h[b]));
        Entourage::explicit(self.source.carrier(), relation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn rotation4() -> MapSystem<Q> {
        MapSystem::builtin(Carrier::circle_grid(4).unwrap(), Builtin::Rotation(q(1, 4))).unwrap()
    }

    #[test]
    fn identity_with_diagonal_gives_self_loops() {
        let c: Carrier<Q> = Carrier::interval_grid(5).unwrap();
        let s = MapSystem::builtin(c.clone(), Builtin::Identity).unwrap();
        let g = build_transition_graph(&s, &Entourage::metric(&c, q(0, 1)).unwrap()).unwrap();
        assert_eq!(g.to_matrix(), BitMatrix::identity(5));
        let t = MapSystem::table(c.clone(), (0..5).collect()).unwrap();
        let g = build_transition_graph(&t, &Entourage::diagonal(&c)).unwrap();
        assert_eq!(g.to_matrix(), BitMatrix::identity(5));
    }

    #[test]
    fn rotation_quarter_is_a_four_cycle() {
        let s = rotation4();
        let e = Entourage::metric(s.carrier(), q(1, 100)).unwrap();
        let g = build_transition_graph(&s, &e).unwrap();
        for x in 0..4 {
            assert_eq!(g.successors(x).collect::<Vec<_>>(), vec![(x + 1) % 4]);
        }
    }

    #[test]
    fn tent_edges_from_zero() {
        let c: Carrier<Q> = Carrier::interval_grid(64).unwrap();
        let s = MapSystem::builtin(c.clone(), Builtin::Tent).unwrap();
        let g = build_transition_graph(&s, &Entourage::metric(&c, q(1, 32)).unwrap()).unwrap();
        assert_eq!(g.successors(0).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn iterate_semantics() {
        let s = rotation4();
        let same = s.iterate(1).unwrap();
        assert_eq!(same.map(), s.map());
        let four = s.sample_to_table().unwrap().iterate(4).unwrap();
        assert_eq!(four.as_table().unwrap(), &[0, 1, 2, 3]);
        assert!(s.iterate(0).is_err());

        let tent = MapSystem::builtin(Carrier::<Q>::interval_grid(64).unwrap(), Builtin::Tent)
            .unwrap()
            .iterate(2)
            .unwrap();
        assert_eq!(tent.eval_ambient(&q(3, 10)).unwrap(), q(4, 5));
    }

    #[test]
    fn builtin_metric_compatibility() {
        let circle: Carrier<Q> = Carrier::circle_grid(4).unwrap();
        let line: Carrier<Q> = Carrier::interval_grid(4).unwrap();
        assert!(MapSystem::builtin(circle.clone(), Builtin::Tent).is_err());
        assert!(MapSystem::builtin(line.clone(), Builtin::Rotation(q(1, 4))).is_err());
        assert!(MapSystem::builtin(circle, Builtin::Constant(q(3, 2))).is_err());
        assert!(MapSystem::builtin(Carrier::<Q>::discrete(3).unwrap(), Builtin::Identity).is_err());
        assert!(MapSystem::table(line.clone(), vec![0, 1, 2, 4]).is_err());
        assert!(MapSystem::table(line, vec![0, 1]).is_err());
    }

    #[test]
    fn builtin_requires_metric_entourage() {
        let s = rotation4();
        let e = Entourage::diagonal(s.carrier());
        assert!(matches!(
            build_transition_graph(&s, &e),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn product_sizes_and_budget() {
        let two = MapSystem::table(Carrier::<Q>::discrete(2).unwrap(), vec![1, 0]).unwrap();
        let p = ProductSystem::new(two.clone(), 2, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.decode(2), vec![1, 0]);
        assert_eq!(p.encode(&[1, 0]), 2);
        assert_eq!(p.map_tuple(&[1, 0]), Some(vec![0, 1]));
        assert!(matches!(
            ProductSystem::new(two, 20, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rotation_third_product_splits() {
        let s = MapSystem::builtin(Carrier::<Q>::circle_grid(3).unwrap(), Builtin::Rotation(q(1, 3))).unwrap();
        let e = Entourage::metric(s.carrier(), q(1, 100)).unwrap();
        let p = ProductSystem::new(s, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = p.transition_graph(&e).unwrap();
        assert_eq!(g.len(), 9);
        for id in 0..9 {
            let t = p.decode(id);
            let succ: Vec<usize> = g.successors(id).collect();
            assert_eq!(succ, vec![p.encode(&[(t[0] + 1) % 3, (t[1] + 1) % 3])]);
        }
    }

    #[test]
    fn semiconjugacy_checks() {
        let c4 = Carrier::<Q>::discrete(4).unwrap();
        let c2 = Carrier::<Q>::discrete(2).unwrap();
        let f = MapSystem::table(c4.clone(), vec![1, 2, 3, 0]).unwrap();
        let g = MapSystem::table(c2.clone(), vec![1, 0]).unwrap();
        let fm = FactorMap::new(f.clone(), g.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(fm.check_semiconjugacy(&Entourage::diagonal(&c2)).unwrap(), None);

        let same = FactorMap::new(f.clone(), f.clone(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(same.check_semiconjugacy(&Entourage::diagonal(&c4)).unwrap(), None);

        let id = MapSystem::table(c4.clone(), vec![0, 1, 2, 3]).unwrap();
        let bad = FactorMap::new(id, g.clone(), vec![0, 0, 1, 1]).unwrap();
        assert_eq!(bad.check_semiconjugacy(&Entourage::diagonal(&c2)).unwrap(), Some(0));

        assert!(matches!(
            FactorMap::new(f, g, vec![0, 0, 0, 0]),
            Err(Error::InvalidFactorMap(_))
        ));
    }

    #[test]
    fn modulus_of_continuity() {
        let c: Carrier<Q> = Carrier::interval_grid(5).unwrap();
        let tent = MapSystem::builtin(c.clone(), Builtin::Tent).unwrap();
        // tent doubles distances away from the fold: need d(a, b) < 1/4 for eps = 1/4
        let w = tent.continuity_modulus(&q(1, 4)).unwrap();
        assert_eq!(*w.relation(), BitMatrix::identity(5));
        let w = tent.continuity_modulus(&q(1, 2)).unwrap();
        assert!(w.contains(0, 1) && !w.contains(0, 2));
    }

    #[test]
    fn covering_radius_of_logistic() {
        let c: Carrier<Q> = Carrier::interval_grid(3).unwrap();
        let s = MapSystem::builtin(c, Builtin::Logistic(q(4, 1))).unwrap();
        // images: 0, 1, 0 all on the grid
        assert_eq!(s.covering_radius().unwrap(), q(0, 1));
        let c: Carrier<Q> = Carrier::interval_grid(2).unwrap();
        let s = MapSystem::builtin(c, Builtin::Constant(q(1, 4))).unwrap();
        assert_eq!(s.covering_radius().unwrap(), q(1, 4));
    }
}
