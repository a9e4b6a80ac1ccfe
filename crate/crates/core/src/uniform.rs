//! Finite carriers, their metrics, and entourages over them.
//!
//! The uniformity itself is never built. Each requested resolution `eps`
//! yields one generator entourage `{(x, y) : d(x, y) <= eps}`; statements
//! quantified over every entourage are checked over a list of resolutions.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::{invalid, Error, Result};
use crate::relation::{bitset_from, BitMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Metric<T> {
    Euclidean,
    /// Arc length on `[0, 1)` modulo 1.
    Circle,
    /// `0` on equal points, `1` otherwise.
    Discrete,
    /// Symmetric, zero-diagonal, non-negative distance matrix.
    Explicit(Vec<Vec<T>>),
}

impl<T> Metric<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Circle => "circle",
            Metric::Discrete => "discrete",
            Metric::Explicit(_) => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointData<T> {
    Coords(Vec<T>),
    Label(String),
}

/// A finite metric space with points indexed `0..N`.
#[derive(Debug, Clone)]
pub struct Carrier<T> {
    points: Vec<PointData<T>>,
    metric: Metric<T>,
    fingerprint: u64,
}

impl<T: Scalar> Carrier<T> {
    #[allow(clippy::needless_range_loop)]
    pub fn new(points: Vec<PointData<T>>, metric: Metric<T>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(invalid("carrier must have at least one point"));
        }
        match &metric {
            Metric::Euclidean => {
                let dim = match &points[0] {
                    PointData::Coords(c) => c.len(),
                    PointData::Label(_) => return Err(invalid("euclidean metric needs coordinates")),
                };
                if dim == 0 {
                    return Err(invalid("coordinates must be non-empty"));
                }
                for (i, p) in points.iter().enumerate() {
                    match p {
                        PointData::Coords(c) if c.len() == dim => {}
                        _ => return Err(invalid(format!("point {i}: expected {dim} coordinates"))),
                    }
                }
            }
            Metric::Circle => {
                for (i, p) in points.iter().enumerate() {
                    match p {
                        PointData::Coords(c) if c.len() == 1 && c[0] >= T::zero() && c[0] < T::one() => {}
                        _ => {
                            return Err(invalid(format!(
                                "point {i}: circle points need one coordinate in [0, 1)"
                            )))
                        }
                    }
                }
            }
            Metric::Discrete => {}
            Metric::Explicit(d) => {
                if d.len() != n || d.iter().any(|row| row.len() != n) {
                    return Err(invalid(format!("distance matrix must be {n}x{n}")));
                }
                for i in 0..n {
                    if !d[i][i].is_zero() {
                        return Err(invalid(format!("distance matrix diagonal ({i},{i}) != 0")));
                    }
                    for j in 0..n {
                        if d[i][j] < T::zero() {
                            return Err(invalid(format!("negative distance at ({i},{j})")));
                        }
                        if d[i][j] != d[j][i] {
                            return Err(invalid(format!("distance matrix asymmetric at ({i},{j})")));
                        }
                    }
                }
            }
        }
        let mut h = DefaultHasher::new();
        format!("{points:?}|{metric:?}").hash(&mut h);
        Ok(Self {
            points,
            metric,
            fingerprint: h.finish(),
        })
    }

    /// `n` evenly spaced points `k / (n - 1)` on `[0, 1]` (just `{0}` when `n == 1`).
    pub fn interval_grid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("interval grid needs at least one point"));
        }
        let den = (n.max(2) - 1) as i64;
        let coords = (0..n as i64).map(|k| T::from_ratio(k, den)).collect();
        Self::line(coords)
    }

    /// `n` evenly spaced points `k / n` on the circle `[0, 1)`.
    pub fn circle_grid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("circle grid needs at least one point"));
        }
        let points = (0..n as i64)
            .map(|k| PointData::Coords(vec![T::from_ratio(k, n as i64)]))
            .collect();
        Self::new(points, Metric::Circle)
    }

    /// Points on the real line with the euclidean metric.
    pub fn line(coords: Vec<T>) -> Result<Self> {
        Self::new(
            coords.into_iter().map(|c| PointData::Coords(vec![c])).collect(),
            Metric::Euclidean,
        )
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::new(
            (0..n).map(|i| PointData::Label(format!("p{i}"))).collect(),
            Metric::Discrete,
        )
    }

    pub fn explicit(distances: Vec<Vec<T>>) -> Result<Self> {
        let n = distances.len();
        Self::new(
            (0..n).map(|i| PointData::Label(format!("p{i}"))).collect(),
            Metric::Explicit(distances),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointData<T>] {
        &self.points
    }

    pub fn metric(&self) -> &Metric<T> {
        &self.metric
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// The single coordinate of a point on a 1-D ambient space (line or circle).
    pub fn coord(&self, i: usize) -> Option<&T> {
        match (&self.metric, &self.points[i]) {
            (Metric::Euclidean | Metric::Circle, PointData::Coords(c)) if c.len() == 1 => Some(&c[0]),
            _ => None,
        }
    }

    /// `true` when the ambient space is the real line or the circle.
    pub fn is_one_dimensional(&self) -> bool {
        self.coord(0).is_some()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(invalid(format!("point index {i} out of range 0..{}", self.len())))
        }
    }

    /// A value monotone in `d(i, j)`: the distance itself, or its square on
    /// multi-dimensional euclidean carriers.
    pub fn distance_key(&self, i: usize, j: usize) -> T {
        match &self.metric {
            Metric::Euclidean => {
                let (a, b) = (self.coords_of(i), self.coords_of(j));
                if a.len() == 1 {
                    (a[0].clone() - b[0].clone()).abs()
                } else {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| {
                            let d = x.clone() - y.clone();
                            d.clone() * d
                        })
                        .fold(T::zero(), |s, v| s + v)
                }
            }
            Metric::Circle => circle_distance(&self.coords_of(i)[0], &self.coords_of(j)[0]),
            Metric::Discrete => {
                if i == j {
                    T::zero()
                } else {
                    T::one()
                }
            }
            Metric::Explicit(d) => d[i][j].clone(),
        }
    }

    /// Converts a threshold into the scale of [`Carrier::distance_key`].
    pub fn threshold_key(&self, eps: &T) -> T {
        match &self.metric {
            Metric::Euclidean if self.coords_of(0).len() > 1 => eps.clone() * eps.clone(),
            _ => eps.clone(),
        }
    }

    /// `d(i, j) <= eps` with the scalar's comparison slack.
    pub fn within(&self, i: usize, j: usize, eps: &T) -> bool {
        let slack = eps.clone() + T::tolerance();
        self.distance_key(i, j) <= self.threshold_key(&slack)
    }

    /// Ambient distance between an arbitrary point of the line/circle and
    /// carrier point `j`. `None` on other metrics.
    pub fn ambient_distance(&self, point: &T, j: usize) -> Option<T> {
        let y = self.coord(j)?;
        Some(match self.metric {
            Metric::Circle => circle_distance(point, y),
            _ => (point.clone() - y.clone()).abs(),
        })
    }

    /// Distance between two ambient points of a 1-D carrier.
    pub fn ambient_pair_distance(&self, a: &T, b: &T) -> Option<T> {
        match self.metric {
            Metric::Circle if self.is_one_dimensional() => Some(circle_distance(a, b)),
            Metric::Euclidean if self.is_one_dimensional() => Some((a.clone() - b.clone()).abs()),
            _ => None,
        }
    }

    /// Largest distance from an ambient point to its nearest carrier point,
    /// over the given ambient points.
    pub fn covering_radius_of(&self, ambient: &[T]) -> Option<T> {
        let mut worst = T::zero();
        for p in ambient {
            let mut best: Option<T> = None;
            for j in 0..self.len() {
                let d = self.ambient_distance(p, j)?;
                best = Some(match best {
                    Some(b) => T::min_of(b, d),
                    None => d,
                });
            }
            worst = T::max_of(worst, best?);
        }
        Some(worst)
    }

    /// Index of the carrier point nearest to an ambient point (smallest index on ties).
    pub fn nearest(&self, point: &T) -> Option<usize> {
        let mut best: Option<(T, usize)> = None;
        for j in 0..self.len() {
            let d = self.ambient_distance(point, j)?;
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, j));
            }
        }
        best.map(|(_, j)| j)
    }

    /// Sorted distinct values of [`Carrier::distance_key`] over all pairs.
    pub fn distinct_distance_keys(&self) -> Vec<T> {
        let mut keys: Vec<T> = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                keys.push(self.distance_key(i, j));
            }
        }
        keys.sort_by(|a, b| a.partial_cmp(b).expect("distances are comparable"));
        keys.dedup();
        keys
    }

    fn coords_of(&self, i: usize) -> &[T] {
        match &self.points[i] {
            PointData::Coords(c) => c,
            PointData::Label(_) => unreachable!("validated metric needs coordinates"),
        }
    }
}

pub(crate) fn circle_distance<T: Scalar>(a: &T, b: &T) -> T {
    let d = (a.clone() - b.clone()).frac();
    let other = T::one() - d.clone();
    T::min_of(d, other)
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntourageLabel<T> {
    Metric(T),
    Explicit,
}

/// A reflexive relation on a carrier.
#[derive(Debug, Clone)]
pub struct Entourage<T> {
    carrier: u64,
    relation: BitMatrix,
    label: EntourageLabel<T>,
}

impl<T: Scalar> Entourage<T> {
    /// `{(x, y) : d(x, y) <= eps}`.
    pub fn metric(carrier: &Carrier<T>, eps: T) -> Result<Self> {
        if eps < T::zero() {
            return Err(invalid(format!("negative resolution {eps}")));
        }
        let relation = BitMatrix::from_fn(carrier.len(), |i, j| carrier.within(i, j, &eps));
        Ok(Self {
            carrier: carrier.fingerprint(),
            relation,
            label: EntourageLabel::Metric(eps),
        })
    }

    /// Any reflexive relation. Symmetry is not required here.
    pub fn explicit(carrier: &Carrier<T>, relation: BitMatrix) -> Result<Self> {
        if relation.dim() != carrier.len() {
            return Err(invalid("relation size does not match carrier"));
        }
        if !relation.is_reflexive() {
            return Err(invalid("entourage must contain the diagonal"));
        }
        Ok(Self {
            carrier: carrier.fingerprint(),
            relation,
            label: EntourageLabel::Explicit,
        })
    }

    pub fn diagonal(carrier: &Carrier<T>) -> Self {
        Self::explicit(carrier, BitMatrix::identity(carrier.len())).expect("identity is reflexive")
    }

    pub fn full(carrier: &Carrier<T>) -> Self {
        Self::explicit(carrier, BitMatrix::full(carrier.len())).expect("full relation is reflexive")
    }

    pub fn relation(&self) -> &BitMatrix {
        &self.relation
    }

    pub fn label(&self) -> &EntourageLabel<T> {
        &self.label
    }

    pub fn epsilon(&self) -> Option<&T> {
        match &self.label {
            EntourageLabel::Metric(e) => Some(e),
            EntourageLabel::Explicit => None,
        }
    }

    pub fn len(&self) -> usize {
        self.relation.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.dim() == 0
    }

    pub fn carrier_fingerprint(&self) -> u64 {
        self.carrier
    }

    pub fn check_carrier(&self, carrier: &Carrier<T>) -> Result<()> {
        if self.carrier == carrier.fingerprint() {
            Ok(())
        } else {
            Err(invalid("entourage belongs to a different carrier"))
        }
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.relation.get(x, y)
    }

    pub fn is_symmetric(&self) -> bool {
        self.relation.is_symmetric()
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::NonSymmetricEntourage)
        }
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(invalid(format!("point index {x} out of range 0..{}", self.len())))
        }
    }

    /// `E[x] = {y : (x, y) in E}`, ascending.
    pub fn cross_section(&self, x: usize) -> Result<Vec<usize>> {
        self.check_index(x)?;
        Ok(self.relation.row(x).ones().collect())
    }

    /// `E[A]`, the union of the cross-sections of the points of `A`, ascending.
    pub fn cross_section_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        for &a in set {
            self.check_index(a)?;
        }
        let bits = bitset_from(self.len(), set.iter().copied());
        Ok(self.relation.image(&bits).ones().collect())
    }

    pub(crate) fn cross_section_bits(&self, set: &FixedBitSet) -> FixedBitSet {
        self.relation.image(set)
    }

    /// `E ∘ F = {(x, y) : ∃z, (x, z) ∈ E, (z, y) ∈ F}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.carrier != other.carrier {
            return Err(invalid("cannot compose entourages over different carriers"));
        }
        Ok(Self {
            carrier: self.carrier,
            relation: self.relation.compose(&other.relation),
            label: EntourageLabel::Explicit,
        })
    }

    /// `E^n`, the n-fold composite.
    pub fn power(&self, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("entourage power needs n >= 1"));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        Self {
            carrier: self.carrier,
            relation: self.relation.transpose(),
            label: self.label.clone(),
        }
    }
}

/// Partition of the carrier into components of the symmetric closure of `E`
/// (the "eps-components"). Components are listed by smallest member.
pub fn epsilon_components<T: Scalar>(entourage: &Entourage<T>) -> Vec<Vec<usize>> {
    let n = entourage.len();
    let sym = {
        let r = entourage.relation();
        let t = r.transpose();
        BitMatrix::from_fn(n, |i, j| r.get(i, j) || t.get(i, j))
    };
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in sym.row(v).ones() {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
