//! Dense boolean relations on `0..n`, stored as one bitset per row.

use std::fmt;

use fixedbitset::FixedBitSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl BitMatrix {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        for row in &mut m.rows {
            row.insert_range(..);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.rows[i].insert(j);
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::empty(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.rows[j].insert(i);
            }
        }
        t
    }

    /// Relational composition: `(i, k)` iff some `j` has `(i, j)` in `self`
    /// and `(j, k)` in `other`. Equals the boolean matrix product.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Self::empty(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            let acc = &mut out.rows[i];
            for j in row.ones() {
                acc.union_with(&other.rows[j]);
            }
        }
        out
    }

    /// Image of a vertex set under the relation.
    pub fn image(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in set.ones() {
            out.union_with(&self.rows[i]);
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_full(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones(..) == self.n)
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    /// First `(i, j)` with `self[i][j]` false, row-major.
    pub fn first_zero(&self) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(i, r)| {
            let mut z = r.clone();
            z.toggle_range(..);
            z.ones().next().map(|j| (i, j))
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for row in &self.rows {
            let line: String = (0..self.n).map(|j| if row.contains(j) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

pub(crate) fn bitset_from(n: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in items {
        s.insert(i);
    }
    s
}
