//! Finite metric spaces with exact rational distances.
//!
//! Every subset of a finite metric space is open, so the ball-based
//! constructions (dynamical balls, Lebesgue numbers, moduli of continuity)
//! only ever compare a distance against a threshold. Each space keeps the
//! sorted list of its distinct distances and a rank matrix into that list;
//! a threshold `eps` becomes an integer cut once, and membership tests in
//! the hot loops are integer comparisons.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// A subset of the points of a finite space, as a bitset over indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        PointSet(bits)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        Self::from_indices(universe, [x])
    }

    /// Size of the ambient index range.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    /// Sets every bit to `value`, keeping the universe.
    pub fn clear(&mut self, value: bool) {
        self.0.set_range(.., value);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.0.union_with(&other.0);
        out
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.0.difference_with(&other.0);
        out
    }

    pub fn complement(&self) -> PointSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A scale that is either a finite rational or larger than anything the
/// space can distinguish.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radius {
    Finite(Rational),
    Unbounded,
}

impl Radius {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Radius::Unbounded)
    }

    pub fn min(self, other: Radius) -> Radius {
        std::cmp::min(self, other)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => f.write_str(&format_rational(r)),
            Radius::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Integer form of a comparison `d(·,·) < eps` (open) or `d(·,·) <= eps`
/// (closed): a distance passes iff its rank is below the cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cut(pub u32);

impl Cut {
    #[inline]
    pub fn admits(self, rank: u32) -> bool {
        rank < self.0
    }
}

#[derive(Clone)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<Rational>,
    /// `levels[0] = 0`, then the distinct positive distances in increasing order.
    levels: Vec<Rational>,
    rank: Vec<u32>,
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("points", &self.labels)
            .field(
                "grid",
                &self.levels[1..]
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl PartialEq for FiniteMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl Eq for FiniteMetricSpace {}

impl FiniteMetricSpace {
    /// Validates the metric axioms; any violation is an error naming the
    /// offending points.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Metric("a space needs at least one point".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(label.clone()));
            }
        }
        if rows.len() != n {
            return Err(Error::MatrixShape {
                expected: n,
                row: rows.len(),
                found: 0,
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixShape {
                    expected: n,
                    row: r,
                    found: row.len(),
                });
            }
        }
        let d = |i: usize, j: usize| &rows[i][j];
        for i in 0..n {
            if !d(i, i).is_zero() {
                return Err(Error::Metric(format!("d({0},{0}) must be 0", labels[i])));
            }
            for j in 0..n {
                if d(i, j).is_negative() {
                    return Err(Error::Metric(format!(
                        "negative distance at ({},{})",
                        labels[i], labels[j]
                    )));
                }
                if i != j && d(i, j).is_zero() {
                    return Err(Error::Metric(format!(
                        "identity of indiscernibles violated at ({},{})",
                        labels[i], labels[j]
                    )));
                }
                if d(i, j) != d(j, i) {
                    return Err(Error::Metric(format!(
                        "symmetry violated at ({},{})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d(i, k) > &(d(i, j) + d(j, k)) {
                        return Err(Error::Metric(format!(
                            "triangle inequality violated at ({},{},{})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        let dist: Vec<Rational> = rows.into_iter().flatten().collect();
        let mut levels = dist.clone();
        levels.sort();
        levels.dedup();
        let rank = dist
            .iter()
            .map(|v| levels.binary_search(v).expect("distance is a level") as u32)
            .collect();
        Ok(FiniteMetricSpace {
            labels,
            index,
            dist,
            levels,
            rank,
        })
    }

    /// Builds a space from integer distances and default labels `0, 1, ...`.
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::new(labels, rows)
    }

    /// `Z/n` with the cyclic distance `min(|i-j|, n-|i-j|)`.
    pub fn cyclic(n: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = i.abs_diff(j);
                        d.min(n - d) as i64
                    })
                    .collect()
            })
            .collect();
        Self::from_integer_rows(&rows).expect("cyclic metric is valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index: x,
                len: self.len(),
            })
        }
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x * self.len() + y]
    }

    /// Position of `d(x, y)` in the level list (0 iff `x == y`).
    #[inline]
    pub fn rank(&self, x: usize, y: usize) -> u32 {
        self.rank[x * self.len() + y]
    }

    /// Distance of a level index.
    pub fn level(&self, rank: u32) -> &Rational {
        &self.levels[rank as usize]
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Strictly increasing distinct positive distances.
    pub fn distance_grid(&self) -> Vec<Rational> {
        self.levels[1..].to_vec()
    }

    pub fn grid(&self) -> &[Rational] {
        &self.levels[1..]
    }

    pub fn diameter(&self) -> Rational {
        self.levels.last().cloned().unwrap_or_default()
    }

    pub fn cut(&self, eps: &Rational, closed: bool) -> Cut {
        let count = if closed {
            self.levels.partition_point(|l| l <= eps)
        } else {
            self.levels.partition_point(|l| l < eps)
        };
        Cut(count as u32)
    }

    /// The cut that admits every distance up to and including level `rank`.
    pub fn cut_at_level(rank: u32) -> Cut {
        Cut(rank + 1)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        let mut set = self.empty_set();
        for l in labels {
            set.insert(self.index_of(l.as_ref())?);
        }
        Ok(set)
    }

    pub fn set_labels(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{y : d(x,y) < r}` or, when `closed`, `{y : d(x,y) <= r}`.
    pub fn metric_ball(&self, x: usize, r: &Rational, closed: bool) -> PointSet {
        self.ball_with_cut(x, self.cut(r, closed))
    }

    pub fn ball_with_cut(&self, x: usize, cut: Cut) -> PointSet {
        let mut ball = self.empty_set();
        for y in 0..self.len() {
            if cut.admits(self.rank(x, y)) {
                ball.insert(y);
            }
        }
        ball
    }

    /// Largest grid value `delta` such that every open ball `B(x, delta)`
    /// lies inside some member of `cover`; unbounded when the whole space is
    /// itself a member.
    pub fn lebesgue_number(&self, cover: &[PointSet]) -> Result<Radius> {
        let mut covered = self.empty_set();
        for c in cover {
            covered.union_with(c);
        }
        if let Some(missing) = covered.complement().iter().next() {
            return Err(Error::NotACover(self.labels[missing].clone()));
        }
        if cover.iter().any(|c| c.is_full()) {
            return Ok(Radius::Unbounded);
        }
        let works = |delta: &Rational| {
            (0..self.len()).all(|x| {
                let ball = self.metric_ball(x, delta, false);
                cover.iter().any(|c| ball.is_subset(c))
            })
        };
        // Valid deltas are downward closed; scan from the top.
        let best = self.grid().iter().rev().find(|delta| works(delta));
        Ok(Radius::Finite(
            best.cloned()
                .expect("smallest grid value always works for a cover"),
        ))
    }

    /// The subspace on `keep` (in the given order), relabelled consistently.
    pub fn subspace(&self, keep: &[usize]) -> Result<Self> {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.dist(i, j).clone()).collect())
            .collect();
        Self::new(labels, rows)
    }

    /// Same points, distances multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let rows = (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.dist(i, j) * factor).collect())
            .collect();
        Self::new(self.labels.clone(), rows).expect("positive scaling keeps a metric")
    }

    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self> {
        let rows = (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.dist(i, j).clone()).collect())
            .collect();
        Self::new(labels, rows)
    }
}
