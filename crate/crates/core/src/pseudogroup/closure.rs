use std::sync::{Arc, OnceLock};

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use super::map::{compose, PartialMap};
use super::GeneratingSystem;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet};

/// Closures larger than this many distinct maps are refused.
pub const DEFAULT_MAP_LIMIT: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    /// Run until a round adds nothing.
    Auto,
    /// Build word lengths `1..=n` (stopping early if the closure stabilizes).
    Max(usize),
}

pub(crate) type ComposeFn = fn(&PartialMap, &PartialMap) -> PartialMap;

/// Extensionally distinct maps realized by words of bounded length.
///
/// Maps are stored in breadth-first order, so the maps of `𝒢_n` form a
/// prefix of the list. Each map keeps one shortest witness word.
#[derive(Clone, Debug)]
pub struct WordClosure {
    space: Arc<FiniteMetricSpace>,
    names: Vec<String>,
    generators: Vec<PartialMap>,
    maps: IndexSet<PartialMap, FxBuildHasher>,
    parent: Vec<u32>,
    letter: Vec<u32>,
    /// `level_end[k]` = number of maps realized by words of length `≤ k + 1`.
    level_end: Vec<usize>,
    stabilized: Option<usize>,
    /// Per basepoint, filled on first use by [`WordClosure::rank_records`].
    records: Vec<OnceLock<Vec<Vec<(u32, u32)>>>>,
    /// Per basepoint, the indices of the maps defined there.
    defined: Vec<OnceLock<Vec<u32>>>,
}

const ROOT: u32 = u32::MAX;

impl WordClosure {
    pub fn build(sys: &GeneratingSystem, depth: Depth) -> Result<Self> {
        Self::build_with(sys, depth, DEFAULT_MAP_LIMIT, compose)
    }

    pub fn build_limited(sys: &GeneratingSystem, depth: Depth, limit: usize) -> Result<Self> {
        Self::build_with(sys, depth, limit, compose)
    }

    pub(crate) fn build_with(
        sys: &GeneratingSystem,
        depth: Depth,
        limit: usize,
        compose: ComposeFn,
    ) -> Result<Self> {
        let gens: Vec<&PartialMap> = sys.generators().iter().map(|g| &g.map).collect();
        let mut wc = WordClosure {
            space: sys.space_arc().clone(),
            names: sys.names(),
            generators: gens.iter().map(|g| (*g).clone()).collect(),
            maps: IndexSet::default(),
            parent: Vec::new(),
            letter: Vec::new(),
            level_end: Vec::new(),
            stabilized: None,
            records: (0..sys.space().len()).map(|_| OnceLock::new()).collect(),
            defined: (0..sys.space().len()).map(|_| OnceLock::new()).collect(),
        };
        for (i, g) in gens.iter().enumerate() {
            if wc.maps.insert((*g).clone()) {
                wc.parent.push(ROOT);
                wc.letter.push(i as u32);
            }
        }
        wc.level_end.push(wc.maps.len());
        let max = match depth {
            Depth::Auto => usize::MAX,
            Depth::Max(n) => n.max(1),
        };
        let mut frontier = 0..wc.maps.len();
        while wc.level_end.len() < max {
            for w in frontier.clone() {
                for (i, g) in gens.iter().enumerate() {
                    // The word g ∘ w applies w first.
                    let next = compose(&wc.maps[w], g);
                    if wc.maps.insert(next) {
                        wc.parent.push(w as u32);
                        wc.letter.push(i as u32);
                        if wc.maps.len() > limit {
                            return Err(Error::Capability(format!(
                                "word closure exceeds {limit} distinct maps"
                            )));
                        }
                    }
                }
            }
            let before = *wc.level_end.last().unwrap();
            if wc.maps.len() == before {
                wc.stabilized = Some(wc.level_end.len());
                break;
            }
            wc.level_end.push(wc.maps.len());
            frontier = before..wc.maps.len();
        }
        Ok(wc)
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    /// The generator maps the closure was built from, in system order.
    pub fn generators(&self) -> &[PartialMap] {
        &self.generators
    }

    /// Number of word lengths built.
    pub fn depth(&self) -> usize {
        self.level_end.len()
    }

    /// The stabilization index `n*`, if reached.
    pub fn stabilization(&self) -> Option<usize> {
        self.stabilized
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, i: usize) -> &PartialMap {
        &self.maps[i]
    }

    pub fn index_of(&self, map: &PartialMap) -> Option<usize> {
        self.maps.get_index_of(map)
    }

    /// Indices `i < k` of the maps defined at `x`, ascending.
    pub(crate) fn defined_indices(&self, x: usize, k: usize) -> &[u32] {
        let all = self.defined[x].get_or_init(|| {
            self.maps
                .iter()
                .enumerate()
                .filter(|(_, g)| g.defined_at(x))
                .map(|(i, _)| i as u32)
                .collect()
        });
        &all[..all.partition_point(|&i| (i as usize) < k)]
    }

    /// For each `y`, the running maximum of `rank(g x, g y)` along the map
    /// list as `(index, rank)` pairs at the indices where it increases.
    /// Computed once per `x`.
    pub(crate) fn rank_records(&self, x: usize) -> &[Vec<(u32, u32)>] {
        self.records[x].get_or_init(|| {
            let mut rec: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.space.len()];
            for (i, g) in self.maps.iter().enumerate() {
                let Some(gx) = g.get(x) else { continue };
                for (y, gy) in g.pairs() {
                    let r = self.space.rank(gx, gy);
                    if r > rec[y].last().map_or(0, |&(_, m)| m) {
                        rec[y].push((i as u32, r));
                    }
                }
            }
            rec
        })
    }

    /// Size of `𝒢_n`; the maps are `map(0..size)`.
    pub fn size_at(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::input("word length must be at least 1"));
        }
        if n <= self.level_end.len() {
            return Ok(self.level_end[n - 1]);
        }
        match self.stabilized {
            Some(_) => Ok(self.maps.len()),
            None => Err(Error::DepthExceeded {
                built: self.level_end.len(),
                requested: n,
            }),
        }
    }

    /// The maps of `𝒢_n` in breadth-first order.
    pub fn level(&self, n: usize) -> Result<impl Iterator<Item = &PartialMap> + '_> {
        let k = self.size_at(n)?;
        Ok(self.maps.iter().take(k))
    }

    /// All maps, in breadth-first order.
    pub fn maps(&self) -> impl Iterator<Item = &PartialMap> + '_ {
        self.maps.iter()
    }

    /// `𝒢_n^x`: indices of maps in `𝒢_n` defined at `x`.
    pub fn defined_at(&self, n: usize, x: usize) -> Result<Vec<usize>> {
        let k = self.size_at(n)?;
        Ok((0..k).filter(|&i| self.maps[i].defined_at(x)).collect())
    }

    /// Length of the shortest word realizing map `i`.
    pub fn word_length(&self, i: usize) -> usize {
        self.level_end.partition_point(|&end| end <= i) + 1
    }

    /// Generator indices `[g_1, …, g_n]` of a shortest word `g_1 ∘ … ∘ g_n`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = i as u32;
        while cur != ROOT {
            out.push(self.letter[cur as usize] as usize);
            cur = self.parent[cur as usize];
        }
        out
    }

    pub fn word_string(&self, i: usize) -> String {
        let parts: Vec<&str> = self
            .word(i)
            .into_iter()
            .map(|g| self.names[g].as_str())
            .collect();
        parts.join("∘")
    }

    /// Pairs `(x, w(x))` over every map in the closure.
    pub fn germ_pairs(&self) -> PointSet {
        let n = self.space.len();
        let mut pairs = PointSet::empty(n * n);
        for w in &self.maps {
            for (x, y) in w.pairs() {
                pairs.insert(x * n + y);
            }
        }
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{line_system, rotation_system};
    use super::*;
    use crate::space::FiniteMetricSpace;

    fn pm(pairs: &[(usize, usize)]) -> PartialMap {
        PartialMap::from_pairs(3, 3, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn line_closure_at_two() {
        let sys = line_system(None, None);
        let wc = WordClosure::build(&sys, Depth::Max(2)).unwrap();
        let g2: Vec<&PartialMap> = wc.level(2).unwrap().collect();
        for expected in [
            pm(&[(0, 2)]),
            pm(&[(0, 0), (1, 1)]),
            pm(&[(1, 1), (2, 2)]),
            PartialMap::identity(3),
            pm(&[(0, 1), (1, 2)]),
            pm(&[(1, 0), (2, 1)]),
        ] {
            assert!(g2.contains(&&expected), "{expected:?}");
        }
        let i = wc.index_of(&pm(&[(0, 2)])).unwrap();
        assert_eq!(wc.word_string(i), "g∘g");
        assert_eq!(wc.word_length(i), 2);
    }

    #[test]
    fn identity_closure_is_trivial() {
        let sys = GeneratingSystem::identity_only(Arc::new(FiniteMetricSpace::cyclic(4)));
        let wc = WordClosure::build(&sys, Depth::Auto).unwrap();
        assert_eq!(wc.len(), 1);
        assert_eq!(wc.stabilization(), Some(1));
        assert_eq!(wc.size_at(7).unwrap(), 1);
    }

    #[test]
    fn rotation_closure_stabilizes_at_three() {
        let sys = rotation_system(6);
        let wc = WordClosure::build(&sys, Depth::Auto).unwrap();
        assert_eq!(wc.stabilization(), Some(3));
        assert_eq!(wc.size_at(1).unwrap(), 3);
        assert_eq!(wc.size_at(2).unwrap(), 5);
        assert_eq!(wc.size_at(3).unwrap(), 6);
        assert_eq!(wc.len(), 6);
    }

    #[test]
    fn truncated_closure_refuses_longer_words() {
        let sys = rotation_system(12);
        let wc = WordClosure::build(&sys, Depth::Max(2)).unwrap();
        assert_eq!(wc.stabilization(), None);
        assert_eq!(
            wc.size_at(3).unwrap_err(),
            Error::DepthExceeded {
                built: 2,
                requested: 3
            }
        );
    }

    #[test]
    fn map_limit_is_enforced() {
        let sys = rotation_system(12);
        assert!(matches!(
            WordClosure::build_limited(&sys, Depth::Auto, 5),
            Err(Error::Capability(_))
        ));
    }
}
