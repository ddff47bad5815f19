use std::collections::VecDeque;

use super::GeneratingSystem;
use crate::space::PointSet;

/// Pairs `(x, y)` with `y = w(x)` for some word `w`, each with a shortest
/// realizing word. On a discrete space a partial map belongs to the
/// generated pseudogroup iff its graph lies in this relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermRelation {
    n: usize,
    names: Vec<String>,
    /// Row-major `n × n`; words listed as `[g_1, …, g_k]` for `g_1 ∘ … ∘ g_k`.
    words: Vec<Option<Vec<usize>>>,
}

impl GermRelation {
    /// Breadth-first search over the generator graph from every point;
    /// shortest paths are shortest words.
    pub(crate) fn of_system(sys: &GeneratingSystem) -> Self {
        let n = sys.space().len();
        let gens = sys.generators();
        let id = gens.iter().position(|g| g.map.is_total_identity());
        let mut words = vec![None; n * n];
        for x in 0..n {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[x] = true;
            let mut queue = VecDeque::from([x]);
            while let Some(u) = queue.pop_front() {
                for (i, g) in gens.iter().enumerate() {
                    if let Some(v) = g.map.get(u) {
                        if !seen[v] {
                            seen[v] = true;
                            prev[v] = Some((u, i));
                            queue.push_back(v);
                        }
                    }
                }
            }
            for y in 0..n {
                if !seen[y] {
                    continue;
                }
                let mut word = Vec::new();
                let mut cur = y;
                while let Some((u, i)) = prev[cur] {
                    word.push(i);
                    cur = u;
                }
                if word.is_empty() {
                    word.extend(id);
                }
                words[x * n + y] = Some(word);
            }
        }
        GermRelation {
            n,
            names: sys.names(),
            words,
        }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.words[x * self.n + y].is_some()
    }

    pub fn word(&self, x: usize, y: usize) -> Option<&[usize]> {
        self.words[x * self.n + y].as_deref()
    }

    pub fn word_string(&self, x: usize, y: usize) -> Option<String> {
        self.word(x, y).map(|w| {
            if w.is_empty() {
                "id".to_string()
            } else {
                w.iter()
                    .map(|&g| self.names[g].as_str())
                    .collect::<Vec<_>>()
                    .join("∘")
            }
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(|&k| self.words[k].is_some())
            .map(move |k| (k / n, k % n))
    }

    pub fn len(&self) -> usize {
        self.words.iter().filter(|w| w.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The relation as a set of indices `x * n + y`.
    pub fn as_set(&self) -> PointSet {
        PointSet::from_indices(self.n * self.n, self.pairs().map(|(x, y)| x * self.n + y))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    /// Whether a partial map's graph lies in the relation.
    pub fn realizes(&self, map: &super::PartialMap) -> bool {
        map.pairs().all(|(x, y)| self.contains(x, y))
    }

    /// First pair (in row-major order) of `self` missing from `other`.
    pub fn first_missing_from(&self, other: &GermRelation) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !other.contains(x, y))
    }

    /// Connected components of the undirected graph underlying the
    /// relation, ordered by smallest element. For a symmetric system these
    /// are the orbits.
    pub fn components(&self) -> Vec<PointSet> {
        let n = self.n;
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut set = PointSet::empty(n);
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                set.insert(u);
                for v in 0..n {
                    if comp[v] == usize::MAX && (self.contains(u, v) || self.contains(v, u)) {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            out.push(set);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::tests::line_system;
    use super::super::{Depth, Generator, PartialMap, WordClosure};
    use super::*;
    use crate::space::FiniteMetricSpace;

    #[test]
    fn line_relation_is_complete() {
        let sys = line_system(None, None);
        let rel = sys.germ_relation();
        assert_eq!(rel.len(), 9);
        assert_eq!(rel.word_string(0, 2).as_deref(), Some("g∘g"));
        assert_eq!(rel.word_string(1, 1).as_deref(), Some("id"));
        assert_eq!(rel.components().len(), 1);
    }

    #[test]
    fn identity_relation_is_diagonal() {
        let sys = GeneratingSystem::identity_only(Arc::new(FiniteMetricSpace::cyclic(3)));
        let rel = sys.germ_relation();
        assert_eq!(
            rel.pairs().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
        assert_eq!(rel.components().len(), 3);
    }

    #[test]
    fn swap_relation_has_four_pairs() {
        let space =
            Arc::new(FiniteMetricSpace::from_integer_rows(&[vec![0, 1], vec![1, 0]]).unwrap());
        let swap = Generator::new("s", PartialMap::permutation(&[1, 0]).unwrap());
        let (sys, report) = GeneratingSystem::symmetrize(space, vec![swap]).unwrap();
        assert!(report.added_inverses.is_empty());
        assert_eq!(sys.germ_relation().len(), 4);
    }

    #[test]
    fn agrees_with_closure_pairs() {
        let sys = line_system(Some(&[0]), Some(&[2]));
        for s in [sys.clone(), sys.compacted().unwrap()] {
            let wc = WordClosure::build(&s, Depth::Auto).unwrap();
            assert_eq!(s.germ_relation().as_set(), wc.germ_pairs());
        }
    }
}
