use std::fmt;

use crate::error::{Error, Result};
use crate::space::PointSet;

pub(crate) const UNDEFINED: u32 = u32::MAX;

/// An injective partial map between two finite index ranges.
///
/// Equality is extensional: two maps are equal iff they have the same
/// domain and agree on it. On a finite discrete space every such map is a
/// homeomorphism between open subsets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    image: Vec<u32>,
    codomain: u32,
}

impl PartialMap {
    pub fn empty(domain_len: usize, codomain_len: usize) -> Self {
        PartialMap {
            image: vec![UNDEFINED; domain_len],
            codomain: codomain_len as u32,
        }
    }

    pub fn identity(n: usize) -> Self {
        PartialMap {
            image: (0..n as u32).collect(),
            codomain: n as u32,
        }
    }

    pub fn identity_on(set: &PointSet) -> Self {
        let mut map = Self::empty(set.universe(), set.universe());
        for x in set.iter() {
            map.image[x] = x as u32;
        }
        map
    }

    /// Builds a map from `(x, g(x))` pairs, rejecting duplicates, out of
    /// range indices and non-injective assignments.
    pub fn from_pairs(
        domain_len: usize,
        codomain_len: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let err = |reason: String| Error::Map {
            name: String::new(),
            reason,
        };
        let mut map = Self::empty(domain_len, codomain_len);
        let mut hit = vec![false; codomain_len];
        for (x, y) in pairs {
            if x >= domain_len || y >= codomain_len {
                return Err(err(format!("pair ({x},{y}) out of range")));
            }
            if map.image[x] != UNDEFINED {
                return Err(err(format!("point {x} assigned twice")));
            }
            if hit[y] {
                return Err(err(format!("not injective: {y} hit twice")));
            }
            hit[y] = true;
            map.image[x] = y as u32;
        }
        Ok(map)
    }

    /// A total map from a permutation vector.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        Self::from_pairs(perm.len(), perm.len(), perm.iter().copied().enumerate())
    }

    pub fn domain_len(&self) -> usize {
        self.image.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain as usize
    }

    #[inline]
    pub fn get(&self, x: usize) -> Option<usize> {
        match self.image[x] {
            UNDEFINED => None,
            y => Some(y as usize),
        }
    }

    #[inline]
    pub fn defined_at(&self, x: usize) -> bool {
        self.image[x] != UNDEFINED
    }

    /// Raw images, [`UNDEFINED`] outside the domain.
    pub(crate) fn images(&self) -> &[u32] {
        &self.image
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != UNDEFINED)
            .map(|(x, &y)| (x, y as usize))
    }

    pub fn domain(&self) -> PointSet {
        PointSet::from_indices(self.domain_len(), self.pairs().map(|(x, _)| x))
    }

    pub fn range(&self) -> PointSet {
        PointSet::from_indices(self.codomain_len(), self.pairs().map(|(_, y)| y))
    }

    pub fn domain_size(&self) -> usize {
        self.image.iter().filter(|&&y| y != UNDEFINED).count()
    }

    pub fn is_empty(&self) -> bool {
        self.image.iter().all(|&y| y == UNDEFINED)
    }

    pub fn is_total(&self) -> bool {
        self.image.iter().all(|&y| y != UNDEFINED)
    }

    pub fn is_total_identity(&self) -> bool {
        self.codomain_len() == self.domain_len()
            && self.image.iter().enumerate().all(|(x, &y)| y == x as u32)
    }

    /// `h ∘ self`: defined at `x` iff `x ∈ D_self` and `self(x) ∈ D_h`.
    pub fn then(&self, h: &PartialMap) -> PartialMap {
        debug_assert_eq!(self.codomain_len(), h.domain_len());
        let image = self
            .image
            .iter()
            .map(|&y| {
                if y == UNDEFINED {
                    UNDEFINED
                } else {
                    h.image[y as usize]
                }
            })
            .collect();
        PartialMap {
            image,
            codomain: h.codomain,
        }
    }

    pub fn invert(&self) -> PartialMap {
        let mut inv = PartialMap::empty(self.codomain_len(), self.domain_len());
        for (x, y) in self.pairs() {
            inv.image[y] = x as u32;
        }
        inv
    }

    /// Restriction to `D_self ∩ set`.
    pub fn restrict(&self, set: &PointSet) -> PartialMap {
        let image = self
            .image
            .iter()
            .enumerate()
            .map(|(x, &y)| if set.contains(x) { y } else { UNDEFINED })
            .collect();
        PartialMap {
            image,
            codomain: self.codomain,
        }
    }

    /// Image of a set: `g(A ∩ D_g)`.
    pub fn image_of(&self, set: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.codomain_len(),
            self.pairs()
                .filter(|(x, _)| set.contains(*x))
                .map(|(_, y)| y),
        )
    }

    /// Preimage `g^{-1}(set)`, a subset of the domain.
    pub fn preimage(&self, set: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.domain_len(),
            self.pairs()
                .filter(|(_, y)| set.contains(*y))
                .map(|(x, _)| x),
        )
    }

    /// Graph containment: `other` is a restriction of `self`.
    pub fn extends(&self, other: &PartialMap) -> bool {
        other.pairs().all(|(x, y)| self.get(x) == Some(y))
    }

    /// Pointwise union of two maps with compatible graphs, `None` if they
    /// disagree somewhere or the union is not injective.
    pub fn glue(&self, other: &PartialMap) -> Option<PartialMap> {
        let mut out = self.clone();
        for (x, y) in other.pairs() {
            match out.get(x) {
                Some(v) if v != y => return None,
                Some(_) => {}
                None => out.image[x] = y as u32,
            }
        }
        let mut hit = vec![false; out.codomain_len()];
        for (_, y) in out.pairs() {
            if std::mem::replace(&mut hit[y], true) {
                return None;
            }
        }
        Some(out)
    }

    /// Conjugate `phi ∘ self ∘ psi^{-1}` for bijections given as index maps.
    pub fn conjugate_by(&self, psi: &PartialMap, phi: &PartialMap) -> PartialMap {
        psi.invert().then(self).then(phi)
    }
}

/// `h ∘ g`, with `D_{h∘g} = g^{-1}(D_h)`.
pub fn compose(g: &PartialMap, h: &PartialMap) -> PartialMap {
    g.then(h)
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g() -> PartialMap {
        PartialMap::from_pairs(3, 3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn compose_examples() {
        let gg = compose(&g(), &g());
        assert_eq!(gg, PartialMap::from_pairs(3, 3, [(0, 2)]).unwrap());
        let back = compose(&g(), &g().invert());
        assert_eq!(
            back,
            PartialMap::identity_on(&PointSet::from_indices(3, [0, 1]))
        );
        let empty = PartialMap::empty(3, 3);
        assert!(compose(&empty, &g()).is_empty());
        assert!(compose(&g(), &empty).is_empty());
    }

    #[test]
    fn invert_and_restrict_examples() {
        assert_eq!(
            g().invert(),
            PartialMap::from_pairs(3, 3, [(1, 0), (2, 1)]).unwrap()
        );
        assert_eq!(
            g().restrict(&PointSet::singleton(3, 0)),
            PartialMap::from_pairs(3, 3, [(0, 1)]).unwrap()
        );
        assert_eq!(g().invert().invert(), g());
    }

    #[test]
    fn rejects_non_injective() {
        assert!(PartialMap::from_pairs(3, 3, [(0, 1), (1, 1)]).is_err());
        assert!(PartialMap::from_pairs(3, 3, [(0, 1), (0, 2)]).is_err());
        assert!(PartialMap::from_pairs(3, 3, [(0, 3)]).is_err());
    }

    #[test]
    fn glue_checks_compatibility() {
        let a = PartialMap::from_pairs(3, 3, [(0, 1)]).unwrap();
        let b = PartialMap::from_pairs(3, 3, [(1, 2)]).unwrap();
        assert_eq!(a.glue(&b), Some(g()));
        let clash = PartialMap::from_pairs(3, 3, [(2, 1)]).unwrap();
        assert_eq!(a.glue(&clash), None);
    }

    fn arb_map(n: usize) -> impl Strategy<Value = PartialMap> {
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (proptest::collection::vec(any::<bool>(), n), perm).prop_map(move |(keep, perm)| {
            PartialMap::from_pairs(n, n, (0..n).filter(|&x| keep[x]).map(|x| (x, perm[x]))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn composition_is_associative(f in arb_map(6), g in arb_map(6), h in arb_map(6)) {
            prop_assert_eq!(compose(&compose(&f, &g), &h), compose(&f, &compose(&g, &h)));
        }

        #[test]
        fn inverse_reverses_composition(f in arb_map(6), g in arb_map(6)) {
            prop_assert_eq!(compose(&f, &g).invert(), compose(&g.invert(), &f.invert()));
            prop_assert_eq!(f.invert().invert(), f.clone());
            prop_assert_eq!(compose(&f, &f.invert()), PartialMap::identity_on(&f.domain()));
        }
    }
}
