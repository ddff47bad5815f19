//! Partial maps, generating systems, word closures and germ relations.

mod closure;
mod germ;
pub(crate) mod map;

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

pub use closure::{Depth, WordClosure, DEFAULT_MAP_LIMIT};
pub use germ::GermRelation;
pub use map::{compose, PartialMap};

use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet, Radius};

/// A named generator with an optional core `K_g ⊆ D_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub map: PartialMap,
    pub core: Option<PointSet>,
}

impl Generator {
    pub fn new(name: impl Into<String>, map: PartialMap) -> Self {
        Generator {
            name: name.into(),
            map,
            core: None,
        }
    }

    pub fn with_core(mut self, core: PointSet) -> Self {
        self.core = Some(core);
        self
    }
}

/// Completions applied while building a system from user input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub added_identity: Option<String>,
    pub added_inverses: Vec<String>,
}

/// A finite generating family on a finite metric space.
///
/// Systems built through [`GeneratingSystem::new`] or
/// [`GeneratingSystem::symmetrize`] contain the total identity, are closed
/// under inversion and cover the space. Compacted systems keep the
/// identity but need not be symmetric.
#[derive(Clone, Debug)]
pub struct GeneratingSystem {
    space: Arc<FiniteMetricSpace>,
    generators: Vec<Generator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Goodness {
    pub good: bool,
    /// A pair realized by the system but not by the compacted one.
    pub witness: Option<(usize, usize)>,
}

impl GeneratingSystem {
    /// Validates a complete generator list.
    pub fn new(space: Arc<FiniteMetricSpace>, generators: Vec<Generator>) -> Result<Self> {
        let sys = GeneratingSystem { space, generators };
        sys.validate()?;
        Ok(sys)
    }

    /// Adds the identity and any missing inverses, then validates.
    ///
    /// An added inverse `g^-1` gets the core `g(K_g)` when `g` has a core.
    pub fn symmetrize(
        space: Arc<FiniteMetricSpace>,
        mut generators: Vec<Generator>,
    ) -> Result<(Self, LoadReport)> {
        let n = space.len();
        let mut report = LoadReport::default();
        check_shapes(&space, &generators)?;
        if !generators.iter().any(|g| g.map.is_total_identity()) {
            let mut name = "id".to_string();
            while generators.iter().any(|g| g.name == name) {
                name.push('\'');
            }
            report.added_identity = Some(name.clone());
            generators.insert(0, Generator::new(name, PartialMap::identity(n)));
        }
        let mut present: HashSet<PartialMap> = generators.iter().map(|g| g.map.clone()).collect();
        let mut extra = Vec::new();
        for g in &generators {
            let inv = g.map.invert();
            if present.insert(inv.clone()) {
                let core = g.core.as_ref().map(|k| g.map.image_of(k));
                extra.push(Generator {
                    name: format!("{}^-1", g.name),
                    map: inv,
                    core,
                });
            }
        }
        report.added_inverses = extra.iter().map(|g| g.name.clone()).collect();
        generators.extend(extra);
        Ok((Self::new(space, generators)?, report))
    }

    /// The system `{id}` with core `X`.
    pub fn identity_only(space: Arc<FiniteMetricSpace>) -> Self {
        let n = space.len();
        let id = Generator::new("id", PartialMap::identity(n)).with_core(PointSet::full(n));
        GeneratingSystem {
            space,
            generators: vec![id],
        }
    }

    pub(crate) fn from_parts_unchecked(
        space: Arc<FiniteMetricSpace>,
        generators: Vec<Generator>,
    ) -> Self {
        GeneratingSystem { space, generators }
    }

    pub fn validate(&self) -> Result<()> {
        check_shapes(&self.space, &self.generators)?;
        if !self.has_identity() {
            return Err(Error::System("the total identity is missing".into()));
        }
        if let Some(g) = self.first_without_inverse() {
            return Err(Error::System(format!(
                "not symmetric: the inverse of `{}` is missing",
                g.name
            )));
        }
        if let Some(x) = self.first_uncovered() {
            return Err(Error::System(format!(
                "point `{}` is not covered",
                self.space.label(x)
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn has_identity(&self) -> bool {
        self.generators.iter().any(|g| g.map.is_total_identity())
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_without_inverse().is_none()
    }

    fn first_without_inverse(&self) -> Option<&Generator> {
        let present: HashSet<&PartialMap> = self.generators.iter().map(|g| &g.map).collect();
        self.generators
            .iter()
            .find(|g| !present.contains(&g.map.invert()))
    }

    fn first_uncovered(&self) -> Option<usize> {
        let mut covered = self.space.empty_set();
        for g in &self.generators {
            covered.union_with(&g.map.domain());
            covered.union_with(&g.map.range());
        }
        covered.complement().iter().next()
    }

    /// True when every generator other than a total identity has a core.
    pub fn has_cores(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g.core.is_some() || g.map.is_total_identity())
    }

    fn require_cores(&self) -> Result<()> {
        match self
            .generators
            .iter()
            .find(|g| g.core.is_none() && !g.map.is_total_identity())
        {
            Some(g) => Err(Error::MissingCore(g.name.clone())),
            None => Ok(()),
        }
    }

    /// Generators restricted to their cores. Total identities stay total.
    pub fn compacted(&self) -> Result<GeneratingSystem> {
        self.require_cores()?;
        Ok(self.compacted_with(|g| {
            let core = g.core.as_ref().expect("cores checked");
            g.map.restrict(core)
        }))
    }

    pub(crate) fn compacted_with(
        &self,
        restrict: impl Fn(&Generator) -> PartialMap,
    ) -> GeneratingSystem {
        let n = self.space.len();
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let map = if g.map.is_total_identity() {
                    g.map.clone()
                } else {
                    restrict(g)
                };
                let core = if map.is_total_identity() {
                    PointSet::full(n)
                } else {
                    map.domain()
                };
                Generator {
                    name: g.name.clone(),
                    map,
                    core: Some(core),
                }
            })
            .collect();
        GeneratingSystem {
            space: self.space.clone(),
            generators,
        }
    }

    /// Adds missing inverses without validation, keeping cores as domains.
    pub(crate) fn closed_under_inverse(&self) -> GeneratingSystem {
        let mut generators = self.generators.clone();
        let mut present: HashSet<PartialMap> = generators.iter().map(|g| g.map.clone()).collect();
        for g in &self.generators {
            let inv = g.map.invert();
            if present.insert(inv.clone()) {
                let core = Some(inv.domain());
                generators.push(Generator {
                    name: format!("{}^-1", g.name),
                    map: inv,
                    core,
                });
            }
        }
        GeneratingSystem {
            space: self.space.clone(),
            generators,
        }
    }

    pub fn germ_relation(&self) -> GermRelation {
        GermRelation::of_system(self)
    }

    /// Whether the compacted generators still generate the same
    /// pseudogroup. The pseudogroup generated by a family is closed under
    /// inversion, so the compacted family is symmetrized before comparing.
    pub fn goodness(&self) -> Result<Goodness> {
        let compact = self.compacted()?.closed_under_inverse();
        let witness = self
            .germ_relation()
            .first_missing_from(&compact.germ_relation());
        Ok(Goodness {
            good: witness.is_none(),
            witness,
        })
    }

    /// `min d(z, y)` over non-total generators, `z ∉ D_g`, `y ∈ K_g`.
    pub fn separation_radius(&self) -> Result<Radius> {
        self.require_cores()?;
        let mut best: Option<u32> = None;
        for g in self.generators.iter().filter(|g| !g.map.is_total()) {
            let outside = g.map.domain().complement();
            for y in g.core.as_ref().expect("cores checked").iter() {
                for z in outside.iter() {
                    let r = self.space.rank(z, y);
                    best = Some(best.map_or(r, |b| b.min(r)));
                }
            }
        }
        Ok(match best {
            Some(r) => Radius::Finite(self.space.level(r).clone()),
            None => Radius::Unbounded,
        })
    }

    pub fn closure(&self, depth: Depth) -> Result<WordClosure> {
        WordClosure::build(self, depth)
    }
}

fn check_shapes(space: &FiniteMetricSpace, generators: &[Generator]) -> Result<()> {
    let n = space.len();
    if generators.is_empty() {
        return Err(Error::System("no generators".into()));
    }
    let mut names = HashSet::new();
    for g in generators {
        let err = |reason: &str| Error::Map {
            name: g.name.clone(),
            reason: reason.into(),
        };
        if g.name.is_empty() {
            return Err(err("empty name"));
        }
        if !names.insert(g.name.as_str()) {
            return Err(err("duplicate generator name"));
        }
        if g.map.domain_len() != n || g.map.codomain_len() != n {
            return Err(err("map does not live on the model space"));
        }
        if let Some(core) = &g.core {
            if core.universe() != n {
                return Err(err("core does not live on the model space"));
            }
            if !core.is_subset(&g.map.domain()) {
                return Err(err("core is not contained in the domain"));
            }
        }
    }
    Ok(())
}
