use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{formula_ball, BowenBalls};
use crate::error::{Error, Result};
use crate::pseudogroup::{compose, Depth, GeneratingSystem, Generator, PartialMap, WordClosure};
use crate::rational::Rational;
use crate::space::{FiniteMetricSpace, PointSet};

type FormulaFn = fn(&WordClosure, usize, usize, &Rational, bool) -> Result<PointSet>;
type BowenFn = fn(&GeneratingSystem, &Rational) -> BowenBalls;
type SymmetrizeFn = fn(Arc<FiniteMetricSpace>, Vec<Generator>) -> Result<GeneratingSystem>;
type CompactFn = fn(&GeneratingSystem) -> Result<GeneratingSystem>;

/// Deliberately broken variants of core operations. The suite must catch
/// each of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Ball formula without the `D_g^c` term.
    DropComplementTerm,
    /// Bowen balls with strict inequalities.
    OpenBowen,
    /// Identity added but inverses not.
    SkipSymmetrization,
    /// `D_{h∘g} = D_g ∩ D_h ∩ g^{-1}(D_h)`.
    WrongComposeDomain,
    /// Compaction keeps full domains.
    SkipCoreRestriction,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::DropComplementTerm,
        Mutation::OpenBowen,
        Mutation::SkipSymmetrization,
        Mutation::WrongComposeDomain,
        Mutation::SkipCoreRestriction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mutation::DropComplementTerm => "drop-complement-term",
            Mutation::OpenBowen => "open-bowen",
            Mutation::SkipSymmetrization => "skip-symmetrization",
            Mutation::WrongComposeDomain => "wrong-compose-domain",
            Mutation::SkipCoreRestriction => "skip-core-restriction",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown mutation `{s}`")))
    }
}

/// The operations the probes exercise, swappable for mutation testing.
#[derive(Clone, Copy)]
pub struct Kernel {
    pub(crate) mutation: Option<Mutation>,
    pub(crate) compose: fn(&PartialMap, &PartialMap) -> PartialMap,
    pub(crate) formula: FormulaFn,
    pub(crate) bowen: BowenFn,
    pub(crate) symmetrize: SymmetrizeFn,
    pub(crate) compact: CompactFn,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("mutation", &self.mutation)
            .finish()
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel {
            mutation: None,
            compose,
            formula: |c, x, n, eps, closed| formula_ball(c, x, n, eps, closed, true),
            bowen: BowenBalls::new,
            symmetrize: |space, gens| Ok(GeneratingSystem::symmetrize(space, gens)?.0),
            compact: GeneratingSystem::compacted,
        }
    }
}

impl Kernel {
    pub fn mutated(m: Mutation) -> Self {
        let mut k = Kernel {
            mutation: Some(m),
            ..Kernel::default()
        };
        match m {
            Mutation::DropComplementTerm => {
                k.formula = |c, x, n, eps, closed| formula_ball(c, x, n, eps, closed, false);
            }
            Mutation::OpenBowen => {
                k.bowen = |sys, delta| BowenBalls::with_cut(sys, sys.space().cut(delta, false));
            }
            Mutation::SkipSymmetrization => {
                k.symmetrize = |space, mut gens| {
                    let n = space.len();
                    if !gens.iter().any(|g| g.map.is_total_identity()) {
                        gens.insert(0, Generator::new("id", PartialMap::identity(n)));
                    }
                    Ok(GeneratingSystem::from_parts_unchecked(space, gens))
                };
            }
            Mutation::WrongComposeDomain => {
                k.compose = |g, h| g.then(h).restrict(&h.domain());
            }
            Mutation::SkipCoreRestriction => {
                k.compact = |sys| Ok(sys.compacted_with(|g| g.map.clone()));
            }
        }
        k
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    pub(crate) fn closure(
        &self,
        sys: &GeneratingSystem,
        depth: Depth,
        limit: usize,
    ) -> Result<WordClosure> {
        WordClosure::build_with(sys, depth, limit, self.compose)
    }
}
