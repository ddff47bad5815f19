//! Uniform equicontinuity certificates and the inclusions `B(x, δ) ⊆ Φ_ρ(x)`
//! that rule out weakly expansive measures.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::dynamics::BowenBalls;
use crate::error::{Error, Result};
use crate::pseudogroup::{Depth, GeneratingSystem, PartialMap, WordClosure};
use crate::rational::Rational;
use crate::space::{FiniteMetricSpace, PointSet, Radius};

/// Which family of maps a certificate covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scope {
    Generators,
    /// The stabilized word closure (a group for total generators).
    Closure,
    /// The stabilized closure of the compacted generators.
    CompactedClosure,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Generators => "generators",
            Scope::Closure => "closure",
            Scope::CompactedClosure => "compacted closure",
        }
    }
}

/// A pair realizing `δ(ε)`: `d(x, y) = δ` while `d(g x, g y) ≥ ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub word: String,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusEntry {
    #[serde(serialize_with = "crate::rational::serialize_exact")]
    pub eps: Rational,
    pub delta: Radius,
    pub binding: Option<Binding>,
}

impl ModulusEntry {
    /// `δ(ε) < ε`: some map stretches a pair at distance `δ` to at least `ε`.
    pub fn is_stretched(&self) -> bool {
        matches!(&self.delta, Radius::Finite(d) if d < &self.eps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquicontinuityCertificate {
    pub scope: Scope,
    pub entries: Vec<ModulusEntry>,
    /// The implication re-verified over every map and pair.
    pub audited: bool,
}

impl EquicontinuityCertificate {
    pub fn delta(&self, eps: &Rational) -> Option<&Radius> {
        self.entries
            .iter()
            .find(|e| &e.eps == eps)
            .map(|e| &e.delta)
    }

    /// `δ(ε) ≥ ε` on the whole grid.
    pub fn is_isometric(&self) -> bool {
        self.entries.iter().all(|e| !e.is_stretched())
    }

    /// The first grid scale at which some map stretches distances.
    pub fn counterexample(&self) -> Option<&ModulusEntry> {
        self.entries.iter().find(|e| e.is_stretched())
    }
}

struct Family<'a> {
    space: &'a FiniteMetricSpace,
    maps: Vec<&'a PartialMap>,
    words: Vec<String>,
}

impl Family<'_> {
    /// `min{d(x, y) : g, x, y ∈ D_g, d(g x, g y) ≥ ε}` with a binding pair.
    fn modulus(&self, eps: &Rational) -> (Radius, Option<Binding>) {
        let far = self.space.cut(eps, false);
        let mut best: Option<(u32, usize, usize, usize)> = None;
        for (i, g) in self.maps.iter().enumerate() {
            let pairs: Vec<(usize, usize)> = g.pairs().collect();
            for &(x, gx) in &pairs {
                for &(y, gy) in &pairs {
                    if x != y && !far.admits(self.space.rank(gx, gy)) {
                        let r = self.space.rank(x, y);
                        if best.is_none_or(|b| r < b.0) {
                            best = Some((r, i, x, y));
                        }
                    }
                }
            }
        }
        match best {
            None => (Radius::Unbounded, None),
            Some((r, i, x, y)) => (
                Radius::Finite(self.space.level(r).clone()),
                Some(Binding {
                    word: self.words[i].clone(),
                    x,
                    y,
                }),
            ),
        }
    }

    fn audit(&self, entries: &[ModulusEntry]) -> bool {
        entries.iter().all(|e| {
            self.maps.iter().all(|g| {
                g.pairs().all(|(x, gx)| {
                    g.pairs().all(|(y, gy)| {
                        let near = match &e.delta {
                            Radius::Unbounded => true,
                            Radius::Finite(d) => self.space.dist(x, y) < d,
                        };
                        !near || self.space.dist(gx, gy) < &e.eps
                    })
                })
            })
        })
    }

    fn certificate(&self, scope: Scope) -> EquicontinuityCertificate {
        let entries: Vec<ModulusEntry> = self
            .space
            .grid()
            .iter()
            .map(|eps| {
                let (delta, binding) = self.modulus(eps);
                ModulusEntry {
                    eps: eps.clone(),
                    delta,
                    binding,
                }
            })
            .collect();
        let audited = self.audit(&entries);
        EquicontinuityCertificate {
            scope,
            entries,
            audited,
        }
    }
}

fn closure_family(closure: &WordClosure) -> Result<Family<'_>> {
    if closure.stabilization().is_none() {
        return Err(Error::Precondition(
            "equicontinuity needs a stabilized closure; rebuild with automatic depth".into(),
        ));
    }
    Ok(Family {
        space: closure.space(),
        maps: closure.maps().collect(),
        words: (0..closure.len()).map(|i| closure.word_string(i)).collect(),
    })
}

/// Per grid `ε`, the largest `δ` with `d(x, y) < δ ⇒ d(g x, g y) < ε` over
/// every map of a stabilized closure.
pub fn equicontinuity_modulus(
    closure: &WordClosure,
    scope: Scope,
) -> Result<EquicontinuityCertificate> {
    Ok(closure_family(closure)?.certificate(scope))
}

/// Certifies the family named by `scope`.
pub fn certify(sys: &GeneratingSystem, scope: Scope) -> Result<EquicontinuityCertificate> {
    match scope {
        Scope::Generators => {
            let family = Family {
                space: sys.space(),
                maps: sys.generators().iter().map(|g| &g.map).collect(),
                words: sys.names(),
            };
            Ok(family.certificate(scope))
        }
        Scope::Closure => equicontinuity_modulus(&WordClosure::build(sys, Depth::Auto)?, scope),
        Scope::CompactedClosure => {
            equicontinuity_modulus(&WordClosure::build(&sys.compacted()?, Depth::Auto)?, scope)
        }
    }
}

/// `δ(ρ)` over a stabilized closure at an arbitrary scale.
pub fn modulus_at(closure: &WordClosure, rho: &Rational) -> Result<Radius> {
    Ok(closure_family(closure)?.modulus(rho).0)
}

fn open_ball(space: &FiniteMetricSpace, x: usize, r: &Radius) -> PointSet {
    match r {
        Radius::Unbounded => space.full_set(),
        Radius::Finite(r) => space.metric_ball(x, r, false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionRow {
    pub x: usize,
    pub ball: PointSet,
    pub bowen: PointSet,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCertificate {
    pub rho: Rational,
    pub delta: Radius,
    pub rows: Vec<InclusionRow>,
    /// Every `B(x, δ) ⊆ Φ_ρ(x)`: each atom keeps a Bowen ball of positive
    /// measure, so no measure is weakly expansive at `ρ`.
    pub no_weakly_expansive: bool,
}

/// The inclusions `B(x, δ(ρ)) ⊆ Φ_ρ(x)` for a system of total maps.
pub fn no_expansive_certificate_group(
    sys: &GeneratingSystem,
    rho: &Rational,
) -> Result<GroupCertificate> {
    if let Some(g) = sys.generators().iter().find(|g| !g.map.is_total()) {
        return Err(Error::Capability(format!(
            "generator `{}` is not total; use the compacted certificate for partial maps",
            g.name
        )));
    }
    let closure = WordClosure::build(sys, Depth::Auto)?;
    let delta = modulus_at(&closure, rho)?;
    let balls = BowenBalls::new(sys, rho);
    let space = sys.space();
    let rows: Vec<InclusionRow> = (0..space.len())
        .map(|x| {
            let ball = open_ball(space, x, &delta);
            let bowen = balls.ball(x);
            InclusionRow {
                x,
                holds: ball.is_subset(&bowen),
                ball,
                bowen,
            }
        })
        .collect();
    let no_weakly_expansive = rows.iter().all(|r| r.holds);
    Ok(GroupCertificate {
        rho: rho.clone(),
        delta,
        rows,
        no_weakly_expansive,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Largest grid `λ` (or unbounded) such that close pairs share an extension.
    Radius(Radius),
    /// A germ of a compacted word that no closure map realizes.
    Counterexample { word: String, x: usize },
}

/// The largest `λ` such that every compacted word map `g` and `x, y ∈ D_g`
/// with `d(x, y) < λ` admit one `g′` in `family` with `g′ = g` at `x` and `y`.
pub fn local_agreement_radius(sys: &GeneratingSystem, family: &WordClosure) -> Result<Agreement> {
    let compacted = WordClosure::build(&sys.compacted()?, Depth::Auto)?;
    let n = sys.space().len();
    let key = |x: usize, gx: usize, y: usize, gy: usize| ((x * n + gx) * n + y) * n + gy;
    let mut realized = FixedBitSet::with_capacity(n * n * n * n);
    for g in family.maps() {
        let pairs: Vec<(usize, usize)> = g.pairs().collect();
        for &(x, gx) in &pairs {
            for &(y, gy) in &pairs {
                realized.insert(key(x, gx, y, gy));
            }
        }
    }
    let space = sys.space();
    let mut best: Option<u32> = None;
    for (i, g) in compacted.maps().enumerate() {
        let pairs: Vec<(usize, usize)> = g.pairs().collect();
        for &(x, gx) in &pairs {
            if !realized.contains(key(x, gx, x, gx)) {
                return Ok(Agreement::Counterexample {
                    word: compacted.word_string(i),
                    x,
                });
            }
            for &(y, gy) in &pairs {
                if !realized.contains(key(x, gx, y, gy)) {
                    let r = space.rank(x, y);
                    best = Some(best.map_or(r, |b| b.min(r)));
                }
            }
        }
    }
    Ok(Agreement::Radius(match best {
        None => Radius::Unbounded,
        Some(r) => Radius::Finite(space.level(r).clone()),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodRow {
    pub rho: Rational,
    pub delta: Radius,
    pub xi: Radius,
    /// Points `x` with `B(x, ξ) ⊄ Φ²_ρ(x)`.
    pub failures: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCertificate {
    pub good: bool,
    pub certificate: EquicontinuityCertificate,
    pub lambda: Radius,
    pub rows: Vec<GoodRow>,
    pub all_hold: bool,
}

/// For a system with cores: `ξ = min(δ(ρ), λ)` and `B(x, ξ) ⊆ Φ²_ρ(x)` at
/// every grid `ρ`, where `Φ²` uses the compacted generators.
pub fn no_expansive_certificate_good(sys: &GeneratingSystem) -> Result<GoodCertificate> {
    let good = sys.goodness()?.good;
    let closure = WordClosure::build(sys, Depth::Auto)?;
    let certificate = equicontinuity_modulus(&closure, Scope::Closure)?;
    let lambda = match local_agreement_radius(sys, &closure)? {
        Agreement::Radius(r) => r,
        Agreement::Counterexample { word, x } => {
            return Err(Error::Precondition(format!(
                "no local agreement radius: the germ of `{word}` at `{}` has no extension",
                sys.space().label(x)
            )))
        }
    };
    let compacted = sys.compacted()?;
    let space = sys.space();
    let rows: Vec<GoodRow> = space
        .grid()
        .iter()
        .map(|rho| {
            let delta = certificate.delta(rho).cloned().expect("grid entry");
            let xi = delta.clone().min(lambda.clone());
            let balls = BowenBalls::new(&compacted, rho);
            let failures = (0..space.len())
                .filter(|&x| !open_ball(space, x, &xi).is_subset(&balls.ball(x)))
                .collect();
            GoodRow {
                rho: rho.clone(),
                delta,
                xi,
                failures,
            }
        })
        .collect();
    let all_hold = rows.iter().all(|r| r.failures.is_empty());
    Ok(GoodCertificate {
        good,
        certificate,
        lambda,
        rows,
        all_hold,
    })
}
