use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::instance::Instance;
use super::kernel::Kernel;
use crate::equicont::{
    certify, no_expansive_certificate_good, no_expansive_certificate_group, Scope,
};
use crate::error::Result;
use crate::measure::{
    countably_expansive, is_ergodic, is_ergodic_by_subsets, is_invariant_measure, theorem_b_check,
    verdict_from_balls, Classification, ImplicationStatus,
};
use crate::morphism::{
    compare_entropy, conjugate_system, pushforward, transfer_expansive_constant, SpaceIso,
};
use crate::pseudogroup::{Depth, GeneratingSystem, Generator, PartialMap, WordClosure};
use crate::random::random_space;
use crate::rational::{format_rational, int, Rational};
use crate::space::{PointSet, Radius};

/// Word closures larger than this are skipped and counted as vacuous.
pub const PROBE_MAP_LIMIT: usize = 20_000;
/// Raw word enumeration picks the largest length with at most this many words.
pub const RAW_WORD_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "kebab-case")]
pub enum Outcome {
    /// The hypothesis never fired, or the instance is outside the scope.
    Vacuous,
    /// The hypothesis fired and the conclusion held.
    Pass,
    Violation(String),
}

impl Outcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, Outcome::Violation(_))
    }

    fn from_checks(substantive: bool, failure: Option<String>) -> Self {
        match failure {
            Some(f) => Outcome::Violation(f),
            None if substantive => Outcome::Pass,
            None => Outcome::Vacuous,
        }
    }
}

type Eval = fn(&Instance, &Kernel) -> Result<Outcome>;

#[derive(Clone, Copy)]
pub struct Statement {
    pub id: &'static str,
    pub claim: &'static str,
    eval: Eval,
}

impl std::fmt::Debug for Statement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id)
    }
}

impl Statement {
    /// Errors from capability limits or unmet preconditions count as vacuous.
    pub fn evaluate(&self, inst: &Instance, kernel: &Kernel) -> Outcome {
        (self.eval)(inst, kernel).unwrap_or(Outcome::Vacuous)
    }
}

pub const STATEMENTS: &[Statement] = &[
    Statement {
        id: "axioms",
        claim: "generated systems are symmetric, contain the identity and cover X; μ sums to 1",
        eval: axioms,
    },
    Statement {
        id: "borel",
        claim: "B_n(x, ε) = ⋂ g^{-1}(B(g x, ε)) ∪ D_g^c over g ∈ 𝒢_n^x",
        eval: borel,
    },
    Statement {
        id: "dedup",
        claim: "balls from the extensional closure equal balls from raw word enumeration",
        eval: dedup,
    },
    Statement {
        id: "bowen",
        claim: "Φ_δ(x) equals the closed ball at the stabilization length",
        eval: bowen,
    },
    Statement {
        id: "compaction",
        claim: "compacted generators are the restrictions g|K_g",
        eval: compaction,
    },
    Statement {
        id: "bal",
        claim: "Φ¹_η(x) ⊆ Φ²_η(x) for good systems",
        eval: bal,
    },
    Statement {
        id: "lemma9",
        claim: "y₀ ∈ Φ¹_{ρ/2}(x₀) ⇒ Φ¹_{ρ/2}(x₀) ⊆ Φ²_ρ(y₀)",
        eval: lemma9,
    },
    Statement {
        id: "qtp",
        claim: "(𝒢, 𝒢₂)-weakly expansive at ρ ⇒ (𝒢, 𝒢₁)-expansive at ρ/2",
        eval: qtp,
    },
    Statement {
        id: "theorem-b",
        claim: "invariant ergodic homogeneous with positive entropy ⇒ weakly expansive",
        eval: theorem_b,
    },
    Statement {
        id: "invariance",
        claim: "𝒢₁-invariant sets are 𝒢-invariant",
        eval: invariance,
    },
    Statement {
        id: "ergodic",
        claim: "orbit components decide ergodicity exactly as subset enumeration",
        eval: ergodic,
    },
    Statement {
        id: "iso",
        claim: "φ^{-1}(Φ_δ(φ x)) ⊆ Φ_η(x), so expansiveness transfers",
        eval: iso,
    },
    Statement {
        id: "top",
        claim: "separated counts transfer under conjugacy; equal for isometries",
        eval: top,
    },
    Statement {
        id: "thm5",
        claim: "total equicontinuous systems carry no weakly expansive measure",
        eval: thm5,
    },
    Statement {
        id: "equicont",
        claim: "B(x, ξ) ⊆ Φ²_ρ(x) with ξ = min(δ(ρ), λ); no weakly expansive measure",
        eval: equicont,
    },
    Statement {
        id: "cou",
        claim: "(𝒢, 𝒢₂) weakly measure-expansive ⇒ (𝒢, 𝒢₁) countably expansive",
        eval: cou,
    },
];

pub fn statement(id: &str) -> Option<&'static Statement> {
    STATEMENTS.iter().find(|s| s.id == id)
}

fn grid(inst: &Instance) -> Vec<Rational> {
    inst.sys.space().grid().to_vec()
}

fn label(inst: &Instance, x: usize) -> &str {
    inst.sys.space().label(x)
}

fn nontrivial_cores(sys: &GeneratingSystem) -> bool {
    sys.generators()
        .iter()
        .any(|g| g.core.as_ref().is_some_and(|k| k != &g.map.domain()))
}

fn axioms(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    let failure = match inst.sys.validate() {
        Err(e) => Some(e.to_string()),
        Ok(()) if inst.mu.weights().iter().sum::<Rational>() != int(1) => {
            Some("μ does not sum to 1".into())
        }
        Ok(()) => None,
    };
    Ok(Outcome::from_checks(true, failure))
}

fn word_depth(generators: usize) -> usize {
    let mut n = 1;
    while n < 4 && generators.pow(n as u32 + 1) <= RAW_WORD_LIMIT {
        n += 1;
    }
    n
}

fn borel(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let n_max = 1 + (inst.seed % 6) as usize;
    let closure = kernel.closure(&inst.sys, Depth::Max(n_max), PROBE_MAP_LIMIT)?;
    let n_max = n_max.min(closure.depth());
    for n in 1..=n_max {
        for eps in grid(inst) {
            for x in 0..inst.points() {
                for closed in [false, true] {
                    let direct = crate::dynamics::dyn_ball(&closure, x, n, &eps, closed)?.members;
                    let formula = (kernel.formula)(&closure, x, n, &eps, closed)?;
                    if direct != formula {
                        return Ok(Outcome::Violation(format!(
                            "x = {}, n = {n}, ε = {}, closed = {closed}: {:?} vs {:?}",
                            label(inst, x),
                            format_rational(&eps),
                            direct.to_vec(),
                            formula.to_vec()
                        )));
                    }
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Balls `B_n[x, ε]` for every `x`, from explicit words of length `1..=n`
/// applied pointwise.
pub(crate) fn raw_balls(sys: &GeneratingSystem, n: usize, eps: &Rational) -> Vec<PointSet> {
    let space = sys.space();
    let size = space.len();
    let cut = space.cut(eps, true);
    let gens: Vec<&PartialMap> = sys.generators().iter().map(|g| &g.map).collect();
    // Each word's graph as a vector of optional images.
    let mut level: Vec<Vec<Option<usize>>> = vec![(0..size).map(Some).collect()];
    let mut worst = vec![vec![0u32; size]; size];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * gens.len());
        for w in &level {
            for g in &gens {
                let img: Vec<Option<usize>> = w.iter().map(|y| y.and_then(|y| g.get(y))).collect();
                for x in 0..size {
                    let Some(gx) = img[x] else { continue };
                    for y in 0..size {
                        if let Some(gy) = img[y] {
                            worst[x][y] = worst[x][y].max(space.rank(gx, gy));
                        }
                    }
                }
                next.push(img);
            }
        }
        level = next;
    }
    worst
        .iter()
        .map(|row| PointSet::from_indices(size, (0..size).filter(|&y| cut.admits(row[y]))))
        .collect()
}

fn dedup(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let n = word_depth(inst.sys.generators().len());
    let closure = kernel.closure(&inst.sys, Depth::Max(n), PROBE_MAP_LIMIT)?;
    let n = n.min(closure.depth());
    for eps in grid(inst) {
        let raw = raw_balls(&inst.sys, n, &eps);
        for (x, expected) in raw.iter().enumerate() {
            let got = crate::dynamics::dyn_ball(&closure, x, n, &eps, true)?.members;
            if &got != expected {
                return Ok(Outcome::Violation(format!(
                    "x = {}, n = {n}, ε = {}: closure {:?} vs words {:?}",
                    label(inst, x),
                    format_rational(&eps),
                    got.to_vec(),
                    expected.to_vec()
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn bowen(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let closure = kernel.closure(&inst.sys, Depth::Auto, PROBE_MAP_LIMIT)?;
    let Some(n_star) = closure.stabilization() else {
        return Ok(Outcome::Vacuous);
    };
    for delta in grid(inst) {
        let balls = (kernel.bowen)(&inst.sys, &delta);
        for x in 0..inst.points() {
            let expected = crate::dynamics::dyn_ball(&closure, x, n_star, &delta, true)?.members;
            if balls.ball(x) != expected {
                return Ok(Outcome::Violation(format!(
                    "x = {}, δ = {}: {:?} vs {:?}",
                    label(inst, x),
                    format_rational(&delta),
                    balls.ball(x).to_vec(),
                    expected.to_vec()
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn compaction(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let compact = (kernel.compact)(&inst.sys)?;
    for (g, c) in inst.sys.generators().iter().zip(compact.generators()) {
        let expected = match &g.core {
            _ if g.map.is_total_identity() => g.map.clone(),
            Some(k) => g.map.restrict(k),
            None => return Ok(Outcome::Vacuous),
        };
        if c.map != expected {
            return Ok(Outcome::Violation(format!(
                "`{}` compacts to a map on {:?}, core is {:?}",
                g.name,
                c.map.domain().to_vec(),
                expected.domain().to_vec()
            )));
        }
    }
    Ok(Outcome::from_checks(nontrivial_cores(&inst.sys), None))
}

fn good_pair(inst: &Instance, kernel: &Kernel) -> Result<Option<GeneratingSystem>> {
    if !inst.sys.goodness()?.good {
        return Ok(None);
    }
    Ok(Some((kernel.compact)(&inst.sys)?))
}

fn bal(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let Some(compact) = good_pair(inst, kernel)? else {
        return Ok(Outcome::Vacuous);
    };
    let mut strict = false;
    for eta in grid(inst) {
        let (b1, b2) = (
            (kernel.bowen)(&inst.sys, &eta),
            (kernel.bowen)(&compact, &eta),
        );
        for x in 0..inst.points() {
            let (p1, p2) = (b1.ball(x), b2.ball(x));
            if !p1.is_subset(&p2) {
                return Ok(Outcome::Violation(format!(
                    "x = {}, η = {}: Φ¹ = {:?}, Φ² = {:?}",
                    label(inst, x),
                    format_rational(&eta),
                    p1.to_vec(),
                    p2.to_vec()
                )));
            }
            strict |= p1 != p2;
        }
    }
    Ok(Outcome::from_checks(
        strict || nontrivial_cores(&inst.sys),
        None,
    ))
}

fn lemma9(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let Some(compact) = good_pair(inst, kernel)? else {
        return Ok(Outcome::Vacuous);
    };
    let Radius::Finite(rho) = inst.sys.separation_radius()? else {
        return Ok(Outcome::Vacuous);
    };
    let half = &rho / int(2);
    let (b1, b2) = (
        (kernel.bowen)(&inst.sys, &half),
        (kernel.bowen)(&compact, &rho),
    );
    let mut distinct = false;
    for x0 in 0..inst.points() {
        let ball = b1.ball(x0);
        for y0 in ball.iter() {
            distinct |= y0 != x0;
            if !ball.is_subset(&b2.ball(y0)) {
                return Ok(Outcome::Violation(format!(
                    "ρ = {}, x₀ = {}, y₀ = {}: Φ¹ = {:?} ⊄ Φ² = {:?}",
                    format_rational(&rho),
                    label(inst, x0),
                    label(inst, y0),
                    ball.to_vec(),
                    b2.ball(y0).to_vec()
                )));
            }
        }
    }
    Ok(Outcome::from_checks(
        distinct || nontrivial_cores(&inst.sys),
        None,
    ))
}

fn qtp(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let Some(compact) = good_pair(inst, kernel)? else {
        return Ok(Outcome::Vacuous);
    };
    let Radius::Finite(rho) = inst.sys.separation_radius()? else {
        return Ok(Outcome::Vacuous);
    };
    let half = &rho / int(2);
    let hyp = verdict_from_balls(&inst.mu, &(kernel.bowen)(&compact, &rho), &rho)
        .classification
        .is_weakly_expansive();
    let concl = verdict_from_balls(&inst.mu, &(kernel.bowen)(&inst.sys, &half), &half)
        .classification
        == Classification::Expansive;
    Ok(match ImplicationStatus::from_parts(hyp, concl) {
        ImplicationStatus::Vacuous => Outcome::Vacuous,
        ImplicationStatus::Holds => Outcome::Pass,
        ImplicationStatus::ImplicationViolated => Outcome::Violation(format!(
            "weakly expansive at ρ = {} but not expansive at ρ/2",
            format_rational(&rho)
        )),
    })
}

fn theorem_b(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    let g = grid(inst);
    let report = theorem_b_check(&inst.mu, &inst.sys, &g, 3)?;
    if report.lemma_violated {
        return Ok(Outcome::Violation(
            "homogeneous measure with non-constant local entropy".into(),
        ));
    }
    Ok(match report.status {
        ImplicationStatus::Vacuous => Outcome::Vacuous,
        ImplicationStatus::Holds => Outcome::Pass,
        ImplicationStatus::ImplicationViolated => {
            Outcome::Violation("hypotheses hold, no δ is weakly expansive".into())
        }
    })
}

/// A map moving part of `set` outside it.
fn escaping_map(set: &PointSet, maps: impl IntoIterator<Item = PartialMap>) -> Option<PartialMap> {
    maps.into_iter().find(|g| !g.image_of(set).is_subset(set))
}

fn invariance(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let closure = kernel.closure(&inst.sys, Depth::Auto, PROBE_MAP_LIMIT)?;
    let n = inst.points();
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
    let mut candidates: Vec<PointSet> = inst.sys.germ_relation().components();
    let mut masks: Vec<u32> = (0..1u32 << n.min(10)).collect();
    masks.shuffle(&mut rng);
    candidates.extend(
        masks
            .into_iter()
            .take(256)
            .map(|m| PointSet::from_indices(n, (0..n).filter(|&x| m >> x & 1 == 1))),
    );
    let mut substantive = false;
    for set in candidates {
        let gens = inst.sys.generators().iter().map(|g| g.map.clone());
        if escaping_map(&set, gens).is_some() {
            continue;
        }
        substantive |= !set.is_empty() && !set.is_full();
        if let Some(g) = escaping_map(&set, closure.maps().cloned()) {
            return Ok(Outcome::Violation(format!(
                "A = {:?} is invariant under the generators but not under {:?}",
                set.to_vec(),
                g
            )));
        }
    }
    Ok(Outcome::from_checks(substantive, None))
}

fn ergodic(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    if !is_invariant_measure(&inst.mu, &inst.sys)?.invariant {
        return Ok(Outcome::Vacuous);
    }
    let fast = is_ergodic(&inst.mu, &inst.sys)?;
    let slow = is_ergodic_by_subsets(&inst.mu, &inst.sys)?;
    let failure = (fast.ergodic != slow.ergodic).then(|| {
        format!(
            "components say {}, subsets say {}",
            fast.ergodic, slow.ergodic
        )
    });
    Ok(Outcome::from_checks(true, failure))
}

/// An isomorphism onto a random space: a relabeling isometry on even seeds,
/// a random metric with a random bijection on odd ones.
pub(crate) fn random_iso(inst: &Instance) -> Result<SpaceIso> {
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = inst.points();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let source = inst.sys.space_arc().clone();
    if inst.seed.is_multiple_of(2) {
        SpaceIso::relabeling(source, &perm)
    } else {
        SpaceIso::new(source, Arc::new(random_space(&mut rng, n)), perm)
    }
}

fn iso(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let phi = random_iso(inst)?;
    let conj = conjugate_system(&inst.sys, &phi)?;
    let pushed = pushforward(&inst.mu, &phi);
    for eta in grid(inst) {
        let delta = transfer_expansive_constant(&eta, &phi)?;
        let (bx, by) = (
            (kernel.bowen)(&inst.sys, &eta),
            (kernel.bowen)(&conj, &delta),
        );
        for x in 0..inst.points() {
            let pulled = phi.inverse().image(&by.ball(phi.apply(x)));
            if !pulled.is_subset(&bx.ball(x)) {
                return Ok(Outcome::Violation(format!(
                    "x = {}, η = {}, δ = {}: φ⁻¹Φ_δ(φx) = {:?} ⊄ Φ_η(x) = {:?}",
                    label(inst, x),
                    format_rational(&eta),
                    format_rational(&delta),
                    pulled.to_vec(),
                    bx.ball(x).to_vec()
                )));
            }
        }
        let before = verdict_from_balls(&inst.mu, &bx, &eta).classification;
        let after = verdict_from_balls(&pushed, &by, &delta).classification;
        if before == Classification::Expansive && after != Classification::Expansive {
            return Ok(Outcome::Violation(format!(
                "expansive at η = {} does not transfer",
                format_rational(&eta)
            )));
        }
    }
    Ok(Outcome::Pass)
}

fn top(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    let phi = random_iso(inst)?;
    let report = compare_entropy(&inst.sys, &phi, Some(&inst.mu), 2)?;
    Ok(Outcome::from_checks(true, report.failures.first().cloned()))
}

/// Extends each generator to a permutation by matching the points outside
/// its domain with the points outside its range in increasing order.
pub(crate) fn totalized(sys: &GeneratingSystem) -> Result<GeneratingSystem> {
    let n = sys.space().len();
    let generators = sys
        .generators()
        .iter()
        .filter(|g| !g.name.ends_with("^-1"))
        .map(|g| {
            let free = g.map.domain().complement();
            let open = g.map.range().complement();
            let pairs = g.map.pairs().chain(free.iter().zip(open.iter()));
            Generator::new(
                g.name.clone(),
                PartialMap::from_pairs(n, n, pairs).expect("bijection"),
            )
        })
        .collect();
    Ok(GeneratingSystem::symmetrize(sys.space_arc().clone(), generators)?.0)
}

fn thm5(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    let total = totalized(&inst.sys)?;
    for rho in grid(inst) {
        let cert = no_expansive_certificate_group(&total, &rho)?;
        if !cert.no_weakly_expansive {
            let row = cert.rows.iter().find(|r| !r.holds).expect("a failing row");
            return Ok(Outcome::Violation(format!(
                "ρ = {}, x = {}: B(x, δ) = {:?} ⊄ Φ_ρ(x) = {:?}",
                format_rational(&rho),
                label(inst, row.x),
                row.ball.to_vec(),
                row.bowen.to_vec()
            )));
        }
        let v = verdict_from_balls(
            &inst.mu,
            &crate::dynamics::BowenBalls::new(&total, &rho),
            &rho,
        );
        if v.classification != Classification::Neither {
            return Ok(Outcome::Violation(format!(
                "a weakly expansive measure at ρ = {}",
                format_rational(&rho)
            )));
        }
    }
    Ok(Outcome::Pass)
}

/// Recomputes `d(x, y) < δ(ε) ⇒ d(g x, g y) < ε` over a stabilized closure.
fn modulus_holds(closure: &WordClosure, eps: &Rational, delta: &Radius) -> bool {
    let space = closure.space();
    closure.maps().all(|g| {
        let pairs: Vec<_> = g.pairs().collect();
        pairs.iter().all(|&(x, gx)| {
            pairs.iter().all(|&(y, gy)| {
                let close = match delta {
                    Radius::Unbounded => true,
                    Radius::Finite(d) => space.dist(x, y) < d,
                };
                !close || space.dist(gx, gy) < eps
            })
        })
    })
}

fn equicont(inst: &Instance, kernel: &Kernel) -> Result<Outcome> {
    let closure = kernel.closure(&inst.sys, Depth::Auto, PROBE_MAP_LIMIT)?;
    if closure.stabilization().is_none() {
        return Ok(Outcome::Vacuous);
    }
    let cert = certify(&inst.sys, Scope::Closure)?;
    for entry in &cert.entries {
        if !modulus_holds(&closure, &entry.eps, &entry.delta) {
            return Ok(Outcome::Violation(format!(
                "δ({}) is not a modulus",
                format_rational(&entry.eps)
            )));
        }
    }
    let good = no_expansive_certificate_good(&inst.sys)?;
    if let Some(row) = good.rows.iter().find(|r| !r.failures.is_empty()) {
        return Ok(Outcome::Violation(format!(
            "ρ = {}: B(x, ξ) ⊄ Φ²_ρ(x) at {:?}",
            format_rational(&row.rho),
            row.failures
        )));
    }
    let compact = (kernel.compact)(&inst.sys)?;
    for rho in grid(inst) {
        let v = verdict_from_balls(&inst.mu, &(kernel.bowen)(&compact, &rho), &rho);
        if v.classification.is_weakly_expansive() {
            return Ok(Outcome::Violation(format!(
                "weakly expansive for 𝒢₂ at ρ = {}",
                format_rational(&rho)
            )));
        }
    }
    Ok(Outcome::Pass)
}

/// Every measure on a finite space is atomic, so the hypothesis quantifies
/// over an empty family; the conclusion is checked anyway.
fn cou(inst: &Instance, _: &Kernel) -> Result<Outcome> {
    let failure = grid(inst)
        .iter()
        .find(|d| !countably_expansive(&inst.sys, d))
        .map(|d| format!("not countably expansive at {}", format_rational(d)));
    Ok(Outcome::from_checks(false, failure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudogroup::tests::{line_system, rotation_system};

    fn instance(sys: GeneratingSystem) -> Instance {
        let n = sys.space().len();
        Instance {
            seed: 1,
            sys,
            mu: crate::measure::FiniteMeasure::uniform(n),
        }
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = STATEMENTS.iter().map(|s| s.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), STATEMENTS.len());
        assert!(statement("bal").is_some());
    }

    #[test]
    fn line_system_passes_everything() {
        let inst = instance(line_system(Some(&[0]), None));
        for s in STATEMENTS {
            assert!(
                !s.evaluate(&inst, &Kernel::default()).is_violation(),
                "{}",
                s.id
            );
        }
    }

    #[test]
    fn raw_balls_match_rotation() {
        let sys = rotation_system(6);
        // Rotations are isometries: dynamical balls are metric balls.
        for (x, b) in raw_balls(&sys, 3, &int(1)).iter().enumerate() {
            assert_eq!(b, &sys.space().metric_ball(x, &int(1), true));
        }
    }

    #[test]
    fn totalized_is_a_group() {
        let sys = line_system(None, None);
        let total = totalized(&sys).unwrap();
        assert!(total.generators().iter().all(|g| g.map.is_total()));
        for (x, y) in sys.germ_relation().pairs() {
            assert!(total.germ_relation().contains(x, y));
        }
    }
}
