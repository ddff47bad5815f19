//! Exact probability measures on finite spaces: invariance, ergodicity,
//! local entropy, homogeneity and expansiveness verdicts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{rank_profile, BowenBalls};
use crate::error::{Error, Result};
use crate::pseudogroup::{GeneratingSystem, WordClosure};
use crate::rational::{format_rational, int, Rational};
use crate::space::{FiniteMetricSpace, PointSet, Radius};

/// A probability measure given by exact point weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMeasure {
    weights: Vec<Rational>,
}

impl FiniteMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| *w < &Rational::zero())
        {
            return Err(Error::Measure(format!(
                "negative weight {} at point {i}",
                format_rational(w)
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Measure(format!(
                "weights must be normalized to sum 1, they sum to {}",
                format_rational(&total)
            )));
        }
        Ok(FiniteMeasure { weights })
    }

    /// Weights keyed by point label; unlisted points get weight 0.
    pub fn from_labels(
        space: &FiniteMetricSpace,
        weights: &BTreeMap<String, Rational>,
    ) -> Result<Self> {
        let mut w = vec![Rational::zero(); space.len()];
        for (label, value) in weights {
            w[space.index_of(label)?] = value.clone();
        }
        Self::new(w)
    }

    pub fn uniform(n: usize) -> Self {
        FiniteMeasure {
            weights: vec![Rational::new(1.into(), (n as i64).into()); n],
        }
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[x] = Rational::one();
        FiniteMeasure { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn of(&self, set: &PointSet) -> Rational {
        set.iter().map(|x| &self.weights[x]).sum()
    }

    /// Points of positive weight.
    pub fn atoms(&self) -> PointSet {
        PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| !self.weights[x].is_zero()),
        )
    }

    /// The measure `x ↦ μ(perm^{-1}(x))`, i.e. weight of `perm[x]` is `μ(x)`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut weights = vec![Rational::zero(); self.len()];
        for (x, &y) in perm.iter().enumerate() {
            weights[y] = self.weights[x].clone();
        }
        FiniteMeasure { weights }
    }

    fn check_space(&self, space: &FiniteMetricSpace) -> Result<()> {
        if self.len() != space.len() {
            return Err(Error::Measure(format!(
                "measure has {} weights for a space of {} points",
                self.len(),
                space.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Generator name and a point `x` with `μ(x) ≠ μ(g x)`.
    pub witness: Option<(String, usize)>,
}

/// `μ(g(A)) = μ(A)` for all generators and all `A ⊆ D_g`, which on a
/// finite space is the pointwise condition `μ(x) = μ(g x)`.
pub fn is_invariant_measure(
    mu: &FiniteMeasure,
    sys: &GeneratingSystem,
) -> Result<InvarianceReport> {
    mu.check_space(sys.space())?;
    for g in sys.generators() {
        if let Some((x, _)) = g.map.pairs().find(|&(x, y)| mu.weight(x) != mu.weight(y)) {
            return Ok(InvarianceReport {
                invariant: false,
                witness: Some((g.name.clone(), x)),
            });
        }
    }
    Ok(InvarianceReport {
        invariant: true,
        witness: None,
    })
}

/// The minimal invariant sets: orbits of the generated pseudogroup. Every
/// invariant set is a union of these.
pub fn invariant_sets(sys: &GeneratingSystem) -> Vec<PointSet> {
    sys.germ_relation().components()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    /// An invariant set of measure strictly between 0 and 1.
    pub witness: Option<PointSet>,
}

fn require_invariant(mu: &FiniteMeasure, sys: &GeneratingSystem) -> Result<()> {
    let inv = is_invariant_measure(mu, sys)?;
    if let Some((g, x)) = inv.witness {
        let y = sys
            .generator(&g)
            .and_then(|g| g.map.get(x))
            .expect("witness is in the domain");
        return Err(Error::Precondition(format!(
            "measure is not invariant: μ({}) = {} but μ({}({})) = {}",
            sys.space().label(x),
            format_rational(mu.weight(x)),
            g,
            sys.space().label(x),
            format_rational(mu.weight(y)),
        )));
    }
    Ok(())
}

/// Ergodic iff no orbit has measure strictly between 0 and 1.
pub fn is_ergodic(mu: &FiniteMeasure, sys: &GeneratingSystem) -> Result<ErgodicityReport> {
    require_invariant(mu, sys)?;
    let witness = invariant_sets(sys).into_iter().find(|c| {
        let m = mu.of(c);
        !m.is_zero() && !m.is_one()
    });
    Ok(ErgodicityReport {
        ergodic: witness.is_none(),
        witness,
    })
}

/// Largest space accepted by [`is_ergodic_by_subsets`].
pub const SUBSET_LIMIT: usize = 20;

/// Ergodicity by enumerating every subset `A` with `g(A ∩ D_g) ⊆ A`.
pub fn is_ergodic_by_subsets(
    mu: &FiniteMeasure,
    sys: &GeneratingSystem,
) -> Result<ErgodicityReport> {
    require_invariant(mu, sys)?;
    let n = sys.space().len();
    if n > SUBSET_LIMIT {
        return Err(Error::Capability(format!(
            "subset enumeration is limited to {SUBSET_LIMIT} points"
        )));
    }
    let images: Vec<Vec<(usize, usize)>> = sys
        .generators()
        .iter()
        .map(|g| g.map.pairs().collect())
        .collect();
    for mask in 0u32..(1u32 << n) {
        let inside = |x: usize| mask & (1 << x) != 0;
        let invariant = images
            .iter()
            .all(|pairs| pairs.iter().all(|&(x, y)| !inside(x) || inside(y)));
        if !invariant {
            continue;
        }
        let m: Rational = (0..n).filter(|&x| inside(x)).map(|x| mu.weight(x)).sum();
        if !m.is_zero() && !m.is_one() {
            let set = PointSet::from_indices(n, (0..n).filter(|&x| inside(x)));
            return Ok(ErgodicityReport {
                ergodic: false,
                witness: Some(set),
            });
        }
    }
    Ok(ErgodicityReport {
        ergodic: true,
        witness: None,
    })
}

/// `-(1/n) log m`, infinite for `m = 0`.
pub fn neg_log_rate(m: &Rational, n: usize) -> f64 {
    if m.is_zero() {
        f64::INFINITY
    } else {
        -crate::rational::ln_abs(m) / n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCell {
    pub eps: Rational,
    pub n: usize,
    pub measure: Rational,
    /// `-(1/n) log μ(B_n(x, ε))`, `+∞` when the ball is null.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalEntropyTable {
    pub x: usize,
    pub side: Side,
    pub cells: Vec<EntropyCell>,
    /// Per grid ε: `lim_n -(1/n) log μ(B_n(x, ε))`. Balls stop shrinking
    /// once the word closure stabilizes, so this is 0 when the limit ball
    /// has positive measure and `+∞` otherwise; liminf and limsup agree.
    pub limits: Vec<(Rational, f64)>,
    /// The limit at the smallest grid ε.
    pub limit: f64,
}

/// The `(ε, n)` table of `-(1/n) log μ(B_n(x, ε))` and its limits.
pub fn local_entropy(
    mu: &FiniteMeasure,
    closure: &WordClosure,
    x: usize,
    side: Side,
    eps_grid: &[Rational],
    n_max: usize,
) -> Result<LocalEntropyTable> {
    let space = closure.space();
    mu.check_space(space)?;
    space.check_point(x)?;
    if eps_grid.is_empty() || n_max == 0 {
        return Err(Error::input(
            "local entropy needs a nonempty ε grid and n_max ≥ 1",
        ));
    }
    let mut grid = eps_grid.to_vec();
    grid.sort();
    let profile = rank_profile(closure, x, n_max)?;
    let mut cells = Vec::new();
    let mut limits = Vec::new();
    for eps in &grid {
        let cut = space.cut(eps, false);
        for (i, worst) in profile.iter().enumerate() {
            let measure: Rational = (0..space.len())
                .filter(|&y| cut.admits(worst[y]))
                .map(|y| mu.weight(y))
                .sum();
            let value = neg_log_rate(&measure, i + 1);
            cells.push(EntropyCell {
                eps: eps.clone(),
                n: i + 1,
                measure,
                value,
            });
        }
        let balls = BowenBalls::from_parts(
            space,
            closure.generators().to_vec(),
            closure.generator_names().to_vec(),
            cut,
        );
        let limit = if mu.of(&balls.ball(x)).is_zero() {
            f64::INFINITY
        } else {
            0.0
        };
        limits.push((eps.clone(), limit));
    }
    let limit = limits[0].1;
    Ok(LocalEntropyTable {
        x,
        side,
        cells,
        limits,
        limit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub eps: Rational,
    pub delta: Rational,
    /// Smallest `c` with `μ(B_n(y, δ)) ≤ c μ(B_n(x, ε))` on every checked cell.
    pub c_exact: Rational,
    /// Smallest power of two `≥ c_exact`, if at most `2^20`.
    pub c_ladder: Option<u64>,
}

/// A cell where `μ(B_n(y, δ)) > 0 = μ(B_n(x, ε))` at the smallest δ tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityFailure {
    pub eps: Rational,
    pub delta: Rational,
    pub x: usize,
    pub y: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub homogeneous: bool,
    pub witnesses: Vec<HomogeneityWitness>,
    pub failure: Option<HomogeneityFailure>,
    /// Some accepted cell had `μ(B_n(y, δ)) = 0`, so the inequality held
    /// with a null left-hand side.
    pub degenerate: bool,
    /// Word lengths `1..=words` were checked.
    pub words: usize,
    /// The closure stabilized within the checked lengths, so every `n` is covered.
    pub exhaustive: bool,
}

pub const LADDER_MAX_EXP: u32 = 20;

fn ladder(c: &Rational) -> Option<u64> {
    (0..=LADDER_MAX_EXP)
        .map(|k| 1u64 << k)
        .find(|&v| c <= &int(v as i64))
}

/// Searches, for each grid `ε`, a `δ` (first `δ = ε`, then smaller grid
/// values) and a constant `c` with `μ(B_n(y, δ)) ≤ c μ(B_n(x, ε))` for all
/// `x, y` and all word lengths the closure provides.
pub fn is_homogeneous(
    mu: &FiniteMeasure,
    closure: &WordClosure,
    eps_grid: &[Rational],
) -> Result<HomogeneityReport> {
    let space = closure.space();
    mu.check_space(space)?;
    let n = space.len();
    let words = closure.stabilization().unwrap_or(closure.depth());
    let profiles: Vec<Vec<Vec<u32>>> = (0..n)
        .into_par_iter()
        .map(|x| rank_profile(closure, x, words))
        .collect::<Result<_>>()?;
    let ball_measures = |cut: crate::space::Cut| -> Vec<Vec<Rational>> {
        (0..words)
            .map(|k| {
                (0..n)
                    .map(|x| {
                        (0..n)
                            .filter(|&y| cut.admits(profiles[x][k][y]))
                            .map(|y| mu.weight(y))
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };
    let mut report = HomogeneityReport {
        homogeneous: true,
        witnesses: Vec::new(),
        failure: None,
        degenerate: false,
        words,
        exhaustive: closure.stabilization().is_some(),
    };
    for eps in eps_grid {
        let right = ball_measures(space.cut(eps, false));
        let mut candidates = vec![eps.clone()];
        candidates.extend(space.grid().iter().rev().filter(|d| *d < eps).cloned());
        let mut found = None;
        let mut last_failure = None;
        for delta in candidates {
            let left = ball_measures(space.cut(&delta, false));
            let mut c = Rational::zero();
            let mut degenerate = false;
            let mut failure = None;
            for k in 0..words {
                let (y, max_left) = argmax(&left[k]);
                let (x, min_right) = argmin(&right[k]);
                degenerate |= left[k].iter().any(|m| m.is_zero());
                if min_right.is_zero() {
                    if !max_left.is_zero() {
                        failure = Some(HomogeneityFailure {
                            eps: eps.clone(),
                            delta: delta.clone(),
                            x,
                            y,
                            n: k + 1,
                        });
                        break;
                    }
                } else {
                    c = c.max(max_left / min_right);
                }
            }
            match failure {
                None => {
                    report.degenerate |= degenerate;
                    found = Some(HomogeneityWitness {
                        eps: eps.clone(),
                        delta,
                        c_ladder: ladder(&c),
                        c_exact: c,
                    });
                    break;
                }
                Some(f) => last_failure = Some(f),
            }
        }
        match found {
            Some(w) => report.witnesses.push(w),
            None => {
                report.homogeneous = false;
                report.failure = last_failure;
                break;
            }
        }
    }
    Ok(report)
}

fn argmax(values: &[Rational]) -> (usize, &Rational) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v > &values[best] {
            best = i;
        }
    }
    (best, &values[best])
}

fn argmin(values: &[Rational]) -> (usize, &Rational) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v < &values[best] {
            best = i;
        }
    }
    (best, &values[best])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Expansive,
    WeaklyExpansiveOnly,
    Neither,
}

impl Classification {
    pub fn is_weakly_expansive(self) -> bool {
        self != Classification::Neither
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Expansive => "expansive",
            Classification::WeaklyExpansiveOnly => "weakly-expansive-only",
            Classification::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansivenessVerdict {
    pub delta: Rational,
    /// `μ(Φ_δ(x))` per point.
    pub ball_measures: Vec<Rational>,
    pub classification: Classification,
    /// `X_δ = {x : μ(Φ_δ(x)) = 0}`.
    pub null_centers: PointSet,
    pub atoms: PointSet,
    pub note: Option<String>,
}

pub const FINITE_CAVEAT: &str =
    "finite space: every atom x satisfies μ(Φ_δ(x)) ≥ μ({x}) > 0, so no measure is expansive or weakly expansive";

/// Classifies `μ` from exact Bowen-ball measures at `delta`.
pub fn expansiveness_verdict(
    mu: &FiniteMeasure,
    sys: &GeneratingSystem,
    delta: &Rational,
) -> Result<ExpansivenessVerdict> {
    mu.check_space(sys.space())?;
    Ok(verdict_from_balls(mu, &BowenBalls::new(sys, delta), delta))
}

pub(crate) fn verdict_from_balls(
    mu: &FiniteMeasure,
    balls: &BowenBalls,
    delta: &Rational,
) -> ExpansivenessVerdict {
    let n = mu.len();
    let ball_measures: Vec<Rational> = (0..n).map(|x| mu.of(&balls.ball(x))).collect();
    let null_centers = PointSet::from_indices(n, (0..n).filter(|&x| ball_measures[x].is_zero()));
    let classification = if null_centers.is_full() {
        Classification::Expansive
    } else if mu.of(&null_centers).is_one() {
        Classification::WeaklyExpansiveOnly
    } else {
        Classification::Neither
    };
    ExpansivenessVerdict {
        delta: delta.clone(),
        ball_measures,
        classification,
        null_centers,
        atoms: mu.atoms(),
        note: Some(FINITE_CAVEAT.to_string()),
    }
}

/// Bowen balls of a finite space are finite, hence countable.
pub fn countably_expansive(_sys: &GeneratingSystem, _delta: &Rational) -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImplicationStatus {
    /// The hypothesis does not hold (or cannot be evaluated).
    Vacuous,
    Holds,
    ImplicationViolated,
}

impl ImplicationStatus {
    pub fn from_parts(hypothesis: bool, conclusion: bool) -> Self {
        match (hypothesis, conclusion) {
            (false, _) => ImplicationStatus::Vacuous,
            (true, true) => ImplicationStatus::Holds,
            (true, false) => ImplicationStatus::ImplicationViolated,
        }
    }

    pub fn violated(self) -> bool {
        self == ImplicationStatus::ImplicationViolated
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtpReport {
    pub rho: Radius,
    /// `μ` weakly expansive for the compacted system at `ρ`.
    pub hypothesis: Option<bool>,
    /// `μ` expansive for the system at `ρ/2`.
    pub conclusion: Option<bool>,
    pub status: ImplicationStatus,
}

/// Weak expansiveness for the compacted generators at the separation
/// radius `ρ` should force expansiveness at `ρ/2`.
pub fn theorem_qtp_check(mu: &FiniteMeasure, sys: &GeneratingSystem) -> Result<QtpReport> {
    mu.check_space(sys.space())?;
    let rho = sys.separation_radius()?;
    let Radius::Finite(r) = &rho else {
        return Ok(QtpReport {
            rho,
            hypothesis: None,
            conclusion: None,
            status: ImplicationStatus::Vacuous,
        });
    };
    let compact = sys.compacted()?;
    let hypothesis = expansiveness_verdict(mu, &compact, r)?
        .classification
        .is_weakly_expansive();
    let half = r / int(2);
    let conclusion =
        expansiveness_verdict(mu, sys, &half)?.classification == Classification::Expansive;
    Ok(QtpReport {
        rho: rho.clone(),
        hypothesis: Some(hypothesis),
        conclusion: Some(conclusion),
        status: ImplicationStatus::from_parts(hypothesis, conclusion),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremBReport {
    pub invariant: bool,
    pub ergodic: bool,
    pub homogeneous: bool,
    /// Upper local entropy (at the smallest grid ε) positive at every point.
    pub positive_entropy: bool,
    pub upper_entropy: Vec<f64>,
    /// Weakly expansive at some grid δ; the first such δ.
    pub conclusion: bool,
    pub weakly_expansive_at: Option<Rational>,
    pub status: ImplicationStatus,
    /// For homogeneous μ the local entropies must not depend on the point.
    pub entropy_constant: bool,
    pub lemma_violated: bool,
}

/// Evaluates the hypotheses and conclusion of the homogeneous-measure
/// criterion, and the constancy of local entropy for homogeneous measures.
pub fn theorem_b_check(
    mu: &FiniteMeasure,
    sys: &GeneratingSystem,
    eps_grid: &[Rational],
    n_max: usize,
) -> Result<TheoremBReport> {
    let space = sys.space();
    mu.check_space(space)?;
    let invariant = is_invariant_measure(mu, sys)?.invariant;
    let ergodic = invariant && is_ergodic(mu, sys)?.ergodic;
    let closure = WordClosure::build(sys, crate::pseudogroup::Depth::Max(n_max))?;
    let homogeneous = !eps_grid.is_empty() && is_homogeneous(mu, &closure, eps_grid)?.homogeneous;
    let mut upper = Vec::with_capacity(space.len());
    let mut lower = Vec::with_capacity(space.len());
    if !eps_grid.is_empty() {
        for x in 0..space.len() {
            upper.push(local_entropy(mu, &closure, x, Side::Upper, eps_grid, 1)?.limit);
            lower.push(local_entropy(mu, &closure, x, Side::Lower, eps_grid, 1)?.limit);
        }
    }
    let positive_entropy = !upper.is_empty() && upper.iter().all(|&h| h > 0.0);
    let weakly_expansive_at = space
        .grid()
        .iter()
        .find(|d| {
            expansiveness_verdict(mu, sys, d)
                .map(|v| v.classification.is_weakly_expansive())
                .unwrap_or(false)
        })
        .cloned();
    let conclusion = weakly_expansive_at.is_some();
    let hypotheses = invariant && ergodic && homogeneous && positive_entropy;
    let entropy_constant =
        upper.windows(2).all(|w| w[0] == w[1]) && lower.windows(2).all(|w| w[0] == w[1]);
    Ok(TheoremBReport {
        invariant,
        ergodic,
        homogeneous,
        positive_entropy,
        upper_entropy: upper,
        conclusion,
        weakly_expansive_at,
        status: ImplicationStatus::from_parts(hypotheses, conclusion),
        entropy_constant,
        lemma_violated: homogeneous && !entropy_constant,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::pseudogroup::tests::line_system;
    use crate::pseudogroup::{Depth, Generator, PartialMap};
    use crate::random::{random_space, random_system};
    use crate::rational::rat;

    fn closure(sys: &GeneratingSystem) -> WordClosure {
        WordClosure::build(sys, Depth::Auto).unwrap()
    }

    fn two_cycles() -> GeneratingSystem {
        let space = Arc::new(FiniteMetricSpace::cyclic(4));
        let s = Generator::new("s", PartialMap::permutation(&[1, 0, 3, 2]).unwrap());
        GeneratingSystem::symmetrize(space, vec![s]).unwrap().0
    }

    fn random_measure<R: Rng>(rng: &mut R, n: usize, zero_prob: f64) -> FiniteMeasure {
        let mut raw: Vec<i64> = (0..n)
            .map(|_| {
                if rng.gen_bool(zero_prob) {
                    0
                } else {
                    rng.gen_range(1..5)
                }
            })
            .collect();
        if raw.iter().all(|&w| w == 0) {
            raw[0] = 1;
        }
        let total: i64 = raw.iter().sum();
        FiniteMeasure::new(raw.iter().map(|&w| rat(w, total)).collect()).unwrap()
    }

    #[test]
    fn normalization_is_enforced() {
        let err = FiniteMeasure::new(vec![rat(99, 100)]).unwrap_err();
        assert!(err.to_string().contains("normalized"));
        assert!(FiniteMeasure::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
    }

    #[test]
    fn invariance_examples() {
        let sys = line_system(None, None);
        assert!(
            is_invariant_measure(&FiniteMeasure::uniform(3), &sys)
                .unwrap()
                .invariant
        );
        let mu = FiniteMeasure::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let report = is_invariant_measure(&mu, &sys).unwrap();
        assert_eq!(report.witness, Some(("g".to_string(), 0)));
        let id = GeneratingSystem::identity_only(sys.space_arc().clone());
        assert!(is_invariant_measure(&mu, &id).unwrap().invariant);
        assert!(matches!(is_ergodic(&mu, &sys), Err(Error::Precondition(_))));
    }

    #[test]
    fn ergodicity_examples() {
        let sys = line_system(None, None);
        assert!(
            is_ergodic(&FiniteMeasure::uniform(3), &sys)
                .unwrap()
                .ergodic
        );
        let cycles = two_cycles();
        let report = is_ergodic(&FiniteMeasure::uniform(4), &cycles).unwrap();
        assert!(!report.ergodic);
        assert_eq!(report.witness, Some(PointSet::from_indices(4, [0, 1])));
        let id = GeneratingSystem::identity_only(sys.space_arc().clone());
        assert!(
            is_ergodic(&FiniteMeasure::point_mass(3, 0), &id)
                .unwrap()
                .ergodic
        );
    }

    #[test]
    fn local_entropy_examples() {
        let sys = line_system(None, None);
        let wc = closure(&sys);
        let grid = sys.space().distance_grid();
        let table =
            local_entropy(&FiniteMeasure::uniform(3), &wc, 0, Side::Upper, &grid, 4).unwrap();
        assert_eq!(table.limit, 0.0);
        assert_eq!(table.cells.len(), 8);

        let id = GeneratingSystem::identity_only(sys.space_arc().clone());
        let table = local_entropy(
            &FiniteMeasure::point_mass(3, 0),
            &closure(&id),
            0,
            Side::Lower,
            &grid,
            5,
        )
        .unwrap();
        assert!(table.cells.iter().all(|c| c.value == 0.0));
        // A null point has a null singleton ball at small scales.
        let null = local_entropy(
            &FiniteMeasure::point_mass(3, 0),
            &closure(&id),
            2,
            Side::Upper,
            &grid,
            2,
        )
        .unwrap();
        assert_eq!(null.limit, f64::INFINITY);
        assert!(null.cells[0].value.is_infinite());
    }

    #[test]
    fn homogeneity_examples() {
        let sys = line_system(None, None);
        let wc = closure(&sys);
        let grid = sys.space().distance_grid();
        let report = is_homogeneous(&FiniteMeasure::uniform(3), &wc, &grid).unwrap();
        assert!(report.homogeneous && report.exhaustive && !report.degenerate);
        for w in &report.witnesses {
            assert_eq!(w.delta, w.eps);
            assert!(w.c_exact <= int(3));
        }
        // Literal reading: a null ball on the right cannot dominate an atom.
        let point = is_homogeneous(&FiniteMeasure::point_mass(3, 0), &wc, &[int(1)]).unwrap();
        assert!(!point.homogeneous);
        let f = point.failure.unwrap();
        assert_eq!(f.y, 0);
        assert_ne!(f.x, 0);
        // Above the diameter every ball is the whole space.
        assert!(
            is_homogeneous(&FiniteMeasure::point_mass(3, 0), &wc, &[int(3)])
                .unwrap()
                .homogeneous
        );
    }

    #[test]
    fn expansiveness_examples() {
        let sys = line_system(None, None);
        let mu = FiniteMeasure::uniform(3);
        let v = expansiveness_verdict(&mu, &sys, &int(1)).unwrap();
        assert_eq!(v.classification, Classification::Neither);
        assert_eq!(v.ball_measures[0], rat(2, 3));
        let v = expansiveness_verdict(&mu, &sys, &int(2)).unwrap();
        assert!(v.ball_measures.iter().all(|m| m.is_one()));
        assert!(countably_expansive(&sys, &int(1)));
    }

    #[test]
    fn qtp_is_vacuous_for_atomic_measures() {
        let sys = line_system(Some(&[0]), Some(&[2]));
        let report = theorem_qtp_check(&FiniteMeasure::uniform(3), &sys).unwrap();
        assert_eq!(report.rho, Radius::Finite(int(2)));
        assert_eq!(report.hypothesis, Some(false));
        assert_eq!(report.status, ImplicationStatus::Vacuous);
    }

    #[test]
    fn theorem_b_on_the_line() {
        let sys = line_system(None, None);
        let report = theorem_b_check(
            &FiniteMeasure::uniform(3),
            &sys,
            &sys.space().distance_grid(),
            4,
        )
        .unwrap();
        assert!(report.invariant && report.ergodic && report.homogeneous);
        assert!(!report.positive_entropy);
        assert!(report.entropy_constant && !report.lemma_violated);
        assert_eq!(report.upper_entropy, vec![0.0; 3]);
        assert_eq!(report.status, ImplicationStatus::Vacuous);
    }

    fn random_case(seed: u64) -> (GeneratingSystem, FiniteMeasure) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=9);
        let space = Arc::new(random_space(&mut rng, n));
        let count = rng.gen_range(1..=3);
        let sys = random_system(&mut rng, space, count, 0.7, 0.6);
        let mu = random_measure(&mut rng, n, 0.3);
        (sys, mu)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ergodicity_matches_subset_enumeration(seed in any::<u64>()) {
            let (sys, _) = random_case(seed);
            // Orbit-constant measures are invariant.
            let n = sys.space().len();
            let orbits = invariant_sets(&sys);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let orbit_mass = random_measure(&mut rng, orbits.len(), 0.5);
            let mut weights = vec![Rational::zero(); n];
            for (o, set) in orbits.iter().enumerate() {
                for x in set.iter() {
                    weights[x] = orbit_mass.weight(o) / int(set.len() as i64);
                }
            }
            let mu = FiniteMeasure::new(weights).unwrap();
            let a = is_ergodic(&mu, &sys).unwrap();
            let b = is_ergodic_by_subsets(&mu, &sys).unwrap();
            prop_assert_eq!(a.ergodic, b.ergodic);
        }

        #[test]
        fn verdict_invariants(seed in any::<u64>()) {
            let (sys, mu) = random_case(seed);
            for delta in sys.space().distance_grid() {
                let v = expansiveness_verdict(&mu, &sys, &delta).unwrap();
                prop_assert_eq!(v.classification, Classification::Neither);
                prop_assert!(v.null_centers.intersection(&v.atoms).is_empty());
                for x in 0..mu.len() {
                    prop_assert!(&v.ball_measures[x] >= mu.weight(x));
                }
            }
            let wc = WordClosure::build(&sys, Depth::Max(3)).unwrap();
            let grid = sys.space().distance_grid();
            if !grid.is_empty() {
                for x in 0..mu.len() {
                    let table = local_entropy(&mu, &wc, x, Side::Upper, &grid, 3).unwrap();
                    if !mu.weight(x).is_zero() {
                        prop_assert_eq!(table.limit, 0.0);
                    }
                }
            }
        }

        #[test]
        fn verdicts_ignore_point_order(seed in any::<u64>()) {
            let (sys, mu) = random_case(seed);
            let n = sys.space().len();
            let mut perm: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let iso = crate::morphism::SpaceIso::relabeling(sys.space_arc().clone(), &perm).unwrap();
            let image = crate::morphism::conjugate_system(&sys, &iso).unwrap();
            let pushed = mu.permuted(&perm);
            prop_assert_eq!(
                is_invariant_measure(&mu, &sys).unwrap().invariant,
                is_invariant_measure(&pushed, &image).unwrap().invariant
            );
            for delta in sys.space().distance_grid() {
                let a = expansiveness_verdict(&mu, &sys, &delta).unwrap();
                let b = expansiveness_verdict(&pushed, &image, &delta).unwrap();
                for x in 0..n {
                    prop_assert_eq!(&a.ball_measures[x], &b.ball_measures[perm[x]]);
                }
            }
        }
    }
}
