//! Dynamical balls, Bowen balls, separated sets and topological entropy
//! tables on finite spaces.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::clique::{greedy_clique, max_clique, EXACT_LIMIT};
use crate::error::{Error, Result};
use crate::pseudogroup::map::UNDEFINED;
use crate::pseudogroup::{GeneratingSystem, PartialMap, WordClosure};
use crate::rational::Rational;
use crate::space::{Cut, FiniteMetricSpace, PointSet};

/// Word length of a ball: a fixed `n`, or the stabilized intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Steps {
    Words(usize),
    Stabilized,
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Words(n) => write!(f, "{n}"),
            Steps::Stabilized => f.write_str("stabilized"),
        }
    }
}

impl Serialize for Steps {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Steps::Words(n) => s.serialize_u64(*n as u64),
            Steps::Stabilized => s.serialize_str("stabilized"),
        }
    }
}

/// Why a point is outside a ball: a word `w` with `d(w x, w y)` too large.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub point: usize,
    pub word: String,
    pub distance: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallReport {
    pub center: usize,
    pub radius: Rational,
    pub closed: bool,
    pub steps: Steps,
    pub members: PointSet,
    pub trace: Vec<Exclusion>,
}

/// For each `y`, the largest distance rank `d(g x, g y)` over the first
/// `k` closure maps defined at both points.
pub(crate) fn worst_ranks(closure: &WordClosure, x: usize, k: usize) -> Vec<u32> {
    closure
        .rank_records(x)
        .iter()
        .map(|rec| {
            let p = rec.partition_point(|&(i, _)| (i as usize) < k);
            if p == 0 {
                0
            } else {
                rec[p - 1].1
            }
        })
        .collect()
}

fn ball_from_ranks(
    closure: &WordClosure,
    x: usize,
    eps: &Rational,
    closed: bool,
    steps: Steps,
    k: usize,
) -> BallReport {
    let space = closure.space();
    let cut = space.cut(eps, closed);
    let worst = worst_ranks(closure, x, k);
    let members = PointSet::from_indices(
        space.len(),
        (0..space.len()).filter(|&y| cut.admits(worst[y])),
    );
    let records = closure.rank_records(x);
    let trace = members
        .complement()
        .iter()
        .map(|y| {
            // The first map reaching the cut is a shortest excluding word.
            // Rank 0 has no record; any map defined at both excludes then.
            let i = match records[y].iter().find(|&&(_, r)| !cut.admits(r)) {
                Some(&(i, _)) => i as usize,
                None => (0..k)
                    .find(|&i| closure.map(i).defined_at(x) && closure.map(i).defined_at(y))
                    .expect("an excluding map exists"),
            };
            let g = closure.map(i);
            let (gx, gy) = (g.get(x).unwrap(), g.get(y).unwrap());
            Exclusion {
                point: y,
                word: closure.word_string(i),
                distance: space.dist(gx, gy).clone(),
            }
        })
        .collect();
    BallReport {
        center: x,
        radius: eps.clone(),
        closed,
        steps,
        members,
        trace,
    }
}

/// `B_n(x, ε)` (open) or `B_n[x, ε]` (closed): points `y` with
/// `d(g x, g y) < ε` (resp. `≤ ε`) for every `g ∈ 𝒢_n` defined at both.
pub fn dyn_ball(
    closure: &WordClosure,
    x: usize,
    n: usize,
    eps: &Rational,
    closed: bool,
) -> Result<BallReport> {
    closure.space().check_point(x)?;
    let k = closure.size_at(n)?;
    Ok(ball_from_ranks(closure, x, eps, closed, Steps::Words(n), k))
}

/// The same ball through the set identity
/// `⋂_{g ∈ 𝒢_n^x} (g^{-1}(B(g x, ε)) ∪ D_g^c)`.
pub fn dyn_ball_via_formula(
    closure: &WordClosure,
    x: usize,
    n: usize,
    eps: &Rational,
    closed: bool,
) -> Result<PointSet> {
    formula_ball(closure, x, n, eps, closed, true)
}

pub(crate) fn formula_ball(
    closure: &WordClosure,
    x: usize,
    n: usize,
    eps: &Rational,
    closed: bool,
    with_complement: bool,
) -> Result<PointSet> {
    let space = closure.space();
    space.check_point(x)?;
    let k = closure.size_at(n)?;
    let cut = space.cut(eps, closed);
    if space.len() <= 64 {
        return Ok(formula_ball_word(closure, x, k, cut, with_complement));
    }
    let balls: Vec<PointSet> = (0..space.len())
        .map(|c| space.ball_with_cut(c, cut))
        .collect();
    let mut ball = space.full_set();
    let mut term = space.empty_set();
    for i in 0..k {
        let g = closure.map(i);
        let Some(gx) = g.get(x) else { continue };
        // g^{-1}(B(g x, ε)), plus D_g^c.
        term.clear(with_complement);
        for (y, gy) in g.pairs() {
            if balls[gx].contains(gy) {
                term.insert(y);
            } else {
                term.remove(y);
            }
        }
        ball.intersect_with(&term);
    }
    Ok(ball)
}

/// [`formula_ball`] with every set packed in one machine word.
fn formula_ball_word(
    closure: &WordClosure,
    x: usize,
    k: usize,
    cut: Cut,
    with_complement: bool,
) -> PointSet {
    let space = closure.space();
    let len = space.len();
    let balls: Vec<u64> = (0..len)
        .map(|c| {
            (0..len)
                .filter(|&y| cut.admits(space.rank(c, y)))
                .fold(0, |m, y| m | 1 << y)
        })
        .collect();
    let mut ball = u64::MAX;
    for &i in closure.defined_indices(x, k) {
        let g = closure.map(i as usize);
        let b = balls[g.images()[x] as usize];
        let mut term = 0u64;
        for (y, &gy) in g.images().iter().enumerate() {
            let keep = if gy == UNDEFINED {
                with_complement
            } else {
                b >> gy & 1 == 1
            };
            term |= (keep as u64) << y;
        }
        ball &= term;
    }
    PointSet::from_indices(len, (0..len).filter(|&y| ball >> y & 1 == 1))
}

/// [`worst_ranks`] for every `n = 1..=max_n` in one pass, indexed `[n - 1][y]`.
pub(crate) fn rank_profile(closure: &WordClosure, x: usize, max_n: usize) -> Result<Vec<Vec<u32>>> {
    (1..=max_n)
        .map(|n| Ok(worst_ranks(closure, x, closure.size_at(n)?)))
        .collect()
}

/// Bowen balls `Φ_δ(x)` for all `x`, computed on the pair graph: `y ∉ Φ_δ(x)`
/// iff some word defined at both `x` and `y` moves them to a pair at
/// distance beyond the cut. Shortest such words are kept for traces.
#[derive(Clone, Debug)]
pub struct BowenBalls {
    n: usize,
    /// Per pair `u * n + v`: generator taking the pair one step closer to
    /// a far pair, `FAR` for far pairs, `NEAR` otherwise.
    step: Vec<u32>,
    names: Vec<String>,
    gens: Vec<PartialMap>,
}

const FAR: u32 = u32::MAX - 1;
const NEAR: u32 = u32::MAX;

impl BowenBalls {
    /// Closed Bowen balls at radius `delta`.
    pub fn new(sys: &GeneratingSystem, delta: &Rational) -> Self {
        Self::with_cut(sys, sys.space().cut(delta, true))
    }

    /// Closed Bowen balls for the generators of a word closure.
    pub fn from_closure(closure: &WordClosure, delta: &Rational) -> Self {
        let space = closure.space();
        let gens = closure.generators().to_vec();
        Self::from_parts(
            space,
            gens,
            closure.generator_names().to_vec(),
            space.cut(delta, true),
        )
    }

    /// Pairs with rank at or above `cut` count as far.
    pub(crate) fn with_cut(sys: &GeneratingSystem, cut: Cut) -> Self {
        let gens = sys.generators().iter().map(|g| g.map.clone()).collect();
        Self::from_parts(sys.space(), gens, sys.names(), cut)
    }

    pub(crate) fn from_parts(
        space: &FiniteMetricSpace,
        gens: Vec<PartialMap>,
        names: Vec<String>,
        cut: Cut,
    ) -> Self {
        let n = space.len();
        let inverses: Vec<_> = gens.iter().map(|g| g.invert()).collect();
        let mut step = vec![NEAR; n * n];
        let mut queue = VecDeque::new();
        for u in 0..n {
            for v in 0..n {
                if !cut.admits(space.rank(u, v)) {
                    step[u * n + v] = FAR;
                    queue.push_back((u, v));
                }
            }
        }
        while let Some((u, v)) = queue.pop_front() {
            for (i, inv) in inverses.iter().enumerate() {
                if let (Some(pu), Some(pv)) = (inv.get(u), inv.get(v)) {
                    if step[pu * n + pv] == NEAR {
                        step[pu * n + pv] = i as u32;
                        queue.push_back((pu, pv));
                    }
                }
            }
        }
        BowenBalls {
            n,
            step,
            names,
            gens,
        }
    }

    pub fn ball(&self, x: usize) -> PointSet {
        PointSet::from_indices(
            self.n,
            (0..self.n).filter(|&y| self.step[x * self.n + y] == NEAR),
        )
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.step[x * self.n + y] == NEAR
    }

    /// A shortest word pushing `(x, y)` to a far pair, and that pair.
    pub fn separating_word(&self, x: usize, y: usize) -> Option<(Vec<usize>, (usize, usize))> {
        let (mut u, mut v) = (x, y);
        let mut applied = Vec::new();
        loop {
            match self.step[u * self.n + v] {
                NEAR => return None,
                FAR => break,
                i => {
                    let g = &self.gens[i as usize];
                    applied.push(i as usize);
                    (u, v) = (g.get(u).unwrap(), g.get(v).unwrap());
                }
            }
        }
        applied.reverse();
        Some((applied, (u, v)))
    }

    fn word_string(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return self
                .gens
                .iter()
                .position(|g| g.is_total_identity())
                .map_or_else(|| "id".to_string(), |i| self.names[i].clone());
        }
        word.iter()
            .map(|&i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join("∘")
    }
}

/// `Φ_δ(x) = ⋂_n B_n[x, δ]`.
pub fn bowen_ball(sys: &GeneratingSystem, x: usize, delta: &Rational) -> Result<BallReport> {
    let space = sys.space();
    space.check_point(x)?;
    let balls = BowenBalls::new(sys, delta);
    Ok(bowen_report(space, &balls, x, delta))
}

pub(crate) fn bowen_report(
    space: &FiniteMetricSpace,
    balls: &BowenBalls,
    x: usize,
    delta: &Rational,
) -> BallReport {
    let members = balls.ball(x);
    let trace = members
        .complement()
        .iter()
        .map(|y| {
            let (word, (u, v)) = balls
                .separating_word(x, y)
                .expect("excluded point has a word");
            Exclusion {
                point: y,
                word: balls.word_string(&word),
                distance: space.dist(u, v).clone(),
            }
        })
        .collect();
    BallReport {
        center: x,
        radius: delta.clone(),
        closed: true,
        steps: Steps::Stabilized,
        members,
        trace,
    }
}

/// The Bowen ball read off a stabilized word closure.
pub fn bowen_ball_via_closure(
    closure: &WordClosure,
    x: usize,
    delta: &Rational,
) -> Result<PointSet> {
    let n_star = closure.stabilization().ok_or(Error::DepthExceeded {
        built: closure.depth(),
        requested: closure.depth() + 1,
    })?;
    Ok(dyn_ball(closure, x, n_star, delta, true)?.members)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatedCount {
    pub lower: usize,
    pub upper: usize,
    pub witness: Vec<usize>,
}

/// Separation graph of `𝒢_n` at scale `ε`: `x ~ y` iff some map defined at
/// both has `d(g x, g y) ≥ ε`.
pub fn separation_graph(closure: &WordClosure, n: usize, eps: &Rational) -> Result<Vec<Vec<bool>>> {
    let space = closure.space();
    let k = closure.size_at(n)?;
    let cut = space.cut(eps, false);
    let size = space.len();
    Ok((0..size)
        .map(|x| {
            let worst = worst_ranks(closure, x, k);
            (0..size).map(|y| y != x && !cut.admits(worst[y])).collect()
        })
        .collect())
}

/// Maximal cardinality of an `(n, ε)`-separated set.
pub fn separated_count(
    closure: &WordClosure,
    n: usize,
    eps: &Rational,
    mode: SearchMode,
) -> Result<SeparatedCount> {
    let graph = separation_graph(closure, n, eps)?;
    separated_from_graph(&graph, mode)
}

pub(crate) fn separated_from_graph(
    graph: &[Vec<bool>],
    mode: SearchMode,
) -> Result<SeparatedCount> {
    let size = graph.len();
    match mode {
        SearchMode::Exact => {
            if size > EXACT_LIMIT {
                return Err(Error::Capability(format!(
                    "exact separated sets are limited to {EXACT_LIMIT} points; use greedy mode"
                )));
            }
            let adj: Vec<u32> = graph
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &e)| e)
                        .fold(0, |m, (j, _)| m | 1 << j)
                })
                .collect();
            let witness = max_clique(&adj);
            Ok(SeparatedCount {
                lower: witness.len(),
                upper: witness.len(),
                witness,
            })
        }
        SearchMode::Greedy => {
            let witness = greedy_clique(graph);
            Ok(SeparatedCount {
                lower: witness.len(),
                upper: size,
                witness,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRow {
    #[serde(serialize_with = "crate::rational::serialize_exact")]
    pub eps: Rational,
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    /// `(1/n) log s` at the lower bound.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyTable {
    pub rows: Vec<EntropyRow>,
    pub limit: f64,
    pub note: String,
}

/// `(1/n) log s(n, ε)` over a grid. On a finite space `s ≤ |X|`, so the
/// limit is 0.
pub fn h_top_table(
    closure: &WordClosure,
    eps_grid: &[Rational],
    n_max: usize,
) -> Result<EntropyTable> {
    if eps_grid.is_empty() || n_max == 0 {
        return Err(Error::input(
            "entropy tables need a nonempty ε grid and n_max ≥ 1",
        ));
    }
    closure.size_at(n_max)?;
    let mode = if closure.space().len() <= EXACT_LIMIT {
        SearchMode::Exact
    } else {
        SearchMode::Greedy
    };
    let cells: Vec<(usize, usize)> = (0..eps_grid.len())
        .flat_map(|e| (1..=n_max).map(move |n| (e, n)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(e, n)| {
            let s = separated_count(closure, n, &eps_grid[e], mode)?;
            Ok(EntropyRow {
                eps: eps_grid[e].clone(),
                n,
                lower: s.lower,
                upper: s.upper,
                value: (s.lower as f64).ln() / n as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyTable {
        rows,
        limit: 0.0,
        note: format!(
            "finite space: s(n, ε) ≤ {} for all n, so (1/n) log s → 0",
            closure.space().len()
        ),
    })
}
