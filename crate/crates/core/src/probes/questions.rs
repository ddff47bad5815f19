use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::instance::{random_instance, Instance, InstanceSpec};
use super::statements::PROBE_MAP_LIMIT;
use crate::dynamics::BowenBalls;
use crate::error::{Error, Result};
use crate::measure::{is_homogeneous, verdict_from_balls, Classification};
use crate::pseudogroup::{Depth, GeneratingSystem, Generator, WordClosure};
use crate::rational::format_rational;

pub const FINITE_SCALE_NOTE: &str =
    "finite-scale evidence only: agreement on finite instances neither proves nor refutes the question";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Question {
    A,
    B,
    C,
    D,
    E,
}

impl Question {
    pub const ALL: [Question; 5] = [
        Question::A,
        Question::B,
        Question::C,
        Question::D,
        Question::E,
    ];

    pub fn asks(self) -> &'static str {
        match self {
            Question::A => {
                "does expansiveness coincide with a.e.-expansiveness for one generating set?"
            }
            Question::B => "is expansiveness independent of the generating set?",
            Question::C => "is expansiveness independent of any kind of generating set?",
            Question::D => "if Φ¹_δ(x) is countable, is Φ²_δ(x) countable?",
            Question::E => "is homogeneity for 𝒢₁ equivalent to homogeneity for 𝒢₂?",
        }
    }

    pub fn compares(self) -> &'static str {
        match self {
            Question::A => "expansive vs weakly expansive verdicts per grid δ",
            Question::B => "verdicts for the generators vs a germ-equal split of them",
            Question::C => "verdicts for 𝒢₁ vs the compacted generators closed under inverses",
            Question::D => "|Φ¹_δ(x)| vs |Φ²_δ(x)| per point and grid δ",
            Question::E => "homogeneous(𝒢₁) vs homogeneous(𝒢₂)",
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Question::A),
            "B" => Ok(Question::B),
            "C" => Ok(Question::C),
            "D" => Ok(Question::D),
            "E" => Ok(Question::E),
            _ => Err(Error::input(format!(
                "unknown question `{s}`, expected A-E"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub question: Question,
    pub asks: &'static str,
    pub compares: &'static str,
    pub instances: usize,
    pub comparisons: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    /// Both sides are forced on finite spaces, so agreement is automatic.
    pub degenerate: bool,
    pub note: &'static str,
}

struct Tally {
    comparisons: usize,
    agreements: usize,
    disagreement: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            comparisons: 0,
            agreements: 0,
            disagreement: None,
        }
    }

    fn record(&mut self, same: bool, detail: impl FnOnce() -> String) {
        self.comparisons += 1;
        if same {
            self.agreements += 1;
        } else if self.disagreement.is_none() {
            self.disagreement = Some(detail());
        }
    }
}

/// Each non-identity generator split into two restrictions covering its
/// domain. The germ relation is unchanged.
pub(crate) fn split_generators(sys: &GeneratingSystem) -> Result<GeneratingSystem> {
    let mut gens = Vec::new();
    for g in sys.generators() {
        if g.map.is_total_identity() || g.map.domain_size() < 2 {
            gens.push(Generator {
                core: None,
                ..g.clone()
            });
            continue;
        }
        let dom = g.map.domain().to_vec();
        let (a, b) = dom.split_at(dom.len() / 2);
        let n = sys.space().len();
        for (part, suffix) in [(a, "a"), (b, "b")] {
            let set = crate::space::PointSet::from_indices(n, part.iter().copied());
            gens.push(Generator::new(
                format!("{}.{suffix}", g.name),
                g.map.restrict(&set),
            ));
        }
    }
    Ok(GeneratingSystem::symmetrize(sys.space_arc().clone(), gens)?.0)
}

fn survey_one(question: Question, inst: &Instance) -> Result<Tally> {
    let mut t = Tally::new();
    let grid = inst.sys.space().grid().to_vec();
    let classify = |sys: &GeneratingSystem, d| {
        verdict_from_balls(&inst.mu, &BowenBalls::new(sys, d), d).classification
    };
    match question {
        Question::A => {
            for d in &grid {
                let c = classify(&inst.sys, d);
                let expansive = c == Classification::Expansive;
                t.record(expansive == c.is_weakly_expansive(), || {
                    format!("δ = {}: {}", format_rational(d), c.as_str())
                });
            }
        }
        Question::B => {
            let other = split_generators(&inst.sys)?;
            debug_assert_eq!(
                other.germ_relation().as_set(),
                inst.sys.germ_relation().as_set()
            );
            for d in &grid {
                let (p, q) = (classify(&inst.sys, d), classify(&other, d));
                t.record(p == q, || {
                    format!(
                        "δ = {}: {} vs {}",
                        format_rational(d),
                        p.as_str(),
                        q.as_str()
                    )
                });
            }
        }
        Question::C => {
            if !inst.sys.goodness()?.good {
                return Ok(t);
            }
            let other = inst.sys.compacted()?.closed_under_inverse();
            for d in &grid {
                let (p, q) = (classify(&inst.sys, d), classify(&other, d));
                t.record(p == q, || {
                    format!(
                        "δ = {}: {} vs {}",
                        format_rational(d),
                        p.as_str(),
                        q.as_str()
                    )
                });
            }
        }
        Question::D => {
            if !inst.sys.goodness()?.good {
                return Ok(t);
            }
            let compact = inst.sys.compacted()?;
            for d in &grid {
                let (b1, b2) = (BowenBalls::new(&inst.sys, d), BowenBalls::new(&compact, d));
                for x in 0..inst.points() {
                    let (p, q) = (b1.ball(x).len(), b2.ball(x).len());
                    // Both finite, hence countable.
                    t.record(true, || {
                        format!("δ = {}, x = {}: {p} vs {q}", format_rational(d), x)
                    });
                }
            }
        }
        Question::E => {
            if grid.is_empty() || !inst.sys.goodness()?.good {
                return Ok(t);
            }
            let c1 = WordClosure::build_limited(&inst.sys, Depth::Auto, PROBE_MAP_LIMIT)?;
            let c2 =
                WordClosure::build_limited(&inst.sys.compacted()?, Depth::Auto, PROBE_MAP_LIMIT)?;
            let p = is_homogeneous(&inst.mu, &c1, &grid)?.homogeneous;
            let q = is_homogeneous(&inst.mu, &c2, &grid)?.homogeneous;
            t.record(p == q, || format!("homogeneous for 𝒢₁: {p}, for 𝒢₂: {q}"));
        }
    }
    Ok(t)
}

/// Surveys finite analogs of an open question over `seeds` instances.
pub fn question_probe(question: Question, spec: &InstanceSpec, seeds: u64) -> Result<SurveyReport> {
    spec.check()?;
    let tallies: Vec<(u64, Tally)> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let seed = spec.seed + s;
            let tally = random_instance(&spec.with_seed(seed))
                .and_then(|inst| survey_one(question, &inst))
                .unwrap_or_else(|_| Tally::new());
            (seed, tally)
        })
        .collect();
    let mut report = SurveyReport {
        question,
        asks: question.asks(),
        compares: question.compares(),
        instances: seeds as usize,
        comparisons: 0,
        agreements: 0,
        disagreements: Vec::new(),
        degenerate: matches!(question, Question::A | Question::D),
        note: FINITE_SCALE_NOTE,
    };
    for (seed, t) in tallies {
        report.comparisons += t.comparisons;
        report.agreements += t.agreements;
        if let Some(detail) = t.disagreement {
            report.disagreements.push(Disagreement { seed, detail });
        }
    }
    Ok(report)
}
