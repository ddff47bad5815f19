//! Randomized instances, statement conformance probes, shrinking and
//! surveys of finite analogs of open questions.

mod instance;
mod kernel;
mod questions;
mod shrink;
mod statements;

use rayon::prelude::*;
use serde::Serialize;

pub use instance::{random_instance, Instance, InstanceSpec, MeasureFamily};
pub use kernel::{Kernel, Mutation};
pub use questions::{question_probe, Disagreement, Question, SurveyReport, FINITE_SCALE_NOTE};
pub use shrink::shrink;
pub use statements::{statement, Outcome, Statement, PROBE_MAP_LIMIT, STATEMENTS};

use crate::error::{Error, Result};

/// A minimized violating instance, rendered for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub seed: u64,
    pub detail: String,
    pub points: Vec<String>,
    pub generators: Vec<String>,
    pub original_points: usize,
    pub original_generators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub statement: &'static str,
    pub claim: &'static str,
    pub instances: usize,
    pub vacuous: usize,
    pub substantive: usize,
    /// Seeds with a violation, in seed order.
    pub violations: Vec<u64>,
    pub witness: Option<Witness>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn coverage(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.substantive as f64 / self.instances as f64
        }
    }
}

/// Resolves `all` or a comma-separated list of statement ids.
pub fn select_statements(list: &str) -> Result<Vec<&'static Statement>> {
    if list.trim() == "all" {
        return Ok(STATEMENTS.iter().collect());
    }
    list.split(',')
        .map(|id| {
            statement(id.trim())
                .ok_or_else(|| Error::input(format!("unknown statement `{}`", id.trim())))
        })
        .collect()
}

fn describe(inst: &Instance) -> (Vec<String>, Vec<String>) {
    let space = inst.sys.space();
    let points = space.labels().to_vec();
    let generators = inst
        .sys
        .generators()
        .iter()
        .map(|g| {
            let pairs: Vec<String> = g
                .map
                .pairs()
                .map(|(x, y)| format!("{}→{}", space.label(x), space.label(y)))
                .collect();
            format!("{}: {{{}}}", g.name, pairs.join(", "))
        })
        .collect();
    (points, generators)
}

/// Runs each statement over the seeds `spec.seed .. spec.seed + seeds`.
pub fn run_suite(
    spec: &InstanceSpec,
    seeds: u64,
    statements: &[&Statement],
) -> Result<Vec<ProbeReport>> {
    run_suite_with(spec, seeds, statements, &Kernel::default())
}

/// [`run_suite`] with a swapped kernel, for mutation testing.
pub fn run_suite_with(
    spec: &InstanceSpec,
    seeds: u64,
    statements: &[&Statement],
    kernel: &Kernel,
) -> Result<Vec<ProbeReport>> {
    spec.check()?;
    let instances: Vec<Instance> = (0..seeds)
        .into_par_iter()
        .map(|s| instance::random_instance_with(&spec.with_seed(spec.seed + s), kernel))
        .collect::<Result<_>>()?;
    let reports = statements
        .iter()
        .map(|st| {
            let outcomes: Vec<Outcome> = instances
                .par_iter()
                .map(|inst| st.evaluate(inst, kernel))
                .collect();
            let mut report = ProbeReport {
                statement: st.id,
                claim: st.claim,
                instances: instances.len(),
                vacuous: 0,
                substantive: 0,
                violations: Vec::new(),
                witness: None,
            };
            for (inst, outcome) in instances.iter().zip(&outcomes) {
                match outcome {
                    Outcome::Vacuous => report.vacuous += 1,
                    Outcome::Pass => report.substantive += 1,
                    Outcome::Violation(detail) => {
                        report.violations.push(inst.seed);
                        if report.witness.is_none() {
                            let small = shrink(inst, st, kernel);
                            let detail = match st.evaluate(&small, kernel) {
                                Outcome::Violation(d) => d,
                                _ => detail.clone(),
                            };
                            let (points, generators) = describe(&small);
                            report.witness = Some(Witness {
                                seed: inst.seed,
                                detail,
                                points,
                                generators,
                                original_points: inst.points(),
                                original_generators: inst.sys.generators().len(),
                            });
                        }
                    }
                }
            }
            report
        })
        .collect();
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> InstanceSpec {
        InstanceSpec {
            points: (2, 6),
            ..InstanceSpec::default()
        }
    }

    #[test]
    fn default_suite_has_no_violations() {
        let all = select_statements("all").unwrap();
        for r in run_suite(&small_spec(), 60, &all).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.statement, r.witness);
            assert_eq!(r.vacuous + r.substantive, r.instances);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let some = select_statements("bal,lemma9,borel").unwrap();
        assert_eq!(
            run_suite(&small_spec(), 30, &some).unwrap(),
            run_suite(&small_spec(), 30, &some).unwrap()
        );
    }

    #[test]
    fn every_mutation_is_caught() {
        let all = select_statements("all").unwrap();
        for m in Mutation::ALL {
            let reports = run_suite_with(&small_spec(), 60, &all, &Kernel::mutated(m)).unwrap();
            let caught: Vec<_> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.statement)
                .collect();
            assert!(!caught.is_empty(), "{m} escaped");
        }
    }

    #[test]
    fn shrinking_keeps_the_violation() {
        let kernel = Kernel::mutated(Mutation::DropComplementTerm);
        let st = statement("borel").unwrap();
        let reports = run_suite_with(&small_spec(), 40, &[st], &kernel).unwrap();
        let w = reports[0].witness.as_ref().expect("a violation");
        assert!(w.points.len() <= w.original_points);
        let inst =
            instance::random_instance_with(&small_spec().with_seed(w.seed), &kernel).unwrap();
        let small = shrink(&inst, st, &kernel);
        assert!(st.evaluate(&small, &kernel).is_violation());
        assert!(small.points() <= inst.points());
    }

    #[test]
    fn unknown_statement() {
        assert!(matches!(
            select_statements("bal,nope"),
            Err(Error::Input(_))
        ));
    }
}
