//! The `pseudodyn` command line: model loading, dispatch and rendering.

pub mod model;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{bowen_ball, dyn_ball, h_top_table};
use crate::equicont::{
    certify, no_expansive_certificate_good, no_expansive_certificate_group, Scope,
};
use crate::error::{Error, Result};
use crate::measure::{
    expansiveness_verdict, is_ergodic, is_invariant_measure, local_entropy, theorem_b_check,
    theorem_qtp_check, ImplicationStatus, Side,
};
use crate::morphism::{
    compare_entropy, conjugate_system, pushforward, transfer_expansive_constant,
};
use crate::probes::{
    question_probe, run_suite_with, select_statements, InstanceSpec, Kernel, MeasureFamily,
    Mutation, ProbeReport, Question,
};
use crate::pseudogroup::{Depth, WordClosure};
use crate::rational::{parse_rational, Rational};
use crate::shift::{
    bowen_ball_shift, cylinder_measure, dyn_ball_cylinder, dyn_ball_sandwich, htop_shift,
    measure_entropy_shift, shift_expansiveness, BernoulliSpec, Cylinder, ShiftGenerators,
    ShiftPoint,
};
use crate::space::{FiniteMetricSpace, PointSet, Radius};
use model::{load_model, Model};
use report::{q, Format, Report, Table};

pub const THREADS_ENV: &str = "PSEUDODYN_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pseudodyn",
    version,
    about = "Exact dynamics of finitely generated pseudogroups on finite spaces and the binary shift"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, alias = "report", global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Add decimal columns next to exact fractions.
    #[arg(long, global = true)]
    pub decimal: bool,
    /// Write a run manifest (JSON) to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArg {
    /// JSON model file.
    #[arg(long)]
    pub model: PathBuf,
    /// Measure file `{"mu": {...}}`, replacing any measure in the model.
    #[arg(long)]
    pub measure: Option<PathBuf>,
}

impl ModelArg {
    fn load(&self) -> Result<Model> {
        let model = load_model(&self.model)?;
        match &self.measure {
            Some(path) => model.with_measure_file(path),
            None => Ok(model),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dynamical ball B_n(x, ε) with the exclusion trace.
    Ball {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_q)]
        eps: Rational,
        /// Use d ≤ ε instead of d < ε.
        #[arg(long)]
        closed: bool,
    },
    /// Bowen balls Φ_δ(x); all points when --x is omitted.
    Bowen {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_parser = parse_q)]
        delta: Rational,
    },
    /// Maximal (n, ε)-separated counts.
    Htop {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Comma-separated ε values, or `auto` for the distance grid.
        #[arg(
            long,
            alias = "eps-grid",
            value_delimiter = ',',
            default_value = "auto"
        )]
        eps: Vec<String>,
    },
    /// Local measure entropy at a point.
    Entropy {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = SideArg::Upper)]
        side: SideArg,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(
            long,
            alias = "eps-grid",
            value_delimiter = ',',
            default_value = "auto"
        )]
        eps: Vec<String>,
    },
    /// Goodness, invariance, ergodicity and expansiveness verdicts.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Word length for the homogeneity and entropy parts.
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Verdicts to compute; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        what: Vec<What>,
        /// Expansiveness constant; every grid distance by default.
        #[arg(long, value_parser = parse_q)]
        delta: Option<Rational>,
    },
    /// Conjugation through `phi` onto `target`.
    Conjugate {
        #[command(flatten)]
        model: ModelArg,
        /// Iso file `{"phi": {...}}`, optionally with a `target` space.
        #[arg(long)]
        iso: Option<PathBuf>,
        /// Parts to check; both by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        check: Vec<ConjugateCheck>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Equicontinuity moduli and no-expansive-measure certificates.
    Equicont {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_enum, default_value_t = ScopeArg::Closure)]
        scope: ScopeArg,
        /// Shorthand for `--scope compacted`.
        #[arg(long, conflicts_with = "scope")]
        compacted: bool,
    },
    /// The full two-sided binary shift with a Bernoulli measure.
    Shift {
        #[command(subcommand)]
        command: ShiftCommand,
    },
    /// Statement conformance over random instances.
    Probe(ProbeArgs),
    /// All statements; same as `probe --statements all`.
    Verify(ProbeArgs),
}

#[derive(Subcommand, Debug)]
pub enum ShiftCommand {
    /// −(1/n) log μ(B_n(x, ε)).
    Entropy {
        #[arg(long, value_parser = parse_q, default_value = "3/5")]
        eps: Rational,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[command(flatten)]
        point: ShiftPointArgs,
    },
    /// The cylinder form of B_n(x, ε) and its exact sandwich.
    Ball {
        #[arg(long, value_parser = parse_q)]
        eps: Rational,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        point: ShiftPointArgs,
    },
    /// Φ_δ(x) with its measure certificate.
    Bowen {
        #[arg(long, value_parser = parse_q)]
        delta: Rational,
        #[arg(long, value_enum, default_value_t = ShiftGensArg::Full)]
        gens: ShiftGensArg,
        #[command(flatten)]
        point: ShiftPointArgs,
    },
    /// Bounds on the separated counts.
    Htop {
        #[arg(long, value_parser = parse_q)]
        eps: Rational,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ShiftPointArgs {
    /// Binary word around position 0.
    #[arg(long, default_value = "0")]
    pub x: String,
    /// Index in the word that sits at position 0.
    #[arg(long, default_value_t = 0)]
    pub center: usize,
    /// Symbol outside the word.
    #[arg(long, default_value_t = 0)]
    pub background: u8,
    /// Bernoulli parameter μ([0]).
    #[arg(long, value_parser = parse_q, default_value = "1/2")]
    pub p: Rational,
}

#[derive(Args, Debug, Clone)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 500)]
    pub seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `all` or a comma-separated list of statement ids.
    #[arg(long, default_value = "all")]
    pub statements: String,
    #[arg(long, default_value_t = 2)]
    pub min_points: usize,
    #[arg(long, default_value_t = 7)]
    pub max_points: usize,
    #[arg(long, default_value_t = 1)]
    pub min_generators: usize,
    #[arg(long, default_value_t = 3)]
    pub max_generators: usize,
    #[arg(long, default_value_t = 0.7)]
    pub domain_density: f64,
    #[arg(long, default_value_t = 0.7)]
    pub core_density: f64,
    #[arg(long, value_enum, default_value_t = MeasureArg::Mixed)]
    pub measure: MeasureArg,
    /// Run with a deliberately broken kernel.
    #[arg(long)]
    pub mutation: Option<String>,
    /// Survey an open question (A-E) instead of the statements.
    #[arg(long)]
    pub question: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    Good,
    Invariant,
    Ergodic,
    Homogeneous,
    Expansive,
    Qtp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugateCheck {
    Entropy,
    Expansive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SideArg {
    Upper,
    Lower,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ScopeArg {
    Generators,
    Closure,
    Compacted,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ShiftGensArg {
    Full,
    IdentityOnly,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MeasureArg {
    Uniform,
    RandomRational,
    PointMass,
    Invariant,
    Mixed,
}

fn parse_q(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    InputError = 2,
    Violation = 3,
}

pub struct Outcome {
    pub report: Report,
    pub status: Status,
    pub model_hash: Option<String>,
    pub seed: Option<u64>,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Outcome {
            report,
            status: Status::Ok,
            model_hash: None,
            seed: None,
        }
    }

    fn with_model(report: Report, model: &Model) -> Self {
        Outcome {
            model_hash: Some(model.hash.clone()),
            ..Outcome::new(report)
        }
    }

    fn status(mut self, status: Status) -> Self {
        self.status = self.status.max(status);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub model_hash: Option<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub wall_time_ms: u128,
}

fn set_labels(space: &FiniteMetricSpace, set: &PointSet) -> String {
    format!("{{{}}}", space.set_labels(set).join(", "))
}

fn radius(r: &Radius) -> String {
    match r {
        Radius::Finite(v) => q(v),
        Radius::Unbounded => "unbounded".into(),
    }
}

fn eps_list(space: &FiniteMetricSpace, eps: &[String]) -> Result<Vec<Rational>> {
    if eps.is_empty() || (eps.len() == 1 && eps[0] == "auto") {
        Ok(space.grid().to_vec())
    } else {
        eps.iter().map(|e| parse_rational(e)).collect()
    }
}

fn status_str(s: ImplicationStatus) -> &'static str {
    match s {
        ImplicationStatus::Vacuous => "vacuous",
        ImplicationStatus::Holds => "holds",
        ImplicationStatus::ImplicationViolated => "IMPLICATION-VIOLATED",
    }
}

fn cmd_ball(model: &Model, x: &str, n: usize, eps: &Rational, closed: bool) -> Result<Outcome> {
    let space = model.sys.space();
    let x = space.index_of(x)?;
    let closure = WordClosure::build(&model.sys, Depth::Max(n))?;
    let ball = dyn_ball(&closure, x, n, eps, closed)?;
    let mut r = Report::new("ball");
    r.set("center", space.label(x))
        .set("n", n)
        .set("eps", q(eps))
        .set("closed", closed)
        .set("members", set_labels(space, &ball.members));
    if let Some(mu) = &model.mu {
        r.set("measure", q(&mu.of(&ball.members)));
    }
    let mut t = Table::new("excluded points", ["point", "word", "distance"]);
    for e in &ball.trace {
        t.push([
            space.label(e.point).to_string(),
            e.word.clone(),
            q(&e.distance),
        ]);
    }
    r.table(t);
    Ok(Outcome::with_model(r, model))
}

fn cmd_bowen(model: &Model, x: Option<&str>, delta: &Rational) -> Result<Outcome> {
    let space = model.sys.space();
    let mut r = Report::new("bowen");
    r.set("delta", q(delta));
    match x {
        Some(x) => {
            let x = space.index_of(x)?;
            let ball = bowen_ball(&model.sys, x, delta)?;
            r.set("center", space.label(x))
                .set("members", set_labels(space, &ball.members));
            if let Some(mu) = &model.mu {
                r.set("measure", q(&mu.of(&ball.members)));
            }
            let mut t = Table::new("excluded points", ["point", "word", "distance"]);
            for e in &ball.trace {
                t.push([
                    space.label(e.point).to_string(),
                    e.word.clone(),
                    q(&e.distance),
                ]);
            }
            r.table(t);
        }
        None => {
            let mut t = Table::new("Bowen balls", ["x", "members", "measure"]);
            for x in 0..space.len() {
                let ball = bowen_ball(&model.sys, x, delta)?;
                let m = model
                    .mu
                    .as_ref()
                    .map_or("-".to_string(), |mu| q(&mu.of(&ball.members)));
                t.push([
                    space.label(x).to_string(),
                    set_labels(space, &ball.members),
                    m,
                ]);
            }
            r.table(t);
        }
    }
    if let Some(mu) = &model.mu {
        let v = expansiveness_verdict(mu, &model.sys, delta)?;
        r.set("classification", v.classification.as_str());
        if let Some(note) = v.note {
            r.note(note);
        }
    }
    Ok(Outcome::with_model(r, model))
}

fn cmd_htop(model: &Model, n_max: usize, eps: &[String]) -> Result<Outcome> {
    let grid = eps_list(model.sys.space(), eps)?;
    let closure = WordClosure::build(&model.sys, Depth::Max(n_max))?;
    let table = h_top_table(&closure, &grid, n_max)?;
    let mut r = Report::new("htop");
    r.set("n_max", n_max).set("limit", table.limit);
    let mut t = Table::new(
        "separated counts",
        ["eps", "n", "lower", "upper", "(1/n) log s"],
    );
    for row in &table.rows {
        t.push([
            q(&row.eps),
            row.n.to_string(),
            row.lower.to_string(),
            row.upper.to_string(),
            format!("{:.6}", row.value),
        ]);
    }
    r.table(t).note(table.note);
    Ok(Outcome::with_model(r, model))
}

fn cmd_entropy(
    model: &Model,
    x: &str,
    side: SideArg,
    n_max: usize,
    eps: &[String],
) -> Result<Outcome> {
    let mu = model.measure()?;
    let space = model.sys.space();
    let x = space.index_of(x)?;
    let grid = eps_list(space, eps)?;
    let closure = WordClosure::build(&model.sys, Depth::Max(n_max))?;
    let side = match side {
        SideArg::Upper => Side::Upper,
        SideArg::Lower => Side::Lower,
    };
    let table = local_entropy(mu, &closure, x, side, &grid, n_max)?;
    let mut r = Report::new("entropy");
    r.set("x", space.label(x))
        .set("side", format!("{side:?}").to_lowercase())
        .set("limit", table.limit);
    let mut t = Table::new(
        "ball measures",
        ["eps", "n", "measure", "-(1/n) log measure"],
    );
    for c in &table.cells {
        t.push([
            q(&c.eps),
            c.n.to_string(),
            q(&c.measure),
            format!("{:.6}", c.value),
        ]);
    }
    let mut l = Table::new("limits per eps", ["eps", "limit"]);
    for (e, v) in &table.limits {
        l.push([q(e), v.to_string()]);
    }
    r.table(t).table(l);
    Ok(Outcome::with_model(r, model))
}

fn cmd_check(
    model: &Model,
    n_max: usize,
    what: &[What],
    delta: Option<&Rational>,
) -> Result<Outcome> {
    let sys = &model.sys;
    let space = sys.space();
    let wants = |w: What| what.is_empty() || what.contains(&w);
    let mut r = Report::new("check");
    let mut status = Status::Ok;
    r.set("points", space.len())
        .set("generators", sys.names().join(", "));
    if let Some(id) = &model.load.added_identity {
        r.set("added identity", id);
    }
    if !model.load.added_inverses.is_empty() {
        r.set("added inverses", model.load.added_inverses.join(", "));
    }
    let good = if sys.has_cores() {
        Some(sys.goodness()?)
    } else {
        None
    };
    if wants(What::Good) {
        match &good {
            Some(g) => {
                r.set("good", g.good);
                if let Some((x, y)) = g.witness {
                    r.set(
                        "goodness witness",
                        format!(
                            "({}, {}) is lost by compaction",
                            space.label(x),
                            space.label(y)
                        ),
                    );
                    status = Status::Negative;
                }
                r.set("separation radius", radius(&sys.separation_radius()?));
            }
            None => {
                r.set("good", "no cores given");
            }
        }
    }
    let needs_mu = [
        What::Invariant,
        What::Ergodic,
        What::Homogeneous,
        What::Expansive,
        What::Qtp,
    ];
    let mu = match &model.mu {
        Some(mu) => mu,
        None if what.iter().any(|w| needs_mu.contains(w)) => {
            return Err(model.measure().unwrap_err())
        }
        None => return Ok(Outcome::with_model(r, model).status(status)),
    };
    let inv = is_invariant_measure(mu, sys)?;
    if wants(What::Invariant) {
        r.set("invariant", inv.invariant);
        if let Some((g, x)) = &inv.witness {
            r.set(
                "invariance witness",
                format!("{g} moves mass at {}", space.label(*x)),
            );
            status = Status::Negative;
        }
    }
    if wants(What::Ergodic) {
        if inv.invariant {
            let erg = is_ergodic(mu, sys)?;
            r.set("ergodic", erg.ergodic);
            if let Some(w) = &erg.witness {
                r.set("ergodicity witness", set_labels(space, w));
                status = status.max(Status::Negative);
            }
        } else {
            r.set("ergodic", "undefined for a non-invariant measure");
            status = status.max(Status::Negative);
        }
    }
    let deltas = match delta {
        Some(d) => vec![d.clone()],
        None => space.grid().to_vec(),
    };
    if wants(What::Expansive) {
        let mut t = Table::new("expansiveness", ["delta", "classification", "null centers"]);
        let mut note = None;
        for d in &deltas {
            let v = expansiveness_verdict(mu, sys, d)?;
            t.push([
                q(d),
                v.classification.as_str().to_string(),
                set_labels(space, &v.null_centers),
            ]);
            note = note.or(v.note);
        }
        r.table(t);
        if let Some(n) = note {
            r.note(n);
        }
    }
    if wants(What::Qtp) && good.as_ref().is_some_and(|g| g.good) {
        let qtp = theorem_qtp_check(mu, sys)?;
        r.set("qtp", status_str(qtp.status));
        if qtp.status.violated() {
            status = Status::Violation;
        }
    }
    if wants(What::Homogeneous) && !space.grid().is_empty() {
        let b = theorem_b_check(mu, sys, space.grid(), n_max)?;
        r.set("homogeneous", b.homogeneous)
            .set("theorem B", status_str(b.status));
        if b.status.violated() {
            status = Status::Violation;
        }
    }
    Ok(Outcome::with_model(r, model).status(status))
}

fn cmd_conjugate(model: &Model, checks: &[ConjugateCheck], n_max: usize) -> Result<Outcome> {
    let wants = |c: ConjugateCheck| checks.is_empty() || checks.contains(&c);
    let iso = model.iso()?;
    let conj = conjugate_system(&model.sys, iso)?;
    let (sx, sy) = (iso.source(), iso.target());
    let mut r = Report::new("conjugate");
    r.set("isometry", iso.is_isometry());
    let mut gens = Table::new("conjugated generators", ["name", "graph"]);
    for g in conj.generators() {
        let pairs: Vec<String> = g
            .map
            .pairs()
            .map(|(a, b)| format!("{}→{}", sy.label(a), sy.label(b)))
            .collect();
        gens.push([g.name.clone(), format!("{{{}}}", pairs.join(", "))]);
    }
    r.table(gens);
    let mut status = Status::Ok;
    if wants(ConjugateCheck::Expansive) {
        let mut transfer = Table::new(
            "expansive constant transfer",
            ["eta", "delta", "source", "target"],
        );
        for eta in sx.grid() {
            let delta = transfer_expansive_constant(eta, iso)?;
            let (a, b) = match &model.mu {
                Some(mu) => (
                    expansiveness_verdict(mu, &model.sys, eta)?
                        .classification
                        .as_str(),
                    expansiveness_verdict(&pushforward(mu, iso), &conj, &delta)?
                        .classification
                        .as_str(),
                ),
                None => ("-", "-"),
            };
            transfer.push([q(eta), q(&delta), a.to_string(), b.to_string()]);
        }
        r.table(transfer);
    }
    if wants(ConjugateCheck::Entropy) {
        let cmp = compare_entropy(&model.sys, iso, model.mu.as_ref(), n_max)?;
        r.set("forward counts", cmp.forward_holds)
            .set("backward counts", cmp.backward_holds)
            .set("ball images", cmp.balls_hold);
        if let Some(eq) = cmp.tables_equal {
            r.set("equal tables", eq);
        }
        if let Some(eq) = cmp.local_equal {
            r.set("equal local entropy", eq);
        }
        for f in &cmp.failures {
            r.note(f.clone());
        }
        if !cmp.holds() {
            status = Status::Violation;
        }
    }
    Ok(Outcome::with_model(r, model).status(status))
}

fn cmd_equicont(model: &Model, scope: ScopeArg) -> Result<Outcome> {
    let sys = &model.sys;
    let space = sys.space();
    let scope = match scope {
        ScopeArg::Generators => Scope::Generators,
        ScopeArg::Closure => Scope::Closure,
        ScopeArg::Compacted => Scope::CompactedClosure,
    };
    let cert = certify(sys, scope)?;
    let mut r = Report::new("equicont");
    r.set("scope", scope.as_str())
        .set("isometric", cert.is_isometric());
    let mut t = Table::new(
        "modulus",
        ["eps", "delta", "binding word", "pair", "stretched"],
    );
    for e in &cert.entries {
        let (word, pair) = match &e.binding {
            Some(b) => (
                b.word.clone(),
                format!("({}, {})", space.label(b.x), space.label(b.y)),
            ),
            None => ("-".into(), "-".into()),
        };
        t.push([
            q(&e.eps),
            radius(&e.delta),
            word,
            pair,
            e.is_stretched().to_string(),
        ]);
    }
    r.table(t);
    if let Some(c) = cert.counterexample() {
        r.set(
            "counterexample",
            format!("δ({}) = {} < ε", q(&c.eps), radius(&c.delta)),
        );
    }
    if sys.generators().iter().all(|g| g.map.is_total()) {
        let mut g = Table::new("B(x, δ(ρ)) ⊆ Φ_ρ(x)", ["rho", "delta", "holds"]);
        let mut all = true;
        for rho in space.grid() {
            let c = no_expansive_certificate_group(sys, rho)?;
            all &= c.no_weakly_expansive;
            g.push([q(rho), radius(&c.delta), c.no_weakly_expansive.to_string()]);
        }
        r.set("no weakly expansive measure", all).table(g);
    } else if sys.has_cores() {
        match no_expansive_certificate_good(sys) {
            Ok(c) => {
                r.set("lambda", radius(&c.lambda))
                    .set("no weakly expansive measure", c.all_hold);
                let mut g = Table::new("B(x, ξ) ⊆ Φ²_ρ(x)", ["rho", "delta", "xi", "failures"]);
                for row in &c.rows {
                    let f: Vec<&str> = row.failures.iter().map(|&x| space.label(x)).collect();
                    g.push([
                        q(&row.rho),
                        radius(&row.delta),
                        radius(&row.xi),
                        f.join(" "),
                    ]);
                }
                r.table(g);
            }
            Err(Error::Precondition(m)) => {
                r.note(m);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::with_model(r, model))
}

fn block_string(c: &Cylinder) -> String {
    match c.interval() {
        None => "Σ".into(),
        Some((a, b)) => {
            let bits: String = c.block.iter().map(|b| char::from(b'0' + b)).collect();
            format!("[{a}, {b}] = {bits}")
        }
    }
}

fn shift_point(p: &ShiftPointArgs) -> Result<(ShiftPoint, BernoulliSpec)> {
    Ok((
        ShiftPoint::parse(&p.x, p.center, p.background)?,
        BernoulliSpec::new(p.p.clone())?,
    ))
}

fn cmd_shift(cmd: &ShiftCommand) -> Result<Outcome> {
    let mut r;
    match cmd {
        ShiftCommand::Entropy { eps, n, point } => {
            let (x, spec) = shift_point(point)?;
            let e = measure_entropy_shift(&spec, &x, eps, *n)?;
            r = Report::new("shift entropy");
            r.set("x", &x)
                .set("eps", q(eps))
                .set("n", n)
                .set("s", e.s)
                .set("cylinder length", e.cylinder_len);
            r.set("value", format!("{:.6}", e.value));
            if let Some(c) = &e.exact {
                r.set("exact", c);
            }
            match &e.limit {
                Some(l) => {
                    r.set("limit", l);
                    r.note(format!("limit {l}"));
                }
                None => {
                    r.note("the closed-form limit is reported for p = 1/2 only");
                }
            }
        }
        ShiftCommand::Ball { eps, n, point } => {
            let (x, spec) = shift_point(point)?;
            let c = dyn_ball_cylinder(&x, *n, eps)?;
            let s = dyn_ball_sandwich(&x, *n, eps)?;
            r = Report::new("shift ball");
            r.set("x", &x)
                .set("cylinder", block_string(&c))
                .set("measure", q(&cylinder_measure(&c, &spec)))
                .set("inner", block_string(&s.inner))
                .set("outer", block_string(&s.outer));
            r.note("inner ⊆ B_n[x, ε] ⊆ outer for the closed ball");
        }
        ShiftCommand::Bowen { delta, gens, point } => {
            let (x, spec) = shift_point(point)?;
            let gens = match gens {
                ShiftGensArg::Full => ShiftGenerators::Full,
                ShiftGensArg::IdentityOnly => ShiftGenerators::IdentityOnly,
            };
            let b = bowen_ball_shift(gens, &spec, &x, delta)?;
            r = Report::new("shift bowen");
            r.set("x", &x)
                .set("delta", q(delta))
                .set("shape", format!("{:?}", b.shape))
                .set("countable", b.countable)
                .set("null", b.null)
                .set("classification", shift_expansiveness(gens, delta)?.as_str());
            let mut t = Table::new("certificate", ["n", "bound"]);
            for step in &b.certificate {
                t.push([step.n.to_string(), report::scientific(&step.bound)]);
            }
            r.table(t);
        }
        ShiftCommand::Htop { eps, n } => {
            let h = htop_shift(eps, *n)?;
            r = Report::new("shift htop");
            r.set("eps", q(eps))
                .set("n", n)
                .set("lower", format!("2^{}", h.lower_exp))
                .set("upper", format!("2^{}", h.upper_exp))
                .set("limit", &h.limit);
        }
    }
    Ok(Outcome::new(r))
}

fn probe_spec(a: &ProbeArgs) -> InstanceSpec {
    InstanceSpec {
        seed: a.seed,
        points: (a.min_points, a.max_points),
        generators: (a.min_generators, a.max_generators),
        domain_density: a.domain_density,
        core_density: a.core_density,
        measure: match a.measure {
            MeasureArg::Uniform => MeasureFamily::Uniform,
            MeasureArg::RandomRational => MeasureFamily::RandomRational,
            MeasureArg::PointMass => MeasureFamily::PointMass,
            MeasureArg::Invariant => MeasureFamily::Invariant,
            MeasureArg::Mixed => MeasureFamily::Mixed,
        },
    }
}

fn probe_table(reports: &[ProbeReport]) -> Table {
    let mut t = Table::new(
        "statements",
        [
            "statement",
            "instances",
            "vacuous",
            "substantive",
            "coverage",
            "violations",
        ],
    );
    for p in reports {
        t.push([
            p.statement.to_string(),
            p.instances.to_string(),
            p.vacuous.to_string(),
            p.substantive.to_string(),
            format!("{:.1}%", 100.0 * p.coverage()),
            p.violations.len().to_string(),
        ]);
    }
    t
}

fn cmd_probe(a: &ProbeArgs, statements: &str) -> Result<Outcome> {
    let spec = probe_spec(a);
    if let Some(question) = &a.question {
        let question: Question = question.parse()?;
        let s = question_probe(question, &spec, a.seeds)?;
        let mut r = Report::new("probe question");
        r.set("question", s.question)
            .set("asks", s.asks)
            .set("compares", s.compares)
            .set("instances", s.instances)
            .set("comparisons", s.comparisons)
            .set("agreements", s.agreements)
            .set("degenerate", s.degenerate);
        let mut t = Table::new("disagreements", ["seed", "detail"]);
        for d in &s.disagreements {
            t.push([d.seed.to_string(), d.detail.clone()]);
        }
        r.table(t).note(s.note);
        return Ok(Outcome {
            seed: Some(a.seed),
            ..Outcome::new(r)
        });
    }
    let kernel = match &a.mutation {
        Some(m) => Kernel::mutated(m.parse::<Mutation>()?),
        None => Kernel::default(),
    };
    let chosen = select_statements(statements)?;
    let reports = run_suite_with(&spec, a.seeds, &chosen, &kernel)?;
    let mut r = Report::new("probe");
    r.set("seeds", a.seeds).set("first seed", a.seed);
    if let Some(m) = kernel.mutation() {
        r.set("mutation", m);
    }
    let violated: Vec<&ProbeReport> = reports.iter().filter(|p| !p.passed()).collect();
    r.set("violations", violated.len());
    r.table(probe_table(&reports));
    for p in &violated {
        if let Some(w) = &p.witness {
            r.note(format!(
                "{}: seed {} shrunk from {} points / {} generators to {} / {}: {}; points {}; generators {}",
                p.statement,
                w.seed,
                w.original_points,
                w.original_generators,
                w.points.len(),
                w.generators.len(),
                w.detail,
                w.points.join(" "),
                w.generators.join("; ")
            ));
        }
    }
    let status = if violated.is_empty() {
        Status::Ok
    } else {
        Status::Violation
    };
    Ok(Outcome {
        seed: Some(a.seed),
        ..Outcome::new(r)
    }
    .status(status))
}

pub fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Ball {
            model,
            x,
            n,
            eps,
            closed,
        } => cmd_ball(&model.load()?, x, *n, eps, *closed),
        Command::Bowen { model, x, delta } => cmd_bowen(&model.load()?, x.as_deref(), delta),
        Command::Htop { model, n_max, eps } => cmd_htop(&model.load()?, *n_max, eps),
        Command::Entropy {
            model,
            x,
            side,
            n_max,
            eps,
        } => cmd_entropy(&model.load()?, x, *side, *n_max, eps),
        Command::Check {
            model,
            n_max,
            what,
            delta,
        } => cmd_check(&model.load()?, *n_max, what, delta.as_ref()),
        Command::Conjugate {
            model,
            iso,
            check,
            n_max,
        } => {
            let mut m = model.load()?;
            if let Some(path) = iso {
                m = m.with_iso_file(path)?;
            }
            cmd_conjugate(&m, check, *n_max)
        }
        Command::Equicont {
            model,
            scope,
            compacted,
        } => cmd_equicont(
            &model.load()?,
            if *compacted {
                ScopeArg::Compacted
            } else {
                *scope
            },
        ),
        Command::Shift { command } => cmd_shift(command),
        Command::Probe(a) => cmd_probe(a, &a.statements),
        Command::Verify(a) => cmd_probe(a, "all"),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Runs the command line, writing the report to `out` and errors to
/// `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::InputError as i32
            } else {
                0
            };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    configure_threads();
    let start = Instant::now();
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return Status::InputError as i32;
        }
    };
    let _ = out.write_all(outcome.report.render(cli.format, cli.decimal).as_bytes());
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command_line: args
                .iter()
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            model_hash: outcome.model_hash.clone(),
            seed: outcome.seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: start.elapsed().as_millis(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifests serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            let _ = writeln!(err, "error: cannot write manifest {}: {e}", path.display());
            return Status::InputError as i32;
        }
    }
    outcome.status as i32
}
