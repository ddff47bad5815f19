//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Oracles below are written from the
//! definitions and share no code with the library beyond data access.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pseudodyn::dynamics::{
    dyn_ball, dyn_ball_via_formula, h_top_table, separated_count, BowenBalls, SearchMode,
};
use pseudodyn::equicont::{certify, no_expansive_certificate_group, Scope};
use pseudodyn::measure::{
    expansiveness_verdict, is_ergodic, is_ergodic_by_subsets, local_entropy, theorem_qtp_check,
    Classification, FiniteMeasure, ImplicationStatus, Side,
};
use pseudodyn::morphism::{
    compare_entropy, conjugate_system, pushforward, transfer_expansive_constant, SpaceIso,
};
use pseudodyn::probes::{
    random_instance, run_suite_with, select_statements, statement, Instance, InstanceSpec, Kernel,
    MeasureFamily, Mutation,
};
use pseudodyn::pseudogroup::{Depth, GeneratingSystem, Generator, PartialMap, WordClosure};
use pseudodyn::rational::{int, rat, Rational};
use pseudodyn::shift::{
    bowen_ball_shift, cylinder_measure, dyn_ball_cylinder, homogeneity_witness_holds,
    measure_entropy_shift, qtp_shift, shift_distance, shift_expansiveness, BernoulliSpec,
    BowenShape, ShiftGenerators, ShiftPoint,
};
use pseudodyn::space::{FiniteMetricSpace, PointSet, Radius};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.2} s, limit {} s", t.as_secs_f64(), limit.as_secs())
    })
}

fn half_pow(k: u64) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k as u32))
}

fn q(r: &Rational) -> String {
    pseudodyn::rational::format_rational(r)
}

// Oracles on finite systems. A map is its graph as `Vec<Option<usize>>`.

type Graph = Vec<Option<usize>>;

fn graph(m: &PartialMap, n: usize) -> Graph {
    (0..n).map(|x| m.get(x)).collect()
}

fn graphs(sys: &GeneratingSystem) -> Vec<Graph> {
    let n = sys.space().len();
    sys.generators().iter().map(|g| graph(&g.map, n)).collect()
}

/// Each generator restricted to its core; core-less maps stay whole.
fn core_graphs(sys: &GeneratingSystem) -> Vec<Graph> {
    let n = sys.space().len();
    sys.generators()
        .iter()
        .map(|g| {
            let full = graph(&g.map, n);
            match &g.core {
                Some(k) => (0..n)
                    .map(|x| if k.contains(x) { full[x] } else { None })
                    .collect(),
                None => full,
            }
        })
        .collect()
}

/// Orbit labels: the smallest point reachable along graph edges.
fn orbits(n: usize, gs: &[Graph]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for g in gs {
            for x in 0..n {
                if let Some(y) = g[x] {
                    let m = label[x].min(label[y]);
                    if label[x] != m || label[y] != m {
                        label[x] = m;
                        label[y] = m;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

/// Closed Bowen balls: `y ∈ Φ_δ(x)` unless some word defined at both
/// pushes the pair beyond `δ`. Computed as the backward closure of the far
/// pairs in the pair graph.
fn bowen_oracle(space: &FiniteMetricSpace, gs: &[Graph], delta: &Rational) -> Vec<PointSet> {
    let n = space.len();
    let mut bad = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            bad[a][b] = space.dist(a, b) > delta;
        }
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if bad[a][b] {
                    continue;
                }
                if gs
                    .iter()
                    .any(|g| matches!((g[a], g[b]), (Some(u), Some(v)) if bad[u][v]))
                {
                    bad[a][b] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .map(|x| PointSet::from_indices(n, (0..n).filter(|&y| !bad[x][y])))
        .collect()
}

fn radius_oracle(sys: &GeneratingSystem) -> Option<Rational> {
    let space = sys.space();
    let n = space.len();
    let mut best: Option<Rational> = None;
    for g in sys.generators() {
        let Some(core) = &g.core else { continue };
        for k in core.iter() {
            for z in (0..n).filter(|&z| g.map.get(z).is_none()) {
                let d = space.dist(k, z).clone();
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

fn mass(mu: &FiniteMeasure, set: &PointSet) -> Rational {
    set.iter().map(|x| mu.weights()[x].clone()).sum()
}

fn good_instances(count: usize, finite_rho: bool) -> Result<Vec<Instance>, String> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0;
    while out.len() < count {
        let batch: Vec<Instance> = (seed..seed + 256)
            .into_par_iter()
            .map(|s| random_instance(&InstanceSpec::default().with_seed(s)).expect("feasible spec"))
            .collect();
        seed += 256;
        for inst in batch {
            let n = inst.points();
            let good_lib =
                inst.sys.has_cores() && inst.sys.goodness().map_err(|e| e.to_string())?.good;
            let good_oracle = inst.sys.has_cores()
                && orbits(n, &graphs(&inst.sys)) == orbits(n, &core_graphs(&inst.sys));
            ensure(good_lib == good_oracle, || {
                format!("seed {}: goodness {good_lib} vs oracle", inst.seed)
            })?;
            if !good_lib {
                continue;
            }
            let rho = inst.sys.separation_radius().map_err(|e| e.to_string())?;
            let oracle = radius_oracle(&inst.sys);
            ensure(rho.finite() == oracle.as_ref(), || {
                format!("seed {}: ρ {rho:?} vs {oracle:?}", inst.seed)
            })?;
            if finite_rho && oracle.is_none() {
                continue;
            }
            if out.len() < count {
                out.push(inst);
            }
        }
    }
    Ok(out)
}

/// Every word of length exactly `n`, pointwise. With the identity among the
/// generators these cover all shorter words too.
fn word_images(gs: &[Graph], n: usize, size: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![(0..size).map(Some).collect()];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|w| {
                gs.iter()
                    .map(move |g| w.iter().map(|y| y.and_then(|y| g[y])).collect())
            })
            .collect();
    }
    level
}

fn random_measure(rng: &mut impl Rng, n: usize) -> FiniteMeasure {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..10)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        return FiniteMeasure::uniform(n);
    }
    FiniteMeasure::new(raw.iter().map(|&w| rat(w, total)).collect()).expect("normalized")
}

fn rotation(n: usize) -> GeneratingSystem {
    let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let r = Generator::new("r", PartialMap::permutation(&perm).unwrap());
    GeneratingSystem::symmetrize(Arc::new(FiniteMetricSpace::cyclic(n)), vec![r])
        .unwrap()
        .0
}

// Criteria.

fn c1_cylinder_identity() -> Verdict {
    let start = Instant::now();
    let fair = BernoulliSpec::fair();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<ShiftPoint> = (0..3).map(|_| ShiftPoint::random(&mut rng, 40)).collect();
    let mut cells = 0;
    for eps in [rat(3, 5), rat(3, 10), rat(1, 10), rat(1, 100)] {
        // s = min{m ≥ 0 : 2^{−m} < ε}
        let s = (0u64..).find(|&m| half_pow(m) < eps).unwrap();
        for n in 1..=1024u64 {
            for x in &xs {
                let c = dyn_ball_cylinder(x, n, &eps).map_err(|e| e.to_string())?;
                let got = cylinder_measure(&c, &fair);
                let want = half_pow(2 * (n + s) + 1);
                ensure(got == want, || {
                    format!("ε = {}, n = {n}: {} vs {}", q(&eps), q(&got), q(&want))
                })?;
                cells += 1;
            }
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{cells} cells exact"))
}

fn c2_shift_entropy() -> Verdict {
    let start = Instant::now();
    let x = ShiftPoint::parse("0110100", 3, 0).unwrap();
    let e = measure_entropy_shift(&BernoulliSpec::fair(), &x, &rat(3, 5), 1000)
        .map_err(|e| e.to_string())?;
    let target = 2.0 * std::f64::consts::LN_2;
    let rel = (e.value - target).abs() / target;
    ensure(rel < 0.005, || {
        format!("value {} is {:.3}% from 2 log 2", e.value, 100.0 * rel)
    })?;
    let limit = e
        .limit
        .as_ref()
        .map(ToString::to_string)
        .unwrap_or_default();
    ensure(limit == "2 log 2", || {
        format!("limit reported as `{limit}`")
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "value {:.6}, {:.3}% from 2 log 2, limit `{limit}`",
        e.value,
        100.0 * rel
    ))
}

fn c3_homogeneity() -> Verdict {
    let fair = BernoulliSpec::fair();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let grid = [
        rat(3, 5),
        rat(3, 10),
        rat(1, 10),
        rat(1, 100),
        int(1),
        rat(1, 2),
    ];
    for i in 0..100 {
        let x = ShiftPoint::random(&mut rng, 70);
        let y = ShiftPoint::random(&mut rng, 70);
        let n = rng.gen_range(1..=64u64);
        let eps = grid.choose(&mut rng).unwrap();
        let ok = homogeneity_witness_holds(&fair, &x, &y, n, eps).map_err(|e| e.to_string())?;
        // Both balls are cylinders of the same length under the fair measure.
        let s = (0u64..).find(|&m| half_pow(m) < *eps).unwrap();
        let by = cylinder_measure(&dyn_ball_cylinder(&y, n, eps).unwrap(), &fair);
        let bx = cylinder_measure(&dyn_ball_cylinder(&x, n, eps).unwrap(), &fair);
        ensure(ok && by <= bx && bx == half_pow(2 * (n + s) + 1), || {
            format!("tuple {i}: n = {n}, ε = {}", q(eps))
        })?;
    }
    Ok("100 tuples, δ = ε, c = 1".into())
}

fn c4_shift_expansive() -> Verdict {
    let fair = BernoulliSpec::fair();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for delta in [rat(1, 4), rat(1, 2)] {
        // m = max{m : 2^{−m} > δ}: B_n(x, δ) forces agreement on [−(n+m), n+m].
        let m = (0u64..).find(|&m| half_pow(m) <= delta).unwrap() - 1;
        for i in 0..50 {
            let x = ShiftPoint::random(&mut rng, 30);
            let b = bowen_ball_shift(ShiftGenerators::Full, &fair, &x, &delta)
                .map_err(|e| e.to_string())?;
            ensure(b.shape == BowenShape::Singleton && b.null, || {
                format!("x #{i}: {:?}", b.shape)
            })?;
            for step in &b.certificate {
                ensure(step.bound == half_pow(2 * (step.n + m) + 1), || {
                    format!("x #{i}: bound at n = {}", step.n)
                })?;
            }
            let last = b.certificate.last().unwrap();
            ensure(last.bound < half_pow(1000), || {
                format!("x #{i}: certificate stops at {}", q(&last.bound))
            })?;
            // Any other point differs from x somewhere; shifting that place to
            // the origin puts the pair at distance ≥ 1 > δ.
            let k = rng.gen_range(-30..=30i64);
            let z = x.flipped(k);
            ensure(
                shift_distance(&x.shifted(k), &z.shifted(k)) >= Rational::one(),
                || format!("x #{i}: flip at {k}"),
            )?;
        }
        let v = shift_expansiveness(ShiftGenerators::Full, &delta).map_err(|e| e.to_string())?;
        ensure(v == Classification::Expansive, || {
            format!("δ = {}: verdict {}", q(&delta), v.as_str())
        })?;
    }
    Ok("100 singletons with null certificates, verdict expansive".into())
}

fn c5_borel_formula() -> Verdict {
    let start = Instant::now();
    let spec = InstanceSpec {
        points: (2, 12),
        generators: (1, 5),
        ..InstanceSpec::default()
    };
    let cells: Vec<Result<usize, String>> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let inst = random_instance(&spec.with_seed(seed)).map_err(|e| e.to_string())?;
            let closure =
                WordClosure::build(&inst.sys, Depth::Max(6)).map_err(|e| e.to_string())?;
            let mut cells = 0;
            for n in 1..=6 {
                for eps in inst.sys.space().grid() {
                    for x in 0..inst.points() {
                        for closed in [false, true] {
                            let a = dyn_ball(&closure, x, n, eps, closed)
                                .map_err(|e| e.to_string())?
                                .members;
                            let b = dyn_ball_via_formula(&closure, x, n, eps, closed)
                                .map_err(|e| e.to_string())?;
                            ensure(a == b, || {
                                format!("seed {seed}, x = {x}, n = {n}, ε = {}", q(eps))
                            })?;
                            cells += 1;
                        }
                    }
                }
            }
            Ok(cells)
        })
        .collect();
    let cells: usize = cells.into_iter().sum::<Result<usize, String>>()?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "1000 instances, {cells} cells, 0 mismatches, {:.1} s",
        start.elapsed().as_secs_f64()
    ))
}

fn c6_dedup() -> Verdict {
    let spec = InstanceSpec {
        points: (2, 8),
        generators: (1, 3),
        ..InstanceSpec::default()
    };
    let mut cells = 0;
    for seed in 0..200u64 {
        let inst = random_instance(&spec.with_seed(seed)).map_err(|e| e.to_string())?;
        let space = inst.sys.space();
        let size = space.len();
        let gs = graphs(&inst.sys);
        let closure = WordClosure::build(&inst.sys, Depth::Max(4)).map_err(|e| e.to_string())?;
        for n in 1..=4 {
            let words = word_images(&gs, n, size);
            for eps in space.grid() {
                for closed in [false, true] {
                    let near = |a: usize, b: usize| {
                        if closed {
                            space.dist(a, b) <= eps
                        } else {
                            space.dist(a, b) < eps
                        }
                    };
                    for x in 0..size {
                        let raw = PointSet::from_indices(
                            size,
                            (0..size).filter(|&y| {
                                words.iter().all(|w| match (w[x], w[y]) {
                                    (Some(u), Some(v)) => near(u, v),
                                    _ => true,
                                })
                            }),
                        );
                        let got = dyn_ball(&closure, x, n, eps, closed)
                            .map_err(|e| e.to_string())?
                            .members;
                        ensure(got == raw, || {
                            format!("seed {seed}, x = {x}, n = {n}, ε = {}", q(eps))
                        })?;
                        cells += 1;
                    }
                }
            }
        }
    }
    Ok(format!("200 seeds, {cells} cells, 0 mismatches"))
}

fn c7_bal() -> Verdict {
    let insts = good_instances(500, false)?;
    let bal = statement("bal").unwrap();
    let mut substantive = 0;
    for inst in &insts {
        let space = inst.sys.space();
        let compact = inst.sys.compacted().map_err(|e| e.to_string())?;
        let (g1, g2) = (graphs(&inst.sys), core_graphs(&inst.sys));
        let mut strict = inst.sys.generators().iter().any(|g| {
            g.core
                .as_ref()
                .is_some_and(|k| k.len() < g.map.domain_size())
        });
        for eta in space.grid() {
            let (o1, o2) = (bowen_oracle(space, &g1, eta), bowen_oracle(space, &g2, eta));
            let (l1, l2) = (
                BowenBalls::new(&inst.sys, eta),
                BowenBalls::new(&compact, eta),
            );
            for x in 0..inst.points() {
                ensure(l1.ball(x) == o1[x] && l2.ball(x) == o2[x], || {
                    format!("seed {}: library balls differ", inst.seed)
                })?;
                ensure(o1[x].is_subset(&o2[x]), || {
                    format!("seed {}, x = {x}, η = {}", inst.seed, q(eta))
                })?;
                strict |= o1[x] != o2[x];
            }
        }
        ensure(
            !bal.evaluate(inst, &Kernel::default()).is_violation(),
            || format!("seed {}: probe", inst.seed),
        )?;
        substantive += strict as usize;
    }
    let cov = substantive as f64 / insts.len() as f64;
    ensure(cov >= 0.5, || {
        format!("substantive coverage {:.1}%", 100.0 * cov)
    })?;
    Ok(format!(
        "500 good instances, 0 violations, {:.1}% substantive",
        100.0 * cov
    ))
}

fn c8_lemma9() -> Verdict {
    let insts = good_instances(500, true)?;
    let probe = statement("lemma9").unwrap();
    let mut pairs = 0;
    for inst in &insts {
        let space = inst.sys.space();
        let rho = radius_oracle(&inst.sys).expect("finite ρ");
        let half = &rho / int(2);
        let b1 = bowen_oracle(space, &graphs(&inst.sys), &half);
        let b2 = bowen_oracle(space, &core_graphs(&inst.sys), &rho);
        for x0 in 0..inst.points() {
            for y0 in b1[x0].iter() {
                ensure(b1[x0].is_subset(&b2[y0]), || {
                    format!("seed {}, ρ = {}, x₀ = {x0}, y₀ = {y0}", inst.seed, q(&rho))
                })?;
                pairs += 1;
            }
        }
        ensure(
            !probe.evaluate(inst, &Kernel::default()).is_violation(),
            || format!("seed {}: probe", inst.seed),
        )?;
    }
    Ok(format!(
        "500 good instances with finite ρ, {pairs} pairs (x₀, y₀), 0 violations"
    ))
}

fn c9_qtp() -> Verdict {
    let insts = good_instances(500, true)?;
    let mut statuses = [0usize; 3];
    for inst in &insts {
        let space = inst.sys.space();
        let rho = radius_oracle(&inst.sys).expect("finite ρ");
        let half = &rho / int(2);
        let b2 = bowen_oracle(space, &core_graphs(&inst.sys), &rho);
        let b1 = bowen_oracle(space, &graphs(&inst.sys), &half);
        let atoms: Vec<usize> = (0..inst.points())
            .filter(|&x| !inst.mu.weights()[x].is_zero())
            .collect();
        let hyp = atoms.iter().all(|&x| mass(&inst.mu, &b2[x]).is_zero());
        let concl = (0..inst.points()).all(|x| mass(&inst.mu, &b1[x]).is_zero());
        let oracle = ImplicationStatus::from_parts(hyp, concl);
        let lib = theorem_qtp_check(&inst.mu, &inst.sys)
            .map_err(|e| e.to_string())?
            .status;
        ensure(lib == oracle, || {
            format!("seed {}: {lib:?} vs oracle {oracle:?}", inst.seed)
        })?;
        ensure(!lib.violated(), || {
            format!("seed {}: IMPLICATION-VIOLATED", inst.seed)
        })?;
        statuses[lib as usize] += 1;
    }
    let mut shift_holds = 0;
    for rho in [rat(1, 4), rat(1, 2), int(1), int(2)] {
        let (hyp, _, status) = qtp_shift(&rho).map_err(|e| e.to_string())?;
        ensure(!status.violated(), || {
            format!("shift ρ = {}: IMPLICATION-VIOLATED", q(&rho))
        })?;
        shift_holds += (hyp && status == ImplicationStatus::Holds) as usize;
    }
    ensure(shift_holds > 0, || {
        "the shift configuration never fired".into()
    })?;
    Ok(format!(
        "500 instances: {} vacuous, {} holds, 0 violated; shift with cores: {shift_holds}/4 substantive",
        statuses[ImplicationStatus::Vacuous as usize],
        statuses[ImplicationStatus::Holds as usize]
    ))
}

fn c10_ergodic() -> Verdict {
    let start = Instant::now();
    let spec = InstanceSpec {
        points: (2, 15),
        measure: MeasureFamily::Invariant,
        ..InstanceSpec::default()
    };
    let results: Vec<Result<bool, String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let inst = random_instance(&spec.with_seed(seed)).map_err(|e| e.to_string())?;
            let n = inst.points();
            let gs = graphs(&inst.sys);
            // A is invariant when every generator keeps A ∩ D_g inside A.
            let mut ergodic = true;
            for mask in 0u32..1 << n {
                let inside = |x: usize| mask >> x & 1 == 1;
                let invariant = gs
                    .iter()
                    .all(|g| (0..n).all(|x| !inside(x) || g[x].is_none_or(inside)));
                if invariant {
                    let m: Rational = (0..n)
                        .filter(|&x| inside(x))
                        .map(|x| inst.mu.weights()[x].clone())
                        .sum();
                    ergodic &= m.is_zero() || m.is_one();
                }
            }
            let fast = is_ergodic(&inst.mu, &inst.sys)
                .map_err(|e| e.to_string())?
                .ergodic;
            let slow = is_ergodic_by_subsets(&inst.mu, &inst.sys)
                .map_err(|e| e.to_string())?
                .ergodic;
            ensure(fast == ergodic && slow == ergodic, || {
                format!("seed {seed}: {fast}/{slow} vs oracle {ergodic}")
            })?;
            Ok(ergodic)
        })
        .collect();
    let verdicts = results.into_iter().collect::<Result<Vec<bool>, String>>()?;
    within(start, Duration::from_secs(120))?;
    let yes = verdicts.iter().filter(|&&e| e).count();
    Ok(format!(
        "100 seeds ({yes} ergodic, {} not), {:.1} s",
        100 - yes,
        start.elapsed().as_secs_f64()
    ))
}

fn c11_equicont() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [6, 12] {
        let sys = rotation(n);
        let space = sys.space();
        let cert = certify(&sys, Scope::Closure).map_err(|e| e.to_string())?;
        for e in &cert.entries {
            ensure(e.delta == Radius::Finite(e.eps.clone()), || {
                format!("Z/{n}: δ({}) = {:?}", q(&e.eps), e.delta)
            })?;
        }
        ensure(cert.entries.len() == space.grid().len(), || {
            format!("Z/{n}: modulus table incomplete")
        })?;
        for rho in space.grid() {
            let c = no_expansive_certificate_group(&sys, rho).map_err(|e| e.to_string())?;
            ensure(
                c.no_weakly_expansive && c.rows.iter().all(|r| r.holds),
                || format!("Z/{n}: ρ = {}", q(rho)),
            )?;
            // Rotations are isometries: Φ_ρ(x) is the closed metric ball.
            for row in &c.rows {
                ensure(row.bowen == space.metric_ball(row.x, rho, true), || {
                    format!("Z/{n}: Φ_{}({})", q(rho), row.x)
                })?;
                ensure(row.ball.is_subset(&row.bowen), || {
                    format!("Z/{n}: B ⊄ Φ at {}", row.x)
                })?;
            }
        }
        for _ in 0..100 {
            let mu = random_measure(&mut rng, n);
            for rho in space.grid() {
                let v = expansiveness_verdict(&mu, &sys, rho).map_err(|e| e.to_string())?;
                ensure(v.classification == Classification::Neither, || {
                    format!("Z/{n}: {}", v.classification.as_str())
                })?;
            }
        }
    }
    Ok("Z/6 and Z/12: δ(ε) = ε, inclusions at every ρ, 200 measures neither".into())
}

/// Maximal separated set by subset enumeration over an explicit word list.
fn separated_oracle(space: &FiniteMetricSpace, words: &[Graph], eps: &Rational) -> usize {
    let n = space.len();
    let sep = |a: usize, b: usize| {
        words
            .iter()
            .any(|w| matches!((w[a], w[b]), (Some(u), Some(v)) if space.dist(u, v) >= eps))
    };
    (1u32..1 << n)
        .filter(|mask| {
            let pts: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            pts.iter()
                .enumerate()
                .all(|(i, &a)| pts[i + 1..].iter().all(|&b| sep(a, b)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn c12_morphism() -> Verdict {
    let spec = InstanceSpec {
        points: (2, 7),
        ..InstanceSpec::default()
    };
    let n_max = 3;
    let results: Vec<Result<(), String>> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let inst = random_instance(&spec.with_seed(seed)).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..inst.points()).collect();
            perm.shuffle(&mut rng);
            let iso = SpaceIso::relabeling(inst.sys.space_arc().clone(), &perm)
                .map_err(|e| e.to_string())?;
            let conj = conjugate_system(&inst.sys, &iso).map_err(|e| e.to_string())?;
            let pushed = pushforward(&inst.mu, &iso);
            let (sx, sy) = (inst.sys.space(), conj.space());
            ensure(sx.grid() == sy.grid(), || {
                format!("seed {seed}: grids differ")
            })?;
            let grid = sx.grid().to_vec();
            let cmp = compare_entropy(&inst.sys, &iso, Some(&inst.mu), n_max)
                .map_err(|e| e.to_string())?;
            ensure(cmp.holds() && cmp.tables_equal == Some(true), || {
                format!("seed {seed}: {:?}", cmp.failures)
            })?;
            if grid.is_empty() {
                return Ok(());
            }
            let cx = WordClosure::build(&inst.sys, Depth::Max(n_max)).map_err(|e| e.to_string())?;
            let cy = WordClosure::build(&conj, Depth::Max(n_max)).map_err(|e| e.to_string())?;
            let tx = h_top_table(&cx, &grid, n_max).map_err(|e| e.to_string())?;
            let ty = h_top_table(&cy, &grid, n_max).map_err(|e| e.to_string())?;
            ensure(tx.rows == ty.rows, || {
                format!("seed {seed}: separated-count tables differ")
            })?;
            let gx = graphs(&inst.sys);
            for n in 1..=n_max {
                let words = word_images(&gx, n, inst.points());
                for eps in &grid {
                    let lib = separated_count(&cx, n, eps, SearchMode::Exact)
                        .map_err(|e| e.to_string())?
                        .lower;
                    let oracle = separated_oracle(sx, &words, eps);
                    ensure(lib == oracle, || {
                        format!("seed {seed}: s({n}, {}) = {lib} vs {oracle}", q(eps))
                    })?;
                }
            }
            for x in 0..inst.points() {
                let lx = local_entropy(&inst.mu, &cx, x, Side::Upper, &grid, n_max)
                    .map_err(|e| e.to_string())?;
                let ly = local_entropy(&pushed, &cy, iso.apply(x), Side::Upper, &grid, n_max)
                    .map_err(|e| e.to_string())?;
                ensure(lx.cells == ly.cells, || {
                    format!("seed {seed}: local entropy at {x}")
                })?;
            }
            for eta in &grid {
                let a =
                    expansiveness_verdict(&inst.mu, &inst.sys, eta).map_err(|e| e.to_string())?;
                let b = expansiveness_verdict(&pushed, &conj, eta).map_err(|e| e.to_string())?;
                ensure(a.classification == b.classification, || {
                    format!("seed {seed}: verdict at {}", q(eta))
                })?;
                let delta = transfer_expansive_constant(eta, &iso).map_err(|e| e.to_string())?;
                let c = expansiveness_verdict(&pushed, &conj, &delta).map_err(|e| e.to_string())?;
                let transferred = a.classification != Classification::Expansive
                    || c.classification == Classification::Expansive;
                ensure(transferred, || {
                    format!("seed {seed}: expansive at {} not transferred", q(eta))
                })?;
            }
            Ok(())
        })
        .collect();
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    // One non-isometric instance: all distances doubled.
    let inst = random_instance(&spec.with_seed(12)).map_err(|e| e.to_string())?;
    let iso = SpaceIso::scaling(inst.sys.space_arc().clone(), &int(2));
    ensure(!iso.is_isometry(), || "scaling is an isometry".into())?;
    let cmp = compare_entropy(&inst.sys, &iso, Some(&inst.mu), n_max).map_err(|e| e.to_string())?;
    ensure(
        cmp.forward_holds && cmp.backward_holds && cmp.balls_hold,
        || format!("scaled: {:?}", cmp.failures),
    )?;
    Ok(format!(
        "200 relabelings equal; scaled instance: modulus inequalities hold at {} cells",
        cmp.source.len()
    ))
}

fn c13_mutations() -> Verdict {
    let all = select_statements("all").map_err(|e| e.to_string())?;
    let spec = InstanceSpec::default();
    let mut caught = Vec::new();
    for m in Mutation::ALL {
        let reports =
            run_suite_with(&spec, 200, &all, &Kernel::mutated(m)).map_err(|e| e.to_string())?;
        let by: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.statement)
            .collect();
        ensure(!by.is_empty(), || format!("{m} escaped"))?;
        caught.push(format!("{m} by {}", by.join("+")));
    }
    Ok(caught.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 13] = [
        ("shift cylinder-measure identity", c1_cylinder_identity),
        ("shift entropy at n = 1000", c2_shift_entropy),
        ("shift homogeneity witness", c3_homogeneity),
        ("shift expansiveness", c4_shift_expansive),
        ("Borel-formula equivalence", c5_borel_formula),
        ("dedup soundness", c6_dedup),
        ("Φ¹ ⊆ Φ² conformance", c7_bal),
        ("Φ¹_{ρ/2}(x₀) ⊆ Φ²_ρ(y₀) conformance", c8_lemma9),
        ("weakly expansive ⇒ expansive conformance", c9_qtp),
        ("ergodicity oracle equivalence", c10_ergodic),
        ("rotation equicontinuity", c11_equicont),
        ("morphism invariance", c12_morphism),
        ("mutation detection", c13_mutations),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
