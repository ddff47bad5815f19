//! Strong isomorphisms between finite spaces, conjugated systems, and the
//! transfer of expansiveness and entropy along them.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::dynamics::{dyn_ball, separated_count, SearchMode};
use crate::error::{Error, Result};
use crate::measure::{local_entropy, FiniteMeasure, Side};
use crate::pseudogroup::{
    Depth, GeneratingSystem, Generator, GermRelation, PartialMap, WordClosure,
};
use crate::rational::{int, Rational};
use crate::space::{FiniteMetricSpace, PointSet, Radius};

/// A bijection `φ: X → Y` between finite metric spaces.
#[derive(Clone, Debug)]
pub struct SpaceIso {
    source: Arc<FiniteMetricSpace>,
    target: Arc<FiniteMetricSpace>,
    phi: Vec<usize>,
    inv: Vec<usize>,
}

impl SpaceIso {
    pub fn new(
        source: Arc<FiniteMetricSpace>,
        target: Arc<FiniteMetricSpace>,
        phi: Vec<usize>,
    ) -> Result<Self> {
        if phi.len() != source.len() || source.len() != target.len() {
            return Err(Error::input(format!(
                "a bijection needs equal sizes: source {}, target {}, map {}",
                source.len(),
                target.len(),
                phi.len()
            )));
        }
        let mut inv = vec![usize::MAX; phi.len()];
        for (x, &y) in phi.iter().enumerate() {
            if y >= target.len() || inv[y] != usize::MAX {
                return Err(Error::input(format!(
                    "φ is not a bijection at `{}`",
                    source.label(x)
                )));
            }
            inv[y] = x;
        }
        Ok(SpaceIso {
            source,
            target,
            phi,
            inv,
        })
    }

    pub fn identity(space: Arc<FiniteMetricSpace>) -> Self {
        let phi: Vec<usize> = (0..space.len()).collect();
        SpaceIso {
            source: space.clone(),
            target: space,
            inv: phi.clone(),
            phi,
        }
    }

    /// The isometric copy in which point `x` sits at index `perm[x]`.
    pub fn relabeling(source: Arc<FiniteMetricSpace>, perm: &[usize]) -> Result<Self> {
        let n = source.len();
        let probe = Self::new(source.clone(), source.clone(), perm.to_vec())?;
        let labels = (0..n)
            .map(|y| source.label(probe.inv[y]).to_string())
            .collect();
        let rows = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| source.dist(probe.inv[u], probe.inv[v]).clone())
                    .collect()
            })
            .collect();
        let target = Arc::new(FiniteMetricSpace::new(labels, rows)?);
        Self::new(source, target, perm.to_vec())
    }

    /// The identity onto a copy with all distances multiplied by `factor`.
    pub fn scaling(source: Arc<FiniteMetricSpace>, factor: &Rational) -> Self {
        let target = Arc::new(source.scaled(factor));
        let phi: Vec<usize> = (0..source.len()).collect();
        SpaceIso {
            source,
            target,
            inv: phi.clone(),
            phi,
        }
    }

    pub fn source(&self) -> &Arc<FiniteMetricSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteMetricSpace> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.phi[x]
    }

    pub fn apply_inverse(&self, y: usize) -> usize {
        self.inv[y]
    }

    pub fn map(&self) -> &[usize] {
        &self.phi
    }

    pub fn inverse(&self) -> SpaceIso {
        SpaceIso {
            source: self.target.clone(),
            target: self.source.clone(),
            phi: self.inv.clone(),
            inv: self.phi.clone(),
        }
    }

    pub fn as_partial_map(&self) -> PartialMap {
        PartialMap::from_pairs(
            self.phi.len(),
            self.phi.len(),
            self.phi.iter().copied().enumerate(),
        )
        .expect("bijection")
    }

    pub fn image(&self, set: &PointSet) -> PointSet {
        PointSet::from_indices(self.target.len(), set.iter().map(|x| self.phi[x]))
    }

    pub fn is_isometry(&self) -> bool {
        let n = self.phi.len();
        (0..n).all(|u| {
            (0..n).all(|v| self.source.dist(u, v) == self.target.dist(self.phi[u], self.phi[v]))
        })
    }

    /// Largest `δ` with `d(u, v) < δ ⇒ d(φu, φv) < ε`, i.e.
    /// `min{d(u, v) : d(φu, φv) ≥ ε}`.
    pub fn modulus(&self, eps: &Rational) -> Radius {
        modulus_between(&self.source, &self.target, &self.phi, eps)
    }

    /// The same for `φ^{-1}`.
    pub fn inverse_modulus(&self, eps: &Rational) -> Radius {
        modulus_between(&self.target, &self.source, &self.inv, eps)
    }

    /// Forward moduli over the target grid and inverse moduli over the
    /// source grid.
    pub fn modulus_tables(&self) -> (Vec<(Rational, Radius)>, Vec<(Rational, Radius)>) {
        let fwd = self
            .target
            .grid()
            .iter()
            .map(|e| (e.clone(), self.modulus(e)))
            .collect();
        let back = self
            .source
            .grid()
            .iter()
            .map(|e| (e.clone(), self.inverse_modulus(e)))
            .collect();
        (fwd, back)
    }
}

fn modulus_between(
    from: &FiniteMetricSpace,
    to: &FiniteMetricSpace,
    f: &[usize],
    eps: &Rational,
) -> Radius {
    let n = f.len();
    let mut best: Option<&Rational> = None;
    for u in 0..n {
        for v in 0..n {
            if u != v && to.dist(f[u], f[v]) >= eps {
                let d = from.dist(u, v);
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
    }
    match best {
        Some(d) => Radius::Finite(d.clone()),
        None => Radius::Unbounded,
    }
}

/// `φ ∘ g ∘ φ^{-1}`, defined on `φ(D_g)`.
pub fn conjugate_map(g: &PartialMap, iso: &SpaceIso) -> PartialMap {
    let phi = iso.as_partial_map();
    g.conjugate_by(&phi, &phi)
}

/// Conjugates every generator and core; names are kept.
pub fn conjugate_system(sys: &GeneratingSystem, iso: &SpaceIso) -> Result<GeneratingSystem> {
    if sys.space() != &**iso.source() {
        return Err(Error::input(
            "the isomorphism does not start at the system's space",
        ));
    }
    let generators = sys
        .generators()
        .iter()
        .map(|g| Generator {
            name: g.name.clone(),
            map: conjugate_map(&g.map, iso),
            core: g.core.as_ref().map(|k| iso.image(k)),
        })
        .collect();
    GeneratingSystem::new(iso.target().clone(), generators)
}

/// The germ relation pushed through `φ`.
pub fn image_relation(rel: &GermRelation, iso: &SpaceIso) -> PointSet {
    let n = rel.points();
    PointSet::from_indices(
        n * n,
        rel.pairs().map(|(x, y)| iso.apply(x) * n + iso.apply(y)),
    )
}

#[derive(Clone, Debug)]
pub struct FamilyConjugate {
    pub system: GeneratingSystem,
    /// The generated germ relation equals `{(φ_i x, φ_j y)}` over source germs.
    pub germs_match: bool,
    pub witness: Option<(usize, usize)>,
}

/// The system generated by all `φ_j ∘ f ∘ φ_i^{-1}` for a family of
/// partial bijections `φ_i: X → Y` covering both spaces.
pub fn conjugate_family(
    sys: &GeneratingSystem,
    target: Arc<FiniteMetricSpace>,
    family: &[PartialMap],
) -> Result<FamilyConjugate> {
    let (nx, ny) = (sys.space().len(), target.len());
    if family
        .iter()
        .any(|p| p.domain_len() != nx || p.codomain_len() != ny)
    {
        return Err(Error::input(
            "family maps must go from the system's space to the target",
        ));
    }
    let mut dom = PointSet::empty(nx);
    let mut ran = PointSet::empty(ny);
    for p in family {
        dom.union_with(&p.domain());
        ran.union_with(&p.range());
    }
    if let Some(x) = dom.complement().iter().next() {
        return Err(Error::input(format!(
            "family domains miss `{}`",
            sys.space().label(x)
        )));
    }
    if let Some(y) = ran.complement().iter().next() {
        return Err(Error::input(format!(
            "family ranges miss `{}`",
            target.label(y)
        )));
    }
    let mut seen = HashSet::new();
    let mut generators = Vec::new();
    for (i, pi) in family.iter().enumerate() {
        for (j, pj) in family.iter().enumerate() {
            for f in sys.generators() {
                let map = pi.invert().then(&f.map).then(pj);
                if !map.is_empty() && seen.insert(map.clone()) {
                    generators.push(Generator::new(format!("{}[{i},{j}]", f.name), map));
                }
            }
        }
    }
    let (system, _) = GeneratingSystem::symmetrize(target, generators)?;
    let source_rel = sys.germ_relation();
    let mut expected = PointSet::empty(ny * ny);
    for (x, y) in source_rel.pairs() {
        for pi in family {
            for pj in family {
                if let (Some(a), Some(b)) = (pi.get(x), pj.get(y)) {
                    expected.insert(a * ny + b);
                }
            }
        }
    }
    let got = system.germ_relation().as_set();
    let witness = got
        .union(&expected)
        .difference(&got.intersection(&expected))
        .iter()
        .next();
    Ok(FamilyConjugate {
        system,
        germs_match: witness.is_none(),
        witness: witness.map(|k| (k / ny, k % ny)),
    })
}

/// `φ_*μ`: the weight of `φ(x)` is `μ(x)`.
pub fn pushforward(mu: &FiniteMeasure, iso: &SpaceIso) -> FiniteMeasure {
    mu.permuted(iso.map())
}

/// A constant `δ` such that `μ` expansive at `η` forces `φ_*μ` expansive
/// at `δ`: the largest target grid value below the inverse modulus `δ′`
/// at `η`, or `δ′/2` when no grid value lies below it.
pub fn transfer_expansive_constant(eta: &Rational, iso: &SpaceIso) -> Result<Rational> {
    if eta <= &Rational::zero() {
        return Err(Error::input("η must be positive"));
    }
    let target = iso.target();
    Ok(match iso.inverse_modulus(eta) {
        Radius::Unbounded => target.diameter(),
        Radius::Finite(d) => match target.grid().iter().rev().find(|g| *g < &d) {
            Some(g) => g.clone(),
            None => d / int(2),
        },
    })
}

/// Separation scale on the other side: `min{d(φu, φv) : d(u, v) ≥ ε}`.
fn separation_image(
    from: &FiniteMetricSpace,
    to: &FiniteMetricSpace,
    f: &[usize],
    eps: &Rational,
) -> Option<Rational> {
    let n = f.len();
    (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && from.dist(u, v) >= eps)
        .map(|(u, v)| to.dist(f[u], f[v]).clone())
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedCell {
    pub eps: Rational,
    pub n: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyComparison {
    pub isometry: bool,
    pub source: Vec<SeparatedCell>,
    pub target: Vec<SeparatedCell>,
    /// `s_X(n, ε) ≤ s_Y(n, δ)` with `δ = min{d(φu, φv) : d(u, v) ≥ ε}`.
    pub forward_holds: bool,
    /// The same with the roles of the spaces exchanged.
    pub backward_holds: bool,
    /// `φ(B_n(x, δ)) ⊆ B_n(φx, ε)` with `δ` the forward modulus at `ε`.
    pub balls_hold: bool,
    /// For isometries: equal separated-count tables.
    pub tables_equal: Option<bool>,
    /// For isometries with a measure: equal local entropy tables at `x`, `φx`.
    pub local_equal: Option<bool>,
    pub failures: Vec<String>,
}

impl EntropyComparison {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the entropy transfer statements for a conjugated system at word
/// lengths `1..=n_max` over both distance grids.
pub fn compare_entropy(
    sys: &GeneratingSystem,
    iso: &SpaceIso,
    mu: Option<&FiniteMeasure>,
    n_max: usize,
) -> Result<EntropyComparison> {
    let conj = conjugate_system(sys, iso)?;
    let (sx, sy) = (iso.source().clone(), iso.target().clone());
    let cx = WordClosure::build(sys, Depth::Max(n_max))?;
    let cy = WordClosure::build(&conj, Depth::Max(n_max))?;
    let table = |wc: &WordClosure, grid: &[Rational]| -> Result<Vec<SeparatedCell>> {
        let mut out = Vec::new();
        for eps in grid {
            for n in 1..=n_max {
                let count = separated_count(wc, n, eps, SearchMode::Exact)?.lower;
                out.push(SeparatedCell {
                    eps: eps.clone(),
                    n,
                    count,
                });
            }
        }
        Ok(out)
    };
    let source = table(&cx, sx.grid())?;
    let target = table(&cy, sy.grid())?;
    let mut failures = Vec::new();
    let count_at = |wc: &WordClosure, n: usize, eps: &Rational| {
        separated_count(wc, n, eps, SearchMode::Exact).map(|s| s.lower)
    };
    let mut forward_holds = true;
    for cell in &source {
        if let Some(delta) = separation_image(&sx, &sy, iso.map(), &cell.eps) {
            let other = count_at(&cy, cell.n, &delta)?;
            if cell.count > other {
                forward_holds = false;
                failures.push(format!(
                    "s_X({}, {}) = {} > s_Y at {}",
                    cell.n, cell.eps, cell.count, delta
                ));
            }
        }
    }
    let inv = iso.inverse();
    let mut backward_holds = true;
    for cell in &target {
        if let Some(delta) = separation_image(&sy, &sx, inv.map(), &cell.eps) {
            let other = count_at(&cx, cell.n, &delta)?;
            if cell.count > other {
                backward_holds = false;
                failures.push(format!(
                    "s_Y({}, {}) = {} > s_X at {}",
                    cell.n, cell.eps, cell.count, delta
                ));
            }
        }
    }
    let mut balls_hold = true;
    for eps in sy.grid() {
        let Radius::Finite(delta) = iso.modulus(eps) else {
            continue;
        };
        for n in 1..=n_max {
            for x in 0..sx.len() {
                let bx = dyn_ball(&cx, x, n, &delta, false)?.members;
                let by = dyn_ball(&cy, iso.apply(x), n, eps, false)?.members;
                if !iso.image(&bx).is_subset(&by) {
                    balls_hold = false;
                    failures.push(format!(
                        "φ(B_{n}({}, {delta})) ⊄ B_{n}(φx, {eps})",
                        sx.label(x)
                    ));
                }
            }
        }
    }
    let isometry = iso.is_isometry();
    let tables_equal = isometry.then(|| source == target);
    if tables_equal == Some(false) {
        failures.push("isometric separated-count tables differ".into());
    }
    let local_equal = match (isometry, mu) {
        (true, Some(mu)) if !sx.grid().is_empty() => {
            let pushed = pushforward(mu, iso);
            let mut equal = true;
            for x in 0..sx.len() {
                let a = local_entropy(mu, &cx, x, Side::Upper, sx.grid(), n_max)?;
                let b = local_entropy(&pushed, &cy, iso.apply(x), Side::Upper, sy.grid(), n_max)?;
                let same = a.limits == b.limits
                    && a.cells
                        .iter()
                        .zip(&b.cells)
                        .all(|(p, q)| p.measure == q.measure && p.eps == q.eps);
                if !same {
                    failures.push(format!("local entropy tables differ at `{}`", sx.label(x)));
                }
                equal &= same;
            }
            Some(equal)
        }
        _ => None,
    };
    Ok(EntropyComparison {
        isometry,
        source,
        target,
        forward_holds,
        backward_holds,
        balls_hold,
        tables_equal,
        local_equal,
        failures,
    })
}
