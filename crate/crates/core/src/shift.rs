//! The full two-sided binary shift `Σ = {0,1}^ℤ` with the pseudogroup
//! generated by `{σ, id, σ^{-1}}`, metric `d(x, y) = Σ_k |x_k − y_k| 2^{−|k|}`
//! and Bernoulli measures.
//!
//! Points are finitely supported over a constant background, which keeps
//! every computation exact.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{Classification, ImplicationStatus};
use crate::rational::{int, pow2_neg, rat, serialize_exact, to_f64, Rational};

/// `d(0^ℤ, 1^ℤ) = 1 + 2 Σ_{k≥1} 2^{−k}`.
pub const DIAMETER: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftPoint {
    lo: i64,
    window: Vec<u8>,
    background: u8,
}

fn check_symbol(b: u8) -> Result<u8> {
    if b > 1 {
        return Err(Error::input(format!("shift symbols are 0 and 1, got {b}")));
    }
    Ok(b)
}

impl ShiftPoint {
    /// The point with `window[i]` at position `lo + i` and `background`
    /// everywhere else.
    pub fn new(lo: i64, window: Vec<u8>, background: u8) -> Result<Self> {
        check_symbol(background)?;
        for &b in &window {
            check_symbol(b)?;
        }
        Ok(ShiftPoint {
            lo,
            window,
            background,
        })
    }

    pub fn constant(symbol: u8) -> Result<Self> {
        Self::new(0, Vec::new(), symbol)
    }

    /// Parses a string of `0`/`1` whose character `center` sits at position 0.
    pub fn parse(text: &str, center: usize, background: u8) -> Result<Self> {
        let window = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::input(format!("`{text}` is not a binary word"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if !window.is_empty() && center >= window.len() {
            return Err(Error::input(format!(
                "center {center} lies outside `{text}`"
            )));
        }
        Self::new(-(center as i64), window, background)
    }

    /// Uniformly random symbols on `[−k, k]` over a random background.
    pub fn random<R: Rng>(rng: &mut R, k: i64) -> Self {
        let window = (-k..=k).map(|_| rng.gen_range(0..2)).collect();
        ShiftPoint {
            lo: -k,
            window,
            background: rng.gen_range(0..2),
        }
    }

    pub fn background(&self) -> u8 {
        self.background
    }

    /// The smallest and largest explicitly stored positions.
    pub fn support(&self) -> (i64, i64) {
        (self.lo, self.lo + self.window.len() as i64 - 1)
    }

    pub fn symbol(&self, k: i64) -> u8 {
        let i = k - self.lo;
        if i >= 0 && (i as usize) < self.window.len() {
            self.window[i as usize]
        } else {
            self.background
        }
    }

    /// `σ^k(x)_j = x_{j+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        ShiftPoint {
            lo: self.lo - k,
            window: self.window.clone(),
            background: self.background,
        }
    }

    /// The point with the symbol at `k` flipped.
    pub fn flipped(&self, k: i64) -> Self {
        let (lo, hi) = self.support();
        let (a, b) = (lo.min(k), hi.max(k));
        let window = (a..=b)
            .map(|j| {
                if j == k {
                    1 - self.symbol(j)
                } else {
                    self.symbol(j)
                }
            })
            .collect();
        ShiftPoint {
            lo: a,
            window,
            background: self.background,
        }
    }

    pub fn block(&self, a: i64, b: i64) -> Vec<u8> {
        (a..=b).map(|k| self.symbol(k)).collect()
    }
}

impl fmt::Display for ShiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.support();
        let (a, b) = (lo.min(0), hi.max(0));
        write!(f, "…{}", self.background)?;
        for k in a..=b {
            if k == 0 {
                write!(f, "[{}]", self.symbol(k))?;
            } else {
                write!(f, "{}", self.symbol(k))?;
            }
        }
        write!(f, "{}…", self.background)
    }
}

/// Exact `d(x, y)`, including the geometric tails when the backgrounds differ.
pub fn shift_distance(x: &ShiftPoint, y: &ShiftPoint) -> Rational {
    let (xa, xb) = x.support();
    let (ya, yb) = y.support();
    let lo = xa.min(ya).min(0);
    let hi = xb.max(yb).max(0);
    let mut d = Rational::zero();
    for k in lo..=hi {
        if x.symbol(k) != y.symbol(k) {
            d += pow2_neg(k.unsigned_abs());
        }
    }
    if x.background != y.background {
        // Σ_{k>hi} 2^{−k} = 2^{−hi} and Σ_{k<lo} 2^{k} = 2^{lo}.
        d += pow2_neg(hi.unsigned_abs()) + pow2_neg(lo.unsigned_abs());
    }
    d
}

/// A cylinder set: the points carrying `block` on `[lo, lo + len − 1]`.
/// The empty block is the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub lo: i64,
    pub block: Vec<u8>,
}

impl Cylinder {
    pub fn whole() -> Self {
        Cylinder {
            lo: 0,
            block: Vec::new(),
        }
    }

    /// The cylinder of `x` on `[−r, r]`.
    pub fn centered(x: &ShiftPoint, r: i64) -> Self {
        Cylinder {
            lo: -r,
            block: x.block(-r, r),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.block.is_empty()
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The interval `[a, b]`, if the cylinder is proper.
    pub fn interval(&self) -> Option<(i64, i64)> {
        (!self.is_whole()).then(|| (self.lo, self.lo + self.block.len() as i64 - 1))
    }

    pub fn contains(&self, x: &ShiftPoint) -> bool {
        self.block
            .iter()
            .enumerate()
            .all(|(i, &b)| x.symbol(self.lo + i as i64) == b)
    }

    /// `σ^{-k}` of the cylinder, i.e. the same block moved by `−k`.
    pub fn shifted(&self, k: i64) -> Self {
        Cylinder {
            lo: self.lo - k,
            block: self.block.clone(),
        }
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset(&self, other: &Cylinder) -> bool {
        let Some((a, b)) = other.interval() else {
            return true;
        };
        let Some((c, d)) = self.interval() else {
            return false;
        };
        c <= a
            && b <= d
            && other
                .block
                .iter()
                .enumerate()
                .all(|(i, &s)| self.block[(a - c) as usize + i] == s)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.interval() {
            None => write!(f, "Σ"),
            Some((a, b)) => {
                let word: String = self.block.iter().map(|b| char::from(b'0' + b)).collect();
                write!(f, "[{word}] on [{a}, {b}]")
            }
        }
    }
}

/// The Bernoulli measure giving symbol 0 probability `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliSpec {
    p: Rational,
}

impl BernoulliSpec {
    pub fn new(p: Rational) -> Result<Self> {
        if p <= Rational::zero() || p >= Rational::one() {
            return Err(Error::Measure(format!(
                "Bernoulli parameter must lie in (0, 1), got {p}"
            )));
        }
        Ok(BernoulliSpec { p })
    }

    pub fn fair() -> Self {
        BernoulliSpec { p: rat(1, 2) }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn is_fair(&self) -> bool {
        self.p == rat(1, 2)
    }

    pub fn prob(&self, symbol: u8) -> Rational {
        if symbol == 0 {
            self.p.clone()
        } else {
            Rational::one() - &self.p
        }
    }
}

/// `p^{#0} (1 − p)^{#1}` over the block.
pub fn cylinder_measure(c: &Cylinder, spec: &BernoulliSpec) -> Rational {
    let zeros = c.block.iter().filter(|&&b| b == 0).count();
    let ones = c.block.len() - zeros;
    if spec.is_fair() {
        return pow2_neg(c.block.len() as u64);
    }
    num_traits::pow(spec.prob(0), zeros) * num_traits::pow(spec.prob(1), ones)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowMode {
    /// `s = min{m ≥ 0 : 2^{−m} < ε}`.
    Dyadic,
    /// The smallest `m` whose tail mass `Σ_{|k|>m} 2^{−|k|} = 2^{1−m}` is `≤ ε`,
    /// so that agreement on `[−m, m]` forces `d ≤ ε`.
    Exact,
}

fn positive(eps: &Rational) -> Result<()> {
    if eps <= &Rational::zero() {
        return Err(Error::input(format!("ε must be positive, got {eps}")));
    }
    Ok(())
}

fn first_m(pred: impl Fn(&Rational) -> bool) -> u64 {
    (0..)
        .find(|&m| pred(&pow2_neg(m)))
        .expect("dyadics tend to zero")
}

pub fn window_radius(eps: &Rational, mode: WindowMode) -> Result<u64> {
    positive(eps)?;
    Ok(match mode {
        WindowMode::Dyadic => first_m(|t| t < eps),
        WindowMode::Exact => first_m(|t| &(t * int(2)) <= eps),
    })
}

/// The largest `m` with `2^{−m} > ε`: agreement on `[−(n+m), n+m]` is
/// forced in `B_n(x, ε)`. `None` when `ε ≥ 1`.
fn forced_radius(eps: &Rational) -> Option<u64> {
    (eps < &Rational::one()).then(|| first_m(|t| t <= eps) - 1)
}

/// The dynamical ball `B_n(x, ε)` in the cylinder form
/// `[x_{−(n+s)}, …, x_{n+s}]` with the window radius `s`.
pub fn dyn_ball_cylinder(x: &ShiftPoint, n: u64, eps: &Rational) -> Result<Cylinder> {
    let s = window_radius(eps, WindowMode::Dyadic)?;
    Ok(Cylinder::centered(x, (n + s) as i64))
}

/// Cylinders bracketing the closed ball `B_n(x, ε) = {z : d(σ^k x, σ^k z) ≤ ε, |k| ≤ n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallSandwich {
    pub inner: Cylinder,
    pub outer: Cylinder,
}

pub fn dyn_ball_sandwich(x: &ShiftPoint, n: u64, eps: &Rational) -> Result<BallSandwich> {
    let m_in = window_radius(eps, WindowMode::Exact)?;
    let outer = match forced_radius(eps) {
        Some(m) => Cylinder::centered(x, (n + m) as i64),
        None => Cylinder::whole(),
    };
    Ok(BallSandwich {
        inner: Cylinder::centered(x, (n + m_in) as i64),
        outer,
    })
}

/// A multiple `c · log 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Log2(#[serde(serialize_with = "serialize_exact")] pub Rational);

impl Log2 {
    pub fn value(&self) -> f64 {
        to_f64(&self.0) * std::f64::consts::LN_2
    }
}

impl fmt::Display for Log2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} log 2", crate::rational::format_rational(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftEntropy {
    pub n: u64,
    pub s: u64,
    pub cylinder_len: usize,
    #[serde(serialize_with = "serialize_exact")]
    pub measure: Rational,
    /// `−(1/n) log μ(B_n(x, ε))` as a multiple of `log 2` when `p = 1/2`.
    pub exact: Option<Log2>,
    pub value: f64,
    /// `n → ∞`: `2 log 2` for the fair measure.
    pub limit: Option<Log2>,
}

/// `−(1/n) log μ_p(B_n(x, ε))` over the cylinder form of the ball.
pub fn measure_entropy_shift(
    spec: &BernoulliSpec,
    x: &ShiftPoint,
    eps: &Rational,
    n: u64,
) -> Result<ShiftEntropy> {
    if n == 0 {
        return Err(Error::input("entropy rates need n ≥ 1"));
    }
    let s = window_radius(eps, WindowMode::Dyadic)?;
    let c = dyn_ball_cylinder(x, n, eps)?;
    let measure = cylinder_measure(&c, spec);
    let (exact, value, limit) = if spec.is_fair() {
        let coeff = Log2(rat((2 * (n + s) + 1) as i64, n as i64));
        let v = coeff.value();
        (Some(coeff), v, Some(Log2(int(2))))
    } else {
        let zeros = c.block.iter().filter(|&&b| b == 0).count() as f64;
        let ones = c.block.len() as f64 - zeros;
        let v = -(zeros * to_f64(spec.p()).ln() + ones * (1.0 - to_f64(spec.p())).ln()) / n as f64;
        (None, v, None)
    };
    Ok(ShiftEntropy {
        n,
        s,
        cylinder_len: c.len(),
        measure,
        exact,
        value,
        limit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftHtop {
    pub n: u64,
    #[serde(serialize_with = "serialize_exact")]
    pub eps: Rational,
    /// `s(n, ε) ≥ 2^{lower_exp}`.
    pub lower_exp: u64,
    /// `s(n, ε) ≤ 2^{upper_exp}`.
    pub upper_exp: u64,
    pub lower_rate: Option<Log2>,
    pub upper_rate: Option<Log2>,
    pub limit: Log2,
}

/// Bounds on the maximal `(n, ε)`-separated count. Points differing at a
/// single position of `[−(n+m), n+m]` with `2^{−m} ≥ ε` are separated; points
/// agreeing on `[−(n+m), n+m]` with `2^{1−m} < ε` never are.
pub fn htop_shift(eps: &Rational, n: u64) -> Result<ShiftHtop> {
    positive(eps)?;
    let (lower_exp, upper_exp) = if eps > &int(DIAMETER) {
        (0, 0)
    } else {
        let lower = if eps <= &Rational::one() {
            let m_lo = first_m(|t| t < eps) - 1;
            2 * (n + m_lo) + 1
        } else {
            1
        };
        let m_hi = first_m(|t| &(t * int(2)) < eps);
        (lower, 2 * (n + m_hi) + 1)
    };
    let rate = |e: u64| (n > 0).then(|| Log2(rat(e as i64, n as i64)));
    Ok(ShiftHtop {
        n,
        eps: eps.clone(),
        lower_exp,
        upper_exp,
        lower_rate: rate(lower_exp),
        upper_rate: rate(upper_exp),
        limit: Log2(int(2)),
    })
}

/// The generating set of the shift pseudogroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShiftGenerators {
    /// `{σ, id, σ^{-1}}`.
    Full,
    /// `{id}`: Bowen balls are closed metric balls.
    IdentityOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BowenShape {
    Singleton,
    /// `x` together with its single-symbol flips: countable.
    SingleFlips,
    /// Uncountable; no point of it differs from `x` on a whole window of
    /// length `2m + 1` centered in `[−n, n]`.
    Sparse {
        m: u64,
    },
    /// A closed metric ball, containing the cylinder on `[−m, m]`.
    MetricBall {
        m: u64,
    },
    Whole,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateStep {
    pub n: u64,
    #[serde(serialize_with = "serialize_exact")]
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftBowen {
    #[serde(serialize_with = "serialize_exact")]
    pub delta: Rational,
    pub shape: BowenShape,
    pub countable: bool,
    pub null: bool,
    /// Upper bounds `μ(Φ_δ(x)) ≤ bound` decreasing to 0 when null; a lower
    /// bound (as a single step) otherwise.
    pub certificate: Vec<CertificateStep>,
}

const CERTIFICATE_STEPS: [u64; 13] = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096];

/// `Φ_δ(x) = ⋂_n B_n(x, δ)` for the shift pseudogroup and `μ_p`.
pub fn bowen_ball_shift(
    gens: ShiftGenerators,
    spec: &BernoulliSpec,
    x: &ShiftPoint,
    delta: &Rational,
) -> Result<ShiftBowen> {
    positive(delta)?;
    let q_max = spec.prob(0).max(spec.prob(1));
    let q_min = spec.prob(0).min(spec.prob(1));
    let one = Rational::one();
    let whole = || ShiftBowen {
        delta: delta.clone(),
        shape: BowenShape::Whole,
        countable: false,
        null: false,
        certificate: vec![CertificateStep {
            n: 0,
            bound: one.clone(),
        }],
    };
    if delta >= &int(DIAMETER) {
        return Ok(whole());
    }
    if gens == ShiftGenerators::IdentityOnly {
        let m = window_radius(delta, WindowMode::Exact)?;
        let bound = cylinder_measure(&Cylinder::centered(x, m as i64), spec);
        return Ok(ShiftBowen {
            delta: delta.clone(),
            shape: BowenShape::MetricBall { m },
            countable: false,
            null: false,
            certificate: vec![CertificateStep { n: 0, bound }],
        });
    }
    let (shape, certificate): (BowenShape, Vec<CertificateStep>) = if delta < &one {
        let m = forced_radius(delta).expect("δ < 1");
        let steps = CERTIFICATE_STEPS
            .iter()
            .map(|&n| CertificateStep {
                n,
                bound: cylinder_measure(&Cylinder::centered(x, (n + m) as i64), spec),
            })
            .collect();
        (BowenShape::Singleton, steps)
    } else if delta == &one {
        // At most one difference on [−n, n]: (L + 1) q^{L−1} with L = 2n + 1.
        let steps = CERTIFICATE_STEPS
            .iter()
            .map(|&n| {
                let l = 2 * n + 1;
                CertificateStep {
                    n,
                    bound: int(l as i64 + 1) * num_traits::pow(q_max.clone(), (l - 1) as usize),
                }
            })
            .collect();
        (BowenShape::SingleFlips, steps)
    } else {
        // A full difference on [k − m, k + m] costs d(σ^k x, σ^k z) ≥ 3 − 2^{1−m}.
        let m = first_m(|t| &(int(DIAMETER) - t * int(2)) > delta);
        let window = 2 * m + 1;
        let miss = one.clone() - num_traits::pow(q_min.clone(), window as usize);
        let steps = CERTIFICATE_STEPS
            .iter()
            .map(|&n| {
                let windows = 2 * n / window + 1;
                CertificateStep {
                    n,
                    bound: num_traits::pow(miss.clone(), windows as usize),
                }
            })
            .collect();
        (BowenShape::Sparse { m }, steps)
    };
    Ok(ShiftBowen {
        delta: delta.clone(),
        countable: matches!(shape, BowenShape::Singleton | BowenShape::SingleFlips),
        shape,
        null: true,
        certificate,
    })
}

/// The verdict for `μ_p` at `δ`: every Bowen ball is null below the diameter
/// and the whole space from it on.
pub fn shift_expansiveness(gens: ShiftGenerators, delta: &Rational) -> Result<Classification> {
    let x = ShiftPoint::constant(0)?;
    let ball = bowen_ball_shift(gens, &BernoulliSpec::fair(), &x, delta)?;
    Ok(if ball.null {
        Classification::Expansive
    } else {
        Classification::Neither
    })
}

/// Whether every Bowen ball at `δ` is countable.
pub fn shift_countably_expansive(gens: ShiftGenerators, delta: &Rational) -> Result<bool> {
    let x = ShiftPoint::constant(0)?;
    Ok(bowen_ball_shift(gens, &BernoulliSpec::fair(), &x, delta)?.countable)
}

/// Exact invariance `μ(σ^{-k} C) = μ(C)` over the given cylinders and shifts.
pub fn invariant_on_cylinders(
    spec: &BernoulliSpec,
    cylinders: &[Cylinder],
    shifts: &[i64],
) -> bool {
    cylinders.iter().all(|c| {
        shifts
            .iter()
            .all(|&k| cylinder_measure(&c.shifted(k), spec) == cylinder_measure(c, spec))
    })
}

/// Mixing on cylinders: `μ(C ∩ σ^{-k} D) = μ(C) μ(D)` once the supports are
/// disjoint, which forces ergodicity of `μ_p`.
pub fn mixing_on_cylinders(spec: &BernoulliSpec, c: &Cylinder, d: &Cylinder) -> bool {
    let (Some((a, b)), Some((_, _))) = (c.interval(), d.interval()) else {
        return true;
    };
    let k = d.lo - b - 1;
    let moved = d.shifted(k);
    debug_assert!(moved.lo > b);
    let mut block = c.block.clone();
    block.extend_from_slice(&moved.block);
    let joint = Cylinder { lo: a, block };
    cylinder_measure(&joint, spec) == cylinder_measure(c, spec) * cylinder_measure(d, spec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftTheoremB {
    pub invariant: bool,
    pub ergodic: bool,
    /// `δ = ε`, `c = 1` over the tested tuples.
    pub homogeneous: bool,
    pub upper_entropy: Log2,
    pub conclusion: Classification,
    pub status: ImplicationStatus,
}

/// Invariant, ergodic, homogeneous and positive entropy: `μ_p` must be
/// weakly expansive, and the exact verdict is expansive at every `δ < 3`.
pub fn theorem_b_shift(
    spec: &BernoulliSpec,
    delta: &Rational,
    samples: &[(ShiftPoint, ShiftPoint, u64, Rational)],
) -> Result<ShiftTheoremB> {
    let probes: Vec<Cylinder> = samples
        .iter()
        .flat_map(|(x, _, n, eps)| dyn_ball_cylinder(x, *n, eps))
        .collect();
    let invariant = invariant_on_cylinders(spec, &probes, &[-3, -1, 1, 2, 7]);
    let ergodic = probes
        .windows(2)
        .all(|w| mixing_on_cylinders(spec, &w[0], &w[1]));
    let mut homogeneous = true;
    for (x, y, n, eps) in samples {
        homogeneous &= homogeneity_witness_holds(spec, x, y, *n, eps)?;
    }
    let upper_entropy = measure_entropy_shift(spec, &ShiftPoint::constant(0)?, &rat(1, 100), 1)?
        .limit
        .unwrap_or(Log2(Rational::zero()));
    let conclusion = shift_expansiveness(ShiftGenerators::Full, delta)?;
    let hypothesis = invariant && ergodic && homogeneous && upper_entropy.0 > Rational::zero();
    Ok(ShiftTheoremB {
        invariant,
        ergodic,
        homogeneous,
        upper_entropy,
        conclusion,
        status: ImplicationStatus::from_parts(hypothesis, conclusion.is_weakly_expansive()),
    })
}

/// `μ(B_n(y, δ)) ≤ c μ(B_n(x, ε))` with `δ = ε` and `c = 1`.
pub fn homogeneity_witness_holds(
    spec: &BernoulliSpec,
    x: &ShiftPoint,
    y: &ShiftPoint,
    n: u64,
    eps: &Rational,
) -> Result<bool> {
    let bx = cylinder_measure(&dyn_ball_cylinder(x, n, eps)?, spec);
    let by = cylinder_measure(&dyn_ball_cylinder(y, n, eps)?, spec);
    Ok(by <= bx)
}

/// Theorem qtp on the shift with cores `K_σ = K_{σ^{-1}} = Σ`: weakly
/// expansive at `ρ` for the compacted set forces expansive at `ρ/2`.
pub fn qtp_shift(rho: &Rational) -> Result<(bool, bool, ImplicationStatus)> {
    let hypothesis = shift_expansiveness(ShiftGenerators::Full, rho)?.is_weakly_expansive();
    let conclusion =
        shift_expansiveness(ShiftGenerators::Full, &(rho / int(2)))? == Classification::Expansive;
    Ok((
        hypothesis,
        conclusion,
        ImplicationStatus::from_parts(hypothesis, conclusion),
    ))
}
