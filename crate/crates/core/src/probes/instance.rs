use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::measure::FiniteMeasure;
use crate::pseudogroup::{GeneratingSystem, Generator, PartialMap};
use crate::random::{random_map, random_space, random_subset};
use crate::rational::rat;
use crate::space::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureFamily {
    Uniform,
    RandomRational,
    PointMass,
    /// Random weights constant on each orbit, so always invariant.
    Invariant,
    /// One of the above, chosen per seed.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub points: (usize, usize),
    pub generators: (usize, usize),
    pub domain_density: f64,
    pub core_density: f64,
    pub measure: MeasureFamily,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            seed: 0,
            points: (2, 7),
            generators: (1, 3),
            domain_density: 0.7,
            core_density: 0.7,
            measure: MeasureFamily::Mixed,
        }
    }
}

impl InstanceSpec {
    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.points;
        if lo == 0 || lo > hi {
            return Err(Error::input(format!(
                "point range {lo}..={hi} is empty or contains 0"
            )));
        }
        if self.generators.0 > self.generators.1 {
            return Err(Error::input("generator range is empty"));
        }
        for (name, d) in [("domain", self.domain_density), ("core", self.core_density)] {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::input(format!(
                    "{name} density {d} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub sys: GeneratingSystem,
    pub mu: FiniteMeasure,
}

/// A reproducible instance: the generators are symmetrized and completed
/// with the identity after sampling.
pub fn random_instance(spec: &InstanceSpec) -> Result<Instance> {
    random_instance_with(spec, &Kernel::default())
}

pub(crate) fn random_instance_with(spec: &InstanceSpec, kernel: &Kernel) -> Result<Instance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = rng.gen_range(spec.points.0..=spec.points.1);
    let count = rng.gen_range(spec.generators.0..=spec.generators.1);
    let space = Arc::new(random_space(&mut rng, n));
    let generators = (0..count)
        .map(|i| {
            let map = random_map(&mut rng, n, spec.domain_density);
            let core = random_subset(&mut rng, &map.domain(), spec.core_density);
            Generator::new(format!("g{i}"), map).with_core(core)
        })
        .collect();
    let sys = (kernel.symmetrize)(space, generators)?;
    let mu = random_measure(&mut rng, &sys, spec.measure);
    Ok(Instance {
        seed: spec.seed,
        sys,
        mu,
    })
}

fn normalized(weights: Vec<i64>) -> FiniteMeasure {
    let total: i64 = weights.iter().sum();
    FiniteMeasure::new(weights.iter().map(|&w| rat(w, total)).collect()).expect("normalized")
}

fn random_measure<R: Rng>(
    rng: &mut R,
    sys: &GeneratingSystem,
    family: MeasureFamily,
) -> FiniteMeasure {
    let n = sys.space().len();
    let family = match family {
        MeasureFamily::Mixed => match rng.gen_range(0..4) {
            0 => MeasureFamily::Uniform,
            1 => MeasureFamily::RandomRational,
            2 => MeasureFamily::PointMass,
            _ => MeasureFamily::Invariant,
        },
        f => f,
    };
    match family {
        MeasureFamily::Uniform => FiniteMeasure::uniform(n),
        MeasureFamily::PointMass => FiniteMeasure::point_mass(n, rng.gen_range(0..n)),
        MeasureFamily::RandomRational => {
            let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..5)).collect();
            if w.iter().all(|&v| v == 0) {
                w[rng.gen_range(0..n)] = 1;
            }
            normalized(w)
        }
        MeasureFamily::Invariant | MeasureFamily::Mixed => {
            let orbits = sys.germ_relation().components();
            let mut per: Vec<i64> = orbits.iter().map(|_| rng.gen_range(0..3)).collect();
            if per.iter().all(|&v| v == 0) {
                let k = rng.gen_range(0..per.len());
                per[k] = 1;
            }
            // Orbit weight w spread evenly: lcm-free by scaling with all sizes.
            let scale: i64 = orbits.iter().map(|o| o.len() as i64).product();
            let mut w = vec![0i64; n];
            for (o, &p) in orbits.iter().zip(&per) {
                for x in o.iter() {
                    w[x] = p * scale / o.len() as i64;
                }
            }
            normalized(w)
        }
    }
}

impl Instance {
    pub fn points(&self) -> usize {
        self.sys.space().len()
    }

    /// The instance on the points `keep`, generators restricted to them.
    pub fn restricted(&self, keep: &[usize]) -> Result<Instance> {
        let space = Arc::new(self.sys.space().subspace(keep)?);
        let m = keep.len();
        let mut index = vec![usize::MAX; self.points()];
        for (i, &x) in keep.iter().enumerate() {
            index[x] = i;
        }
        let generators = self
            .sys
            .generators()
            .iter()
            .map(|g| {
                let pairs = g.map.pairs().filter(|&(x, y)| index[x] != usize::MAX && index[y] != usize::MAX ).map(|(x, y)| (index[x], index[y]));
                let map = PartialMap::from_pairs(m, m, pairs).expect("restriction of an injection");
                let core = g.core.as_ref().map(|k| {
                    PointSet::from_indices(
                        m,
                        k.iter()
                            .filter(|&x| index[x] != usize::MAX && map.defined_at(index[x]))
                            .map(|x| index[x]),
                    )
                });
                Generator {
                    name: g.name.clone(),
                    map,
                    core,
                }
            })
            .collect();
        let sys = GeneratingSystem::from_parts_unchecked(space, generators);
        let weights: Vec<_> = keep.iter().map(|&x| self.mu.weight(x).clone()).collect();
        let total: crate::rational::Rational = weights.iter().sum();
        let mu = if num_traits::Zero::is_zero(&total) {
            FiniteMeasure::uniform(m)
        } else {
            FiniteMeasure::new(weights.into_iter().map(|w| w / &total).collect())?
        };
        Ok(Instance {
            seed: self.seed,
            sys,
            mu,
        })
    }

    /// The instance without generator `i` (and without its inverse).
    pub fn without_generator(&self, i: usize) -> Option<Instance> {
        let gens = self.sys.generators();
        if gens[i].map.is_total_identity() {
            return None;
        }
        let inv = gens[i].map.invert();
        let kept: Vec<Generator> = gens
            .iter()
            .enumerate()
            .filter(|&(j, g)| j != i && (g.map != inv || g.map.is_total_identity()))
            .map(|(_, g)| g.clone())
            .collect();
        if kept.is_empty() {
            return None;
        }
        let sys = GeneratingSystem::from_parts_unchecked(self.sys.space_arc().clone(), kept);
        Some(Instance {
            seed: self.seed,
            sys,
            mu: self.mu.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::is_invariant_measure;

    #[test]
    fn deterministic_in_seed() {
        let spec = InstanceSpec {
            points: (5, 5),
            ..InstanceSpec::default()
        };
        let a = random_instance(&spec).unwrap();
        let b = random_instance(&spec).unwrap();
        assert_eq!(a.sys.generators(), b.sys.generators());
        assert_eq!(a.sys.space(), b.sys.space());
        assert_eq!(a.mu, b.mu);
        assert_eq!(format!("{:?}", a.sys), format!("{:?}", b.sys));
    }

    #[test]
    fn densities_one() {
        for seed in 0..20 {
            let spec = InstanceSpec {
                seed,
                domain_density: 1.0,
                core_density: 1.0,
                ..InstanceSpec::default()
            };
            let inst = random_instance(&spec).unwrap();
            assert!(inst.sys.generators().iter().all(|g| g.map.is_total()));
            assert!(inst.sys.goodness().unwrap().good);
            inst.sys.validate().unwrap();
        }
    }

    #[test]
    fn invariant_family_is_invariant() {
        for seed in 0..30 {
            let spec = InstanceSpec {
                seed,
                measure: MeasureFamily::Invariant,
                ..InstanceSpec::default()
            };
            let inst = random_instance(&spec).unwrap();
            assert!(is_invariant_measure(&inst.mu, &inst.sys).unwrap().invariant);
        }
    }

    #[test]
    fn infeasible_specs() {
        for spec in [
            InstanceSpec {
                points: (0, 3),
                ..InstanceSpec::default()
            },
            InstanceSpec {
                points: (4, 3),
                ..InstanceSpec::default()
            },
            InstanceSpec {
                core_density: 1.5,
                ..InstanceSpec::default()
            },
        ] {
            assert!(matches!(random_instance(&spec), Err(Error::Input(_))));
        }
    }

    #[test]
    fn restriction_keeps_the_axioms() {
        for seed in 0..20 {
            let inst = random_instance(&InstanceSpec::default().with_seed(seed)).unwrap();
            if inst.points() < 2 {
                continue;
            }
            let keep: Vec<usize> = (1..inst.points()).collect();
            let smaller = inst.restricted(&keep).unwrap();
            smaller.sys.validate().unwrap();
            assert_eq!(smaller.points(), inst.points() - 1);
        }
    }
}
