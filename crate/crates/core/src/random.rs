//! Seeded random spaces and generating systems.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::pseudogroup::{GeneratingSystem, Generator, PartialMap};
use crate::rational::{rat, Rational};
use crate::space::{FiniteMetricSpace, PointSet};

/// A metric on `n` points: shortest paths over a complete graph with
/// random half-integer edge weights in `[1/2, 3]`.
pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut w = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(1..=6);
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    let rows: Vec<Vec<Rational>> = w
        .iter()
        .map(|row| row.iter().map(|&v| rat(v as i64, 2)).collect())
        .collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::new(labels, rows).expect("shortest-path metrics are valid")
}

/// A random injective partial map: a random permutation restricted to a
/// random domain, each point kept with probability `density`.
pub fn random_map<R: Rng>(rng: &mut R, n: usize, density: f64) -> PartialMap {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let keep: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
    PartialMap::from_pairs(n, n, keep.into_iter().map(|x| (x, perm[x])))
        .expect("restricted permutation")
}

/// A random subset of `set`, each point kept with probability `density`.
pub fn random_subset<R: Rng>(rng: &mut R, set: &PointSet, density: f64) -> PointSet {
    PointSet::from_indices(set.universe(), set.iter().filter(|_| rng.gen_bool(density)))
}

/// `count` random generators with cores, symmetrized.
pub fn random_system<R: Rng>(
    rng: &mut R,
    space: Arc<FiniteMetricSpace>,
    count: usize,
    domain_density: f64,
    core_density: f64,
) -> GeneratingSystem {
    let n = space.len();
    let generators = (0..count)
        .map(|i| {
            let map = random_map(rng, n, domain_density);
            let core = random_subset(rng, &map.domain(), core_density);
            Generator::new(format!("g{i}"), map).with_core(core)
        })
        .collect();
    GeneratingSystem::symmetrize(space, generators)
        .expect("random generators are valid")
        .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_in_seed() {
        let make = || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let space = Arc::new(random_space(&mut rng, 6));
            let sys = random_system(&mut rng, space.clone(), 3, 0.7, 0.5);
            (space, sys.generators().to_vec())
        };
        let (a, ga) = make();
        let (b, gb) = make();
        assert_eq!(a, b);
        assert_eq!(ga, gb);
    }

    #[test]
    fn full_density_gives_total_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let space = Arc::new(random_space(&mut rng, 5));
        let sys = random_system(&mut rng, space, 3, 1.0, 1.0);
        assert!(sys.generators().iter().all(|g| g.map.is_total()));
        assert!(sys.goodness().unwrap().good);
    }
}
