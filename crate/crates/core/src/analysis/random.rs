//! Seeded random systems for the lemma suite.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::system::{Builtin, MapSystem, SystemMap};
use crate::uniform::{Carrier, Entourage, Metric, PointData};
use crate::Exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFamily {
    Tables,
    Builtins,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub min_points: usize,
    pub max_points: usize,
    pub family: MapFamily,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub system: MapSystem<Exact>,
    pub entourage: Entourage<Exact>,
    pub description: String,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed of one trial; a trial is replayed from this value alone.
pub fn trial_seed(batch_seed: u64, lemma: &str, trial: usize) -> u64 {
    splitmix64(splitmix64(batch_seed ^ fnv1a(lemma.as_bytes())) ^ trial as u64)
}

fn q(a: i64, b: i64) -> Exact {
    Exact::from_ratio(a, b)
}

fn random_carrier(rng: &mut ChaCha8Rng, n: usize) -> Carrier<Exact> {
    match rng.gen_range(0..3) {
        0 => Carrier::interval_grid(n).expect("n >= 1"),
        1 => Carrier::circle_grid(n).expect("n >= 1"),
        _ => {
            let mut pool: Vec<i64> = (0..(2 * n as i64 + 1)).collect();
            pool.shuffle(rng);
            let mut coords: Vec<i64> = pool[..n].to_vec();
            coords.sort_unstable();
            Carrier::line(coords.into_iter().map(|c| q(c, 1)).collect()).expect("distinct points")
        }
    }
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    match rng.gen_range(0..4) {
        0 => {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        }
        1 => {
            let k = rng.gen_range(0..n);
            (0..n).map(|i| (i + k) % n).collect()
        }
        _ => (0..n).map(|_| rng.gen_range(0..n)).collect(),
    }
}

/// Threshold drawn from the carrier's own distances, biased towards small ones.
fn random_epsilon(rng: &mut ChaCha8Rng, carrier: &Carrier<Exact>) -> Exact {
    let keys = carrier.distinct_distance_keys();
    let u: f64 = rng.gen();
    let idx = ((u * u) * keys.len() as f64) as usize;
    keys[idx.min(keys.len() - 1)].clone()
}

fn random_builtin(rng: &mut ChaCha8Rng, n: usize) -> MapSystem<Exact> {
    let interval = || Carrier::interval_grid(n).expect("n >= 1");
    let circle = || Carrier::circle_grid(n).expect("n >= 1");
    let (carrier, map) = match rng.gen_range(0..5) {
        0 => (interval(), Builtin::Tent),
        1 => {
            let r = [q(4, 1), q(7, 2), q(3, 1)].choose(rng).expect("non-empty").clone();
            (interval(), Builtin::Logistic(r))
        }
        2 => {
            let s = if rng.gen_bool(0.5) {
                q(rng.gen_range(0..n as i64), n as i64)
            } else {
                q(rng.gen_range(1..7), 7)
            };
            (circle(), Builtin::Rotation(s))
        }
        3 => (interval(), Builtin::Identity),
        _ => (interval(), Builtin::Constant(q(rng.gen_range(0..=8), 8))),
    };
    MapSystem::builtin(carrier, map).expect("compatible builtin")
}

pub fn describe(system: &MapSystem<Exact>, entourage: &Entourage<Exact>) -> String {
    let carrier = system.carrier();
    let mut s = format!("N={} metric={}", carrier.len(), carrier.metric().name());
    if matches!(carrier.metric(), Metric::Euclidean) {
        let coords: Vec<String> = carrier
            .points()
            .iter()
            .map(|p| match p {
                PointData::Coords(c) => c[0].to_string(),
                PointData::Label(l) => l.clone(),
            })
            .collect();
        let _ = write!(s, " points=[{}]", coords.join(","));
    }
    match system.map() {
        SystemMap::Table(t) => {
            let _ = write!(s, " table={t:?}");
        }
        SystemMap::Builtin { map, iterations } => {
            let label = match map {
                Builtin::Logistic(r) => format!("logistic({r})"),
                Builtin::Rotation(t) => format!("rotation({t})"),
                Builtin::Constant(c) => format!("constant({c})"),
                other => other.name().to_string(),
            };
            let _ = write!(s, " map={label}");
            if *iterations > 1 {
                let _ = write!(s, "^{iterations}");
            }
        }
    }
    let _ = write!(s, " eps={}", super::epsilon_label(entourage));
    s
}

pub fn random_system(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> MapSystem<Exact> {
    let n = rng.gen_range(spec.min_points.max(1)..=spec.max_points.max(spec.min_points.max(1)));
    let builtin = match spec.family {
        MapFamily::Tables => false,
        MapFamily::Builtins => true,
        MapFamily::Mixed => rng.gen_bool(0.3),
    };
    if builtin {
        random_builtin(rng, n)
    } else {
        let carrier = random_carrier(rng, n);
        MapSystem::table(carrier, random_table(rng, n)).expect("valid table")
    }
}

/// A random system together with a metric entourage at one of its own
/// distances.
pub fn random_instance(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Instance {
    let system = random_system(rng, spec);
    let eps = random_epsilon(rng, system.carrier());
    let entourage = Entourage::metric(system.carrier(), eps).expect("non-negative");
    let description = describe(&system, &entourage);
    Instance {
        system,
        entourage,
        description,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn instances_are_reproducible() {
        let spec = RandomSpec {
            min_points: 1,
            max_points: 9,
            family: MapFamily::Mixed,
        };
        for seed in 0..40 {
            let a = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), &spec);
            let b = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), &spec);
            assert_eq!(a.description, b.description);
            assert!((1..=9).contains(&a.system.len()));
            assert!(a.entourage.is_symmetric());
        }
    }

    #[test]
    fn trial_seeds_differ_across_lemmas_and_trials() {
        assert_ne!(trial_seed(7, "P1", 0), trial_seed(7, "P1", 1));
        assert_ne!(trial_seed(7, "P1", 0), trial_seed(7, "L4", 0));
        assert_eq!(trial_seed(7, "P1", 3), trial_seed(7, "P1", 3));
    }
}
