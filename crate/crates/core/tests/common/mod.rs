#![allow(dead_code)]

use patrol_core::environment::random_environment;
use patrol_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Scenario {
    pub env: Environment,
    pub strat: PatrolStrategy,
    pub d: Tick,
}

/// Random graph (5..=30 nodes), 1..=5 greedy-random agents, a random
/// horizon in `horizons` and a quantum from {1, 2, 3, 5, 7}.
pub fn scenario(seed: u64, gamma: f64, horizons: std::ops::RangeInclusive<u64>) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(5..=30usize);
    let degree = rng.random_range(1.5..3.5f64);
    let env = random_environment(n, degree, (Tick(1), Tick(20)), rng.random()).unwrap();
    let agents = rng.random_range(1..=5usize);
    let starts = (0..agents)
        .map(|a| (format!("a{}", a + 1), NodeId(rng.random_range(0..n))))
        .collect();
    let horizon = Tick(rng.random_range(horizons));
    let cfg = GreedyRandomConfig {
        gamma,
        lambda: 0.5,
        seed: rng.random(),
        horizon,
        starts,
    };
    let strat = greedy_random(&env, &cfg).unwrap();
    let d = Tick([1, 2, 3, 5, 7][rng.random_range(0..5)]);
    Scenario { env, strat, d }
}
