//! Workloads shared by the benchmarks in `benches/`.

use patrol_core::environment::geometric_environment;
use patrol_core::{greedy_random, Environment, GreedyRandomConfig, NodeId, PatrolStrategy};

/// A geometric graph patrolled by `agents` greedy-random agents up to
/// `horizon`, with agents spread evenly over the nodes.
pub fn workload(nodes: usize, agents: usize, horizon: u64, seed: u64) -> (Environment, PatrolStrategy) {
    let env = geometric_environment(nodes, 2.6, 400.0, seed).expect("valid parameters");
    let cfg = GreedyRandomConfig {
        gamma: patrol_core::generator::DEFAULT_GAMMA,
        lambda: patrol_core::generator::DEFAULT_LAMBDA,
        seed,
        horizon: patrol_core::Tick(horizon),
        starts: (0..agents)
            .map(|a| (format!("a{}", a + 1), NodeId(a * nodes / agents)))
            .collect(),
    };
    let strat = greedy_random(&env, &cfg).expect("generator runs on a strongly connected graph");
    (env, strat)
}
