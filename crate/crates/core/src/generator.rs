//! Greedy-random patrol: an online strategy in which an agent reaching a node
//! heads for the out-neighbour with the largest current idleness, and now and
//! then lingers for a random time before leaving.
//!
//! Randomness comes from a ChaCha8 stream seeded with `seed`. Stream order:
//! decisions are made in time order, simultaneous ones in agent order; every
//! decision except an agent's very first draws one Bernoulli(`gamma`) sample
//! (a single `u64`), and only when it fires one Exponential(`lambda`) sample
//! follows. First departures are never delayed so every agent leaves its
//! start at time 0.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use thiserror::Error;

use crate::environment::{Environment, NodeId};
use crate::strategy::{Agent, AgentId, AgentPosition, DepartureEvent, PatrolStrategy};
use crate::time::Tick;

/// Probability of a random delay used in the reference experiments.
pub const DEFAULT_GAMMA: f64 = 0.0001;
/// Rate of the exponential delay used in the reference experiments.
pub const DEFAULT_LAMBDA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRandomConfig {
    /// Probability that a departure is delayed.
    pub gamma: f64,
    /// Rate of the exponential delay.
    pub lambda: f64,
    pub seed: u64,
    /// Only departures strictly before the horizon are generated.
    pub horizon: Tick,
    /// Agent names with their start nodes; list order is agent order.
    pub starts: Vec<(String, NodeId)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("node {0} has no out-neighbour")]
    DeadEnd(String),
}

impl GreedyRandomConfig {
    fn check(&self, env: &Environment) -> Result<(), GeneratorError> {
        let bad = |m: String| Err(GeneratorError::InvalidConfig(m));
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad(format!("gamma {} outside [0, 1]", self.gamma));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda {} must be positive", self.lambda));
        }
        if self.horizon == Tick::ZERO {
            return bad("horizon must be positive".into());
        }
        if self.starts.is_empty() {
            return bad("no agents".into());
        }
        for (i, (name, node)) in self.starts.iter().enumerate() {
            if node.0 >= env.node_count() {
                return bad(format!("agent {name} starts at unknown node {node}"));
            }
            if self.starts[..i].iter().any(|(other, _)| other == name) {
                return bad(format!("duplicate agent {name}"));
            }
        }
        Ok(())
    }
}

/// Simulates greedy-random patrol on `env` until `cfg.horizon`.
pub fn greedy_random(
    env: &Environment,
    cfg: &GreedyRandomConfig,
) -> Result<PatrolStrategy, GeneratorError> {
    cfg.check(env)?;
    let n = env.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let delay = Exp::new(cfg.lambda).map_err(|e| GeneratorError::InvalidConfig(e.to_string()))?;

    let mut occupied = vec![0u32; n];
    let mut last_departure = vec![Tick::ZERO; n];
    let mut first_decision = vec![true; cfg.starts.len()];
    // (time, agent, node)
    let mut arrivals: BinaryHeap<Reverse<(Tick, usize, NodeId)>> = cfg
        .starts
        .iter()
        .enumerate()
        .map(|(a, &(_, v))| Reverse((Tick::ZERO, a, v)))
        .collect();
    // Delayed departures not yet applied to the node state: (time, node).
    let mut leaving: BinaryHeap<Reverse<(Tick, NodeId)>> = BinaryHeap::new();
    let mut events = Vec::new();
    let mut batch = Vec::with_capacity(cfg.starts.len());

    while let Some(&Reverse((now, _, _))) = arrivals.peek() {
        if now >= cfg.horizon {
            break;
        }
        batch.clear();
        while let Some(&Reverse((t, a, v))) = arrivals.peek() {
            if t != now {
                break;
            }
            arrivals.pop();
            batch.push((a, v));
        }
        while let Some(&Reverse((t, v))) = leaving.peek() {
            if t > now {
                break;
            }
            leaving.pop();
            occupied[v.0] -= 1;
            last_departure[v.0] = last_departure[v.0].max(t);
        }
        for &(_, v) in &batch {
            occupied[v.0] += 1;
        }

        for &(a, v) in &batch {
            let idleness = |k: NodeId| {
                if occupied[k.0] > 0 {
                    Tick::ZERO
                } else {
                    now - last_departure[k.0]
                }
            };
            let mut choice: Option<(NodeId, Tick, Tick)> = None;
            for &(k, w) in env.out_neighbors(v) {
                let i = idleness(k);
                if choice.is_none_or(|(_, best, _)| i > best) {
                    choice = Some((k, i, w));
                }
            }
            let (next, _, w) =
                choice.ok_or_else(|| GeneratorError::DeadEnd(env.name(v).to_owned()))?;

            let dwell = if std::mem::take(&mut first_decision[a]) {
                Tick::ZERO
            } else if rng.random_bool(cfg.gamma) {
                let x: f64 = delay.sample(&mut rng);
                Tick((1.0 + x).round() as u64)
            } else {
                Tick::ZERO
            };
            let depart = now + dwell;
            if depart >= cfg.horizon {
                continue;
            }
            events.push(DepartureEvent {
                t: depart,
                r: dwell,
                node: v,
                agent: AgentId(a),
            });
            if dwell == Tick::ZERO {
                occupied[v.0] -= 1;
                last_departure[v.0] = now;
            } else {
                leaving.push(Reverse((depart, v)));
            }
            arrivals.push(Reverse((depart + w, a, next)));
        }
    }

    events.sort_by_key(|e| (e.t, e.agent));
    Ok(PatrolStrategy {
        agents: cfg
            .starts
            .iter()
            .map(|(name, v)| Agent {
                name: name.clone(),
                start: AgentPosition::AtNode(*v),
            })
            .collect(),
        events,
        horizon: cfg.horizon,
        quantum: None,
    })
}
