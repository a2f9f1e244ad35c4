//! Indexed evaluation of idleness and agent positions.
//!
//! Each node keeps its dwell intervals `[arrival, departure]` sorted by
//! arrival together with a running maximum of departures. For a query time
//! `t`, the intervals starting at or before `t` either cover `t` (the node is
//! occupied, idleness 0) or all end before it, in which case the running
//! maximum is the latest departure. One binary search per node.

use crate::environment::{Environment, NodeId};
use crate::time::Tick;

use super::{AgentPosition, PatrolStrategy, StrategyError};

/// Idleness of every node, in global node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdlenessVector(pub Vec<Tick>);

impl IdlenessVector {
    pub fn zeros(n: usize) -> Self {
        IdlenessVector(vec![Tick::ZERO; n])
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Tick {
        self.0[v.0]
    }

    pub fn as_slice(&self) -> &[Tick] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Idleness vector plus agent positions at one instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSnapshot {
    pub time: Tick,
    pub idleness: IdlenessVector,
    /// Position of each agent, indexed by `AgentId`.
    pub positions: Vec<AgentPosition>,
}

/// Label-free form of a snapshot: two snapshots describe the same state iff
/// their keys are equal (idleness entrywise, positions as a multiset).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub idleness: Vec<Tick>,
    pub positions: Vec<AgentPosition>,
}

impl StateSnapshot {
    pub fn key(&self) -> StateKey {
        let mut positions = self.positions.clone();
        positions.sort_unstable();
        StateKey {
            idleness: self.idleness.0.clone(),
            positions,
        }
    }

    /// Same idleness vector and same position multiset.
    pub fn same_state(&self, other: &StateSnapshot) -> bool {
        self.idleness == other.idleness && {
            let mut a = self.positions.clone();
            let mut b = other.positions.clone();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        }
    }
}

/// Query index over one strategy.
#[derive(Debug, Clone)]
pub struct Timeline<'a> {
    env: &'a Environment,
    strat: &'a PatrolStrategy,
    /// Per node: dwell intervals sorted by arrival.
    visits: Vec<Vec<(Tick, Tick)>>,
    /// Per node: running max of departures over `visits`.
    latest: Vec<Vec<Tick>>,
    by_agent: Vec<Vec<usize>>,
    /// Sorted, deduplicated arrival instants.
    arrivals: Vec<Tick>,
}

impl<'a> Timeline<'a> {
    /// Indexes `strat`. The strategy is assumed to pass validation.
    pub fn new(env: &'a Environment, strat: &'a PatrolStrategy) -> Self {
        let n = env.node_count();
        let mut visits: Vec<Vec<(Tick, Tick)>> = vec![Vec::new(); n];
        let mut arrivals = Vec::with_capacity(strat.events.len());
        for e in &strat.events {
            let a = e.arrival();
            visits[e.node.0].push((a, e.t));
            arrivals.push(a);
        }
        let latest = visits
            .iter_mut()
            .map(|list| {
                list.sort_unstable();
                let mut run = Tick::ZERO;
                list.iter()
                    .map(|&(_, d)| {
                        run = run.max(d);
                        run
                    })
                    .collect()
            })
            .collect();
        arrivals.sort_unstable();
        arrivals.dedup();
        Timeline {
            env,
            strat,
            visits,
            latest,
            by_agent: strat.events_by_agent(),
            arrivals,
        }
    }

    pub fn env(&self) -> &'a Environment {
        self.env
    }

    pub fn strategy(&self) -> &'a PatrolStrategy {
        self.strat
    }

    /// Sorted distinct arrival instants.
    pub fn arrivals(&self) -> &[Tick] {
        &self.arrivals
    }

    pub fn check_window(&self, t: Tick) -> Result<(), StrategyError> {
        if t > self.strat.horizon {
            Err(StrategyError::OutOfWindow {
                t,
                horizon: self.strat.horizon,
            })
        } else {
            Ok(())
        }
    }

    /// Idleness of node `v` at `t`; with `left`, the limit from below, which
    /// ignores any visit that begins exactly at `t`.
    #[inline]
    pub fn node_idleness(&self, v: NodeId, t: Tick, left: bool) -> Tick {
        let list = &self.visits[v.0];
        let started = if left {
            list.partition_point(|&(a, _)| a < t)
        } else {
            list.partition_point(|&(a, _)| a <= t)
        };
        if started == 0 {
            return t;
        }
        let last_departure = self.latest[v.0][started - 1];
        if last_departure >= t {
            Tick::ZERO
        } else {
            t - last_departure
        }
    }

    /// Idleness vector at `t` without the horizon check.
    pub fn idleness_unchecked(&self, t: Tick, left: bool) -> IdlenessVector {
        IdlenessVector(
            self.env
                .node_ids()
                .map(|v| self.node_idleness(v, t, left))
                .collect(),
        )
    }

    pub fn idleness(&self, t: Tick) -> Result<IdlenessVector, StrategyError> {
        self.check_window(t)?;
        Ok(self.idleness_unchecked(t, false))
    }

    /// Idleness just before `t` (equal to the value at `t` when no agent
    /// arrives at `t`).
    pub fn idleness_left(&self, t: Tick) -> Result<IdlenessVector, StrategyError> {
        self.check_window(t)?;
        Ok(self.idleness_unchecked(t, true))
    }

    pub fn agent_position(&self, agent: usize, t: Tick) -> AgentPosition {
        let events = &self.strat.events;
        let list = &self.by_agent[agent];
        let next = list.partition_point(|&i| events[i].t < t);
        match list.get(next) {
            Some(&i) => {
                let e = &events[i];
                if e.arrival() <= t {
                    return AgentPosition::AtNode(e.node);
                }
                if next > 0 {
                    let prev = &events[list[next - 1]];
                    AgentPosition::OnEdge {
                        from: prev.node,
                        to: e.node,
                        elapsed: t - prev.t,
                    }
                } else {
                    // Still on the initial edge.
                    match self.strat.agents[agent].start {
                        AgentPosition::OnEdge { from, to, elapsed } => AgentPosition::OnEdge {
                            from,
                            to,
                            elapsed: elapsed + t,
                        },
                        other => other,
                    }
                }
            }
            None => match list.last() {
                Some(&i) => AgentPosition::Departed {
                    from: events[i].node,
                    elapsed: t - events[i].t,
                },
                None => self.strat.agents[agent].start,
            },
        }
    }

    pub fn positions(&self, t: Tick) -> Result<Vec<AgentPosition>, StrategyError> {
        self.check_window(t)?;
        Ok(self.positions_unchecked(t))
    }

    pub fn positions_unchecked(&self, t: Tick) -> Vec<AgentPosition> {
        (0..self.strat.agents.len())
            .map(|a| self.agent_position(a, t))
            .collect()
    }

    pub fn snapshot(&self, t: Tick) -> Result<StateSnapshot, StrategyError> {
        self.check_window(t)?;
        Ok(StateSnapshot {
            time: t,
            idleness: self.idleness_unchecked(t, false),
            positions: self.positions_unchecked(t),
        })
    }
}

/// Idleness vector of `strat` at time `t`.
pub fn idleness_at(
    env: &Environment,
    strat: &PatrolStrategy,
    t: Tick,
) -> Result<IdlenessVector, StrategyError> {
    Timeline::new(env, strat).idleness(t)
}

/// Position of every agent at time `t`, indexed by agent.
pub fn positions_at(
    env: &Environment,
    strat: &PatrolStrategy,
    t: Tick,
) -> Result<Vec<AgentPosition>, StrategyError> {
    Timeline::new(env, strat).positions(t)
}
