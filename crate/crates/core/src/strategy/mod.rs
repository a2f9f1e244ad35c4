//! Patrol strategies: chronological departure events, validation against an
//! environment, and the idleness/position/cost evaluation engine.

use std::fmt;

use thiserror::Error;

use crate::environment::{Environment, NodeId};
use crate::time::Tick;

mod cost;
mod io;
mod timeline;

pub use cost::{
    check_constraints, cost, min_nonzero_idleness, ConstraintViolation, CostSpec, CostValue, Norm,
    Scale,
};
pub use io::{read_strategy, write_strategy, AgentDoc, StartDoc, StrategyHeader};
pub(crate) use io::{parse_position, position_doc};
pub use timeline::{
    idleness_at, positions_at, IdlenessVector, StateKey, StateSnapshot, Timeline,
};

/// Index of an agent in the strategy's agent list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Where an agent is at some instant.
///
/// The derived ordering (`AtNode < OnEdge < Departed`, then by fields) is the
/// canonical order used when comparing position multisets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentPosition {
    AtNode(NodeId),
    /// Mid-traversal, `0 < elapsed < w(from, to)`.
    OnEdge {
        from: NodeId,
        to: NodeId,
        elapsed: Tick,
    },
    /// Past the agent's final recorded departure; the destination is not
    /// part of the finite strategy.
    Departed { from: NodeId, elapsed: Tick },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub name: String,
    /// Placement at time 0: a node (arrived there at time 0) or a point on an
    /// edge.
    pub start: AgentPosition,
}

/// Agent `agent` leaves `node` at time `t` after dwelling there for `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepartureEvent {
    pub t: Tick,
    pub r: Tick,
    pub node: NodeId,
    pub agent: AgentId,
}

impl DepartureEvent {
    /// Arrival time `t - r`.
    #[inline]
    pub fn arrival(&self) -> Tick {
        self.t.saturating_sub(self.r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatrolStrategy {
    pub agents: Vec<Agent>,
    pub events: Vec<DepartureEvent>,
    pub horizon: Tick,
    /// Discretization constant when every departure is a multiple of it.
    pub quantum: Option<Tick>,
}

impl PatrolStrategy {
    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a.name == name).map(AgentId)
    }

    /// Event indices of each agent, in chronological order.
    pub fn events_by_agent(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.agents.len()];
        for (i, e) in self.events.iter().enumerate() {
            if let Some(list) = out.get_mut(e.agent.0) {
                list.push(i);
            }
        }
        out
    }

    /// Smallest over agents of the index of that agent's final event.
    ///
    /// Every event at or before this index precedes each agent's last
    /// recorded departure, so the state of the system is fully determined
    /// up to its time. `None` if some agent has no events.
    pub fn last_common_index(&self) -> Option<usize> {
        self.events_by_agent()
            .iter()
            .map(|list| list.last().copied())
            .min()
            .flatten()
    }

    /// Time up to which all agent positions are known.
    pub fn determined_until(&self) -> Option<Tick> {
        self.events_by_agent()
            .iter()
            .map(|list| list.last().map(|&i| self.events[i].t))
            .min()
            .flatten()
    }
}

/// What is wrong with a strategy, per event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    UnknownNode,
    UnknownAgent,
    FirstEvent { t: Tick, r: Tick },
    Chronology { previous: Tick, t: Tick },
    BeyondHorizon { t: Tick, horizon: Tick },
    DwellBeforeStart { t: Tick, r: Tick },
    MissingEdge { from: NodeId, to: NodeId },
    StartNode { expected: NodeId, found: NodeId },
    TravelTime { expected: Tick, found: Tick },
    BadStart,
    NeverDeparts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Zero-based event index, when the violation concerns an event.
    pub index: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("time {t} outside [0, {horizon}]")]
    OutOfWindow { t: Tick, horizon: Tick },
    #[error("empty window [{start}, {end}]")]
    EmptyWindow { start: Tick, end: Tick },
    #[error("no arrival instant carries a nonzero idleness value")]
    NoNonzeroIdleness,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid strategy:\n{0}")]
    Invalid(ValidationReport),
}

/// Checks every structural invariant of `strat` against `env`.
///
/// Messages number events from 1 in chronological order.
pub fn validate(env: &Environment, strat: &PatrolStrategy) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |index: Option<usize>, kind: ViolationKind, message: String| {
        violations.push(Violation {
            index,
            kind,
            message,
        });
    };
    let n_nodes = env.node_count();
    let n_agents = strat.agents.len();

    // Start placements; remembers the effective arrival offset at the first
    // node for on-edge starts.
    let mut start_target: Vec<Option<(NodeId, Tick)>> = Vec::with_capacity(n_agents);
    for agent in &strat.agents {
        let target = match agent.start {
            AgentPosition::AtNode(v) if v.0 < n_nodes => Some((v, Tick::ZERO)),
            AgentPosition::OnEdge { from, to, elapsed }
                if from.0 < n_nodes && to.0 < n_nodes =>
            {
                match env.weight(from, to) {
                    Some(w) if elapsed > Tick::ZERO && elapsed < w => Some((to, w - elapsed)),
                    _ => None,
                }
            }
            _ => None,
        };
        if target.is_none() {
            push(
                None,
                ViolationKind::BadStart,
                format!("agent {} has an invalid start placement", agent.name),
            );
        }
        start_target.push(target);
    }

    // Per agent: (node, departure time) of the previous event.
    let mut last: Vec<Option<(NodeId, Tick)>> = vec![None; n_agents];
    let mut prev_t: Option<Tick> = None;
    for (i, e) in strat.events.iter().enumerate() {
        let ord = i + 1;
        if i == 0 && (e.t != Tick::ZERO || e.r != Tick::ZERO) {
            push(
                Some(i),
                ViolationKind::FirstEvent { t: e.t, r: e.r },
                format!("first event must have t=0 and r=0, found t={} r={}", e.t, e.r),
            );
        }
        if let Some(p) = prev_t {
            if e.t < p {
                push(
                    Some(i),
                    ViolationKind::Chronology {
                        previous: p,
                        t: e.t,
                    },
                    format!("chronology violated at event {ord}: t={} precedes {p}", e.t),
                );
            }
        }
        prev_t = Some(e.t);
        if e.t > strat.horizon {
            push(
                Some(i),
                ViolationKind::BeyondHorizon {
                    t: e.t,
                    horizon: strat.horizon,
                },
                format!("event {ord} at t={} lies beyond horizon {}", e.t, strat.horizon),
            );
        }
        if e.r > e.t {
            push(
                Some(i),
                ViolationKind::DwellBeforeStart { t: e.t, r: e.r },
                format!("event {ord}: dwell {} exceeds departure time {}", e.r, e.t),
            );
        }
        if e.node.0 >= n_nodes {
            push(
                Some(i),
                ViolationKind::UnknownNode,
                format!("event {ord} references unknown node {}", e.node),
            );
            continue;
        }
        if e.agent.0 >= n_agents {
            push(
                Some(i),
                ViolationKind::UnknownAgent,
                format!("event {ord} references unknown agent #{}", e.agent.0),
            );
            continue;
        }
        let a = e.agent.0;
        let expected = match last[a] {
            Some((from, t_prev)) => match env.weight(from, e.node) {
                Some(w) => Some(t_prev + w + e.r),
                None => {
                    push(
                        Some(i),
                        ViolationKind::MissingEdge { from, to: e.node },
                        format!(
                            "event {ord}: agent {} moves {} -> {} without an edge",
                            strat.agents[a].name,
                            env.name(from),
                            env.name(e.node)
                        ),
                    );
                    None
                }
            },
            None => match start_target[a] {
                Some((start, _)) if start != e.node => {
                    push(
                        Some(i),
                        ViolationKind::StartNode {
                            expected: start,
                            found: e.node,
                        },
                        format!(
                            "event {ord}: agent {} first departs {} but starts toward {}",
                            strat.agents[a].name,
                            env.name(e.node),
                            env.name(start)
                        ),
                    );
                    None
                }
                Some((_, offset)) => Some(offset + e.r),
                None => None,
            },
        };
        if let Some(expected) = expected {
            if expected != e.t {
                push(
                    Some(i),
                    ViolationKind::TravelTime {
                        expected,
                        found: e.t,
                    },
                    format!("travel-time mismatch at event {ord}: expected t={expected}, found t={}", e.t),
                );
            }
        }
        last[a] = Some((e.node, e.t));
    }

    for (a, agent) in strat.agents.iter().enumerate() {
        if last[a].is_none() {
            push(
                None,
                ViolationKind::NeverDeparts,
                format!("agent {} never departs", agent.name),
            );
        }
    }
    ValidationReport { violations }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn consistent_tour_is_valid() {
        let env = two_node(3);
        let report = validate(&env, &tour(&[0, 3], 3));
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn travel_time_mismatch_names_event() {
        let env = two_node(3);
        let report = validate(&env, &tour(&[0, 4], 4));
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.index, Some(1));
        assert_eq!(
            v.kind,
            ViolationKind::TravelTime {
                expected: Tick(3),
                found: Tick(4)
            }
        );
        assert!(v.message.contains("event 2"), "{}", v.message);
        assert!(v.message.contains("expected t=3"), "{}", v.message);
    }

    #[test]
    fn out_of_order_events_flagged() {
        let env = two_node(3);
        let mut s = tour(&[0, 3, 6], 6);
        s.events.swap(1, 2);
        let report = validate(&env, &s);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::Chronology { .. }) && v.index == Some(2)));
    }

    #[test]
    fn start_and_agent_rules() {
        let env = two_node(3);
        let mut s = tour(&[0, 3], 3);
        s.agents[0].start = AgentPosition::AtNode(NodeId(1));
        assert!(validate(&env, &s)
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::StartNode { .. })));

        let mut s = tour(&[0, 3], 3);
        s.agents.push(Agent {
            name: "a2".into(),
            start: AgentPosition::AtNode(NodeId(1)),
        });
        assert!(validate(&env, &s)
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::NeverDeparts));

        let mut s = tour(&[0, 3], 3);
        s.events[0].t = Tick(1);
        s.events[0].r = Tick(1);
        assert!(validate(&env, &s)
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::FirstEvent { .. })));

        let s = tour(&[0, 3], 2);
        assert!(validate(&env, &s)
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::BeyondHorizon { .. })));
    }

    #[test]
    fn on_edge_start_offsets_first_departure() {
        let env = two_node(3);
        let s = PatrolStrategy {
            agents: vec![
                Agent {
                    name: "a1".into(),
                    start: AgentPosition::AtNode(NodeId(0)),
                },
                Agent {
                    name: "a2".into(),
                    start: AgentPosition::OnEdge {
                        from: NodeId(0),
                        to: NodeId(1),
                        elapsed: Tick(1),
                    },
                },
            ],
            events: vec![
                DepartureEvent {
                    t: Tick(0),
                    r: Tick(0),
                    node: NodeId(0),
                    agent: AgentId(0),
                },
                DepartureEvent {
                    t: Tick(3),
                    r: Tick(1),
                    node: NodeId(1),
                    agent: AgentId(1),
                },
            ],
            horizon: Tick(3),
            quantum: None,
        };
        assert!(validate(&env, &s).is_valid());
        let mut bad = s.clone();
        bad.events[1].t = Tick(4);
        assert!(!validate(&env, &bad).is_valid());
    }
}
