//! Recurrence detection and periodic stitching.
//!
//! A discrete strategy visits finitely many states at its departure instants
//! (idleness vector plus the multiset of agent positions). Once a state
//! repeats between departure instants `tau(p)` and `tau(q)`, the events
//! `p..q` can be replayed forever: after each period every agent takes over
//! the schedule of the agent that stood where it now stands, a relabeling
//! given by the permutation `chi`.
//!
//! Only departure instants where the whole state is determined by the
//! finite strategy are scanned (up to the earliest last departure of any
//! agent), and each distinct instant is considered once, at the first event
//! departing then.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::{start_offset, DiscreteStrategy};
use crate::environment::{Environment, NodeId};
use crate::strategy::{
    parse_position, position_doc, Agent, AgentId, AgentPosition, CostSpec, CostValue,
    DepartureEvent, IdlenessVector, PatrolStrategy, StartDoc, StateSnapshot, StrategyError,
    Timeline,
};
use crate::time::Tick;

#[derive(Debug, Error, PartialEq)]
pub enum RecurrenceError {
    #[error("no repeated state within the determined window")]
    NotFound,
    #[error("snapshots hold different agent positions")]
    NoBijection,
    #[error("invalid recurrence pair ({p}, {q}): {reason}")]
    InvalidPair { p: usize, q: usize, reason: String },
    #[error("agent {0} never departs in the periodic strategy")]
    StationaryAgent(String),
    #[error("malformed recurrent-strategy document: {0}")]
    Document(String),
}

/// Snapshots at each distinct departure instant of the determined window,
/// paired with the index of the first event departing at that instant.
pub fn departure_snapshots(env: &Environment, disc: &DiscreteStrategy) -> Vec<(usize, StateSnapshot)> {
    let strat = &disc.base;
    let Some(last) = strat.last_common_index() else {
        return Vec::new();
    };
    let tl = Timeline::new(env, strat);
    let mut out = Vec::new();
    for (i, e) in strat.events[..=last].iter().enumerate() {
        if i > 0 && strat.events[i - 1].t == e.t {
            continue;
        }
        out.push((
            i,
            StateSnapshot {
                time: e.t,
                idleness: tl.idleness_unchecked(e.t, false),
                positions: tl.positions_unchecked(e.t),
            },
        ));
    }
    out
}

/// First repeated state `(p, q)`: smallest `q`, then smallest `p`. Returns
/// event indices of `disc`.
pub fn find_recurrence(env: &Environment, disc: &DiscreteStrategy) -> Result<(usize, usize), RecurrenceError> {
    first_repeat(&departure_snapshots(env, disc)).ok_or(RecurrenceError::NotFound)
}

pub(crate) fn first_repeat(snapshots: &[(usize, StateSnapshot)]) -> Option<(usize, usize)> {
    let mut seen = HashMap::with_capacity(snapshots.len());
    for (index, snap) in snapshots {
        if let Some(&p) = seen.get(&snap.key()) {
            return Some((p, *index));
        }
        seen.insert(snap.key(), *index);
    }
    None
}

/// Periodic strategy from the earliest repeated state whose segment keeps
/// every agent moving. Repeats in which some agents would stand still
/// forever ([`RecurrenceError::StationaryAgent`]) are passed over; each later
/// instant is compared with the first occurrence of its state.
pub fn find_recurrent_strategy(
    env: &Environment,
    disc: &DiscreteStrategy,
) -> Result<RecurrentStrategy, RecurrenceError> {
    let snapshots = departure_snapshots(env, disc);
    let mut seen: HashMap<_, usize> = HashMap::with_capacity(snapshots.len());
    for (k, (q, snap)) in snapshots.iter().enumerate() {
        let Some(&j) = seen.get(&snap.key()) else {
            seen.insert(snap.key(), k);
            continue;
        };
        let (p, at_p) = &snapshots[j];
        let chi = derive_chi(at_p, snap)?;
        match build_recurrent(env, disc, *p, *q, &chi) {
            Err(RecurrenceError::StationaryAgent(_)) => continue,
            other => return other,
        }
    }
    Err(RecurrenceError::NotFound)
}

/// `chi[g]` is the agent standing at `tau(q)` where agent `g` stood at
/// `tau(p)`. Co-located agents are matched in ascending id order.
pub fn derive_chi(at_p: &StateSnapshot, at_q: &StateSnapshot) -> Result<Vec<AgentId>, RecurrenceError> {
    if at_p.positions.len() != at_q.positions.len() {
        return Err(RecurrenceError::NoBijection);
    }
    let sorted = |s: &StateSnapshot| {
        let mut v: Vec<_> = s.positions.iter().copied().zip(0..).collect::<Vec<(AgentPosition, usize)>>();
        v.sort_unstable();
        v
    };
    let (from, to) = (sorted(at_p), sorted(at_q));
    let mut chi = vec![AgentId(0); from.len()];
    for (&(pos_p, g), &(pos_q, h)) in from.iter().zip(&to) {
        if pos_p != pos_q {
            return Err(RecurrenceError::NoBijection);
        }
        chi[g] = AgentId(h);
    }
    Ok(chi)
}

/// A periodic strategy given by one segment of a discrete strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentStrategy {
    /// Agents with their positions at the segment start.
    pub agents: Vec<Agent>,
    /// Events `p..q`, times rebased so the segment starts at 0.
    pub segment: Vec<DepartureEvent>,
    pub period: Tick,
    pub quantum: Tick,
    pub chi: Vec<AgentId>,
    /// State at the segment start, with `time` 0.
    pub start: StateSnapshot,
    /// `tau(p)` in the discrete strategy.
    pub origin: Tick,
    pub p: usize,
    pub q: usize,
}

pub fn build_recurrent(
    env: &Environment,
    disc: &DiscreteStrategy,
    p: usize,
    q: usize,
    chi: &[AgentId],
) -> Result<RecurrentStrategy, RecurrenceError> {
    let invalid = |reason: &str| RecurrenceError::InvalidPair {
        p,
        q,
        reason: reason.to_owned(),
    };
    let strat = &disc.base;
    let events = &strat.events;
    let last = strat.last_common_index().ok_or_else(|| invalid("strategy has an idle agent"))?;
    if p >= q || q > last {
        return Err(invalid("indices out of order or beyond the determined window"));
    }
    if events[q].t == events[p].t {
        return Err(invalid("empty period"));
    }
    if (p > 0 && events[p - 1].t == events[p].t) || events[q - 1].t == events[q].t {
        return Err(invalid("not the first event at its instant"));
    }
    let tl = Timeline::new(env, strat);
    let snap = |t: Tick| StateSnapshot {
        time: t,
        idleness: tl.idleness_unchecked(t, false),
        positions: tl.positions_unchecked(t),
    };
    let (sp, sq) = (snap(events[p].t), snap(events[q].t));
    if !sp.same_state(&sq) {
        return Err(invalid("states differ"));
    }
    let n_agents = strat.agents.len();
    if chi.len() != n_agents {
        return Err(invalid("chi has the wrong length"));
    }
    let mut image = vec![false; n_agents];
    for (g, h) in chi.iter().enumerate() {
        match image.get_mut(h.0) {
            Some(seen) if !*seen && sp.positions[g] == sq.positions[h.0] => *seen = true,
            _ => return Err(invalid("chi does not map positions at p to positions at q")),
        }
    }

    let origin = events[p].t;
    let segment: Vec<_> = events[p..q]
        .iter()
        .map(|e| DepartureEvent {
            t: e.t - origin,
            ..*e
        })
        .collect();

    // Every chi-cycle needs at least one agent with segment events, or its
    // agents would never move again.
    let mut active = vec![false; n_agents];
    for e in &segment {
        active[e.agent.0] = true;
    }
    let mut visited = vec![false; n_agents];
    for a in 0..n_agents {
        if visited[a] {
            continue;
        }
        let (mut x, mut moves) = (a, false);
        while !visited[x] {
            visited[x] = true;
            moves |= active[x];
            x = chi[x].0;
        }
        if !moves {
            return Err(RecurrenceError::StationaryAgent(strat.agents[a].name.clone()));
        }
    }

    Ok(RecurrentStrategy {
        agents: strat
            .agents
            .iter()
            .zip(&sp.positions)
            .map(|(a, &start)| Agent {
                name: a.name.clone(),
                start,
            })
            .collect(),
        segment,
        period: events[q].t - origin,
        quantum: disc.quantum,
        chi: chi.to_vec(),
        start: StateSnapshot {
            time: Tick::ZERO,
            ..sp
        },
        origin,
        p,
        q,
    })
}

/// The first `k_periods` periods as a finite strategy over `[0, k L]`.
///
/// In block `k` the events of segment agent `a` are performed by
/// `chi^k(a)`. Dwells are recomputed from each agent's actual arrival, so
/// an agent taking over a schedule mid-dwell keeps its own arrival time.
pub fn unroll(env: &Environment, rec: &RecurrentStrategy, k_periods: usize) -> PatrolStrategy {
    let n_agents = rec.agents.len();
    let mut performer: Vec<usize> = (0..n_agents).collect();
    // Per agent: (node, departure) of the previous event.
    let mut last: Vec<Option<(NodeId, Tick)>> = vec![None; n_agents];
    let mut events = Vec::with_capacity(rec.segment.len() * k_periods);
    for block in 0..k_periods {
        let shift = rec.period * block as u64;
        for e in &rec.segment {
            let agent = performer[e.agent.0];
            let t = e.t + shift;
            let arrival = match last[agent] {
                Some((from, dep)) => dep + env.weight(from, e.node).unwrap_or(Tick::ZERO),
                None => start_offset(env, rec.agents[agent].start),
            };
            events.push(DepartureEvent {
                t,
                r: t.saturating_sub(arrival),
                node: e.node,
                agent: AgentId(agent),
            });
            last[agent] = Some((e.node, t));
        }
        for x in performer.iter_mut() {
            *x = rec.chi[*x].0;
        }
    }
    PatrolStrategy {
        agents: rec.agents.clone(),
        events,
        horizon: rec.period * k_periods.max(1) as u64,
        quantum: Some(rec.quantum),
    }
}

/// Steady-state cost: the cost over `[L, 2L]` of the unrolled strategy.
pub fn recurrent_cost(env: &Environment, rec: &RecurrentStrategy, spec: CostSpec) -> CostValue {
    recurrent_window_cost(env, rec, spec, 1)
}

/// Cost over period `j`, i.e. `[jL, (j+1)L]`, of the unrolled strategy.
pub fn recurrent_window_cost(
    env: &Environment,
    rec: &RecurrentStrategy,
    spec: CostSpec,
    j: usize,
) -> CostValue {
    let l = rec.period;
    let window = (l * j as u64, l * (j as u64 + 1));
    // Unroll until every agent's next departure after the window is known,
    // so all arrivals inside the window are recorded.
    let mut k = j + 2;
    let strat = loop {
        let s = unroll(env, rec, k);
        if s.determined_until().is_some_and(|t| t >= window.1) || k > j + 2 + rec.agents.len() {
            break s;
        }
        k += 1;
    };
    Timeline::new(env, &strat)
        .cost(spec, window)
        .expect("window lies inside the unrolled horizon")
}

impl From<StrategyError> for RecurrenceError {
    fn from(e: StrategyError) -> Self {
        RecurrenceError::Document(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrentDoc {
    pub period: u64,
    #[serde(rename = "D")]
    pub quantum: u64,
    /// Agent id to agent id.
    pub chi: serde_json::Map<String, serde_json::Value>,
    pub start_positions: Vec<StartPositionDoc>,
    pub segment: Vec<SegmentEventDoc>,
    /// Node id to idleness at the segment start.
    pub start_idleness: serde_json::Map<String, serde_json::Value>,
    pub p: usize,
    pub q: usize,
    pub origin: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPositionDoc {
    pub agent: String,
    pub position: StartDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEventDoc {
    pub t: u64,
    pub r: u64,
    pub v: String,
    pub a: String,
}

impl RecurrentStrategy {
    pub fn to_document(&self, env: &Environment) -> RecurrentDoc {
        let name = |a: AgentId| self.agents[a.0].name.clone();
        RecurrentDoc {
            period: self.period.0,
            quantum: self.quantum.0,
            chi: self
                .chi
                .iter()
                .enumerate()
                .map(|(g, &h)| (name(AgentId(g)), name(h).into()))
                .collect(),
            start_positions: self
                .agents
                .iter()
                .map(|a| StartPositionDoc {
                    agent: a.name.clone(),
                    position: position_doc(env, a.start),
                })
                .collect(),
            segment: self
                .segment
                .iter()
                .map(|e| SegmentEventDoc {
                    t: e.t.0,
                    r: e.r.0,
                    v: env.name(e.node).to_owned(),
                    a: name(e.agent),
                })
                .collect(),
            start_idleness: env
                .node_ids()
                .map(|v| (env.name(v).to_owned(), self.start.idleness.get(v).0.into()))
                .collect(),
            p: self.p,
            q: self.q,
            origin: self.origin.0,
        }
    }

    pub fn from_document(env: &Environment, doc: &RecurrentDoc) -> Result<Self, RecurrenceError> {
        let bad = |m: String| RecurrenceError::Document(m);
        let agents = doc
            .start_positions
            .iter()
            .map(|s| {
                Ok(Agent {
                    name: s.agent.clone(),
                    start: parse_position(env, &s.position).map_err(bad)?,
                })
            })
            .collect::<Result<Vec<_>, RecurrenceError>>()?;
        let agent = |name: &str| {
            agents
                .iter()
                .position(|a| a.name == name)
                .map(AgentId)
                .ok_or_else(|| bad(format!("unknown agent `{name}`")))
        };
        let mut chi = vec![None; agents.len()];
        for (g, h) in &doc.chi {
            let h = h.as_str().ok_or_else(|| bad("chi values must be agent ids".into()))?;
            chi[agent(g)?.0] = Some(agent(h)?);
        }
        let chi: Vec<AgentId> = chi
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| bad("chi must cover every agent".into()))?;
        let segment = doc
            .segment
            .iter()
            .map(|e| {
                Ok(DepartureEvent {
                    t: Tick(e.t),
                    r: Tick(e.r),
                    node: env.node_id(&e.v).ok_or_else(|| bad(format!("unknown node `{}`", e.v)))?,
                    agent: agent(&e.a)?,
                })
            })
            .collect::<Result<Vec<_>, RecurrenceError>>()?;
        let mut idleness = IdlenessVector::zeros(env.node_count());
        for (v, value) in &doc.start_idleness {
            let node = env.node_id(v).ok_or_else(|| bad(format!("unknown node `{v}`")))?;
            idleness.0[node.0] = Tick(value.as_u64().ok_or_else(|| bad("idleness must be an integer".into()))?);
        }
        if doc.quantum == 0 || doc.period == 0 {
            return Err(bad("period and D must be positive".into()));
        }
        Ok(RecurrentStrategy {
            start: StateSnapshot {
                time: Tick::ZERO,
                idleness,
                positions: agents.iter().map(|a| a.start).collect(),
            },
            agents,
            segment,
            period: Tick(doc.period),
            quantum: Tick(doc.quantum),
            chi,
            origin: Tick(doc.origin),
            p: doc.p,
            q: doc.q,
        })
    }

    pub fn write_json<W: Write>(&self, env: &Environment, out: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, &self.to_document(env))
    }
}
