//! JSON-lines strategy documents.
//!
//! Line 1 is a header `{"agents": [...], "D": int|null, "horizon": int}`;
//! every further line is one departure `{"t", "r", "v", "a"}` in
//! chronological order. A start is a node id, or for agents placed mid-edge
//! an object `{"from", "to", "elapsed"}`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::time::Tick;

use super::{Agent, AgentId, AgentPosition, DepartureEvent, PatrolStrategy, StrategyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyHeader {
    pub agents: Vec<AgentDoc>,
    #[serde(rename = "D")]
    pub quantum: Option<u64>,
    pub horizon: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub id: String,
    pub start: StartDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartDoc {
    Node(String),
    Edge {
        from: String,
        to: String,
        elapsed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    t: u64,
    r: u64,
    v: String,
    a: String,
}

pub(crate) fn position_doc(env: &Environment, pos: AgentPosition) -> StartDoc {
    match pos {
        AgentPosition::AtNode(v) => StartDoc::Node(env.name(v).to_owned()),
        AgentPosition::OnEdge { from, to, elapsed } => StartDoc::Edge {
            from: env.name(from).to_owned(),
            to: env.name(to).to_owned(),
            elapsed: elapsed.0,
        },
        // Not a valid start; written as its origin node so validation flags
        // the first departure instead of the writer failing.
        AgentPosition::Departed { from, .. } => StartDoc::Node(env.name(from).to_owned()),
    }
}

pub(crate) fn parse_position(
    env: &Environment,
    doc: &StartDoc,
) -> Result<AgentPosition, String> {
    let node = |name: &str| env.node_id(name).ok_or_else(|| format!("unknown node `{name}`"));
    Ok(match doc {
        StartDoc::Node(v) => AgentPosition::AtNode(node(v)?),
        StartDoc::Edge { from, to, elapsed } => AgentPosition::OnEdge {
            from: node(from)?,
            to: node(to)?,
            elapsed: Tick(*elapsed),
        },
    })
}

/// Parses a strategy document, resolving node ids against `env`.
///
/// Only the document structure is checked here; run
/// [`validate`](super::validate) for the strategy invariants.
pub fn read_strategy<R: BufRead>(env: &Environment, source: R) -> Result<PatrolStrategy, StrategyError> {
    let perr = |line: usize, message: String| StrategyError::Parse { line, message };
    let mut lines = source.lines().enumerate().filter(|(_, l)| match l {
        Ok(s) => !s.trim().is_empty(),
        Err(_) => true,
    });
    let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header line".into()))?;
    let header = header.map_err(|e| perr(1, e.to_string()))?;
    let header: StrategyHeader = serde_json::from_str(&header).map_err(|e| perr(1, e.to_string()))?;

    let mut agents = Vec::with_capacity(header.agents.len());
    for a in &header.agents {
        if agents.iter().any(|b: &Agent| b.name == a.id) {
            return Err(perr(1, format!("duplicate agent `{}`", a.id)));
        }
        let start = parse_position(env, &a.start).map_err(|m| perr(1, m))?;
        agents.push(Agent {
            name: a.id.clone(),
            start,
        });
    }

    let mut events = Vec::new();
    for (i, line) in lines {
        let no = i + 1;
        let line = line.map_err(|e| perr(no, e.to_string()))?;
        let doc: EventDoc = serde_json::from_str(&line).map_err(|e| perr(no, e.to_string()))?;
        let node = env
            .node_id(&doc.v)
            .ok_or_else(|| perr(no, format!("unknown node `{}`", doc.v)))?;
        let agent = agents
            .iter()
            .position(|a| a.name == doc.a)
            .map(AgentId)
            .ok_or_else(|| perr(no, format!("unknown agent `{}`", doc.a)))?;
        events.push(DepartureEvent {
            t: Tick(doc.t),
            r: Tick(doc.r),
            node,
            agent,
        });
    }

    Ok(PatrolStrategy {
        agents,
        events,
        horizon: Tick(header.horizon),
        quantum: header.quantum.map(Tick),
    })
}

pub fn write_strategy<W: Write>(
    env: &Environment,
    strat: &PatrolStrategy,
    mut out: W,
) -> std::io::Result<()> {
    let header = StrategyHeader {
        agents: strat
            .agents
            .iter()
            .map(|a| AgentDoc {
                id: a.name.clone(),
                start: position_doc(env, a.start),
            })
            .collect(),
        quantum: strat.quantum.map(|d| d.0),
        horizon: strat.horizon.0,
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for e in &strat.events {
        let doc = EventDoc {
            t: e.t.0,
            r: e.r.0,
            v: env.name(e.node).to_owned(),
            a: strat.agents[e.agent.0].name.clone(),
        };
        serde_json::to_writer(&mut out, &doc)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
