//! Shift every departure onto a multiple of a quantum `D` while keeping each
//! agent's moves consistent with edge weights.
//!
//! Events are processed in order. Event `n`, whose agent previously departed
//! at event `m`, is placed at
//!
//! ```text
//! tau'  = tau(m) + D * ceil((w + r(n)) / D)       earliest feasible slot
//! tau'' = max(tau(n-1), tau')                      keep chronology
//! d'    = tau'' - t(n)
//! d(n)  = d' + D * floor(max(d_bar(n-1) - d', 0) / D)
//! tau(n) = t(n) + d(n),  rho(n) = d(n) - d(m) + r(n)
//! ```
//!
//! where `d_bar` is the running maximum of shifts. An agent's first departure
//! uses a virtual predecessor with `tau = d = 0` and `w` the time needed to
//! reach its first node (0 for agents starting on a node).

use std::io::Write;

use thiserror::Error;

use crate::environment::Environment;
use crate::strategy::{validate, AgentPosition, DepartureEvent, PatrolStrategy, ValidationReport};
use crate::time::Tick;

/// Shift bookkeeping for one discrete event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftRecord {
    pub d: Tick,
    pub d_bar: Tick,
    /// Index of the originating event in the input strategy.
    pub source_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteStrategy {
    /// Events carry `tau(i)` and `rho(i)`; `base.quantum == Some(quantum)`.
    pub base: PatrolStrategy,
    pub quantum: Tick,
    pub audit: Vec<ShiftRecord>,
}

#[derive(Debug, Error, PartialEq)]
pub enum DiscretizeError {
    #[error("discretization constant must be at least 1")]
    InvalidD,
    #[error("input strategy is invalid:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("event counts differ: source {source_len}, discrete {discrete_len}, audit {audit_len}")]
    LengthMismatch {
        source_len: usize,
        discrete_len: usize,
        audit_len: usize,
    },
}

/// Time from the start placement until the agent reaches its first node.
pub(crate) fn start_offset(env: &Environment, start: AgentPosition) -> Tick {
    match start {
        AgentPosition::OnEdge { from, to, elapsed } => env
            .weight(from, to)
            .map_or(Tick::ZERO, |w| w.saturating_sub(elapsed)),
        _ => Tick::ZERO,
    }
}

pub fn discretize(
    env: &Environment,
    strat: &PatrolStrategy,
    quantum: Tick,
) -> Result<DiscreteStrategy, DiscretizeError> {
    if quantum == Tick::ZERO {
        return Err(DiscretizeError::InvalidD);
    }
    let report = validate(env, strat);
    if !report.is_valid() {
        return Err(DiscretizeError::InvalidInput(report));
    }

    let dq = quantum.0 as i128;
    // Per agent: (node, tau, d) of its previous discrete event.
    let mut last: Vec<Option<(usize, i128, i128)>> = vec![None; strat.agents.len()];
    let mut events = Vec::with_capacity(strat.events.len());
    let mut audit = Vec::with_capacity(strat.events.len());
    let mut prev_tau: i128 = 0;
    let mut d_bar: i128 = 0;

    for (n, e) in strat.events.iter().enumerate() {
        let t = e.t.0 as i128;
        let r = e.r.0 as i128;
        let (tau, d, d_m) = if n == 0 {
            (0, 0, 0)
        } else {
            let (tau_m, d_m, w) = match last[e.agent.0] {
                Some((from, tau_m, d_m)) => {
                    let w = env
                        .weight(crate::environment::NodeId(from), e.node)
                        .expect("validated strategy uses existing edges");
                    (tau_m, d_m, w.0 as i128)
                }
                None => (0, 0, start_offset(env, strat.agents[e.agent.0].start).0 as i128),
            };
            let tau1 = tau_m + dq * (w + r + dq - 1).div_euclid(dq);
            let tau2 = prev_tau.max(tau1);
            let d1 = tau2 - t;
            let d = d1 + dq * (d_bar - d1).max(0).div_euclid(dq);
            (t + d, d, d_m)
        };
        debug_assert!(d >= 0 && tau >= prev_tau);
        d_bar = d_bar.max(d);
        let rho = d - d_m + r;
        events.push(DepartureEvent {
            t: Tick(tau as u64),
            r: Tick(rho as u64),
            node: e.node,
            agent: e.agent,
        });
        audit.push(ShiftRecord {
            d: Tick(d as u64),
            d_bar: Tick(d_bar as u64),
            source_index: n,
        });
        last[e.agent.0] = Some((e.node.0, tau, d));
        prev_tau = tau;
    }

    let final_tau = events.last().map_or(Tick::ZERO, |e| e.t);
    Ok(DiscreteStrategy {
        base: PatrolStrategy {
            agents: strat.agents.clone(),
            events,
            horizon: (strat.horizon + Tick(d_bar as u64)).max(final_tau),
            quantum: Some(quantum),
        },
        quantum,
        audit,
    })
}

impl DiscreteStrategy {
    /// Writes the audit trail as CSV: `index,t,tau,r,rho,d,d_bar,v,a`.
    pub fn write_audit_csv<W: Write>(
        &self,
        env: &Environment,
        source: &PatrolStrategy,
        out: W,
    ) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "t", "tau", "r", "rho", "d", "d_bar", "v", "a"])?;
        for (i, (e, rec)) in self.base.events.iter().zip(&self.audit).enumerate() {
            let src = &source.events[rec.source_index];
            w.write_record([
                i.to_string(),
                src.t.to_string(),
                e.t.to_string(),
                src.r.to_string(),
                e.r.to_string(),
                rec.d.to_string(),
                rec.d_bar.to_string(),
                env.name(e.node).to_owned(),
                self.base.agents[e.agent.0].name.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Which discrete-strategy property an event breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscretizationCheck {
    /// `tau(i)` is a multiple of `D`.
    QuantumAlignment,
    /// `rho(i) >= r(i)`.
    DwellNotShortened,
    /// `tau(i) >= tau(i-1)`.
    Chronology,
    /// `d(i) > d_bar(i) - D`.
    ShiftNearRunningMax,
    /// `d_bar` is the running maximum of `d`.
    RunningMax,
    /// `d(i) = tau(i) - t(i)`.
    ShiftMatchesTimes,
    /// `tau(n) = tau(m) + w + rho(n)` for consecutive events of one agent.
    AgentTravel,
    /// Same node and agent as the source event.
    SameVisit,
}

impl DiscretizationCheck {
    fn label(self) -> &'static str {
        match self {
            Self::QuantumAlignment => "quantum alignment",
            Self::DwellNotShortened => "dwell preservation",
            Self::Chronology => "chronology",
            Self::ShiftNearRunningMax => "shift lower bound",
            Self::RunningMax => "running-max shift",
            Self::ShiftMatchesTimes => "shift consistency",
            Self::AgentTravel => "agent travel time",
            Self::SameVisit => "visit sequence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizationViolation {
    pub index: usize,
    pub check: DiscretizationCheck,
    pub message: String,
}

/// Checks every property a discretization must have. Empty iff all hold.
pub fn check_discretization(
    env: &Environment,
    strat: &PatrolStrategy,
    disc: &DiscreteStrategy,
) -> Result<Vec<DiscretizationViolation>, DiscretizeError> {
    let src = &strat.events;
    let dst = &disc.base.events;
    if src.len() != dst.len() || dst.len() != disc.audit.len() {
        return Err(DiscretizeError::LengthMismatch {
            source_len: src.len(),
            discrete_len: dst.len(),
            audit_len: disc.audit.len(),
        });
    }
    let q = disc.quantum;
    let mut out = Vec::new();
    let mut flag = |index: usize, check: DiscretizationCheck| {
        out.push(DiscretizationViolation {
            index,
            check,
            message: format!("{} violated at event {}", check.label(), index + 1),
        });
    };

    let mut last: Vec<Option<usize>> = vec![None; disc.base.agents.len()];
    let mut running = Tick::ZERO;
    for (i, (s, e)) in src.iter().zip(dst).enumerate() {
        let rec = disc.audit[i];
        if s.node != e.node || s.agent != e.agent || rec.source_index != i {
            flag(i, DiscretizationCheck::SameVisit);
            continue;
        }
        if q == Tick::ZERO || !e.t.is_multiple_of(q) {
            flag(i, DiscretizationCheck::QuantumAlignment);
        }
        if e.r < s.r {
            flag(i, DiscretizationCheck::DwellNotShortened);
        }
        if i > 0 && e.t < dst[i - 1].t {
            flag(i, DiscretizationCheck::Chronology);
        }
        running = running.max(rec.d);
        if rec.d_bar != running {
            flag(i, DiscretizationCheck::RunningMax);
        }
        if rec.d + q <= rec.d_bar {
            flag(i, DiscretizationCheck::ShiftNearRunningMax);
        }
        if e.t.checked_sub(s.t) != Some(rec.d) {
            flag(i, DiscretizationCheck::ShiftMatchesTimes);
        }
        let a = e.agent.0;
        let expected = match last.get(a).copied().flatten() {
            Some(m) => env.weight(dst[m].node, e.node).map(|w| dst[m].t + w + e.r),
            None => disc
                .base
                .agents
                .get(a)
                .map(|ag| start_offset(env, ag.start) + e.r),
        };
        if expected != Some(e.t) {
            flag(i, DiscretizationCheck::AgentTravel);
        }
        if let Some(slot) = last.get_mut(a) {
            *slot = Some(i);
        }
    }
    Ok(out)
}
