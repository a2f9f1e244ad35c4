//! Approximation factor and mechanical checks of the discretization and
//! recurrence bounds on concrete strategies.
//!
//! Comparisons are exact (rational arithmetic) whenever both costs carry an
//! exact value; otherwise a relative tolerance of `1e-9` is allowed.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::DiscreteStrategy;
use crate::environment::Environment;
use crate::recurrence::{recurrent_cost, RecurrentStrategy};
use crate::strategy::{min_nonzero_idleness, CostSpec, CostValue, PatrolStrategy, StrategyError, Timeline};
use crate::time::Tick;

pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonMode {
    /// `(1/w_min + 2/i_min) D`, the factor the bounds are proved with.
    Lemma3,
    /// `D / w_min`, the factor used in the reference experiments.
    Experiment,
}

impl EpsilonMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EpsilonMode::Lemma3 => "lemma3",
            EpsilonMode::Experiment => "experiment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonSpec {
    pub mode: EpsilonMode,
    pub quantum: Tick,
    pub w_min: Tick,
    /// Minimum nonzero idleness of the source strategy (lemma3 mode only).
    pub i_min: Option<Tick>,
}

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("lemma3 mode needs a positive minimum nonzero idleness")]
    MissingIMin,
    #[error("minimum edge weight must be positive")]
    ZeroWeight,
    #[error("index range ({0}, {1}) is not ordered or exceeds the strategy")]
    BadRange(usize, usize),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Exact approximation factor.
pub fn epsilon(spec: &EpsilonSpec) -> Result<Ratio<u128>, VerifyError> {
    if spec.w_min == Tick::ZERO {
        return Err(VerifyError::ZeroWeight);
    }
    let d = Ratio::from_integer(spec.quantum.0 as u128);
    let inv_w = Ratio::new(1, spec.w_min.0 as u128);
    match spec.mode {
        EpsilonMode::Experiment => Ok(inv_w * d),
        EpsilonMode::Lemma3 => match spec.i_min {
            Some(i) if i > Tick::ZERO => Ok((inv_w + Ratio::new(2, i.0 as u128)) * d),
            _ => Err(VerifyError::MissingIMin),
        },
    }
}

pub fn ratio_to_f64(r: Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Epsilon spec for `strat`, with the minimum nonzero idleness taken over
/// the window in which the strategy is fully determined. When no arrival
/// sees a nonzero idleness, lemma3 mode falls back to experiment mode.
pub fn epsilon_spec_for(
    env: &Environment,
    strat: &PatrolStrategy,
    mode: EpsilonMode,
    quantum: Tick,
) -> Result<EpsilonSpec, VerifyError> {
    let mut spec = EpsilonSpec {
        mode,
        quantum,
        w_min: env.min_edge_weight(),
        i_min: None,
    };
    if mode == EpsilonMode::Lemma3 {
        let end = strat.determined_until().unwrap_or(strat.horizon);
        match min_nonzero_idleness(env, strat, (Tick::ZERO, end)) {
            Ok(i) => spec.i_min = Some(i),
            Err(StrategyError::NoNonzeroIdleness) => spec.mode = EpsilonMode::Experiment,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The source strategy already breaks the constraint, so the bound does
    /// not apply.
    SourceInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs` over the reference value the bound scales.
    pub ratio: f64,
    pub pass: bool,
    pub verdict: Verdict,
    pub epsilon: f64,
    pub mode: EpsilonMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    /// Window of the bounded quantity.
    pub window: (Tick, Tick),
    /// Window of the reference quantity.
    pub reference_window: (Tick, Tick),
}

/// `lhs <= factor * reference`, exactly when possible.
fn within(lhs: &CostValue, reference: &CostValue, factor: Ratio<u128>) -> bool {
    match (lhs.exact, reference.exact) {
        (Some(l), Some(r)) => l <= r * factor,
        _ => lhs.value <= reference.value * ratio_to_f64(factor) * (1.0 + FLOAT_TOLERANCE),
    }
}

fn ratio_of(lhs: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        lhs / reference
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

#[allow(clippy::too_many_arguments)]
fn report(
    name: &str,
    lhs: &CostValue,
    reference: &CostValue,
    factor: Ratio<u128>,
    eps: Ratio<u128>,
    mode: EpsilonMode,
    window: (Tick, Tick),
    reference_window: (Tick, Tick),
) -> BoundReport {
    let pass = within(lhs, reference, factor);
    BoundReport {
        name: name.to_owned(),
        lhs: lhs.value,
        rhs: reference.value * ratio_to_f64(factor),
        ratio: ratio_of(lhs.value, reference.value),
        pass,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        epsilon: ratio_to_f64(eps),
        mode,
        node: None,
        window,
        reference_window,
    }
}

/// Event-index range over which every event of both strategies is
/// determined: `(0, last common index)`.
pub fn determined_range(strat: &PatrolStrategy) -> Option<(usize, usize)> {
    strat.last_common_index().map(|last| (0, last))
}

/// Source and discrete window of an event-index range.
type WindowPair = ((Tick, Tick), (Tick, Tick));

fn windows(
    strat: &PatrolStrategy,
    disc: &DiscreteStrategy,
    range: (usize, usize),
) -> Result<WindowPair, VerifyError> {
    let (i0, i1) = range;
    let (src, dst) = (&strat.events, &disc.base.events);
    if i0 > i1 || i1 >= src.len() || i1 >= dst.len() {
        return Err(VerifyError::BadRange(i0, i1));
    }
    Ok(((src[i0].t, src[i1].t), (dst[i0].t, dst[i1].t)))
}

/// Discrete cost over `[tau(i0), tau(i1)]` against `(1 + eps)` times the
/// source cost over `[t(i0), t(i1)]`.
pub fn verify_theorem1(
    env: &Environment,
    strat: &PatrolStrategy,
    disc: &DiscreteStrategy,
    spec: CostSpec,
    eps: &EpsilonSpec,
    range: (usize, usize),
) -> Result<BoundReport, VerifyError> {
    let e = epsilon(eps)?;
    let (src_w, dst_w) = windows(strat, disc, range)?;
    let j_pi = Timeline::new(env, strat).cost(spec, src_w)?;
    let j_d = Timeline::new(env, &disc.base).cost(spec, dst_w)?;
    Ok(report("discrete_vs_source", &j_d, &j_pi, Ratio::from_integer(1) + e, e, eps.mode, dst_w, src_w))
}

/// One report per deadline node: peak discrete idleness against
/// `(1 + eps) T_k`. Nodes whose deadline the source strategy already misses
/// are marked [`Verdict::SourceInfeasible`].
pub fn verify_corollary1(
    env: &Environment,
    strat: &PatrolStrategy,
    disc: &DiscreteStrategy,
    eps: &EpsilonSpec,
    range: (usize, usize),
) -> Result<Vec<BoundReport>, VerifyError> {
    let e = epsilon(eps)?;
    let (src_w, dst_w) = windows(strat, disc, range)?;
    let src = Timeline::new(env, strat);
    let dst = Timeline::new(env, &disc.base);
    let factor = Ratio::from_integer(1) + e;
    Ok(env
        .deadline_nodes()
        .map(|(v, deadline)| {
            let (peak, _) = dst.peak_idleness(v, dst_w);
            let (src_peak, _) = src.peak_idleness(v, src_w);
            let limit = Ratio::from_integer(deadline.0 as u128) * factor;
            let pass = Ratio::from_integer(peak.0 as u128) <= limit;
            let verdict = if src_peak > deadline {
                Verdict::SourceInfeasible
            } else if pass {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            BoundReport {
                name: "deadline".into(),
                lhs: peak.0 as f64,
                rhs: ratio_to_f64(limit),
                ratio: ratio_of(peak.0 as f64, deadline.0 as f64),
                pass: pass || verdict == Verdict::SourceInfeasible,
                verdict,
                epsilon: ratio_to_f64(e),
                mode: eps.mode,
                node: Some(env.name(v).to_owned()),
                window: dst_w,
                reference_window: src_w,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    /// Recurrent cost against the discrete cost over the matched segment
    /// (factor 1).
    pub recurrent_vs_discrete: BoundReport,
    /// Recurrent cost against `(1 + eps)` times the source cost over the
    /// source segment.
    pub recurrent_vs_source: BoundReport,
}

impl Theorem2Report {
    pub fn pass(&self) -> bool {
        self.recurrent_vs_discrete.pass && self.recurrent_vs_source.pass
    }
}

pub fn verify_theorem2(
    env: &Environment,
    strat: &PatrolStrategy,
    disc: &DiscreteStrategy,
    rec: &RecurrentStrategy,
    spec: CostSpec,
    eps: &EpsilonSpec,
) -> Result<Theorem2Report, VerifyError> {
    let e = epsilon(eps)?;
    let (src_w, dst_w) = windows(strat, disc, (rec.p, rec.q))?;
    let j_pi = Timeline::new(env, strat).cost(spec, src_w)?;
    let j_d = Timeline::new(env, &disc.base).cost(spec, dst_w)?;
    let j_r = recurrent_cost(env, rec, spec);
    let rec_w = (rec.period, rec.period * 2);
    let one = Ratio::from_integer(1);
    Ok(Theorem2Report {
        recurrent_vs_discrete: report("recurrent_vs_discrete", &j_r, &j_d, one, e, eps.mode, rec_w, dst_w),
        recurrent_vs_source: report("recurrent_vs_source", &j_r, &j_pi, one + e, e, eps.mode, rec_w, src_w),
    })
}

/// A shift-growth bound broken between two consecutive departures from
/// `node`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditViolation {
    pub node: String,
    /// Earlier and later event index (0-based).
    pub interval: (usize, usize),
    pub delta_d: i128,
    /// Source idleness of the node on arrival at the later event.
    pub idleness: Tick,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Intervals with an idle gap under the discrete strategy.
    pub intervals_checked: usize,
    /// Intervals where the node stays occupied under the discrete strategy.
    pub trivial_intervals: usize,
    pub violations: Vec<AuditViolation>,
    /// Events where `d_bar` decreases or is not the running max of `d`.
    pub running_max_violations: Vec<usize>,
    /// Events where `d(i) <= d_bar(i) - D`.
    pub lower_bound_violations: Vec<usize>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
            && self.running_max_violations.is_empty()
            && self.lower_bound_violations.is_empty()
    }
}

/// Checks, for every node and every pair of consecutive departures `m < n`
/// from it, that `d(n) - d(m) <= (I / w_min + 2) D` with
/// `I = max(0, arrival(n) - t(m))` the source idleness accumulated before
/// the later visit. Intervals in which the node never becomes idle under
/// the discrete strategy are counted but not checked. Also checks the
/// running maximum of shifts.
pub fn lemma2_3_audit(env: &Environment, strat: &PatrolStrategy, disc: &DiscreteStrategy) -> AuditReport {
    let w = env.min_edge_weight().0 as i128;
    let dq = disc.quantum.0 as i128;
    let mut out = AuditReport::default();
    let mut previous: Vec<Option<usize>> = vec![None; env.node_count()];
    let mut running = Tick::ZERO;
    for (n, (e, rec)) in strat.events.iter().zip(&disc.audit).enumerate() {
        let prev_bar = if n > 0 { disc.audit[n - 1].d_bar } else { Tick::ZERO };
        running = running.max(rec.d);
        if rec.d_bar < prev_bar || rec.d_bar != running {
            out.running_max_violations.push(n);
        }
        if rec.d + disc.quantum <= rec.d_bar {
            out.lower_bound_violations.push(n);
        }
        if let Some(m) = previous[e.node.0] {
            let dst = &disc.base.events;
            // Without an idle gap under the discrete strategy the node's
            // discrete idleness stays 0 and the bound holds trivially.
            if dst[n].arrival() <= dst[m].t {
                out.trivial_intervals += 1;
                previous[e.node.0] = Some(n);
                continue;
            }
            out.intervals_checked += 1;
            let idle = e.arrival().saturating_sub(strat.events[m].t);
            let delta = rec.d.0 as i128 - disc.audit[m].d.0 as i128;
            if delta * w > (idle.0 as i128 + 2 * w) * dq {
                out.violations.push(AuditViolation {
                    node: env.name(e.node).to_owned(),
                    interval: (m, n),
                    delta_d: delta,
                    idleness: idle,
                    message: format!(
                        "shift grew by {delta} between events {} and {} at {}, above ({idle}/{w} + 2)*{dq}",
                        m + 1,
                        n + 1,
                        env.name(e.node)
                    ),
                });
            }
        }
        previous[e.node.0] = Some(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::discretize;
    use crate::environment::load_environment;
    use crate::recurrence::{build_recurrent, departure_snapshots, derive_chi, find_recurrence};
    use crate::strategy::fixtures::{tour, two_node};

    fn spec(mode: EpsilonMode, d: u64, w: u64, i: Option<u64>) -> EpsilonSpec {
        EpsilonSpec {
            mode,
            quantum: Tick(d),
            w_min: Tick(w),
            i_min: i.map(Tick),
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(&spec(EpsilonMode::Experiment, 1, 5, None)), Ok(Ratio::new(1, 5)));
        assert_eq!(epsilon(&spec(EpsilonMode::Lemma3, 2, 3, Some(3))), Ok(Ratio::from_integer(2)));
        assert_eq!(epsilon(&spec(EpsilonMode::Lemma3, 2, 3, None)), Err(VerifyError::MissingIMin));
        assert_eq!(epsilon(&spec(EpsilonMode::Lemma3, 2, 3, Some(0))), Err(VerifyError::MissingIMin));
        for mode in [EpsilonMode::Experiment, EpsilonMode::Lemma3] {
            let a = epsilon(&spec(mode, 3, 7, Some(11))).unwrap();
            let b = epsilon(&spec(mode, 6, 7, Some(11))).unwrap();
            assert_eq!(b, a * Ratio::from_integer(2));
        }
    }

    #[test]
    fn trace_epsilon_spec_uses_min_idleness() {
        let env = two_node(3);
        let s = tour(&[0, 3, 6], 6);
        let e = epsilon_spec_for(&env, &s, EpsilonMode::Lemma3, Tick(2)).unwrap();
        assert_eq!(e.i_min, Some(Tick(3)));
        assert_eq!(epsilon(&e), Ok(Ratio::from_integer(2)));
    }

    #[test]
    fn degenerate_idleness_falls_back_to_experiment_mode() {
        let env = two_node(3);
        let e = epsilon_spec_for(&env, &tour(&[0], 1), EpsilonMode::Lemma3, Tick(2)).unwrap();
        assert_eq!(e.mode, EpsilonMode::Experiment);
        assert_eq!(epsilon(&e), Ok(Ratio::new(2, 3)));
    }

    #[test]
    fn theorem1_on_trace_and_fixed_point() {
        let env = two_node(3);
        let s = tour(&[0, 3, 6], 6);
        let disc = discretize(&env, &s, Tick(2)).unwrap();
        let e = epsilon_spec_for(&env, &s, EpsilonMode::Lemma3, Tick(2)).unwrap();
        let range = determined_range(&s).unwrap();
        for cs in [CostSpec::GMI, CostSpec::GAI] {
            let r = verify_theorem1(&env, &s, &disc, cs, &e, range).unwrap();
            assert!(r.pass, "{r:?}");
        }

        let env4 = two_node(4);
        let s4 = tour(&[0, 4, 8], 8);
        let d4 = discretize(&env4, &s4, Tick(2)).unwrap();
        let e4 = epsilon_spec_for(&env4, &s4, EpsilonMode::Lemma3, Tick(2)).unwrap();
        let r = verify_theorem1(&env4, &s4, &d4, CostSpec::GMI, &e4, (0, 2)).unwrap();
        assert_eq!(r.lhs, 8.0);
        assert_eq!(r.ratio, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn corollary_on_trace() {
        let env = load_environment(
            r#"{"nodes": [{"id": "v1", "phi": 1, "T": 7}, {"id": "v2", "phi": 1}],
                "edges": [{"from": "v1", "to": "v2", "w": 3}, {"from": "v2", "to": "v1", "w": 3}]}"#
                .as_bytes(),
        )
        .unwrap();
        let s = tour(&[0, 3, 6], 6);
        let disc = discretize(&env, &s, Tick(2)).unwrap();
        let e = epsilon_spec_for(&env, &s, EpsilonMode::Lemma3, Tick(2)).unwrap();
        let reports = verify_corollary1(&env, &s, &disc, &e, (0, 2)).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].lhs, 7.0);
        assert_eq!(reports[0].rhs, 21.0);
        assert_eq!(reports[0].verdict, Verdict::Pass);

        assert!(verify_corollary1(&two_node(3), &s, &disc, &e, (0, 2)).unwrap().is_empty());

        let tight = load_environment(
            r#"{"nodes": [{"id": "v1", "phi": 1, "T": 5}, {"id": "v2", "phi": 1}],
                "edges": [{"from": "v1", "to": "v2", "w": 3}, {"from": "v2", "to": "v1", "w": 3}]}"#
                .as_bytes(),
        )
        .unwrap();
        let reports = verify_corollary1(&tight, &s, &disc, &e, (0, 2)).unwrap();
        assert_eq!(reports[0].verdict, Verdict::SourceInfeasible);
    }

    #[test]
    fn theorem2_on_unit_tour() {
        let env = two_node(1);
        let s = tour(&[0, 1, 2, 3, 4, 5], 5);
        let disc = discretize(&env, &s, Tick(1)).unwrap();
        let (p, q) = find_recurrence(&env, &disc).unwrap();
        let snaps = departure_snapshots(&env, &disc);
        let chi = derive_chi(&snaps[p].1, &snaps[q].1).unwrap();
        let rec = build_recurrent(&env, &disc, p, q, &chi).unwrap();
        let e = epsilon_spec_for(&env, &s, EpsilonMode::Lemma3, Tick(1)).unwrap();
        let r = verify_theorem2(&env, &s, &disc, &rec, CostSpec::GMI, &e).unwrap();
        assert_eq!(r.recurrent_vs_source.lhs, 2.0);
        assert_eq!(r.recurrent_vs_source.ratio, 1.0);
        assert!(r.pass());
    }

    #[test]
    fn audit_trace_and_corruption() {
        let env = two_node(3);
        let s = tour(&[0, 3, 6], 6);
        let disc = discretize(&env, &s, Tick(2)).unwrap();
        let report = lemma2_3_audit(&env, &s, &disc);
        assert_eq!(report.intervals_checked, 1);
        assert!(report.pass());

        let mut bad = disc.clone();
        bad.audit[2].d = Tick(20);
        bad.audit[2].d_bar = Tick(20);
        let report = lemma2_3_audit(&env, &s, &bad);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].node, "v1");
        assert_eq!(report.violations[0].interval, (0, 2));
    }
}
