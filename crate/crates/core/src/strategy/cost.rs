//! Idleness cost `C * ||Phi I(t)||_p` and its supremum over a window.
//!
//! Between two arrivals every idleness entry is non-decreasing, so any norm
//! of the (non-negative) vector is too. The supremum over `[start, end]` is
//! therefore the largest of: the value at `start`, the value at `end`, and
//! the left limits at every arrival in `(start, end]`.

use num_rational::Ratio;

use crate::environment::{Environment, NodeId};
use crate::time::Tick;

use super::timeline::Timeline;
use super::{PatrolStrategy, StrategyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

/// The constant `C` in front of the norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Unit,
    /// `1 / |V|`.
    PerNode,
    Factor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSpec {
    pub norm: Norm,
    pub use_phi: bool,
    pub scale: Scale,
}

impl CostSpec {
    /// Graph maximum idleness.
    pub const GMI: CostSpec = CostSpec {
        norm: Norm::Linf,
        use_phi: false,
        scale: Scale::Unit,
    };
    /// Graph average idleness.
    pub const GAI: CostSpec = CostSpec {
        norm: Norm::L1,
        use_phi: false,
        scale: Scale::PerNode,
    };
    /// Importance-weighted maximum idleness.
    pub const WEIGHTED_MAX: CostSpec = CostSpec {
        norm: Norm::Linf,
        use_phi: true,
        scale: Scale::Unit,
    };

    /// Whether values can be carried as exact rationals.
    pub fn is_exact(&self) -> bool {
        !self.use_phi
            && matches!(self.norm, Norm::L1 | Norm::Linf)
            && matches!(self.scale, Scale::Unit | Scale::PerNode)
    }

    fn scale_factor(&self, n_nodes: usize) -> f64 {
        match self.scale {
            Scale::Unit => 1.0,
            Scale::PerNode => 1.0 / n_nodes as f64,
            Scale::Factor(c) => c,
        }
    }
}

/// A cost value. `exact` is present for the integer-valued norms
/// (`L1`, `Linf` without node weights and with a rational scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostValue {
    pub value: f64,
    pub exact: Option<Ratio<u128>>,
    /// Instant at which the supremum is attained or approached.
    pub at: Tick,
    /// True when the supremum is a left limit at `at`.
    pub left_limit: bool,
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue {
            value: 0.0,
            exact: Some(Ratio::from_integer(0)),
            at: Tick::ZERO,
            left_limit: false,
        }
    }
}

/// Evaluates the norm of one idleness vector, both as an exact integer
/// (when available) and as a float.
pub(crate) struct NormEval<'a> {
    spec: CostSpec,
    env: &'a Environment,
}

impl<'a> NormEval<'a> {
    pub(crate) fn new(spec: CostSpec, env: &'a Environment) -> Self {
        NormEval { spec, env }
    }

    /// Unscaled integer norm for exact specs.
    fn raw(&self, idleness: &[Tick]) -> u128 {
        match self.spec.norm {
            Norm::L1 => idleness.iter().map(|t| t.0 as u128).sum(),
            Norm::Linf => idleness.iter().map(|t| t.0 as u128).max().unwrap_or(0),
            Norm::L2 => unreachable!("L2 is never exact"),
        }
    }

    fn float(&self, idleness: &[Tick]) -> f64 {
        let weights = self.env.nodes().iter().map(|n| if self.spec.use_phi { n.phi } else { 1.0 });
        let entries = idleness.iter().zip(weights).map(|(t, w)| t.0 as f64 * w);
        let norm = match self.spec.norm {
            Norm::L1 => entries.sum(),
            Norm::L2 => entries.map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => entries.fold(0.0, f64::max),
        };
        norm * self.spec.scale_factor(self.env.node_count())
    }

    fn exact_scale(&self) -> Ratio<u128> {
        match self.spec.scale {
            Scale::PerNode => Ratio::new(1, self.env.node_count() as u128),
            _ => Ratio::from_integer(1),
        }
    }

    pub(crate) fn value(&self, idleness: &[Tick], at: Tick, left_limit: bool) -> CostValue {
        if self.spec.is_exact() {
            let exact = Ratio::from_integer(self.raw(idleness)) * self.exact_scale();
            CostValue {
                value: *exact.numer() as f64 / *exact.denom() as f64,
                exact: Some(exact),
                at,
                left_limit,
            }
        } else {
            CostValue {
                value: self.float(idleness),
                exact: None,
                at,
                left_limit,
            }
        }
    }
}

fn better(a: &CostValue, b: &CostValue) -> bool {
    match (a.exact, b.exact) {
        (Some(x), Some(y)) => x > y,
        _ => a.value > b.value,
    }
}

impl Timeline<'_> {
    /// Supremum of the cost over `window` (inclusive).
    pub fn cost(&self, spec: CostSpec, window: (Tick, Tick)) -> Result<CostValue, StrategyError> {
        let (start, end) = window;
        if start > end {
            return Err(StrategyError::EmptyWindow { start, end });
        }
        self.check_window(end)?;
        let eval = NormEval::new(spec, self.env());
        let mut best = eval.value(self.idleness_unchecked(start, false).as_slice(), start, false);
        let candidates = self
            .instants_in(start, end)
            .iter()
            .map(|&t| (t, true))
            .chain(std::iter::once((end, false)));
        for (t, left) in candidates {
            let v = eval.value(self.idleness_unchecked(t, left).as_slice(), t, left);
            if better(&v, &best) {
                best = v;
            }
        }
        Ok(best)
    }

    /// Arrival instants in `(start, end]`.
    pub(crate) fn instants_in(&self, start: Tick, end: Tick) -> &[Tick] {
        let arrivals = self.arrivals();
        let lo = arrivals.partition_point(|&t| t <= start);
        let hi = arrivals.partition_point(|&t| t <= end);
        &arrivals[lo..hi]
    }

    /// Peak idleness of one node over `window`, with the instant it occurs.
    pub fn peak_idleness(&self, v: NodeId, window: (Tick, Tick)) -> (Tick, Tick) {
        let (start, end) = window;
        let mut best = (self.node_idleness(v, start, false), start);
        for &t in self.instants_in(start, end) {
            let i = self.node_idleness(v, t, true);
            if i > best.0 {
                best = (i, t);
            }
        }
        let i = self.node_idleness(v, end, false);
        if i > best.0 {
            best = (i, end);
        }
        best
    }
}

/// Supremum over `window` of the cost described by `spec`.
pub fn cost(
    env: &Environment,
    strat: &PatrolStrategy,
    spec: CostSpec,
    window: (Tick, Tick),
) -> Result<CostValue, StrategyError> {
    Timeline::new(env, strat).cost(spec, window)
}

/// A deadline node whose idleness exceeds `slack * T_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintViolation {
    pub node: NodeId,
    /// Instant of the excess; the value is a left limit when `left_limit`.
    pub time: Tick,
    pub left_limit: bool,
    pub idleness: Tick,
    pub limit: f64,
}

/// Every (deadline node, instant) where idleness exceeds `slack * T_k`,
/// checked at the left limits of arrivals and at the window end.
pub fn check_constraints(
    env: &Environment,
    strat: &PatrolStrategy,
    slack: f64,
    window: (Tick, Tick),
) -> Vec<ConstraintViolation> {
    let tl = Timeline::new(env, strat);
    let (start, end) = window;
    let mut out = Vec::new();
    for (node, deadline) in env.deadline_nodes() {
        let limit = slack * deadline.0 as f64;
        let mut probe = |t: Tick, left: bool| {
            let i = tl.node_idleness(node, t, left);
            if i.0 as f64 > limit {
                out.push(ConstraintViolation {
                    node,
                    time: t,
                    left_limit: left,
                    idleness: i,
                    limit,
                });
            }
        };
        for &t in tl.instants_in(start, end) {
            probe(t, true);
        }
        probe(end, false);
    }
    out
}

/// Minimum nonzero idleness over arrival instants in `window`.
///
/// Each arrival is evaluated at its left limit, so the node being arrived at
/// contributes the idleness it had accumulated up to the arrival.
pub fn min_nonzero_idleness(
    env: &Environment,
    strat: &PatrolStrategy,
    window: (Tick, Tick),
) -> Result<Tick, StrategyError> {
    let tl = Timeline::new(env, strat);
    let (start, end) = window;
    let arrivals = tl.arrivals();
    let lo = arrivals.partition_point(|&t| t < start);
    let hi = arrivals.partition_point(|&t| t <= end);
    arrivals[lo..hi]
        .iter()
        .flat_map(|&t| env.node_ids().map(move |v| (v, t)))
        .map(|(v, t)| tl.node_idleness(v, t, true))
        .filter(|i| *i > Tick::ZERO)
        .min()
        .ok_or(StrategyError::NoNonzeroIdleness)
}
