//! Discretization and recurrence synthesis for multi-agent patrol strategies.
//!
//! Pipeline: build an [`Environment`], produce a [`PatrolStrategy`] (e.g. with
//! [`greedy_random`]), [`discretize`] it onto a time quantum, look for a
//! repeated state with [`find_recurrence`], stitch a periodic strategy with
//! [`build_recurrent`], and check the approximation bounds in [`verify`].

pub mod discretize;
pub mod environment;
pub mod generator;
pub mod oracle;
pub mod recurrence;
pub mod strategy;
pub mod time;
pub mod verify;

pub use discretize::{check_discretization, discretize, DiscreteStrategy, DiscretizeError, ShiftRecord};
pub use environment::{load_environment, Environment, EnvironmentError, NodeId};
pub use generator::{greedy_random, GeneratorError, GreedyRandomConfig};
pub use recurrence::{
    build_recurrent, derive_chi, find_recurrence, find_recurrent_strategy, recurrent_cost, unroll, RecurrenceError,
    RecurrentStrategy,
};
pub use strategy::{
    cost, idleness_at, positions_at, validate, Agent, AgentId, AgentPosition, CostSpec, CostValue,
    DepartureEvent, IdlenessVector, Norm, PatrolStrategy, Scale, StateSnapshot, StrategyError,
    Timeline,
};
pub use time::Tick;
