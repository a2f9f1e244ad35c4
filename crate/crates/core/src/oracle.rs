//! Brute-force reference implementations for cross-checking the engines.
//!
//! Deliberately naive: `naive_idleness` rescans every event per query
//! (O(T)), `quadratic_recurrence_scan` compares all snapshot pairs (O(T²)).
//! Neither uses the indexed timeline or snapshot hashing.

use crate::environment::Environment;
use crate::strategy::{IdlenessVector, PatrolStrategy, StateSnapshot};
use crate::time::Tick;

/// Idleness at `t` from a full pass over the event list.
pub fn naive_idleness(env: &Environment, strat: &PatrolStrategy, t: Tick) -> IdlenessVector {
    let n = env.node_count();
    let mut occupied = vec![false; n];
    let mut last: Vec<Option<Tick>> = vec![None; n];
    for e in &strat.events {
        let arrival = e.t - e.r;
        if arrival <= t && t <= e.t {
            occupied[e.node.0] = true;
        }
        if e.t <= t {
            let slot = &mut last[e.node.0];
            if slot.is_none_or(|prev| prev < e.t) {
                *slot = Some(e.t);
            }
        }
    }
    IdlenessVector(
        (0..n)
            .map(|k| match (occupied[k], last[k]) {
                (true, _) => Tick::ZERO,
                (false, Some(dep)) => t - dep,
                (false, None) => t,
            })
            .collect(),
    )
}

fn same(a: &StateSnapshot, b: &StateSnapshot) -> bool {
    if a.idleness.0.len() != b.idleness.0.len() || a.positions.len() != b.positions.len() {
        return false;
    }
    if a.idleness.0.iter().zip(&b.idleness.0).any(|(x, y)| x != y) {
        return false;
    }
    // Multiset equality by matching each position to an unused equal one.
    let mut used = vec![false; b.positions.len()];
    a.positions.iter().all(|pa| {
        match (0..b.positions.len()).find(|&j| !used[j] && b.positions[j] == *pa) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// First `(p, q)` with equal states, scanning `q` outermost and `p`
/// innermost. Indices are positions in `snapshots`.
pub fn quadratic_recurrence_scan(snapshots: &[StateSnapshot]) -> Option<(usize, usize)> {
    for q in 1..snapshots.len() {
        for p in 0..q {
            if same(&snapshots[p], &snapshots[q]) {
                return Some((p, q));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::NodeId;
    use crate::strategy::fixtures::{tour, two_node};
    use crate::strategy::{idleness_at, AgentPosition};

    #[test]
    fn agrees_with_engine_on_two_node_tour() {
        let env = two_node(3);
        let s = tour(&[0, 3, 6], 6);
        for t in [0, 2, 3, 5, 6] {
            assert_eq!(naive_idleness(&env, &s, Tick(t)), idleness_at(&env, &s, Tick(t)).unwrap());
        }
        assert_eq!(naive_idleness(&env, &s, Tick(0)), IdlenessVector::zeros(2));
    }

    #[test]
    fn scan_finds_first_match_or_none() {
        let snap = |i: u64, at: usize| StateSnapshot {
            time: Tick(i),
            idleness: IdlenessVector(vec![Tick(i % 2), Tick::ZERO]),
            positions: vec![AgentPosition::AtNode(NodeId(at))],
        };
        let list = vec![snap(0, 0), snap(1, 1), snap(2, 0), snap(3, 1)];
        assert_eq!(quadratic_recurrence_scan(&list), Some((0, 2)));
        let distinct = vec![snap(0, 0), snap(1, 1), snap(3, 0)];
        assert_eq!(quadratic_recurrence_scan(&distinct), None);
    }
}
