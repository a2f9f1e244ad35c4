//! Synthetic environment generators.
//!
//! Both generators draw from a ChaCha8 stream seeded with `seed`, so the
//! output is identical across platforms for the same arguments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Environment, EnvironmentError, Node};
use crate::time::Tick;

fn default_nodes(n: usize) -> Vec<Node> {
    (1..=n)
        .map(|i| Node {
            name: format!("v{i}"),
            phi: 1.0,
            deadline: None,
        })
        .collect()
}

/// Random strongly connected digraph.
///
/// A random Hamiltonian cycle guarantees strong connectivity; further arcs
/// are drawn uniformly from the remaining ordered pairs until the edge count
/// reaches `round(avg_degree * n_nodes)`. Weights are uniform over the
/// inclusive `weight_range`.
pub fn random_environment(
    n_nodes: usize,
    avg_degree: f64,
    weight_range: (Tick, Tick),
    seed: u64,
) -> Result<Environment, EnvironmentError> {
    if n_nodes < 2 {
        return Err(EnvironmentError::InvalidParameter(format!(
            "need at least 2 nodes, got {n_nodes}"
        )));
    }
    let (w_lo, w_hi) = weight_range;
    if w_lo.0 < 1 || w_lo > w_hi {
        return Err(EnvironmentError::InvalidParameter(format!(
            "bad weight range [{w_lo}, {w_hi}]"
        )));
    }
    let max_degree = (n_nodes - 1) as f64;
    if !(1.0..=max_degree).contains(&avg_degree) {
        return Err(EnvironmentError::InfeasibleDegree {
            n_nodes,
            avg_degree,
        });
    }
    let target = ((avg_degree * n_nodes as f64).round() as usize).clamp(n_nodes, n_nodes * (n_nodes - 1));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.shuffle(&mut rng);

    let mut present = vec![false; n_nodes * n_nodes];
    let mut arcs: Vec<(usize, usize)> = Vec::with_capacity(target);
    for i in 0..n_nodes {
        let (a, b) = (order[i], order[(i + 1) % n_nodes]);
        present[a * n_nodes + b] = true;
        arcs.push((a, b));
    }

    let mut candidates: Vec<(usize, usize)> = (0..n_nodes)
        .flat_map(|a| (0..n_nodes).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !present[a * n_nodes + b])
        .collect();
    candidates.shuffle(&mut rng);
    arcs.extend(candidates.into_iter().take(target - n_nodes));
    arcs.sort_unstable();

    let edges = arcs
        .into_iter()
        .map(|(a, b)| (a, b, rng.random_range(w_lo.0..=w_hi.0) as i64))
        .collect();
    Environment::new(default_nodes(n_nodes), edges, None)
}

/// Road-network-like environment: nodes are uniform points in an
/// `extent x extent` square, roads are bidirectional with weight equal to
/// the rounded Euclidean length (at least one tick).
///
/// A Euclidean minimum spanning tree keeps the graph connected; the shortest
/// remaining point pairs are then added until the average out-degree reaches
/// `avg_degree`.
pub fn geometric_environment(
    n_nodes: usize,
    avg_degree: f64,
    extent: f64,
    seed: u64,
) -> Result<Environment, EnvironmentError> {
    if n_nodes < 2 {
        return Err(EnvironmentError::InvalidParameter(format!(
            "need at least 2 nodes, got {n_nodes}"
        )));
    }
    if !(extent.is_finite() && extent > 0.0) {
        return Err(EnvironmentError::InvalidParameter(format!(
            "extent must be positive, got {extent}"
        )));
    }
    let tree_degree = 2.0 * (n_nodes - 1) as f64 / n_nodes as f64;
    if avg_degree < tree_degree || avg_degree > (n_nodes - 1) as f64 {
        return Err(EnvironmentError::InfeasibleDegree {
            n_nodes,
            avg_degree,
        });
    }
    let target_pairs = ((avg_degree * n_nodes as f64 / 2.0).round() as usize)
        .clamp(n_nodes - 1, n_nodes * (n_nodes - 1) / 2);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n_nodes)
        .map(|_| (rng.random::<f64>() * extent, rng.random::<f64>() * extent))
        .collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n_nodes * (n_nodes - 1) / 2);
    for a in 0..n_nodes {
        for b in a + 1..n_nodes {
            let (dx, dy) = (points[a].0 - points[b].0, points[a].1 - points[b].1);
            pairs.push(((dx * dx + dy * dy).sqrt(), a, b));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    // Kruskal pass for the spanning tree, then shortest leftovers.
    let mut parent: Vec<usize> = (0..n_nodes).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut chosen = vec![false; pairs.len()];
    let mut count = 0;
    for (i, &(_, a, b)) in pairs.iter().enumerate() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            chosen[i] = true;
            count += 1;
        }
    }
    for flag in chosen.iter_mut() {
        if count >= target_pairs {
            break;
        }
        if !*flag {
            *flag = true;
            count += 1;
        }
    }

    let mut edges = Vec::with_capacity(2 * count);
    for (i, &(dist, a, b)) in pairs.iter().enumerate() {
        if chosen[i] {
            let w = (dist.round() as i64).max(1);
            edges.push((a, b, w));
            edges.push((b, a, w));
        }
    }
    edges.sort_unstable();
    Environment::new(default_nodes(n_nodes), edges, None)
}
