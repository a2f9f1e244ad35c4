//! Patrol environment: a strongly connected weighted digraph with node
//! importance weights and optional idleness deadlines.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::Tick;

mod generate;

pub use generate::{geometric_environment, random_environment};

/// Index of a node in the environment's global node order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    /// Importance weight in `[0, 1]`.
    pub phi: f64,
    /// Idleness deadline `T_k`, if the node is constrained.
    pub deadline: Option<Tick>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: Tick,
}

#[derive(Debug, Error, PartialEq)]
pub enum EnvironmentError {
    #[error("malformed environment document: {0}")]
    Parse(String),
    #[error("environment has no edges")]
    NoEdges,
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("parallel edge {from} -> {to}")]
    ParallelEdge { from: String, to: String },
    #[error("edge {from} -> {to} has non-positive weight {weight}")]
    NonPositiveWeight { from: String, to: String, weight: i64 },
    #[error("node `{node}` has phi {value} outside [0, 1]")]
    BadPhi { node: String, value: f64 },
    #[error("node `{node}` has deadline 0; deadlines must be positive")]
    BadDeadline { node: String },
    #[error("graph is not strongly connected: {total} unreachable ordered pairs, e.g. {sample:?}")]
    NotStronglyConnected {
        /// Up to [`UNREACHABLE_SAMPLE`] `(from, to)` pairs with no path.
        sample: Vec<(String, String)>,
        total: usize,
    },
    #[error("average out-degree {avg_degree} infeasible for {n_nodes} nodes")]
    InfeasibleDegree { n_nodes: usize, avg_degree: f64 },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

/// Maximum number of unreachable pairs carried in
/// [`EnvironmentError::NotStronglyConnected`].
pub const UNREACHABLE_SAMPLE: usize = 32;

/// Validated patrol environment. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    /// Out-neighbours of each node, sorted by target node order.
    out: Vec<Vec<(NodeId, Tick)>>,
    by_name: HashMap<String, NodeId>,
    tick_seconds: Option<f64>,
}

impl Environment {
    /// Builds and validates an environment. Edges are given by node index.
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<(usize, usize, i64)>,
        tick_seconds: Option<f64>,
    ) -> Result<Self, EnvironmentError> {
        let mut by_name = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if by_name.insert(node.name.clone(), NodeId(i)).is_some() {
                return Err(EnvironmentError::DuplicateNode(node.name.clone()));
            }
            if !(0.0..=1.0).contains(&node.phi) {
                return Err(EnvironmentError::BadPhi {
                    node: node.name.clone(),
                    value: node.phi,
                });
            }
            if node.deadline == Some(Tick::ZERO) {
                return Err(EnvironmentError::BadDeadline {
                    node: node.name.clone(),
                });
            }
        }
        if edges.is_empty() {
            return Err(EnvironmentError::NoEdges);
        }

        let n = nodes.len();
        let mut out: Vec<Vec<(NodeId, Tick)>> = vec![Vec::new(); n];
        let mut checked = Vec::with_capacity(edges.len());
        for &(a, b, w) in &edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(EnvironmentError::UnknownNode(format!("#{idx}")));
                }
            }
            if a == b {
                return Err(EnvironmentError::SelfLoop(nodes[a].name.clone()));
            }
            if w <= 0 {
                return Err(EnvironmentError::NonPositiveWeight {
                    from: nodes[a].name.clone(),
                    to: nodes[b].name.clone(),
                    weight: w,
                });
            }
            if out[a].iter().any(|&(to, _)| to.0 == b) {
                return Err(EnvironmentError::ParallelEdge {
                    from: nodes[a].name.clone(),
                    to: nodes[b].name.clone(),
                });
            }
            let weight = Tick(w as u64);
            out[a].push((NodeId(b), weight));
            checked.push(Edge {
                from: NodeId(a),
                to: NodeId(b),
                weight,
            });
        }
        for list in &mut out {
            list.sort_unstable_by_key(|&(to, _)| to);
        }

        let env = Environment {
            nodes,
            edges: checked,
            out,
            by_name,
            tick_seconds,
        };
        env.check_strongly_connected()?;
        Ok(env)
    }

    fn check_strongly_connected(&self) -> Result<(), EnvironmentError> {
        let n = self.nodes.len();
        // Forward and backward reachability from node 0 decides the property;
        // the full pair listing is only computed on failure.
        let forward = self.reachable_from(NodeId(0), false);
        let backward = self.reachable_from(NodeId(0), true);
        if forward.iter().all(|&r| r) && backward.iter().all(|&r| r) {
            return Ok(());
        }
        let mut sample = Vec::new();
        let mut total = 0;
        for u in 0..n {
            let reach = self.reachable_from(NodeId(u), false);
            for (v, &ok) in reach.iter().enumerate() {
                if !ok {
                    total += 1;
                    if sample.len() < UNREACHABLE_SAMPLE {
                        sample.push((self.nodes[u].name.clone(), self.nodes[v].name.clone()));
                    }
                }
            }
        }
        Err(EnvironmentError::NotStronglyConnected { sample, total })
    }

    fn reachable_from(&self, start: NodeId, reversed: bool) -> Vec<bool> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start.0] = true;
        while let Some(u) = queue.pop_front() {
            if reversed {
                for e in self.edges.iter().filter(|e| e.to == u) {
                    if !seen[e.from.0] {
                        seen[e.from.0] = true;
                        queue.push_back(e.from);
                    }
                }
            } else {
                for &(v, _) in &self.out[u.0] {
                    if !seen[v.0] {
                        seen[v.0] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        seen
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    #[inline]
    pub fn name(&self, id: NodeId) -> &str {
        &self.nodes[id.0].name
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbours of `v` with edge weights, in global node order.
    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[(NodeId, Tick)] {
        &self.out[v.0]
    }

    /// Weight of the edge `from -> to`, if present.
    pub fn weight(&self, from: NodeId, to: NodeId) -> Option<Tick> {
        let list = self.out.get(from.0)?;
        list.binary_search_by_key(&to, |&(t, _)| t)
            .ok()
            .map(|i| list[i].1)
    }

    /// Minimum edge weight `w̲`.
    pub fn min_edge_weight(&self) -> Tick {
        self.edges
            .iter()
            .map(|e| e.weight)
            .min()
            .expect("validated environment has edges")
    }

    /// Nodes carrying a deadline, with that deadline.
    pub fn deadline_nodes(&self) -> impl Iterator<Item = (NodeId, Tick)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.deadline.map(|d| (NodeId(i), d)))
    }

    pub fn tick_seconds(&self) -> Option<f64> {
        self.tick_seconds
    }

    pub fn to_document(&self) -> EnvironmentDoc {
        EnvironmentDoc {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.name.clone(),
                    phi: n.phi,
                    deadline: n.deadline.map(|t| t.0),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: self.name(e.from).to_owned(),
                    to: self.name(e.to).to_owned(),
                    w: e.weight.0 as i64,
                })
                .collect(),
            tick_seconds: self.tick_seconds,
        }
    }

    pub fn from_document(doc: EnvironmentDoc) -> Result<Self, EnvironmentError> {
        let nodes: Vec<Node> = doc
            .nodes
            .into_iter()
            .map(|n| Node {
                name: n.id,
                phi: n.phi,
                deadline: n.deadline.map(Tick),
            })
            .collect();
        let index: HashMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| EnvironmentError::UnknownNode(name.to_owned()))
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            edges.push((lookup(&e.from)?, lookup(&e.to)?, e.w));
        }
        Environment::new(nodes, edges, doc.tick_seconds)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(writer, &self.to_document())
    }
}

/// Reads and validates an environment document.
pub fn load_environment<R: Read>(source: R) -> Result<Environment, EnvironmentError> {
    let doc: EnvironmentDoc =
        serde_json::from_reader(source).map_err(|e| EnvironmentError::Parse(e.to_string()))?;
    Environment::from_document(doc)
}

/// On-disk environment document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub phi: f64,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub w: i64,
}
