//! Simple undirected graphs with stable string ids, plus the vertex cover,
//! matching and recognition primitives the game solvers build on.
//!
//! Vertices are addressed internally by dense indices `0..n` assigned in
//! ascending id order, so every derived artifact is reproducible.

mod classify;
mod cover;
mod io;
mod matching;
mod set;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify, diameter, is_bipartite, is_split, two_coloring, Classes, Diameter};
pub use cover::{
    is_vertex_cover, mvc_bipartite, mvc_branch_and_bound, mvc_brute_force, mvc_exact,
    mvc_exact_with_limit, two_matching_cover, uncovered_edge, CoverResult, DEFAULT_MVC_LIMIT,
};
pub use io::{parse_graph, serialize_graph, valid_id};
pub use matching::{bipartite_matching, max_matching, Matching};
pub use set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
    #[error("graph has {n} vertices, exact search limit is {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
}

/// An undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(u: usize, v: usize) -> Edge {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

#[derive(Clone)]
pub struct Graph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    closed: Vec<VertexSet>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from external ids and id pairs.
    pub fn new<I, E, S>(ids: I, edges: E) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (S, S)>,
    {
        let mut ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        for id in &ids {
            if !valid_id(id) {
                return Err(GraphError::InvalidId(id.clone()));
            }
        }
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0].clone()));
            }
        }
        let index: HashMap<String, usize> =
            ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b): (String, String) = (a.into(), b.into());
            let u = *index.get(&a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let v = *index.get(&b).ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            pairs.push((u, v));
        }
        Self::assemble(ids, index, pairs)
    }

    /// Builds a graph on `n` vertices whose ids are zero-padded (`v00`, `v01`, ..)
    /// so that index `i` is the vertex named by `i`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let width = n.saturating_sub(1).to_string().len();
        let ids: Vec<String> = (0..n).map(|i| format!("v{i:0width$}")).collect();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::UnknownVertex(format!("#{}", u.max(v))));
            }
        }
        Self::assemble(ids, index, pairs.to_vec())
    }

    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Graph, GraphError> {
        let n = ids.len();
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(pairs.len());
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(ids[u].clone()));
            }
            edges.push(Edge::new(u, v));
            adj[u].push(v);
            adj[v].push(u);
        }
        edges.sort();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(
                    ids[w[0].0].clone(),
                    ids[w[0].1].clone(),
                ));
            }
        }
        let closed = adj
            .iter_mut()
            .enumerate()
            .map(|(v, nb)| {
                nb.sort_unstable();
                let mut s: VertexSet = nb.iter().copied().collect();
                s.insert(v);
                s
            })
            .collect();
        Ok(Graph {
            ids,
            index,
            adj,
            closed,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges in canonical (lexicographic index) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_position(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `N[v]`, the neighbors of `v` together with `v` itself.
    pub fn closed_neighborhood(&self, v: usize) -> &VertexSet {
        &self.closed[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.closed[u].contains(v)
    }

    /// Resolves an id pair to an edge of this graph.
    pub fn edge_by_ids(&self, a: &str, b: &str) -> Option<Edge> {
        let (u, v) = (self.index_of(a)?, self.index_of(b)?);
        self.has_edge(u, v).then(|| Edge::new(u, v))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        Self::assemble(self.ids.clone(), self.index.clone(), pairs).expect("complement is simple")
    }

    /// Whether `set` induces a clique.
    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| set.difference(&self.closed[v]).is_empty())
    }

    /// Whether the subgraph induced by `set` is connected (empty sets count as connected).
    pub fn induces_connected(&self, set: &VertexSet) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if set.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn is_connected(&self) -> bool {
        self.induces_connected(&VertexSet::full(self.n()))
    }

    /// Renders a vertex set as its sorted id list.
    pub fn format_set(&self, set: &VertexSet) -> String {
        let mut ids: Vec<&str> = set.iter().map(|v| self.id(v)).collect();
        ids.sort_unstable();
        ids.join(" ")
    }

    pub fn format_edge(&self, e: Edge) -> String {
        format!("{}-{}", self.id(e.0), self.id(e.1))
    }

    /// Parses a whitespace separated id list into a vertex set.
    pub fn parse_set(&self, text: &str) -> Result<VertexSet, GraphError> {
        text.split_whitespace()
            .map(|id| {
                self.index_of(id)
                    .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
            })
            .collect()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field(
                "edges",
                &self
                    .edges
                    .iter()
                    .map(|e| self.format_edge(*e))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}
