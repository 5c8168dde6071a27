//! Graphs and their reduction to clustering instances.
//!
//! Each vertex becomes a point with one coordinate per edge: `-1` at the
//! edges it starts, `+1` at the edges it ends, undefined elsewhere. Two
//! points conflict exactly when their vertices are adjacent, so a proper
//! k-coloring gives a k-clustering of cost zero.

use std::collections::HashSet;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::point::{Dataset, MissingPoint};

/// Undirected simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are ordered pairs of zero-based vertices. Self-loops, endpoints
    /// out of range and repeated edges (in either orientation) are rejected.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::usage(format!("self-loop at vertex {}", a + 1)));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::usage(format!(
                    "edge ({}, {}) leaves the {vertex_count} vertices",
                    a + 1,
                    b + 1
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::usage(format!("duplicate edge ({}, {})", a + 1, b + 1)));
            }
        }
        Ok(Graph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph::new(n, edges)
    }
}

/// Reads `u v` pairs, one per line, 1-indexed; `#` starts a comment. The
/// vertex count is the largest index seen unless `vertices` is given.
pub fn read_edge_list(reader: impl BufRead, vertices: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_vertex = 0;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Error::Parse {
                    line: n + 1,
                    msg: format!("bad vertex {s:?}; vertices are numbered from 1"),
                }),
            }
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: n + 1,
                msg: "expected two vertices".into(),
            });
        }
        let (a, b) = (parse(fields[0])?, parse(fields[1])?);
        max_vertex = max_vertex.max(a).max(b);
        edges.push((a - 1, b - 1));
    }
    Graph::new(vertices.unwrap_or(max_vertex), edges)
}

/// The clustering instance of a graph: `n` points in `m` coordinates.
pub fn graph_to_instance(graph: &Graph) -> Result<Dataset> {
    let m = graph.edges.len();
    if m == 0 {
        return Err(Error::usage("graph has no edges"));
    }
    let mut points = vec![MissingPoint::null(m); graph.vertex_count];
    for (i, &(a, b)) in graph.edges.iter().enumerate() {
        points[a].set(i, -1.0);
        points[b].set(i, 1.0);
    }
    Dataset::with_dim(m, points)
}
