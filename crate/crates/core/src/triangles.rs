//! Triangle listing through the streaming edge detectors.
//!
//! Listing the triangles that contain a vertex `u` is exactly the
//! question the element-stream engines answer: stream the neighborhood
//! `N(u)` and report every graph edge whose endpoints both appear — each
//! such edge `{x, y}` closes the triangle `{u, x, y}`. Two pipelines
//! realize this, one per window flavor:
//!
//! * [`vertex_triangles`] doubles every undirected edge into both
//!   directed orders and streams `N(u)` through [`IsgUnbounded`] once;
//!   whichever endpoint arrives first matches the stored direction.
//! * [`vertex_triangles_bounded`] streams `N(u)` twice as distinct
//!   earlier/later copies separated by `alpha` dummy elements, and asks
//!   [`IsgUniform`] for pairs at distance `alpha + 1 ..= alpha + 2k - 1`
//!   (`k = |N(u)|`). Every earlier copy precedes every later copy, so a
//!   single directed edge per undirected edge suffices and the window
//!   captures each pair exactly once regardless of `alpha`.
//!
//! Both pipelines report each triangle at `u` exactly once, so querying
//! every vertex lists every triangle exactly three times — once per
//! corner.

use crate::isg::{IsgUniform, IsgUnbounded};
use thiserror::Error;

/// Errors from [`QueryGraph::parse`].
#[derive(Debug, Error)]
pub enum GraphParseError {
    #[error("line {line}: expected two vertex ids, got {got:?}")]
    Malformed { line: usize, got: String },
    #[error("line {line}: vertex id {got:?} is not a number")]
    BadVertex { line: usize, got: String },
}

/// An undirected simple graph read from an edge list.
///
/// The input has one `u v` edge per line; blank lines and lines starting
/// with `#` are skipped. Self-loops are dropped and parallel edges are
/// merged, neither can contribute to a triangle.
#[derive(Debug, Clone)]
pub struct QueryGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl QueryGraph {
    pub fn parse(input: &str) -> Result<QueryGraph, GraphParseError> {
        let mut edges = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(GraphParseError::Malformed {
                    line: idx + 1,
                    got: line.to_string(),
                });
            };
            let parse_vertex = |tok: &str| {
                tok.parse::<u32>().map_err(|_| GraphParseError::BadVertex {
                    line: idx + 1,
                    got: tok.to_string(),
                })
            };
            let (a, b) = (parse_vertex(a)?, parse_vertex(b)?);
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(QueryGraph::from_edges(edges))
    }

    /// Build from undirected edges; self-loops are dropped and parallel
    /// edges merged.
    pub fn from_edges(edges: impl IntoIterator<Item = (u32, u32)>) -> QueryGraph {
        let mut edges: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let n = edges
            .iter()
            .map(|&(_, b)| b as usize + 1)
            .max()
            .unwrap_or(0);
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        QueryGraph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }
}

/// Canonical sorted form of a triangle's corners.
fn canonical(u: u32, x: u32, y: u32) -> [u32; 3] {
    let mut t = [u, x, y];
    t.sort_unstable();
    t
}

/// A reusable unbounded pipeline: one doubled edge detector, reset
/// between queries.
pub struct TrianglePipeline {
    graph: QueryGraph,
    engine: IsgUnbounded,
}

impl TrianglePipeline {
    pub fn new(graph: QueryGraph) -> TrianglePipeline {
        let doubled: Vec<(u32, u32)> = graph
            .edges
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect();
        let engine = IsgUnbounded::new(graph.n.max(1), &doubled);
        TrianglePipeline { graph, engine }
    }

    pub fn graph(&self) -> &QueryGraph {
        &self.graph
    }

    /// All triangles containing `u`, each exactly once, sorted.
    pub fn query(&mut self, u: u32) -> Vec<[u32; 3]> {
        self.engine.reset();
        let mut out = Vec::new();
        let mut found = Vec::new();
        for &x in &self.graph.adj[u as usize] {
            self.engine.step(x, &mut out);
            for &e in &out {
                let (a, b) = self.graph.edges[e as usize / 2];
                found.push(canonical(u, a, b));
            }
        }
        found.sort_unstable();
        found
    }
}

/// All triangles containing `u` via [`IsgUnbounded`], each exactly once.
pub fn vertex_triangles(graph: &QueryGraph, u: u32) -> Vec<[u32; 3]> {
    TrianglePipeline::new(graph.clone()).query(u)
}

/// All triangles containing `u` via [`IsgUniform`], streaming the
/// neighborhood as earlier copies `x`, then `alpha` dummies, then later
/// copies `n + x`, with the window set to span exactly the earlier/later
/// pairs. Any `alpha >= 0` yields the same triangles.
pub fn vertex_triangles_bounded(graph: &QueryGraph, u: u32, alpha: u32) -> Vec<[u32; 3]> {
    let k = graph.adj[u as usize].len() as u32;
    if k == 0 {
        return Vec::new();
    }
    let n = graph.n as u32;
    let dummy = 2 * n;
    let edges: Vec<(u32, u32)> = graph.edges.iter().map(|&(a, b)| (a, n + b)).collect();
    let mut engine = IsgUniform::new(2 * graph.n + 1, &edges, alpha + 1, alpha + 2 * k - 1);
    let mut out = Vec::new();
    let mut found = Vec::new();
    let mut feed = |engine: &mut IsgUniform, v: u32, found: &mut Vec<[u32; 3]>| {
        engine.step(v, &mut out);
        for &(e, _witness) in &out {
            let (a, b) = graph.edges[e as usize];
            found.push(canonical(u, a, b));
        }
    };
    for &x in &graph.adj[u as usize] {
        feed(&mut engine, x, &mut found);
    }
    for _ in 0..alpha {
        feed(&mut engine, dummy, &mut found);
    }
    for &x in &graph.adj[u as usize] {
        feed(&mut engine, n + x, &mut found);
    }
    found.sort_unstable();
    found
}
