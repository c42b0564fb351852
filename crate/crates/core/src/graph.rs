//! The pattern graph and its orientations.
//!
//! Gapped patterns form a bipartite multigraph: left vertices are the
//! distinct first subpatterns, right vertices the distinct second
//! subpatterns, and every pattern contributes one edge (duplicates stay
//! parallel). Gapless patterns never enter the graph; the automaton
//! reports them directly.
//!
//! Two orientations drive the engines. [`degeneracy_orient`] peels the
//! vertex of minimum remaining degree and orients its remaining edges
//! outward; the largest degree seen at removal is the graph's degeneracy
//! and bounds every out-degree. [`threshold_orient`] fixes a degree
//! threshold, orients each edge out of a light endpoint, and hands edges
//! with two heavy endpoints back to the caller — the number of heavy
//! vertices per side is small, which is what makes the dense-case engine
//! work.
//!
//! Vertex ids for the bipartite form are `0..l_count` for the left side
//! and `l_count..l_count + r_count` for the right; the orientation
//! helpers are side-agnostic and reused by the subsequence engines on
//! arbitrary multigraphs.

use crate::dictionary::{GapBounds, GappedPattern};
use std::collections::{BTreeSet, HashMap};

/// Marker for edges the orientation did not assign (heavy-heavy edges).
pub const UNORIENTED: u32 = u32::MAX;

/// An edge assignment: every oriented edge has a tail responsible for it.
#[derive(Debug, Clone)]
pub struct Orientation {
    /// Tail vertex per edge, [`UNORIENTED`] when unassigned.
    pub tail: Vec<u32>,
    /// Head vertex per edge, [`UNORIENTED`] when unassigned.
    pub head: Vec<u32>,
    /// Edge ids leaving each vertex.
    pub out_edges: Vec<Vec<u32>>,
    /// Upper bound on the out-degree: the degeneracy for
    /// [`degeneracy_orient`], the observed maximum for
    /// [`threshold_orient`].
    pub bound: usize,
}

impl Orientation {
    pub fn max_out_degree(&self) -> usize {
        self.out_edges.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Orient a multigraph by repeatedly removing the vertex of minimum
/// remaining degree (smallest id on ties) and pointing its remaining
/// edges away from it. The returned `bound` is the maximum degree seen
/// at a removal — the graph's degeneracy — and no vertex ends up with
/// more out-edges than that.
pub fn degeneracy_orient(n: usize, edges: &[(u32, u32)]) -> Orientation {
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push((b, e as u32));
        adj[b as usize].push((a, e as u32));
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut live: BTreeSet<(usize, u32)> =
        (0..n as u32).map(|v| (degree[v as usize], v)).collect();
    let mut removed = vec![false; n];
    let mut oriented = vec![false; edges.len()];
    let mut tail = vec![UNORIENTED; edges.len()];
    let mut head = vec![UNORIENTED; edges.len()];
    let mut out_edges: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut bound = 0;

    while let Some(&(deg, v)) = live.iter().next() {
        live.remove(&(deg, v));
        removed[v as usize] = true;
        bound = bound.max(deg);
        for &(w, e) in &adj[v as usize] {
            if oriented[e as usize] {
                continue;
            }
            oriented[e as usize] = true;
            tail[e as usize] = v;
            head[e as usize] = w;
            out_edges[v as usize].push(e);
            if !removed[w as usize] {
                live.remove(&(degree[w as usize], w));
                degree[w as usize] -= 1;
                live.insert((degree[w as usize], w));
            }
        }
    }

    debug_assert!(out_edges.iter().all(|o| o.len() <= bound));
    Orientation {
        tail,
        head,
        out_edges,
        bound,
    }
}

/// Vertices split by degree against the integer threshold.
#[derive(Debug, Clone)]
pub struct HeavyLightSplit {
    /// Smallest `t >= 1` with `t * t * lsc >= d`.
    pub theta: usize,
    /// Per vertex: degree (counting parallel edges) exceeds `theta`.
    pub is_heavy: Vec<bool>,
    pub heavy: Vec<u32>,
}

/// Smallest integer `t >= 1` whose square, scaled by `lsc`, reaches the
/// edge count — the threshold separating heavy from light vertices.
pub fn integer_theta(d: usize, lsc: usize) -> usize {
    let lsc = lsc.max(1);
    let mut t = 1usize;
    while t * t * lsc < d {
        t += 1;
    }
    t
}

/// Classify vertices as heavy (degree above theta) or light. At most
/// `sqrt(lsc * d)` vertices per side can be heavy; the debug assertion
/// checks the global consequence.
pub fn classify_heavy(n: usize, edges: &[(u32, u32)], lsc: usize) -> HeavyLightSplit {
    let theta = integer_theta(edges.len(), lsc);
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        degree[a as usize] += 1;
        degree[b as usize] += 1;
    }
    let is_heavy: Vec<bool> = degree.iter().map(|&d| d > theta).collect();
    let heavy: Vec<u32> = (0..n as u32).filter(|&v| is_heavy[v as usize]).collect();
    // Each heavy vertex has degree at least theta + 1, and each side's
    // degrees sum to the edge count, so per side: count^2 < lsc * d.
    debug_assert!(
        heavy.len() * heavy.len() <= 4 * lsc.max(1) * edges.len().max(1),
        "heavy vertex count out of bounds"
    );
    HeavyLightSplit {
        theta,
        is_heavy,
        heavy,
    }
}

/// Orient every edge with a light endpoint out of that endpoint (out of
/// the first endpoint when both are light, so bipartite edges leave the
/// left side). Edges with two heavy endpoints are returned unoriented.
pub fn threshold_orient(
    n: usize,
    edges: &[(u32, u32)],
    is_heavy: &[bool],
) -> (Orientation, Vec<u32>) {
    let mut tail = vec![UNORIENTED; edges.len()];
    let mut head = vec![UNORIENTED; edges.len()];
    let mut out_edges: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut heavy_heavy = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        let (t, h) = if !is_heavy[a as usize] {
            (a, b)
        } else if !is_heavy[b as usize] {
            (b, a)
        } else {
            heavy_heavy.push(e as u32);
            continue;
        };
        tail[e] = t;
        head[e] = h;
        out_edges[t as usize].push(e as u32);
    }
    let bound = out_edges.iter().map(Vec::len).max().unwrap_or(0);
    (
        Orientation {
            tail,
            head,
            out_edges,
            bound,
        },
        heavy_heavy,
    )
}

/// One gapped pattern as a graph edge.
#[derive(Debug, Clone)]
pub struct DictEdge {
    pub pattern: u32,
    /// Left vertex (distinct first subpattern), `0..l_count`.
    pub l: u32,
    /// Right vertex (distinct second subpattern), `0..r_count`.
    pub r: u32,
    pub gap: GapBounds,
    /// Length of the second subpattern, cached for window arithmetic.
    pub p2_len: u32,
}

/// Bipartite multigraph of the gapped patterns.
#[derive(Debug, Clone)]
pub struct DictGraph {
    pub l_count: usize,
    pub r_count: usize,
    pub edges: Vec<DictEdge>,
    pub l_strings: Vec<Vec<u8>>,
    pub r_strings: Vec<Vec<u8>>,
    l_index: HashMap<Vec<u8>, u32>,
    r_index: HashMap<Vec<u8>, u32>,
}

impl DictGraph {
    pub fn build(patterns: &[GappedPattern]) -> DictGraph {
        let mut g = DictGraph {
            l_count: 0,
            r_count: 0,
            edges: Vec::new(),
            l_strings: Vec::new(),
            r_strings: Vec::new(),
            l_index: HashMap::new(),
            r_index: HashMap::new(),
        };
        for p in patterns {
            if p.is_gapless() {
                continue;
            }
            let l = match g.l_index.get(p.p1.as_slice()) {
                Some(&v) => v,
                None => {
                    let v = g.l_strings.len() as u32;
                    g.l_strings.push(p.p1.clone());
                    g.l_index.insert(p.p1.clone(), v);
                    v
                }
            };
            let r = match g.r_index.get(p.p2.as_slice()) {
                Some(&v) => v,
                None => {
                    let v = g.r_strings.len() as u32;
                    g.r_strings.push(p.p2.clone());
                    g.r_index.insert(p.p2.clone(), v);
                    v
                }
            };
            g.edges.push(DictEdge {
                pattern: p.id,
                l,
                r,
                gap: p.gap,
                p2_len: p.p2.len() as u32,
            });
        }
        g.l_count = g.l_strings.len();
        g.r_count = g.r_strings.len();
        g
    }

    /// Total vertex count of the bipartite form.
    pub fn vertex_count(&self) -> usize {
        self.l_count + self.r_count
    }

    /// Bipartite id of a right vertex.
    pub fn r_global(&self, r: u32) -> u32 {
        self.l_count as u32 + r
    }

    /// Edge endpoints in bipartite ids, edge order preserved.
    pub fn bipartite_edges(&self) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .map(|e| (e.l, self.r_global(e.r)))
            .collect()
    }

    pub fn l_vertex(&self, bytes: &[u8]) -> Option<u32> {
        self.l_index.get(bytes).copied()
    }

    pub fn r_vertex(&self, bytes: &[u8]) -> Option<u32> {
        self.r_index.get(bytes).copied()
    }
}
