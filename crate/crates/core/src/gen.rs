//! Deterministic generators: random differential instances, counter
//! families with known shape parameters, and a census of small graphs
//! up to isomorphism.
//!
//! Everything here is seeded — the same seed reproduces the same
//! instance byte for byte, which keeps differential failures replayable
//! and benchmark CSVs stable.
//!
//! The census enumerates one representative per isomorphism class by
//! levelwise augmentation: every class on `m` vertices arises from some
//! class on `m - 1` vertices by attaching one vertex to a neighbor
//! subset, so extending each representative with all `2^(m-1)` subsets
//! and deduplicating by canonical form is exhaustive. The canonical form
//! is the minimum upper-triangle bitstring over all relabelings that
//! respect the stable coloring computed by iterated neighborhood
//! refinement; the refinement is isomorphism-invariant, so restricting
//! to color-respecting relabelings preserves both soundness and
//! completeness while pruning almost all of the `n!` search.

use crate::dictionary::{GapBounds, GapRegime, GappedPattern};
use rand::Rng;
use std::collections::HashSet;

/// A random dictionary of the requested regime plus a short text over
/// `{a, b, c}`. With `gapless_mix`, a slice of the patterns are plain
/// strings. First subpatterns repeat across patterns often enough to
/// produce parallel edges and locally dense spots.
pub fn random_dmog_instance<R: Rng>(
    rng: &mut R,
    regime: GapRegime,
    gapless_mix: bool,
) -> (Vec<GappedPattern>, Vec<u8>) {
    let count = rng.gen_range(1..=25u32);
    let uniform = (rng.gen_range(0..3u32), rng.gen_range(0..5u32));
    let mut firsts: Vec<Vec<u8>> = Vec::new();
    let mut patterns = Vec::with_capacity(count as usize);
    for id in 0..count {
        let p1 = if !firsts.is_empty() && rng.gen_bool(0.2) {
            firsts[rng.gen_range(0..firsts.len())].clone()
        } else {
            random_text(rng, 3, b"abc")
        };
        firsts.push(p1.clone());
        if gapless_mix && rng.gen_bool(0.25) {
            patterns.push(GappedPattern {
                id,
                p1,
                p2: Vec::new(),
                gap: GapBounds::Unbounded,
            });
            continue;
        }
        let gap = match regime {
            GapRegime::Unbounded => GapBounds::Unbounded,
            GapRegime::Uniform => GapBounds::Bounded(uniform.0, uniform.0 + uniform.1),
            GapRegime::NonUniform => {
                if rng.gen_bool(0.25) {
                    GapBounds::Unbounded
                } else {
                    let a = rng.gen_range(0..4);
                    GapBounds::Bounded(a, a + rng.gen_range(0..5))
                }
            }
        };
        patterns.push(GappedPattern {
            id,
            p1,
            p2: random_text(rng, 3, b"abc"),
            gap,
        });
    }
    let text = random_text(rng, 500, b"abc");
    (patterns, text)
}

/// A random text of length `1..=max_len` over the given alphabet.
pub fn random_text<R: Rng>(rng: &mut R, max_len: usize, sigma: &[u8]) -> Vec<u8> {
    (0..rng.gen_range(1..=max_len))
        .map(|_| sigma[rng.gen_range(0..sigma.len())])
        .collect()
}

/// A random multigraph (self-loops and parallel edges allowed): vertex
/// count and edge list.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> (usize, Vec<(u32, u32)>) {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
        .collect();
    (n, edges)
}

/// A random instance for the unbounded element-stream engine.
pub fn random_isg_unbounded<R: Rng>(rng: &mut R) -> (usize, Vec<(u32, u32)>, Vec<u32>) {
    let (n, edges) = random_multigraph(rng, 8, 30);
    let stream = (0..rng.gen_range(1..=200))
        .map(|_| rng.gen_range(0..n as u32))
        .collect();
    (n, edges, stream)
}

/// A random instance for the single-window element-stream engine.
pub fn random_isg_uniform<R: Rng>(rng: &mut R) -> (usize, Vec<(u32, u32)>, u32, u32, Vec<u32>) {
    let (n, edges, stream) = random_isg_unbounded(rng);
    let alpha = rng.gen_range(0..=5);
    (n, edges, alpha, alpha + rng.gen_range(0..=6), stream)
}

/// A random instance for the per-edge-window element-stream engine:
/// edges carry `(from, to, alpha, beta)`.
pub fn random_isg_nonuniform<R: Rng>(rng: &mut R) -> (usize, Vec<(u32, u32, u32, u32)>, Vec<u32>) {
    let (n, edges, stream) = random_isg_unbounded(rng);
    let windowed = edges
        .into_iter()
        .map(|(u, v)| {
            let a = rng.gen_range(0..=5);
            (u, v, a, a + rng.gen_range(0..=6))
        })
        .collect();
    (n, windowed, stream)
}

/// `K_{delta,delta}` with all gaps `{0,3}`: `delta^2` patterns over
/// suffix-free two-letter subpatterns, so `lsc = 1` and the pattern
/// graph's degeneracy is exactly `delta`. Supports `delta <= 8`.
pub fn delta_family(delta: u32) -> Vec<GappedPattern> {
    assert!((1..=8).contains(&delta));
    let mut patterns = Vec::new();
    for i in 0..delta {
        for j in 0..delta {
            patterns.push(GappedPattern {
                id: patterns.len() as u32,
                p1: vec![b'l', b'a' + i as u8],
                p2: vec![b'r', b'a' + j as u8],
                gap: GapBounds::Bounded(0, 3),
            });
        }
    }
    patterns
}

/// Text for the block families: block `t` is `l<x> r<y>` sweeping all
/// `(x, y)` pairs cyclically, so every block completes exactly one gap
/// (length 0) and arrival rates per character do not depend on `width`.
pub fn block_family_text(width: u32, blocks: usize) -> Vec<u8> {
    let mut text = Vec::with_capacity(blocks * 4);
    for t in 0..blocks {
        let i = (t as u32 % width) as u8;
        let j = ((t as u32 / width) % width) as u8;
        text.extend_from_slice(&[b'l', b'a' + i, b'r', b'a' + j]);
    }
    text
}

/// `K_{s,s}` duplicated four times with all gaps `{0,3}`: `d = 4 s^2`
/// parallel-edge patterns over the same strings as [`delta_family`], so
/// every vertex has degree `4 s`, strictly above the dense threshold
/// `2 s`. Supports `s <= 8`.
pub fn threshold_family(s: u32) -> Vec<GappedPattern> {
    assert!((1..=8).contains(&s));
    let mut patterns = Vec::new();
    for _rep in 0..4 {
        for base in delta_family(s) {
            patterns.push(GappedPattern {
                id: patterns.len() as u32,
                ..base
            });
        }
    }
    patterns
}

/// Two patterns sharing one second subpattern of length `m_len` with the
/// window `{alpha, alpha + width}`: degeneracy 1 and `lsc = 1` across
/// every parameter choice, isolating the space bound's window terms.
pub fn space_family(alpha: u32, width: u32, m_len: u32) -> Vec<GappedPattern> {
    assert!(m_len >= 1);
    [&b"ab"[..], &b"bb"[..]]
        .iter()
        .enumerate()
        .map(|(id, p1)| GappedPattern {
            id: id as u32,
            p1: p1.to_vec(),
            p2: vec![b'c'; m_len as usize],
            gap: GapBounds::Bounded(alpha, alpha + width),
        })
        .collect()
}

/// Text stressing [`space_family`]: left arrivals every other character
/// for longer than the full window horizon, a burst of `c`s to complete
/// patterns, then more arrivals.
pub fn space_family_text(alpha: u32, width: u32, m_len: u32) -> Vec<u8> {
    let horizon = (alpha + width + m_len + 2) as usize;
    let mut text = Vec::new();
    for _ in 0..horizon {
        text.extend_from_slice(b"ab");
    }
    text.extend(std::iter::repeat(b'c').take(m_len as usize));
    for _ in 0..horizon / 2 {
        text.extend_from_slice(b"ab");
    }
    text
}

/// One representative of a graph isomorphism class.
#[derive(Debug, Clone)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

/// Stable coloring by iterated neighborhood refinement: start from
/// degrees, repeatedly split classes by the multiset of neighbor colors,
/// and rank classes by their (isomorphism-invariant) signatures.
fn stable_colors(n: usize, adj: &[u8; 8]) -> ([usize; 8], usize) {
    let mut color = [0usize; 8];
    for v in 0..n {
        color[v] = adj[v].count_ones() as usize;
    }
    let mut count = 0;
    loop {
        let mut keyed: Vec<((usize, Vec<usize>), usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&u| (adj[v] >> u) & 1 == 1)
                    .map(|u| color[u])
                    .collect();
                nb.sort_unstable();
                ((color[v], nb), v)
            })
            .collect();
        keyed.sort();
        let mut rank = 0;
        let mut next = [0usize; 8];
        for idx in 0..keyed.len() {
            if idx > 0 && keyed[idx].0 != keyed[idx - 1].0 {
                rank += 1;
            }
            next[keyed[idx].1] = rank;
        }
        color = next;
        if rank + 1 == count {
            return (color, count);
        }
        count = rank + 1;
    }
}

/// Minimum upper-triangle bitstring over color-respecting relabelings.
pub(crate) fn canonical_key(n: usize, adj: &[u8; 8]) -> u32 {
    let (color, count) = stable_colors(n, adj);
    let mut members: Vec<Vec<u8>> = vec![Vec::new(); count];
    let mut class_of_slot = [0usize; 8];
    for v in 0..n {
        members[color[v]].push(v as u8);
    }
    {
        let mut slot = 0;
        for (c, m) in members.iter().enumerate() {
            for _ in m {
                class_of_slot[slot] = c;
                slot += 1;
            }
        }
    }
    let mut perm = [0u8; 8];
    let mut best = u32::MAX;
    fn rec(
        idx: usize,
        n: usize,
        class_of_slot: &[usize; 8],
        members: &[Vec<u8>],
        used: &mut u16,
        perm: &mut [u8; 8],
        adj: &[u8; 8],
        best: &mut u32,
    ) {
        if idx == n {
            let mut key = 0u32;
            for i in 0..n {
                for j in i + 1..n {
                    key = (key << 1) | ((adj[perm[i] as usize] >> perm[j]) & 1) as u32;
                }
            }
            *best = (*best).min(key);
            return;
        }
        for &v in &members[class_of_slot[idx]] {
            if *used & (1 << v) != 0 {
                continue;
            }
            *used |= 1 << v;
            perm[idx] = v;
            rec(idx + 1, n, class_of_slot, members, used, perm, adj, best);
            *used &= !(1 << v);
        }
    }
    let mut used = 0u16;
    rec(0, n, &class_of_slot, &members, &mut used, &mut perm, adj, &mut best);
    best
}

/// All graphs on exactly `n <= 8` vertices, one per isomorphism class.
pub fn enumerate_graphs(n: usize) -> Vec<SmallGraph> {
    assert!((1..=8).contains(&n));
    let mut reps: Vec<[u8; 8]> = vec![[0u8; 8]];
    for m in 2..=n {
        let mut seen: HashSet<u32> = HashSet::new();
        let mut next = Vec::new();
        for g in &reps {
            for subset in 0u16..(1 << (m - 1)) {
                let mut adj = *g;
                adj[m - 1] = subset as u8;
                for u in 0..m - 1 {
                    if (subset >> u) & 1 == 1 {
                        adj[u] |= 1 << (m - 1);
                    }
                }
                if seen.insert(canonical_key(m, &adj)) {
                    next.push(adj);
                }
            }
        }
        reps = next;
    }
    reps.into_iter()
        .map(|adj| {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if (adj[i] >> j) & 1 == 1 {
                        edges.push((i as u32, j as u32));
                    }
                }
            }
            SmallGraph { n, edges }
        })
        .collect()
}

/// Whether the undirected graph is connected (vacuously true for a
/// single vertex).
pub fn is_connected(n: usize, edges: &[(u32, u32)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                visited += 1;
                stack.push(u);
            }
        }
    }
    visited == n
}

/// Known class counts for graphs on `1..=8` vertices.
pub const GRAPH_CLASS_COUNTS: [usize; 8] = [1, 2, 4, 11, 34, 156, 1044, 12346];
/// Known class counts for connected graphs on `1..=8` vertices.
pub const CONNECTED_CLASS_COUNTS: [usize; 8] = [1, 1, 2, 6, 21, 112, 853, 11117];
