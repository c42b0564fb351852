//! Brute-force reference implementations.
//!
//! Everything here favors obviousness over speed: quadratic scans, cubic
//! loops, exhaustive subset enumeration. These functions are the ground
//! truth that every streaming engine, orientation, and reduction is
//! differentially tested against. They share no code with the engines.
//!
//! Conventions: text and stream positions are 1-based; vertex and edge
//! ids are 0-based.

use crate::dictionary::GappedPattern;
use std::collections::BTreeSet;

/// An occurrence record: `(pattern id, end position, witness)`. In
/// dedup form the witness is `None` and each `(pattern, end)` pair
/// appears once; in witness form there is one record per valid pair of
/// subpattern occurrences.
pub type OccRecord = (u32, u32, Option<u32>);

/// All end positions (1-based) of `needle` in `text`, by naive scan.
pub fn match_ends(text: &[u8], needle: &[u8]) -> Vec<u32> {
    if needle.is_empty() || needle.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - needle.len())
        .filter(|&s| &text[s..s + needle.len()] == needle)
        .map(|s| (s + needle.len()) as u32)
        .collect()
}

/// Every occurrence of every dictionary pattern in `text`.
///
/// A gapped pattern `p1{α,β}p2` occurs with witness `j` and end `i` when
/// `p1` ends at `j`, `p2` ends at `i`, and the gap
/// `g = (start of p2) - j - 1 = i - |p2| - j` satisfies `α <= g <= β`
/// (`{*}` accepts any `g >= 0`, so the halves never overlap). A gapless
/// pattern occurs wherever `p1` ends; its witness is its own end.
pub fn dmog_occurrences(
    patterns: &[GappedPattern],
    text: &[u8],
    witnesses: bool,
) -> BTreeSet<OccRecord> {
    let mut out = BTreeSet::new();
    for p in patterns {
        if p.is_gapless() {
            for j in match_ends(text, &p.p1) {
                out.insert((p.id, j, if witnesses { Some(j) } else { None }));
            }
            continue;
        }
        let ends1 = match_ends(text, &p.p1);
        let ends2 = match_ends(text, &p.p2);
        for &i in &ends2 {
            for &j in &ends1 {
                let g = i as i64 - p.p2.len() as i64 - j as i64;
                if p.gap.contains(g) {
                    out.insert((p.id, i, if witnesses { Some(j) } else { None }));
                }
            }
        }
    }
    out
}

/// Unbounded streaming induced-subgraph reference. `edges` are directed
/// `(from, to)` pairs; `sequence[t]` is the vertex arriving at position
/// `t + 1`. Position `i`'s report is every edge `(v_j -> v_i)` with
/// `j < i`, each edge id listed once, sorted.
pub fn isg_unbounded(edges: &[(u32, u32)], sequence: &[u32]) -> Vec<Vec<u32>> {
    let mut reports = Vec::with_capacity(sequence.len());
    for (t, &v) in sequence.iter().enumerate() {
        let seen: BTreeSet<u32> = sequence[..t].iter().copied().collect();
        let mut here: Vec<u32> = edges
            .iter()
            .enumerate()
            .filter(|&(_, &(from, to))| to == v && seen.contains(&from))
            .map(|(e, _)| e as u32)
            .collect();
        here.sort_unstable();
        here.dedup();
        reports.push(here);
    }
    reports
}

/// Windowed streaming induced-subgraph reference with per-edge bounds
/// `(from, to, alpha, beta)`: reports every triple `(edge, j, i)` with
/// `j < i`, `sequence` holding `from` at `j` and `to` at `i`, and
/// `alpha <= i - j <= beta`. Uniform windows are the special case of
/// identical bounds on every edge.
pub fn isg_windowed(
    edges: &[(u32, u32, u32, u32)],
    sequence: &[u32],
) -> BTreeSet<(u32, u32, u32)> {
    let mut out = BTreeSet::new();
    for (ti, &vi) in sequence.iter().enumerate() {
        let i = (ti + 1) as u32;
        for (tj, &vj) in sequence[..ti].iter().enumerate() {
            let j = (tj + 1) as u32;
            for (e, &(from, to, alpha, beta)) in edges.iter().enumerate() {
                if from == vj && to == vi && i - j >= alpha && i - j <= beta {
                    out.insert((e as u32, j, i));
                }
            }
        }
    }
    out
}

/// Exhaustive degeneracy of an undirected multigraph: the maximum over
/// vertex subsets of the minimum degree of the subgraph induced by the
/// subset (parallel edges all count). Exponential in `n`; intended for
/// graphs of at most ~20 vertices.
pub fn degeneracy(n: usize, edges: &[(u32, u32)]) -> usize {
    assert!(n <= 25, "exhaustive degeneracy oracle is exponential in n");
    if n == 0 {
        return 0;
    }
    let mut adj = vec![vec![0u32; n]; n];
    for &(u, v) in edges {
        adj[u as usize][v as usize] += 1;
        adj[v as usize][u as usize] += 1;
    }
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let mut min_deg = u32::MAX;
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            let mut deg = 0;
            for u in 0..n {
                if u != v && mask & (1 << u) != 0 {
                    deg += adj[v][u];
                }
            }
            min_deg = min_deg.min(deg);
        }
        best = best.max(min_deg as usize);
    }
    best
}

/// All triangles of a simple undirected graph, as sorted vertex triples.
pub fn triangles(n: usize, edges: &[(u32, u32)]) -> BTreeSet<[u32; 3]> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            adj[u as usize][v as usize] = true;
            adj[v as usize][u as usize] = true;
        }
    }
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if adj[a][c] && adj[b][c] {
                    out.insert([a as u32, b as u32, c as u32]);
                }
            }
        }
    }
    out
}

/// Triangles through a fixed vertex, as sorted triples containing `u`.
pub fn triangles_at(n: usize, edges: &[(u32, u32)], u: u32) -> BTreeSet<[u32; 3]> {
    triangles(n, edges)
        .into_iter()
        .filter(|t| t.contains(&u))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::parse_dictionary;

    fn occs(dict: &str, text: &str, witnesses: bool) -> Vec<OccRecord> {
        let patterns = parse_dictionary(dict.as_bytes()).unwrap();
        dmog_occurrences(&patterns, text.as_bytes(), witnesses)
            .into_iter()
            .collect()
    }

    #[test]
    fn self_pairing_pattern_on_aaa() {
        // Expected values computed by hand from the gap definition:
        // p1 = p2 = "a", any non-negative gap. Ends of "a": 1, 2, 3.
        // Valid (j, i) pairs need g = i - 1 - j >= 0, i.e. j <= i - 1.
        assert_eq!(
            occs("a{*}a", "aaa", false),
            vec![(0, 2, None), (0, 3, None)]
        );
        assert_eq!(
            occs("a{*}a", "aaa", true),
            vec![(0, 2, Some(1)), (0, 3, Some(1)), (0, 3, Some(2))]
        );
    }

    #[test]
    fn overlap_is_forbidden() {
        // "a" ends at 3 and "ba" ends at 3; they overlap, so only the
        // witness at j = 1 counts (g = 3 - 2 - 1 = 0).
        assert_eq!(occs("a{0,1}ba", "aba", true), vec![(0, 3, Some(1))]);
    }

    #[test]
    fn bounded_gap_windows() {
        assert_eq!(occs("ab{0,2}cd", "abcd", true), vec![(0, 4, Some(2))]);
        assert_eq!(occs("ab{1,2}cd", "abcd", true), vec![]);
        assert_eq!(occs("ab{1,2}cd", "abxcd", true), vec![(0, 5, Some(2))]);
        assert_eq!(occs("ab{1,2}cd", "abxxxcd", true), vec![]);
    }

    #[test]
    fn gapless_patterns_report_every_end() {
        assert_eq!(
            occs("ab", "abab", true),
            vec![(0, 2, Some(2)), (0, 4, Some(4))]
        );
    }

    #[test]
    fn dedup_collapses_witnesses() {
        let w = occs("a{0,5}bb", "aaabb", true);
        assert_eq!(w, vec![(0, 5, Some(1)), (0, 5, Some(2)), (0, 5, Some(3))]);
        assert_eq!(occs("a{0,5}bb", "aaabb", false), vec![(0, 5, None)]);
    }

    #[test]
    fn isg_unbounded_direction_matters() {
        // Single directed edge a(0) -> b(1).
        let edges = [(0, 1)];
        assert_eq!(isg_unbounded(&edges, &[0, 1]), vec![vec![], vec![0]]);
        assert_eq!(isg_unbounded(&edges, &[1, 0]), vec![vec![], vec![]]);
    }

    #[test]
    fn isg_unbounded_self_loop_needs_two_arrivals() {
        let edges = [(0, 0)];
        assert_eq!(isg_unbounded(&edges, &[0]), vec![vec![]]);
        assert_eq!(isg_unbounded(&edges, &[0, 0]), vec![vec![], vec![0]]);
    }

    #[test]
    fn isg_windowed_uniform_example() {
        // Edge a(0) -> b(1), window [2, 3], sequence a,x,x,b.
        let edges = [(0, 1, 2, 3)];
        let got = isg_windowed(&edges, &[0, 2, 2, 1]);
        assert_eq!(got.into_iter().collect::<Vec<_>>(), vec![(0, 1, 4)]);
    }

    #[test]
    fn isg_windowed_parallel_edges() {
        // Parallel edges a->b with windows [1,2] and [5,6].
        let edges = [(0, 1, 1, 2), (0, 1, 5, 6)];
        let got = isg_windowed(&edges, &[0, 2, 1, 2, 2, 1]);
        assert_eq!(
            got.into_iter().collect::<Vec<_>>(),
            vec![(0, 1, 3), (1, 1, 6)]
        );
    }

    #[test]
    fn isg_windowed_zero_window_never_fires() {
        let edges = [(0, 0, 0, 0)];
        assert!(isg_windowed(&edges, &[0, 0, 0]).is_empty());
    }

    #[test]
    fn degeneracy_fixtures() {
        // Path on 4 vertices.
        assert_eq!(degeneracy(4, &[(0, 1), (1, 2), (2, 3)]), 1);
        // 4-clique.
        assert_eq!(
            degeneracy(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            3
        );
        // Cycle of length 5.
        assert_eq!(degeneracy(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), 2);
        // Two triangles sharing one vertex.
        assert_eq!(
            degeneracy(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]),
            2
        );
        // Parallel edges count: a doubled edge gives degeneracy 2.
        assert_eq!(degeneracy(2, &[(0, 1), (0, 1)]), 2);
        // Empty and edgeless graphs.
        assert_eq!(degeneracy(0, &[]), 0);
        assert_eq!(degeneracy(3, &[]), 0);
    }

    #[test]
    fn triangle_fixtures() {
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(triangles(4, &k4).len(), 4);
        let c5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert!(triangles(5, &c5).is_empty());
        let k3 = [(0, 1), (1, 2), (2, 0)];
        assert_eq!(
            triangles(3, &k3).into_iter().collect::<Vec<_>>(),
            vec![[0, 1, 2]]
        );
        let star = [(0, 1), (0, 2), (0, 3)];
        assert!(triangles(4, &star).is_empty());
        // Two triangles sharing an edge; vertex 0 sits on both.
        let shared = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3)];
        assert_eq!(triangles_at(4, &shared, 0).len(), 2);
        assert_eq!(triangles_at(4, &shared, 3).len(), 1);
    }
}
