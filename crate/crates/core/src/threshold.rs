//! Dense-case streaming engine via a threshold orientation.
//!
//! When the pattern graph is dense its degeneracy can reach `sqrt(d)`,
//! making the orientation engine's `lsc * degeneracy` character cost
//! expensive. [`ThresholdEngine`] instead splits vertices by degree
//! against the threshold `theta` (the smallest integer with
//! `theta^2 * lsc >= d`): every edge with a light endpoint leaves that
//! endpoint and runs through the ordinary light machinery, so light
//! owners scan at most `theta` edges per arrival. What remains are
//! edges between two heavy vertices, of which there are few distinct
//! endpoints (at most about `sqrt(lsc * d)` per side).
//!
//! Heavy-heavy edges with bounded gaps use the suffix-tree batching
//! mechanism. First subpatterns form a tree under the proper-suffix
//! relation, and the arrivals at any position are exactly a root-to-node
//! path, so the deepest arrival determines everything. Per (tree node,
//! heavy right vertex) the edges of the node and all its ancestors form
//! a chain; an array `A_u` indexed by heavy right vertices gives the
//! chain entry points for the whole path at once. Maintaining `A_u`
//! eagerly for every node is too expensive, so the tree is partitioned
//! into weight-balanced subtrees whose roots ("special" nodes) keep
//! precomputed arrays; any other node rebuilds its array on arrival by
//! walking to its nearest special ancestor, which costs
//! `O(sqrt(lsc * d))` by the partition invariant.
//!
//! * Uniform bounds: chain entries are spliced into per-right-vertex
//!   reporting lists (same linking/staleness discipline as the light
//!   machinery), and walks mark visited edges per position so shared
//!   chain suffixes are processed once.
//! * Per-edge bounds: chains exist per gap value `j`, and arrivals plant
//!   (chain, witness) entries in cyclic active-window buckets indexed by
//!   the exact future position where the right vertex would complete the
//!   pattern; reporting drains one bucket, with no staleness at all.
//! * Unbounded heavy-heavy edges fall back to the light machinery as
//!   tail-owned groups: their links happen once ever and their walks are
//!   output-sensitive, so no batching is needed.

use crate::automaton::SuffixTree;
use crate::counters::{SpaceGauge, WorkCounter};
use crate::dictionary::{GapBounds, GapRegime, GappedPattern};
use crate::dmog::{
    split_out_edges, DmogEngine, EngineIndex, LightMachinery, Occurrence, ReportMode, StreamCore,
};
use crate::graph::{classify_heavy, threshold_orient};

const NIL: u32 = u32::MAX;
const NO_POS: u32 = u32::MAX;

/// Smallest integer whose square is at least `x`.
fn isqrt_ceil(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Partition the tree into subtrees of weight at least `threshold` by
/// greedily peeling finished subtrees bottom-up; the root's residual
/// subtree may stay lighter. Returns the peel roots ("special" nodes);
/// the tree root always is one. For any non-special node, the total
/// weight strictly below its nearest special proper ancestor along the
/// path is less than `threshold`.
fn partition_tree(children: &[Vec<u32>], weights: &[u64], threshold: u64) -> Vec<bool> {
    let n = children.len();
    let mut special = vec![false; n];
    let mut residual = vec![0u64; n];
    let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
    while let Some(top) = stack.last_mut() {
        let (node, idx) = *top;
        if idx < children[node as usize].len() {
            top.1 += 1;
            stack.push((children[node as usize][idx], 0));
        } else {
            stack.pop();
            let mut w = weights[node as usize];
            for &c in &children[node as usize] {
                w += residual[c as usize];
            }
            if w >= threshold {
                special[node as usize] = true;
            } else {
                residual[node as usize] = w;
            }
        }
    }
    special[0] = true;
    special
}

/// One heavy-heavy edge in the uniform mechanism. `next` continues the
/// chain into the nearest proper ancestor's edges for the same right
/// vertex (after this node's own parallel edges).
struct HhEdge {
    pattern: u32,
    node: u32,
    hr: u32,
    next: u32,
}

/// A spliceable chain entry: the deepest local edge of one (tree node,
/// heavy right vertex) pair, plus its reporting-list linkage.
struct Item {
    head: u32,
    hr: u32,
    witness: u32,
    linked: bool,
    prev: u32,
    next: u32,
}

/// Overlay the path from `node` to its nearest special proper ancestor
/// into `a` (deepest match wins), finishing from that ancestor's
/// precomputed array. `a` must be pre-filled with `NIL`. Returns the
/// number of elementary steps taken.
fn fill_from_path(
    a: &mut [u32],
    node: u32,
    parent: &[u32],
    special: &[bool],
    node_pairs: &[Vec<(u32, u32)>],
    special_a: &[Vec<u32>],
) -> u64 {
    let mut work = 0;
    let mut x = node;
    loop {
        work += 1;
        for &(hr, item) in &node_pairs[x as usize] {
            work += 1;
            if a[hr as usize] == NIL {
                a[hr as usize] = item;
            }
        }
        if x == 0 {
            return work;
        }
        x = parent[x as usize];
        if special[x as usize] {
            for (slot, &v) in special_a[x as usize].iter().enumerate() {
                work += 1;
                if a[slot] == NIL {
                    a[slot] = v;
                }
            }
            return work;
        }
    }
}

/// Heavy-heavy reporting for the uniform regime.
struct HeavyUniform {
    alpha: u32,
    beta: u32,
    k: usize,
    hr_of_r: Vec<u32>,
    hr_m: Vec<u32>,
    l_of_node: Vec<u32>,
    parent: Vec<u32>,
    special: Vec<bool>,
    /// Per node: (heavy index, item) for pairs with local edges.
    node_pairs: Vec<Vec<(u32, u32)>>,
    special_a: Vec<Vec<u32>>,
    scratch_a: Vec<u32>,
    edges: Vec<HhEdge>,
    items: Vec<Item>,
    list_head: Vec<u32>,
    /// Last position each edge was walked; shared chain suffixes stop
    /// repeat walks in both report modes.
    stamp: Vec<u32>,
    /// Pending splices, slot = (tap position + m_v) % len.
    wheel: Vec<Vec<(u32, u32)>>,
    static_words: i64,
}

impl HeavyUniform {
    fn build(
        index: &EngineIndex,
        tree: &SuffixTree,
        node_of_l: &[u32],
        hh: &[u32],
        alpha: u32,
        beta: u32,
    ) -> HeavyUniform {
        let g = &index.graph;
        let mut l_of_node = vec![NIL; tree.len()];
        for (l, &node) in node_of_l.iter().enumerate() {
            if node != NIL {
                l_of_node[node as usize] = l as u32;
            }
        }
        let mut hr_of_r = vec![NIL; g.r_count];
        let mut hr_m: Vec<u32> = Vec::new();
        let mut edges: Vec<HhEdge> = Vec::new();
        let mut local: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        for &e in hh {
            let de = &g.edges[e as usize];
            if hr_of_r[de.r as usize] == NIL {
                hr_of_r[de.r as usize] = hr_m.len() as u32;
                hr_m.push(de.p2_len);
            }
            let node = node_of_l[de.l as usize];
            local[node as usize].push(edges.len() as u32);
            edges.push(HhEdge {
                pattern: de.pattern,
                node,
                hr: hr_of_r[de.r as usize],
                next: NIL,
            });
        }
        let k = hr_m.len();
        for list in &mut local {
            list.sort_by_key(|&id| edges[id as usize].hr);
        }

        // Chain local runs into the nearest ancestor's heads by depth-
        // first traversal with undo.
        let mut items: Vec<Item> = Vec::new();
        let mut node_pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); tree.len()];
        let mut cur = vec![NIL; k];
        let mut undo: Vec<(u32, u32)> = Vec::new();
        let chain_node = |node: u32,
                              edges: &mut Vec<HhEdge>,
                              items: &mut Vec<Item>,
                              node_pairs: &mut Vec<Vec<(u32, u32)>>,
                              cur: &mut Vec<u32>,
                              undo: &mut Vec<(u32, u32)>| {
            let list = &local[node as usize];
            let mut i = 0;
            while i < list.len() {
                let hr = edges[list[i] as usize].hr;
                let mut j = i;
                while j + 1 < list.len() && edges[list[j + 1] as usize].hr == hr {
                    j += 1;
                }
                for t in i..j {
                    edges[list[t] as usize].next = list[t + 1];
                }
                undo.push((hr, cur[hr as usize]));
                edges[list[j] as usize].next = cur[hr as usize];
                cur[hr as usize] = list[i];
                let item = items.len() as u32;
                items.push(Item {
                    head: list[i],
                    hr,
                    witness: NO_POS,
                    linked: false,
                    prev: NIL,
                    next: NIL,
                });
                node_pairs[node as usize].push((hr, item));
                i = j + 1;
            }
        };
        let mut stack: Vec<(u32, usize, usize)> = Vec::new();
        {
            let mark = undo.len();
            chain_node(0, &mut edges, &mut items, &mut node_pairs, &mut cur, &mut undo);
            stack.push((0, 0, mark));
        }
        while let Some(top) = stack.last_mut() {
            let (node, idx, mark) = *top;
            if idx < tree.children[node as usize].len() {
                top.1 += 1;
                let c = tree.children[node as usize][idx];
                let m2 = undo.len();
                chain_node(c, &mut edges, &mut items, &mut node_pairs, &mut cur, &mut undo);
                stack.push((c, 0, m2));
            } else {
                while undo.len() > mark {
                    let (hr, old) = undo.pop().expect("marked entries present");
                    cur[hr as usize] = old;
                }
                stack.pop();
            }
        }

        // Specials by full-degree weight; their arrays persist.
        let mut weights = vec![0u64; tree.len()];
        for de in &g.edges {
            weights[node_of_l[de.l as usize] as usize] += 1;
        }
        let d = g.edges.len() as u64;
        let lsc = index.stats.lsc.max(1) as u64;
        let special = partition_tree(&tree.children, &weights, isqrt_ceil(lsc * d).max(1));
        let mut order: Vec<u32> = (0..tree.len() as u32)
            .filter(|&v| special[v as usize])
            .collect();
        order.sort_by_key(|&v| tree.depth[v as usize]);
        let mut special_a: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        for &s in &order {
            let mut a = vec![NIL; k];
            fill_from_path(&mut a, s, &tree.parent, &special, &node_pairs, &special_a);
            special_a[s as usize] = a;
        }

        let static_words = (edges.len() * 4
            + items.len() * 6
            + order.len() * k
            + tree.len() * 2
            + k * 3) as i64;
        HeavyUniform {
            alpha,
            beta,
            k,
            hr_of_r,
            hr_m,
            l_of_node,
            parent: tree.parent.clone(),
            special,
            node_pairs,
            special_a,
            scratch_a: vec![NIL; k],
            stamp: vec![NO_POS; edges.len()],
            edges,
            items,
            list_head: vec![NIL; k],
            wheel: vec![Vec::new(); index.stats.max_p2_len as usize + 1],
            static_words,
        }
    }

    fn splice(&mut self, item: u32, witness: u32) {
        let (hr, linked, prev, next) = {
            let it = &self.items[item as usize];
            (it.hr as usize, it.linked, it.prev, it.next)
        };
        if linked {
            if prev != NIL {
                self.items[prev as usize].next = next;
            } else {
                self.list_head[hr] = next;
            }
            if next != NIL {
                self.items[next as usize].prev = prev;
            }
        }
        let old = self.list_head[hr];
        self.list_head[hr] = item;
        let it = &mut self.items[item as usize];
        debug_assert!(!it.linked || it.witness <= witness);
        it.linked = true;
        it.witness = witness;
        it.prev = NIL;
        it.next = old;
        if old != NIL {
            self.items[old as usize].prev = item;
        }
    }

    fn begin_char(&mut self, i: u32, work: &mut WorkCounter, gauge: &mut SpaceGauge) {
        let slot = i as usize % self.wheel.len();
        for (item, witness) in std::mem::take(&mut self.wheel[slot]) {
            work.add(1);
            gauge.shrink(2);
            self.splice(item, witness);
        }
    }

    /// The deepest arriving tree node at witness position `j` enters the
    /// gap window (current position `i = j + alpha`): schedule splices
    /// for every chain its path contributes to.
    fn tap(&mut self, node: u32, j: u32, i: u32, work: &mut WorkCounter, gauge: &mut SpaceGauge) {
        if self.special[node as usize] {
            self.scratch_a.copy_from_slice(&self.special_a[node as usize]);
            work.add(self.k as u64);
        } else {
            self.scratch_a.fill(NIL);
            let w = fill_from_path(
                &mut self.scratch_a,
                node,
                &self.parent,
                &self.special,
                &self.node_pairs,
                &self.special_a,
            );
            work.add(self.k as u64 + w);
        }
        for hr in 0..self.k {
            let item = self.scratch_a[hr];
            if item == NIL {
                continue;
            }
            let slot = (i as u64 + self.hr_m[hr] as u64) as usize % self.wheel.len();
            self.wheel[slot].push((item, j));
            work.add(1);
            gauge.grow(2);
        }
    }

    fn r_arrive(
        &mut self,
        hr: u32,
        m_v: u32,
        i: u32,
        mode: ReportMode,
        machinery: &LightMachinery,
        out: &mut Vec<Occurrence>,
        work: &mut WorkCounter,
    ) {
        let mut cur = self.list_head[hr as usize];
        while cur != NIL {
            work.add(1);
            let (witness, prev, next, head) = {
                let it = &self.items[cur as usize];
                (it.witness, it.prev, it.next, it.head)
            };
            if (witness as u64) + (self.beta as u64) + (m_v as u64) < i as u64 {
                // The list is ordered by splice witness, so everything
                // from here back is stale: chop it.
                if prev == NIL {
                    self.list_head[hr as usize] = NIL;
                } else {
                    self.items[prev as usize].next = NIL;
                }
                let mut c = cur;
                while c != NIL {
                    work.add(1);
                    let it = &mut self.items[c as usize];
                    it.linked = false;
                    let n = it.next;
                    it.prev = NIL;
                    it.next = NIL;
                    c = n;
                }
                break;
            }
            let mut e = head;
            while e != NIL {
                if self.stamp[e as usize] == i {
                    // A deeper chain already walked this shared suffix.
                    break;
                }
                self.stamp[e as usize] = i;
                work.add(1);
                let rec = &self.edges[e as usize];
                match mode {
                    ReportMode::Dedup => out.push(Occurrence {
                        pattern: rec.pattern,
                        end: i,
                        witness: None,
                    }),
                    ReportMode::Witness => {
                        let l = self.l_of_node[rec.node as usize];
                        let lo = i as i64 - self.beta as i64 - m_v as i64;
                        let hi = i as i64 - self.alpha as i64 - m_v as i64;
                        let (a, b, cost) = machinery.tau_range(l, lo, hi);
                        work.add(cost);
                        debug_assert!(a < b, "fresh chains have a witness in range");
                        for t in a..b {
                            out.push(Occurrence {
                                pattern: rec.pattern,
                                end: i,
                                witness: Some(machinery.tau_at(l, t)),
                            });
                        }
                    }
                }
                e = rec.next;
            }
            cur = next;
        }
    }
}

/// One heavy-heavy edge in the per-edge-bounds mechanism: the chain
/// successor exists per covered gap value.
struct NuEdge {
    pattern: u32,
    a: u32,
    /// Chain successor for gap value `a + offset`.
    next: Vec<u32>,
}

/// Heavy-heavy reporting for per-edge (non-uniform) bounds.
struct HeavyNonUniform {
    alpha_star: u32,
    span: u32,
    hr_of_r: Vec<u32>,
    hr_m: Vec<u32>,
    parent: Vec<u32>,
    special: Vec<bool>,
    /// Per node: (hr * span + gap offset, head edge) for local coverage.
    node_pairs: Vec<Vec<(u32, u32)>>,
    special_w: Vec<Vec<u32>>,
    scratch_w: Vec<u32>,
    edges: Vec<NuEdge>,
    /// Cyclic active-window buckets per heavy index: entries to report
    /// if the vertex arrives exactly at the tagged position.
    aw_size: u32,
    aw_tag: Vec<u32>,
    aw: Vec<Vec<(u32, u32)>>,
    /// Dedup-mode reporting stamps (cross-gap-value chains can repeat an
    /// edge within one position).
    stamp: Vec<u32>,
    static_words: i64,
}

impl HeavyNonUniform {
    fn build(
        index: &EngineIndex,
        tree: &SuffixTree,
        node_of_l: &[u32],
        hh: &[u32],
    ) -> HeavyNonUniform {
        let g = &index.graph;
        let stats = &index.stats;
        let alpha_star = stats.alpha_star;
        let span = stats.beta_star - stats.alpha_star + 1;
        let mut hr_of_r = vec![NIL; g.r_count];
        let mut hr_m: Vec<u32> = Vec::new();
        let mut edges: Vec<NuEdge> = Vec::new();
        let mut edge_node: Vec<u32> = Vec::new();
        let mut edge_hr: Vec<u32> = Vec::new();
        let mut local: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        for &e in hh {
            let de = &g.edges[e as usize];
            let GapBounds::Bounded(a, b) = de.gap else {
                unreachable!("heavy-heavy fallback keeps unbounded edges out");
            };
            if hr_of_r[de.r as usize] == NIL {
                hr_of_r[de.r as usize] = hr_m.len() as u32;
                hr_m.push(de.p2_len);
            }
            let node = node_of_l[de.l as usize];
            local[node as usize].push(edges.len() as u32);
            edge_node.push(node);
            edge_hr.push(hr_of_r[de.r as usize]);
            edges.push(NuEdge {
                pattern: de.pattern,
                a,
                next: vec![NIL; (b - a + 1) as usize],
            });
        }
        let k = hr_m.len();
        for list in &mut local {
            list.sort_by_key(|&id| edge_hr[id as usize]);
        }

        let mut node_pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); tree.len()];
        let mut cur = vec![NIL; k * span as usize];
        let mut undo: Vec<(u32, u32)> = Vec::new();
        let mut touched: Vec<u32> = Vec::new();
        let chain_node = |node: u32,
                              edges: &mut Vec<NuEdge>,
                              node_pairs: &mut Vec<Vec<(u32, u32)>>,
                              cur: &mut Vec<u32>,
                              undo: &mut Vec<(u32, u32)>,
                              touched: &mut Vec<u32>| {
            touched.clear();
            // Reverse order keeps same-pair parallel edges chained in id
            // order with the lowest id as head.
            for &e in local[node as usize].iter().rev() {
                let hr = edge_hr[e as usize];
                let a = edges[e as usize].a;
                for off in 0..edges[e as usize].next.len() {
                    let j = a + off as u32;
                    let idx = hr * span + (j - alpha_star);
                    undo.push((idx, cur[idx as usize]));
                    edges[e as usize].next[off] = cur[idx as usize];
                    cur[idx as usize] = e;
                    touched.push(idx);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &idx in touched.iter() {
                node_pairs[node as usize].push((idx, cur[idx as usize]));
            }
        };
        let mut stack: Vec<(u32, usize, usize)> = Vec::new();
        {
            let mark = undo.len();
            chain_node(0, &mut edges, &mut node_pairs, &mut cur, &mut undo, &mut touched);
            stack.push((0, 0, mark));
        }
        while let Some(top) = stack.last_mut() {
            let (node, idx, mark) = *top;
            if idx < tree.children[node as usize].len() {
                top.1 += 1;
                let c = tree.children[node as usize][idx];
                let m2 = undo.len();
                chain_node(c, &mut edges, &mut node_pairs, &mut cur, &mut undo, &mut touched);
                stack.push((c, 0, m2));
            } else {
                while undo.len() > mark {
                    let (idx, old) = undo.pop().expect("marked entries present");
                    cur[idx as usize] = old;
                }
                stack.pop();
            }
        }

        // Specials by covered-slot weight; thresholds scale with span.
        let mut weights = vec![0u64; tree.len()];
        for (node, pairs) in node_pairs.iter().enumerate() {
            weights[node] = pairs.len() as u64;
        }
        let d = g.edges.len() as u64;
        let lsc = index.stats.lsc.max(1) as u64;
        let threshold = (isqrt_ceil(lsc * d) * span as u64).max(1);
        let special = partition_tree(&tree.children, &weights, threshold);
        let mut order: Vec<u32> = (0..tree.len() as u32)
            .filter(|&v| special[v as usize])
            .collect();
        order.sort_by_key(|&v| tree.depth[v as usize]);
        let mut special_w: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        for &s in &order {
            let mut w = vec![NIL; k * span as usize];
            fill_from_path(&mut w, s, &tree.parent, &special, &node_pairs, &special_w);
            special_w[s as usize] = w;
        }

        let aw_size = (span + index.stats.max_p2_len as u32).max(1);
        let chain_words: usize = edges.iter().map(|e| e.next.len() + 3).sum();
        let static_words = (chain_words
            + order.len() * k * span as usize
            + tree.len() * 2
            + k * (aw_size as usize + 2)) as i64;
        HeavyNonUniform {
            alpha_star,
            span,
            hr_of_r,
            hr_m,
            parent: tree.parent.clone(),
            special,
            node_pairs,
            special_w,
            scratch_w: vec![NIL; k * span as usize],
            stamp: vec![NO_POS; edges.len()],
            edges,
            aw_size,
            aw_tag: vec![NO_POS; k * aw_size as usize],
            aw: vec![Vec::new(); k * aw_size as usize],
            static_words,
        }
    }

    /// The deepest arriving tree node with witness position `t` enters
    /// the earliest gap window: plant its chains into the buckets of the
    /// exact positions where each (right vertex, gap value) completes.
    fn tap(&mut self, node: u32, t: u32, work: &mut WorkCounter, gauge: &mut SpaceGauge) {
        if self.special[node as usize] {
            self.scratch_w.copy_from_slice(&self.special_w[node as usize]);
            work.add(self.scratch_w.len() as u64);
        } else {
            self.scratch_w.fill(NIL);
            let w = fill_from_path(
                &mut self.scratch_w,
                node,
                &self.parent,
                &self.special,
                &self.node_pairs,
                &self.special_w,
            );
            work.add(self.scratch_w.len() as u64 + w);
        }
        for idx in 0..self.scratch_w.len() {
            let head = self.scratch_w[idx];
            if head == NIL {
                continue;
            }
            let hr = idx as u32 / self.span;
            let j = self.alpha_star + (idx as u32 % self.span);
            let target = t as u64 + j as u64 + self.hr_m[hr as usize] as u64;
            let slot = (hr as u64 * self.aw_size as u64 + target % self.aw_size as u64) as usize;
            if self.aw_tag[slot] != target as u32 {
                gauge.shrink(2 * self.aw[slot].len() as i64);
                self.aw[slot].clear();
                self.aw_tag[slot] = target as u32;
            }
            self.aw[slot].push((head, t));
            work.add(1);
            gauge.grow(2);
        }
    }

    fn r_arrive(
        &mut self,
        hr: u32,
        m_v: u32,
        i: u32,
        mode: ReportMode,
        out: &mut Vec<Occurrence>,
        work: &mut WorkCounter,
        gauge: &mut SpaceGauge,
    ) {
        let slot = (hr as u64 * self.aw_size as u64 + i as u64 % self.aw_size as u64) as usize;
        work.add(1);
        if self.aw_tag[slot] != i {
            return;
        }
        let drained = std::mem::take(&mut self.aw[slot]);
        gauge.shrink(2 * drained.len() as i64);
        for (head, t) in drained {
            let j = i - m_v - t;
            let mut e = head;
            while e != NIL {
                work.add(1);
                let rec = &self.edges[e as usize];
                match mode {
                    ReportMode::Witness => out.push(Occurrence {
                        pattern: rec.pattern,
                        end: i,
                        witness: Some(t),
                    }),
                    ReportMode::Dedup => {
                        // Chains for other gap values may already have
                        // reported this edge at this position: skip but
                        // keep walking, suffixes are only shared per
                        // gap value.
                        if self.stamp[e as usize] != i {
                            self.stamp[e as usize] = i;
                            out.push(Occurrence {
                                pattern: rec.pattern,
                                end: i,
                                witness: None,
                            });
                        }
                    }
                }
                e = rec.next[(j - rec.a) as usize];
            }
        }
        self.aw_tag[slot] = NO_POS;
    }
}

/// The dense-case engine: threshold orientation, light machinery for
/// every light-touching edge, and suffix-tree batching for bounded
/// heavy-heavy edges.
pub struct ThresholdEngine {
    index: EngineIndex,
    mode: ReportMode,
    machinery: LightMachinery,
    heavy_u: Option<HeavyUniform>,
    heavy_nu: Option<HeavyNonUniform>,
    /// Distinct-subpattern id -> suffix-tree node for gapped firsts.
    node_of_subpat: Vec<Option<u32>>,
    theta: usize,
    core: StreamCore,
    work: WorkCounter,
    gauge: SpaceGauge,
}

impl ThresholdEngine {
    pub fn new(patterns: &[GappedPattern], mode: ReportMode) -> ThresholdEngine {
        let index = EngineIndex::build(patterns.to_vec());
        let bip = index.graph.bipartite_edges();
        let split = classify_heavy(index.graph.vertex_count(), &bip, index.stats.lsc);
        let (orientation, heavy_heavy) =
            threshold_orient(index.graph.vertex_count(), &bip, &split.is_heavy);
        let (mut l_assigned, r_assigned) = split_out_edges(&index.graph, &orientation);
        let mut hh_bounded = Vec::new();
        for &e in &heavy_heavy {
            let de = &index.graph.edges[e as usize];
            match de.gap {
                // Unbounded edges link once ever and report output-
                // sensitively, so the light machinery absorbs them.
                GapBounds::Unbounded => l_assigned[de.l as usize].push(e),
                GapBounds::Bounded(..) => hh_bounded.push(e),
            }
        }
        let machinery = LightMachinery::new(&index, &l_assigned, r_assigned, mode);
        let tree = index.automaton.build_suffix_tree();
        let mut node_of_l = vec![NIL; index.graph.l_count];
        for (s, node) in tree.node_of_subpat.iter().enumerate() {
            if let (Some(node), Some(l)) = (node, index.l_of_subpat[s]) {
                node_of_l[l as usize] = *node;
            }
        }
        let (heavy_u, heavy_nu) = if hh_bounded.is_empty() {
            (None, None)
        } else {
            match index.stats.regime {
                GapRegime::Uniform => (
                    Some(HeavyUniform::build(
                        &index,
                        &tree,
                        &node_of_l,
                        &hh_bounded,
                        index.stats.alpha_star,
                        index.stats.beta_star,
                    )),
                    None,
                ),
                GapRegime::NonUniform => (
                    None,
                    Some(HeavyNonUniform::build(&index, &tree, &node_of_l, &hh_bounded)),
                ),
                GapRegime::Unbounded => unreachable!("bounded edges imply a bounded regime"),
            }
        };
        let mut gauge = SpaceGauge::new();
        gauge.grow(
            index.stats.total_len as i64
                + index.automaton.state_count() as i64
                + machinery.static_words()
                + heavy_u.as_ref().map_or(0, |h| h.static_words)
                + heavy_nu.as_ref().map_or(0, |h| h.static_words),
        );
        let core = StreamCore::new(&index);
        ThresholdEngine {
            node_of_subpat: tree.node_of_subpat.clone(),
            index,
            mode,
            machinery,
            heavy_u,
            heavy_nu,
            theta: split.theta,
            core,
            work: WorkCounter::new(),
            gauge,
        }
    }

    pub fn index(&self) -> &EngineIndex {
        &self.index
    }

    /// The light/heavy degree threshold.
    pub fn theta(&self) -> usize {
        self.theta
    }
}

impl DmogEngine for ThresholdEngine {
    fn step(&mut self, byte: u8, out: &mut Vec<Occurrence>) {
        out.clear();
        self.work.add(1);
        let i = self.core.advance(&self.index.automaton, byte, &mut self.work);
        self.machinery.begin_char(i, &mut self.work, &mut self.gauge);
        if let Some(h) = self.heavy_u.as_mut() {
            h.begin_char(i, &mut self.work, &mut self.gauge);
        }
        // Right phase.
        for idx in 0..self.core.event.r_arrivals.len() {
            let a = self.core.event.r_arrivals[idx];
            let v = self.index.r_of_subpat[a.subpat as usize]
                .expect("second subpatterns have right vertices");
            self.machinery.r_arrive(v, a.len, i, out, &mut self.work);
            if let Some(h) = self.heavy_u.as_mut() {
                let hr = h.hr_of_r[v as usize];
                if hr != NIL {
                    h.r_arrive(hr, a.len, i, self.mode, &self.machinery, out, &mut self.work);
                }
            }
            if let Some(h) = self.heavy_nu.as_mut() {
                let hr = h.hr_of_r[v as usize];
                if hr != NIL {
                    h.r_arrive(hr, a.len, i, self.mode, out, &mut self.work, &mut self.gauge);
                }
            }
        }
        // Gapless patterns report at every arrival of their string.
        for idx in 0..self.core.event.l_arrivals.len() {
            let a = self.core.event.l_arrivals[idx];
            let sub = self.index.automaton.subpattern(a.subpat);
            for &p in &sub.gapless_patterns {
                self.work.add(1);
                out.push(Occurrence {
                    pattern: p,
                    end: i,
                    witness: (self.mode == ReportMode::Witness).then_some(i),
                });
            }
        }
        // Left phase.
        for idx in 0..self.core.event.l_arrivals.len() {
            let a = self.core.event.l_arrivals[idx];
            if let Some(u) = self.index.l_of_subpat[a.subpat as usize] {
                self.machinery
                    .l_arrive_immediate(u, i, &mut self.work, &mut self.gauge);
            }
        }
        if let Some(j) = self
            .core
            .activation_tap(&self.index.automaton, &mut self.work, &mut self.gauge)
        {
            let mut deepest = NIL;
            for idx in 0..self.core.scratch.l_arrivals.len() {
                let a = self.core.scratch.l_arrivals[idx];
                if let Some(u) = self.index.l_of_subpat[a.subpat as usize] {
                    self.machinery
                        .l_activate_windowed(u, j, i, &mut self.work, &mut self.gauge);
                }
                if deepest == NIL {
                    if let Some(node) = self.node_of_subpat[a.subpat as usize] {
                        deepest = node;
                    }
                }
            }
            if deepest != NIL {
                if let Some(h) = self.heavy_u.as_mut() {
                    h.tap(deepest, j, i, &mut self.work, &mut self.gauge);
                }
                if let Some(h) = self.heavy_nu.as_mut() {
                    h.tap(deepest, j, &mut self.work, &mut self.gauge);
                }
            }
        }
        if let Some(j) = self
            .core
            .expiry_tap(&self.index.automaton, &mut self.work, &mut self.gauge)
        {
            for idx in 0..self.core.scratch.l_arrivals.len() {
                let a = self.core.scratch.l_arrivals[idx];
                if let Some(u) = self.index.l_of_subpat[a.subpat as usize] {
                    self.machinery.l_expire(u, j, &mut self.work, &mut self.gauge);
                }
            }
        }
        self.work.add(out.len() as u64);
        self.work.end_char();
    }

    fn position(&self) -> u32 {
        self.core.position()
    }

    fn mode(&self) -> ReportMode {
        self.mode
    }

    fn work(&self) -> &WorkCounter {
        &self.work
    }

    fn space_peak(&self) -> i64 {
        self.gauge.peak()
    }
}
