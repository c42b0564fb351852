//! The streaming engine for gapped-dictionary matching.
//!
//! Preprocess a dictionary once, then feed text one character at a time;
//! every pattern occurrence ending at the current position is reported
//! before the next character is read. A gapped pattern `p1{a,b}p2`
//! occurs with end `i` when `p2` ends at `i`, `p1` ends at some `j`,
//! and the gap `g = i - |p2| - j` satisfies `a <= g <= b` (for `{*}`,
//! any `g >= 0`). In [`ReportMode::Dedup`] each pattern is reported at
//! most once per end position; in [`ReportMode::Witness`] every valid
//! `j` is reported.
//!
//! [`OrientationEngine`] implements the sparse strategy: the pattern
//! graph is degeneracy-oriented so every edge is owned by one endpoint
//! with out-degree at most the degeneracy. Arrivals are detected by the
//! matching automaton; per character the engine does work proportional
//! to `lsc * degeneracy` plus the output size (amortized), where `lsc`
//! bounds the arrivals per position.
//!
//! The mechanism, shared with the dense engine through
//! [`LightMachinery`]:
//!
//! * Edges owned by their right endpoint are checked directly when that
//!   endpoint arrives, by searching the tail's recent-witness queue.
//! * Edges owned by their left endpoint are grouped per vertex pair and
//!   linked into the head's reporting list only once a witness becomes
//!   old enough to pair (a timing-wheel event at `witness + alpha +
//!   |p2|`), so every linked entry a walk touches either reports or is
//!   stale. Stale tails (newest witness too old) are chopped lazily,
//!   amortized against their links.
//! * Per-edge gap windows (the mixed regime) replace lists with interval
//!   stabbing: each witness plants one interval of end positions per
//!   owned edge, and the arriving head stabs the current position.
//! * A ring of automaton states for the last `beta + M + 2` positions
//!   re-derives past arrivals at one word per position, which is what
//!   delayed activation (`+alpha` space) and witness expiry cost.

use crate::automaton::ArrivalEvent;
use crate::counters::{SpaceGauge, WorkCounter};
use crate::dictionary::{compute_stats, DictionaryStats, GapBounds, GapRegime, GappedPattern};
use crate::graph::{degeneracy_orient, DictGraph, Orientation};
use crate::stabbing::{IntervalKey, IntervalSet};
use crate::Automaton;
use std::collections::VecDeque;

const NIL: u32 = u32::MAX;
const NO_POS: u32 = u32::MAX;

/// What to report per occurrence end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    /// Each pattern at most once per end position, no witness.
    Dedup,
    /// Every valid first-subpattern end `j` (gapless patterns witness
    /// their own end).
    Witness,
}

/// Which preprocessing strategy an engine uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    /// Degeneracy orientation; work scales with the graph's degeneracy.
    Orientation,
    /// Heavy/light threshold split; work scales with `sqrt(lsc * d)`.
    Threshold,
}

/// One reported occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub pattern: u32,
    /// 1-based text position of the last character.
    pub end: u32,
    /// End of the first subpattern, in witness mode.
    pub witness: Option<u32>,
}

/// A streaming matcher: one character in, all occurrences ending there
/// out, before the next character.
pub trait DmogEngine {
    fn step(&mut self, byte: u8, out: &mut Vec<Occurrence>);
    fn position(&self) -> u32;
    fn mode(&self) -> ReportMode;
    fn work(&self) -> &WorkCounter;
    /// Peak live words of engine state (build structures included).
    fn space_peak(&self) -> i64;
}

/// Everything both engines build from the dictionary before streaming.
pub struct EngineIndex {
    pub patterns: Vec<GappedPattern>,
    pub stats: DictionaryStats,
    pub automaton: Automaton,
    pub graph: DictGraph,
    /// Distinct-subpattern id -> left/right pattern-graph vertex.
    pub l_of_subpat: Vec<Option<u32>>,
    pub r_of_subpat: Vec<Option<u32>>,
}

impl EngineIndex {
    pub fn build(patterns: Vec<GappedPattern>) -> EngineIndex {
        let stats = compute_stats(&patterns);
        let automaton = Automaton::build(&patterns);
        let graph = DictGraph::build(&patterns);
        let l_of_subpat = automaton
            .subpatterns()
            .iter()
            .map(|s| graph.l_vertex(&s.bytes))
            .collect();
        let r_of_subpat = automaton
            .subpatterns()
            .iter()
            .map(|s| graph.r_vertex(&s.bytes))
            .collect();
        EngineIndex {
            patterns,
            stats,
            automaton,
            graph,
            l_of_subpat,
            r_of_subpat,
        }
    }
}

/// Per-edge data the machinery needs at stream time.
struct EdgeRec {
    pattern: u32,
    l: u32,
    r: u32,
    m_v: u32,
    gap: GapBounds,
}

/// Parallel edges sharing (tail, head, boundedness), linked and walked
/// as one unit.
struct LGroup {
    tail: u32,
    head: u32,
    m_v: u32,
    edges: Vec<u32>,
    bounded: bool,
    linked: bool,
    linked_witness: u32,
    prev: u32,
    next: u32,
}

#[derive(Clone, Copy)]
enum LightRegime {
    Unbounded,
    Uniform { alpha: u32, beta: u32 },
    NonUniform { beta_star: u32 },
}

/// The per-edge reporting machinery, parameterized by an edge-to-owner
/// assignment. The orientation engine feeds it the full degeneracy
/// orientation; the threshold engine feeds it the light edges (plus
/// fallback edges) of the threshold orientation.
pub(crate) struct LightMachinery {
    mode: ReportMode,
    regime: LightRegime,
    max_m: u32,
    /// Witness mode over a dictionary with unbounded gaps: witnesses
    /// never expire, so the queues keep full history.
    tau_full: bool,
    edges: Vec<EdgeRec>,
    groups: Vec<LGroup>,
    /// Per left vertex: owned groups with a shared bounded window.
    bgroups_of_l: Vec<Vec<u32>>,
    /// Per left vertex: owned unbounded groups, drained (scheduled for
    /// their permanent link) on the vertex's first arrival.
    ugroups_of_l: Vec<Vec<u32>>,
    /// Per left vertex: owned edges that report via interval stabbing.
    intervals_of_l: Vec<Vec<u32>>,
    r_assigned: Vec<Vec<u32>>,
    /// Reporting lists per right vertex: windowed groups and unbounded
    /// groups live in separate lists (the latter are never stale).
    list_head: Vec<u32>,
    ulist_head: Vec<u32>,
    /// Witness positions per left vertex, oldest first.
    tau: Vec<VecDeque<u32>>,
    first_witness: Vec<u32>,
    /// Timing wheel of pending (group, witness) links, `max_m + 1` slots.
    wheel: Vec<Vec<(u32, u32)>>,
    /// Pending witness windows per right vertex (mixed regime).
    sets: Vec<IntervalSet>,
    key_expiry: VecDeque<(u32, u32, IntervalKey)>,
    /// Last end position emitted per edge, for stab deduplication.
    stamps: Vec<u32>,
    stab_buf: Vec<(u32, u32)>,
}

impl LightMachinery {
    pub(crate) fn new(
        index: &EngineIndex,
        l_assigned: &[Vec<u32>],
        r_assigned: Vec<Vec<u32>>,
        mode: ReportMode,
    ) -> LightMachinery {
        let g = &index.graph;
        let stats = &index.stats;
        let max_m = stats.max_p2_len as u32;
        let regime = match stats.regime {
            GapRegime::Unbounded => LightRegime::Unbounded,
            GapRegime::Uniform => LightRegime::Uniform {
                alpha: stats.alpha_star,
                beta: stats.beta_star,
            },
            GapRegime::NonUniform => LightRegime::NonUniform {
                beta_star: stats.beta_star,
            },
        };
        let edges: Vec<EdgeRec> = g
            .edges
            .iter()
            .map(|e| EdgeRec {
                pattern: e.pattern,
                l: e.l,
                r: e.r,
                m_v: e.p2_len,
                gap: e.gap,
            })
            .collect();
        let has_unbounded = edges.iter().any(|e| matches!(e.gap, GapBounds::Unbounded));

        let mut groups: Vec<LGroup> = Vec::new();
        let mut bgroups_of_l: Vec<Vec<u32>> = vec![Vec::new(); g.l_count];
        let mut ugroups_of_l: Vec<Vec<u32>> = vec![Vec::new(); g.l_count];
        let mut intervals_of_l: Vec<Vec<u32>> = vec![Vec::new(); g.l_count];
        for (u, owned) in l_assigned.iter().enumerate() {
            let mut groupable: Vec<(u32, bool, u32)> = Vec::new();
            for &e in owned {
                let rec = &edges[e as usize];
                match (regime, rec.gap) {
                    (_, GapBounds::Unbounded) => groupable.push((rec.r, false, e)),
                    // Per-edge windows report through intervals, not lists.
                    (LightRegime::NonUniform { .. }, GapBounds::Bounded(..)) => {
                        intervals_of_l[u].push(e)
                    }
                    (_, GapBounds::Bounded(..)) => groupable.push((rec.r, true, e)),
                }
            }
            groupable.sort_unstable();
            for (head, bounded, e) in groupable {
                match groups.last_mut() {
                    Some(last)
                        if last.tail == u as u32 && last.head == head && last.bounded == bounded =>
                    {
                        last.edges.push(e)
                    }
                    _ => {
                        let gid = groups.len() as u32;
                        if bounded {
                            bgroups_of_l[u].push(gid);
                        } else {
                            ugroups_of_l[u].push(gid);
                        }
                        groups.push(LGroup {
                            tail: u as u32,
                            head,
                            m_v: edges[e as usize].m_v,
                            edges: vec![e],
                            bounded,
                            linked: false,
                            linked_witness: NO_POS,
                            prev: NIL,
                            next: NIL,
                        });
                    }
                }
            }
        }

        let stamp_count = edges.len();
        LightMachinery {
            mode,
            regime,
            max_m,
            tau_full: mode == ReportMode::Witness && has_unbounded,
            edges,
            groups,
            bgroups_of_l,
            ugroups_of_l,
            intervals_of_l,
            r_assigned,
            list_head: vec![NIL; g.r_count],
            ulist_head: vec![NIL; g.r_count],
            tau: vec![VecDeque::new(); g.l_count],
            first_witness: vec![NO_POS; g.l_count],
            wheel: vec![Vec::new(); max_m as usize + 1],
            sets: (0..g.r_count).map(|_| IntervalSet::new()).collect(),
            key_expiry: VecDeque::new(),
            stamps: vec![NO_POS; stamp_count],
            stab_buf: Vec::new(),
        }
    }

    /// Live words in groups, assignments and wheel slots, charged to the
    /// dictionary-size term of the space budget.
    pub(crate) fn static_words(&self) -> i64 {
        (self.edges.len() * 6
            + self.groups.len() * 8
            + self.list_head.len() * 2
            + self.tau.len() * 2
            + self.wheel.len()) as i64
    }

    fn link_group(&mut self, gid: u32, witness: u32) {
        let (head, bounded, linked, prev, next) = {
            let g = &self.groups[gid as usize];
            (g.head as usize, g.bounded, g.linked, g.prev, g.next)
        };
        if linked {
            // Splice out before re-inserting at the front.
            if prev != NIL {
                self.groups[prev as usize].next = next;
            } else if self.list_head[head] == gid {
                self.list_head[head] = next;
            } else {
                self.ulist_head[head] = next;
            }
            if next != NIL {
                self.groups[next as usize].prev = prev;
            }
        }
        let list = if bounded {
            &mut self.list_head[head]
        } else {
            &mut self.ulist_head[head]
        };
        let old = *list;
        *list = gid;
        let g = &mut self.groups[gid as usize];
        debug_assert!(!g.linked || g.linked_witness <= witness);
        g.linked = true;
        g.linked_witness = witness;
        g.prev = NIL;
        g.next = old;
        if old != NIL {
            self.groups[old as usize].prev = gid;
        }
    }

    /// Fire this position's deferred links and interval expiries. Call
    /// before any arrival handling for the position.
    pub(crate) fn begin_char(&mut self, i: u32, work: &mut WorkCounter, gauge: &mut SpaceGauge) {
        let slot = i as usize % self.wheel.len();
        let fired = std::mem::take(&mut self.wheel[slot]);
        for (gid, witness) in fired {
            work.add(1);
            gauge.shrink(2);
            self.link_group(gid, witness);
        }
        while self
            .key_expiry
            .front()
            .is_some_and(|&(t, _, _)| t <= i)
        {
            let (_, r, key) = self.key_expiry.pop_front().expect("front checked");
            let removed = self.sets[r as usize].remove(key);
            debug_assert!(removed, "interval expired twice");
            work.add(1 + self.sets[r as usize].take_work());
            gauge.shrink(3);
        }
    }

    /// Duties owed at the arrival position itself: remember the first
    /// witness and schedule the one-time link of unbounded groups.
    pub(crate) fn l_arrive_immediate(
        &mut self,
        u: u32,
        j: u32,
        work: &mut WorkCounter,
        gauge: &mut SpaceGauge,
    ) {
        work.add(1);
        if self.first_witness[u as usize] == NO_POS {
            self.first_witness[u as usize] = j;
        }
        if self.tau_full {
            self.tau[u as usize].push_back(j);
            gauge.grow(1);
        }
        for gid in std::mem::take(&mut self.ugroups_of_l[u as usize]) {
            let m_v = self.groups[gid as usize].m_v;
            let slot = (j as u64 + m_v as u64) as usize % self.wheel.len();
            self.wheel[slot].push((gid, j));
            work.add(1);
            gauge.grow(2);
        }
    }

    /// A witness enters the reporting window (position `j`, now `i`):
    /// queue it and schedule links or plant intervals for owned edges.
    pub(crate) fn l_activate_windowed(
        &mut self,
        u: u32,
        j: u32,
        i: u32,
        work: &mut WorkCounter,
        gauge: &mut SpaceGauge,
    ) {
        work.add(1);
        if !self.tau_full {
            self.tau[u as usize].push_back(j);
            gauge.grow(1);
        }
        match self.regime {
            LightRegime::Unbounded => debug_assert!(false, "no windowed phase when unbounded"),
            LightRegime::Uniform { .. } => {
                for idx in 0..self.bgroups_of_l[u as usize].len() {
                    let gid = self.bgroups_of_l[u as usize][idx];
                    let m_v = self.groups[gid as usize].m_v;
                    let slot = (i as u64 + m_v as u64) as usize % self.wheel.len();
                    self.wheel[slot].push((gid, j));
                    work.add(1);
                    gauge.grow(2);
                }
            }
            LightRegime::NonUniform { beta_star } => {
                for idx in 0..self.intervals_of_l[u as usize].len() {
                    let e = self.intervals_of_l[u as usize][idx];
                    let rec = &self.edges[e as usize];
                    let GapBounds::Bounded(a, b) = rec.gap else {
                        unreachable!("interval edges are bounded");
                    };
                    let lo = j as u64 + a as u64 + rec.m_v as u64;
                    let hi = j as u64 + b as u64 + rec.m_v as u64;
                    let r = rec.r as usize;
                    let key = self.sets[r].insert(lo, hi, (e, j));
                    work.add(1 + self.sets[r].take_work());
                    let expire = (j as u64 + beta_star as u64 + self.max_m as u64 + 1)
                        .min(u32::MAX as u64) as u32;
                    self.key_expiry.push_back((expire, rec.r, key));
                    gauge.grow(3);
                }
            }
        }
    }

    /// The oldest queued witness leaves every window.
    pub(crate) fn l_expire(&mut self, u: u32, j: u32, work: &mut WorkCounter, gauge: &mut SpaceGauge) {
        if self.tau_full {
            return;
        }
        work.add(1);
        if let Some(&front) = self.tau[u as usize].front() {
            debug_assert_eq!(front, j, "witness queues expire oldest-first");
            if front == j {
                self.tau[u as usize].pop_front();
                gauge.shrink(1);
            }
        }
    }

    /// Indices of `tau[u]` with witness in `[lo, hi]`, plus search cost.
    pub(crate) fn tau_range(&self, u: u32, lo: i64, hi: i64) -> (usize, usize, u64) {
        let t = &self.tau[u as usize];
        let cost = 1 + (t.len() as u64 + 1).ilog2() as u64;
        if hi < lo || hi < 1 {
            return (0, 0, cost);
        }
        let a = t.partition_point(|&j| (j as i64) < lo);
        let b = t.partition_point(|&j| (j as i64) <= hi);
        (a, b, cost)
    }

    pub(crate) fn tau_at(&self, u: u32, idx: usize) -> u32 {
        self.tau[u as usize][idx]
    }

    /// A right vertex arrives at `i` with subpattern length `m_v`:
    /// report everything it completes.
    pub(crate) fn r_arrive(
        &mut self,
        v: u32,
        m_v: u32,
        i: u32,
        out: &mut Vec<Occurrence>,
        work: &mut WorkCounter,
    ) {
        work.add(1);
        // Windowed reporting list: report until the stale tail.
        if let LightRegime::Uniform { alpha, beta } = self.regime {
            let mut cur = self.list_head[v as usize];
            while cur != NIL {
                work.add(1);
                let (tail, witness, prev, next) = {
                    let g = &self.groups[cur as usize];
                    (g.tail, g.linked_witness, g.prev, g.next)
                };
                if (witness as u64) + beta as u64 + (m_v as u64) < i as u64 {
                    // Everything from here back is stale: chop and stop.
                    if prev == NIL {
                        self.list_head[v as usize] = NIL;
                    } else {
                        self.groups[prev as usize].next = NIL;
                    }
                    let mut c = cur;
                    while c != NIL {
                        work.add(1);
                        let g = &mut self.groups[c as usize];
                        g.linked = false;
                        let n = g.next;
                        g.prev = NIL;
                        g.next = NIL;
                        c = n;
                    }
                    break;
                }
                match self.mode {
                    ReportMode::Dedup => {
                        for &e in &self.groups[cur as usize].edges {
                            out.push(Occurrence {
                                pattern: self.edges[e as usize].pattern,
                                end: i,
                                witness: None,
                            });
                        }
                    }
                    ReportMode::Witness => {
                        let lo = i as i64 - beta as i64 - m_v as i64;
                        let hi = i as i64 - alpha as i64 - m_v as i64;
                        let (a, b, cost) = self.tau_range(tail, lo, hi);
                        work.add(cost);
                        debug_assert!(a < b, "linked groups have a witness in range");
                        for idx in a..b {
                            let j = self.tau[tail as usize][idx];
                            for &e in &self.groups[cur as usize].edges {
                                out.push(Occurrence {
                                    pattern: self.edges[e as usize].pattern,
                                    end: i,
                                    witness: Some(j),
                                });
                            }
                        }
                    }
                }
                cur = next;
            }
        }
        // Unbounded list: every entry reports, forever.
        let mut cur = self.ulist_head[v as usize];
        while cur != NIL {
            work.add(1);
            let (tail, next) = {
                let g = &self.groups[cur as usize];
                (g.tail, g.next)
            };
            match self.mode {
                ReportMode::Dedup => {
                    for &e in &self.groups[cur as usize].edges {
                        out.push(Occurrence {
                            pattern: self.edges[e as usize].pattern,
                            end: i,
                            witness: None,
                        });
                    }
                }
                ReportMode::Witness => {
                    let (a, b, cost) = self.tau_range(tail, 1, i as i64 - m_v as i64);
                    work.add(cost);
                    for idx in a..b {
                        let j = self.tau[tail as usize][idx];
                        for &e in &self.groups[cur as usize].edges {
                            out.push(Occurrence {
                                pattern: self.edges[e as usize].pattern,
                                end: i,
                                witness: Some(j),
                            });
                        }
                    }
                }
            }
            cur = next;
        }
        // Interval stabbing (mixed regime): validity is built into the
        // planted windows.
        if matches!(self.regime, LightRegime::NonUniform { .. }) {
            self.stab_buf.clear();
            self.sets[v as usize].stab(i as u64, &mut self.stab_buf);
            work.add(self.sets[v as usize].take_work());
            for idx in 0..self.stab_buf.len() {
                let (e, j) = self.stab_buf[idx];
                match self.mode {
                    ReportMode::Witness => out.push(Occurrence {
                        pattern: self.edges[e as usize].pattern,
                        end: i,
                        witness: Some(j),
                    }),
                    ReportMode::Dedup => {
                        if self.stamps[e as usize] != i {
                            self.stamps[e as usize] = i;
                            out.push(Occurrence {
                                pattern: self.edges[e as usize].pattern,
                                end: i,
                                witness: None,
                            });
                        }
                    }
                }
            }
        }
        // Edges this vertex owns: search the tail's witnesses directly.
        for idx in 0..self.r_assigned[v as usize].len() {
            let e = self.r_assigned[v as usize][idx];
            work.add(1);
            let (l, gap, pattern) = {
                let rec = &self.edges[e as usize];
                (rec.l, rec.gap, rec.pattern)
            };
            match gap {
                GapBounds::Unbounded => match self.mode {
                    ReportMode::Dedup => {
                        let fw = self.first_witness[l as usize];
                        if fw != NO_POS && fw as u64 + m_v as u64 <= i as u64 {
                            out.push(Occurrence {
                                pattern,
                                end: i,
                                witness: None,
                            });
                        }
                    }
                    ReportMode::Witness => {
                        let (a, b, cost) = self.tau_range(l, 1, i as i64 - m_v as i64);
                        work.add(cost);
                        for t in a..b {
                            out.push(Occurrence {
                                pattern,
                                end: i,
                                witness: Some(self.tau[l as usize][t]),
                            });
                        }
                    }
                },
                GapBounds::Bounded(alpha, beta) => {
                    let lo = i as i64 - beta as i64 - m_v as i64;
                    let hi = i as i64 - alpha as i64 - m_v as i64;
                    let (a, b, cost) = self.tau_range(l, lo, hi);
                    work.add(cost);
                    match self.mode {
                        ReportMode::Dedup => {
                            if a < b {
                                out.push(Occurrence {
                                    pattern,
                                    end: i,
                                    witness: None,
                                });
                            }
                        }
                        ReportMode::Witness => {
                            for t in a..b {
                                out.push(Occurrence {
                                    pattern,
                                    end: i,
                                    witness: Some(self.tau[l as usize][t]),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Split an orientation's out-edges into the machinery's left/right
/// ownership vectors (global vertex ids put right vertices after left).
pub(crate) fn split_out_edges(
    graph: &DictGraph,
    orientation: &Orientation,
) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let mut l_assigned: Vec<Vec<u32>> = vec![Vec::new(); graph.l_count];
    let mut r_assigned: Vec<Vec<u32>> = vec![Vec::new(); graph.r_count];
    for (v, owned) in orientation.out_edges.iter().enumerate() {
        for &e in owned {
            if v < graph.l_count {
                l_assigned[v].push(e);
            } else {
                r_assigned[v - graph.l_count].push(e);
            }
        }
    }
    (l_assigned, r_assigned)
}

/// Streaming scaffolding shared by both engines: automaton state, the
/// 1-based position, the current position's arrivals, and a ring of the
/// last `beta + M + 2` states (bounded regimes) that re-derives past
/// arrivals for the delayed-activation and expiry taps.
pub(crate) struct StreamCore {
    pub(crate) event: ArrivalEvent,
    /// Arrivals of the tapped past position, refilled by each tap.
    pub(crate) scratch: ArrivalEvent,
    state: u32,
    pos: u32,
    ring: VecDeque<u32>,
    ring_alpha: u32,
    ring_horizon: u64,
}

impl StreamCore {
    pub(crate) fn new(index: &EngineIndex) -> StreamCore {
        let (ring_alpha, ring_horizon) = match index.stats.regime {
            GapRegime::Unbounded => (0, 0),
            _ => (
                index.stats.alpha_star,
                index.stats.beta_star as u64 + index.stats.max_p2_len as u64 + 2,
            ),
        };
        StreamCore {
            event: ArrivalEvent::default(),
            scratch: ArrivalEvent::default(),
            state: index.automaton.start_state(),
            pos: 0,
            ring: VecDeque::new(),
            ring_alpha,
            ring_horizon,
        }
    }

    pub(crate) fn position(&self) -> u32 {
        self.pos
    }

    /// Advance to the next position and decode its arrivals into `event`.
    pub(crate) fn advance(&mut self, automaton: &Automaton, byte: u8, work: &mut WorkCounter) -> u32 {
        self.pos += 1;
        let (next, w) = automaton.step(self.state, byte, self.pos, &mut self.event);
        self.state = next;
        work.add(w);
        self.pos
    }

    /// Buffer the current state; if a past position just entered every
    /// gap window, decode its arrivals into `scratch` and return it.
    pub(crate) fn activation_tap(
        &mut self,
        automaton: &Automaton,
        work: &mut WorkCounter,
        gauge: &mut SpaceGauge,
    ) -> Option<u32> {
        if self.ring_horizon == 0 {
            return None;
        }
        self.ring.push_back(self.state);
        gauge.grow(1);
        if self.pos <= self.ring_alpha {
            return None;
        }
        let s = self.ring[self.ring.len() - 1 - self.ring_alpha as usize];
        let j = self.pos - self.ring_alpha;
        work.add(automaton.fill_event(s, j, &mut self.scratch));
        Some(j)
    }

    /// If a past position just left every gap window, pop it off the
    /// ring, decode its arrivals into `scratch`, and return it.
    pub(crate) fn expiry_tap(
        &mut self,
        automaton: &Automaton,
        work: &mut WorkCounter,
        gauge: &mut SpaceGauge,
    ) -> Option<u32> {
        if self.ring_horizon == 0 || (self.ring.len() as u64) < self.ring_horizon {
            return None;
        }
        let s = self.ring.pop_front().expect("ring nonempty");
        gauge.shrink(1);
        let j = self.pos + 1 - self.ring_horizon as u32;
        work.add(automaton.fill_event(s, j, &mut self.scratch));
        Some(j)
    }
}

/// The sparse-case engine: degeneracy orientation plus the light
/// machinery over every edge.
pub struct OrientationEngine {
    index: EngineIndex,
    mode: ReportMode,
    machinery: LightMachinery,
    delta: usize,
    core: StreamCore,
    work: WorkCounter,
    gauge: SpaceGauge,
}

impl OrientationEngine {
    pub fn new(patterns: &[GappedPattern], mode: ReportMode) -> OrientationEngine {
        let index = EngineIndex::build(patterns.to_vec());
        let bip = index.graph.bipartite_edges();
        let orientation = degeneracy_orient(index.graph.vertex_count(), &bip);
        let (l_assigned, r_assigned) = split_out_edges(&index.graph, &orientation);
        let machinery = LightMachinery::new(&index, &l_assigned, r_assigned, mode);
        let mut gauge = SpaceGauge::new();
        gauge.grow(
            index.stats.total_len as i64
                + index.automaton.state_count() as i64
                + machinery.static_words(),
        );
        let core = StreamCore::new(&index);
        OrientationEngine {
            index,
            mode,
            machinery,
            delta: orientation.bound,
            core,
            work: WorkCounter::new(),
            gauge,
        }
    }

    pub fn index(&self) -> &EngineIndex {
        &self.index
    }

    /// The orientation's out-degree bound (the graph's degeneracy).
    pub fn delta(&self) -> usize {
        self.delta
    }
}

impl DmogEngine for OrientationEngine {
    fn step(&mut self, byte: u8, out: &mut Vec<Occurrence>) {
        out.clear();
        self.work.add(1);
        let i = self.core.advance(&self.index.automaton, byte, &mut self.work);
        self.machinery.begin_char(i, &mut self.work, &mut self.gauge);
        // Right phase: complete patterns before this position's own
        // arrivals become witnesses.
        for idx in 0..self.core.event.r_arrivals.len() {
            let a = self.core.event.r_arrivals[idx];
            let v = self.index.r_of_subpat[a.subpat as usize]
                .expect("second subpatterns have right vertices");
            self.machinery.r_arrive(v, a.len, i, out, &mut self.work);
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
            for idx in 0..self.core.scratch.l_arrivals.len() {
                let a = self.core.scratch.l_arrivals[idx];
                if let Some(u) = self.index.l_of_subpat[a.subpat as usize] {
                    self.machinery
                        .l_activate_windowed(u, j, i, &mut self.work, &mut self.gauge);
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
