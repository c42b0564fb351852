//! Matching automaton over the distinct dictionary subpatterns.
//!
//! The automaton is an Aho-Corasick machine built over every distinct
//! subpattern string (first and second halves alike). Feeding it one text
//! character yields an [`ArrivalEvent`]: the exact set of subpatterns
//! ending at that position, split into second-half arrivals (`r`) and
//! first-half arrivals (`l`). A subpattern serving as both appears in
//! both lists. Within each list lengths strictly decrease, because all
//! subpatterns ending at one position lie on a single suffix chain; the
//! number of dictionary subpatterns on any such chain is at most the
//! dictionary's `lsc` statistic.
//!
//! [`SuffixTree`] arranges the first subpatterns of gapped patterns by the
//! "longest proper suffix" relation (with an empty-string root). The
//! dense-case engine walks root-to-node paths of this tree; its key
//! property is that the ancestors-or-self of the deepest first-subpattern
//! arrival at a position are exactly the first-subpattern arrivals there.

use crate::dictionary::GappedPattern;
use std::collections::HashMap;

/// States stop getting dense 256-way transition rows past this many trie
/// nodes; larger automata use hash lookups with explicit failure walks.
pub const DENSE_STATE_LIMIT: usize = 4096;

const NO_STATE: u32 = u32::MAX;

/// One subpattern arrival: which distinct subpattern, and its length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrival {
    pub subpat: u32,
    pub len: u32,
}

/// Everything that ends at one text position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArrivalEvent {
    /// 1-based text position of the character just consumed.
    pub position: u32,
    /// Arrivals that are second subpatterns of gapped patterns, longest
    /// first. Consumers must process these before `l_arrivals`.
    pub r_arrivals: Vec<Arrival>,
    /// Arrivals that are first subpatterns (of gapped or gapless
    /// patterns), longest first.
    pub l_arrivals: Vec<Arrival>,
}

impl ArrivalEvent {
    pub fn clear(&mut self) {
        self.position = 0;
        self.r_arrivals.clear();
        self.l_arrivals.clear();
    }
}

/// Metadata for one distinct subpattern string.
#[derive(Debug, Clone)]
pub struct Subpattern {
    pub bytes: Vec<u8>,
    /// First half of at least one pattern (gapped or gapless).
    pub is_first: bool,
    /// Second half of at least one gapped pattern.
    pub is_second: bool,
    /// First half of at least one gapped pattern (these strings form the
    /// suffix tree).
    pub is_gapped_first: bool,
    /// Ids of gapless patterns equal to this string.
    pub gapless_patterns: Vec<u32>,
}

impl Subpattern {
    pub fn len(&self) -> u32 {
        self.bytes.len() as u32
    }
}

/// Transition table representation, sized at build time.
enum Goto {
    /// Fully resolved transition function: `table[state * 256 + byte]`.
    Dense(Vec<u32>),
    /// Trie edges only; stepping follows failure links explicitly.
    Sparse(Vec<HashMap<u8, u32>>),
}

/// Aho-Corasick automaton over the distinct subpatterns.
pub struct Automaton {
    goto: Goto,
    fail: Vec<u32>,
    depth: Vec<u32>,
    /// Distinct-subpattern id recognized at this state, if any.
    subpat_at: Vec<Option<u32>>,
    /// Nearest proper suffix state that recognizes a subpattern
    /// (`NO_STATE` when none).
    out_link: Vec<u32>,
    subpatterns: Vec<Subpattern>,
}

impl Automaton {
    /// Build the automaton for a dictionary. Node count (including the
    /// root) is at most the total subpattern length plus one.
    pub fn build(patterns: &[GappedPattern]) -> Automaton {
        let subpatterns = collect_subpatterns(patterns);

        // Trie construction.
        let mut edges: Vec<HashMap<u8, u32>> = vec![HashMap::new()];
        let mut depth: Vec<u32> = vec![0];
        let mut subpat_at: Vec<Option<u32>> = vec![None];
        for (id, sub) in subpatterns.iter().enumerate() {
            let mut state = 0u32;
            for &b in &sub.bytes {
                state = match edges[state as usize].get(&b) {
                    Some(&next) => next,
                    None => {
                        let next = edges.len() as u32;
                        edges.push(HashMap::new());
                        depth.push(depth[state as usize] + 1);
                        subpat_at.push(None);
                        edges[state as usize].insert(b, next);
                        next
                    }
                };
            }
            subpat_at[state as usize] = Some(id as u32);
        }
        let n = edges.len();
        debug_assert!(
            n <= 1 + subpatterns.iter().map(|s| s.bytes.len()).sum::<usize>(),
            "trie larger than total subpattern length"
        );

        // Failure links by BFS.
        let mut fail = vec![0u32; n];
        let mut queue: std::collections::VecDeque<u32> = edges[0].values().copied().collect();
        while let Some(state) = queue.pop_front() {
            let children: Vec<(u8, u32)> =
                edges[state as usize].iter().map(|(&b, &s)| (b, s)).collect();
            for (b, child) in children {
                let mut f = fail[state as usize];
                loop {
                    if let Some(&next) = edges[f as usize].get(&b) {
                        if next != child {
                            fail[child as usize] = next;
                            break;
                        }
                    }
                    if f == 0 {
                        fail[child as usize] = 0;
                        break;
                    }
                    f = fail[f as usize];
                }
                queue.push_back(child);
            }
        }

        // Output links, shallowest-first so suffix states settle before
        // the states that chain onto them.
        let mut out_link = vec![NO_STATE; n];
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&s| depth[s as usize]);
        for &s in order.iter().skip(1) {
            let f = fail[s as usize];
            out_link[s as usize] = if subpat_at[f as usize].is_some() {
                f
            } else {
                out_link[f as usize]
            };
        }

        let goto = if n <= DENSE_STATE_LIMIT {
            // Resolve failures into a full transition function.
            let mut table = vec![0u32; n * 256];
            for &s in &order {
                for c in 0..256usize {
                    let b = c as u8;
                    table[s as usize * 256 + c] = match edges[s as usize].get(&b) {
                        Some(&next) => next,
                        None if s == 0 => 0,
                        None => table[fail[s as usize] as usize * 256 + c],
                    };
                }
            }
            Goto::Dense(table)
        } else {
            Goto::Sparse(edges)
        };

        Automaton {
            goto,
            fail,
            depth,
            subpat_at,
            out_link,
            subpatterns,
        }
    }

    pub fn start_state(&self) -> u32 {
        0
    }

    pub fn state_count(&self) -> usize {
        self.fail.len()
    }

    /// Whether the dense transition table was chosen at build time.
    pub fn is_dense(&self) -> bool {
        matches!(self.goto, Goto::Dense(_))
    }

    pub fn subpatterns(&self) -> &[Subpattern] {
        &self.subpatterns
    }

    pub fn subpattern(&self, id: u32) -> &Subpattern {
        &self.subpatterns[id as usize]
    }

    /// Consume one character: advance the state and fill `event` with the
    /// subpatterns ending at `position`. Returns the new state and the
    /// number of elementary transitions taken (for work accounting).
    pub fn step(
        &self,
        state: u32,
        byte: u8,
        position: u32,
        event: &mut ArrivalEvent,
    ) -> (u32, u64) {
        let mut work = 1u64;
        let next = match &self.goto {
            Goto::Dense(table) => table[state as usize * 256 + byte as usize],
            Goto::Sparse(edges) => {
                let mut s = state;
                loop {
                    if let Some(&n) = edges[s as usize].get(&byte) {
                        break n;
                    }
                    if s == 0 {
                        break 0;
                    }
                    s = self.fail[s as usize];
                    work += 1;
                }
            }
        };
        work += self.fill_event(next, position, event);
        (next, work)
    }

    /// Fill `event` with the subpatterns ending at a position whose
    /// post-character state was `state`. Engines buffer states to re-derive
    /// past arrivals (one word per position instead of a list), so this is
    /// callable independently of [`Automaton::step`]. Returns the chain
    /// length walked.
    pub fn fill_event(&self, state: u32, position: u32, event: &mut ArrivalEvent) -> u64 {
        let mut work = 0u64;
        event.clear();
        event.position = position;
        let mut chain = if self.subpat_at[state as usize].is_some() {
            state
        } else {
            self.out_link[state as usize]
        };
        while chain != NO_STATE {
            let id = self.subpat_at[chain as usize].expect("chain states recognize subpatterns");
            let sub = &self.subpatterns[id as usize];
            let arrival = Arrival {
                subpat: id,
                len: sub.len(),
            };
            if sub.is_second {
                event.r_arrivals.push(arrival);
            }
            if sub.is_first {
                event.l_arrivals.push(arrival);
            }
            work += 1;
            chain = self.out_link[chain as usize];
        }
        work
    }

    /// Number of dictionary subpatterns on the suffix chain through
    /// `state` (the state itself included when it recognizes one). The
    /// maximum over all states equals the dictionary's `lsc`.
    pub fn chain_len(&self, state: u32) -> usize {
        let mut n = 0;
        let mut s = if self.subpat_at[state as usize].is_some() {
            state
        } else {
            self.out_link[state as usize]
        };
        while s != NO_STATE {
            n += 1;
            s = self.out_link[s as usize];
        }
        n
    }

    pub fn max_chain_len(&self) -> usize {
        (0..self.state_count() as u32)
            .map(|s| self.chain_len(s))
            .max()
            .unwrap_or(0)
    }

    /// Build the suffix tree over the gapped first subpatterns: node 0 is
    /// the empty-string root and `parent` is the longest proper suffix
    /// that is itself a gapped first subpattern.
    pub fn build_suffix_tree(&self) -> SuffixTree {
        let mut node_of_subpat = vec![None; self.subpatterns.len()];
        let mut subpat_of = vec![None];
        let mut state_of_node = vec![0u32];
        for (state, &sub) in self.subpat_at.iter().enumerate() {
            if let Some(id) = sub {
                if self.subpatterns[id as usize].is_gapped_first {
                    let node = subpat_of.len() as u32;
                    node_of_subpat[id as usize] = Some(node);
                    subpat_of.push(Some(id));
                    state_of_node.push(state as u32);
                }
            }
        }
        let n = subpat_of.len();
        let mut parent = vec![0u32; n];
        let mut depth = vec![0u32; n];
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        // Resolve parents shallowest-first so depths are ready.
        let mut order: Vec<u32> = (1..n as u32).collect();
        order.sort_by_key(|&v| self.depth[state_of_node[v as usize] as usize]);
        for &v in &order {
            let mut s = self.fail[state_of_node[v as usize] as usize];
            let p = loop {
                if let Some(id) = self.subpat_at[s as usize] {
                    if let Some(node) = node_of_subpat[id as usize] {
                        break node;
                    }
                }
                if s == 0 {
                    break 0;
                }
                s = self.fail[s as usize];
            };
            parent[v as usize] = p;
            depth[v as usize] = depth[p as usize] + 1;
            children[p as usize].push(v);
        }
        SuffixTree {
            parent,
            depth,
            children,
            subpat_of,
            node_of_subpat,
        }
    }
}

/// Suffix tree over gapped first subpatterns. Node 0 is the root.
#[derive(Debug, Clone)]
pub struct SuffixTree {
    pub parent: Vec<u32>,
    pub depth: Vec<u32>,
    pub children: Vec<Vec<u32>>,
    /// Tree node -> distinct-subpattern id (`None` for the root).
    pub subpat_of: Vec<Option<u32>>,
    /// Distinct-subpattern id -> tree node, for gapped first subpatterns.
    pub node_of_subpat: Vec<Option<u32>>,
}

impl SuffixTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.len() <= 1
    }

    /// Is `a` an ancestor of `b`, or equal to it?
    pub fn is_ancestor_or_self(&self, a: u32, b: u32) -> bool {
        let mut v = b;
        loop {
            if v == a {
                return true;
            }
            if v == 0 {
                return false;
            }
            v = self.parent[v as usize];
        }
    }
}

fn collect_subpatterns(patterns: &[GappedPattern]) -> Vec<Subpattern> {
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut subs: Vec<Subpattern> = Vec::new();
    for p in patterns {
        let i = *index.entry(p.p1.clone()).or_insert_with(|| {
            subs.push(Subpattern {
                bytes: p.p1.clone(),
                is_first: false,
                is_second: false,
                is_gapped_first: false,
                gapless_patterns: Vec::new(),
            });
            subs.len() - 1
        });
        subs[i].is_first = true;
        if p.is_gapless() {
            subs[i].gapless_patterns.push(p.id);
        } else {
            subs[i].is_gapped_first = true;
            let j = *index.entry(p.p2.clone()).or_insert_with(|| {
                subs.push(Subpattern {
                    bytes: p.p2.clone(),
                    is_first: false,
                    is_second: false,
                    is_gapped_first: false,
                    gapless_patterns: Vec::new(),
                });
                subs.len() - 1
            });
            subs[j].is_second = true;
        }
    }
    subs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{compute_stats, parse_dictionary, GapBounds};

    fn automaton_for(dict: &str) -> Automaton {
        Automaton::build(&parse_dictionary(dict.as_bytes()).unwrap())
    }

    fn run(auto: &Automaton, text: &str) -> Vec<ArrivalEvent> {
        let mut state = auto.start_state();
        let mut events = Vec::new();
        for (i, &b) in text.as_bytes().iter().enumerate() {
            let mut ev = ArrivalEvent::default();
            let (next, _) = auto.step(state, b, (i + 1) as u32, &mut ev);
            state = next;
            events.push(ev);
        }
        events
    }

    fn names(auto: &Automaton, arrivals: &[Arrival]) -> Vec<String> {
        arrivals
            .iter()
            .map(|a| String::from_utf8_lossy(&auto.subpattern(a.subpat).bytes).into_owned())
            .collect()
    }

    #[test]
    fn trie_size_matches_distinct_prefixes() {
        // {"ab", "b"}: states root, a, ab, b.
        let auto = automaton_for("ab{0,1}b");
        assert_eq!(auto.state_count(), 4);
    }

    #[test]
    fn state_count_is_at_most_total_length_plus_one() {
        let patterns = parse_dictionary(b"abc{1,2}bcd\nbc{0,0}cd\nxyz\n").unwrap();
        let stats = compute_stats(&patterns);
        let auto = Automaton::build(&patterns);
        assert!(auto.state_count() <= stats.total_len + 1);
    }

    #[test]
    fn arrival_events_split_by_side() {
        let auto = automaton_for("ab{0,1}cd");
        let events = run(&auto, "abcd");
        assert_eq!(names(&auto, &events[1].l_arrivals), vec!["ab"]);
        assert!(events[1].r_arrivals.is_empty());
        assert_eq!(names(&auto, &events[3].r_arrivals), vec!["cd"]);
        assert!(events[3].l_arrivals.is_empty());
        assert!(events[0].r_arrivals.is_empty() && events[0].l_arrivals.is_empty());
    }

    #[test]
    fn shared_subpattern_appears_in_both_lists() {
        let auto = automaton_for("a{0,0}a");
        let events = run(&auto, "a");
        assert_eq!(names(&auto, &events[0].r_arrivals), vec!["a"]);
        assert_eq!(names(&auto, &events[0].l_arrivals), vec!["a"]);
    }

    #[test]
    fn chain_lengths_match_lsc() {
        // First subpatterns abc, bc, c share one suffix chain of 3.
        let patterns = parse_dictionary(b"abc{*}x\nbc{*}x\nc{*}x").unwrap();
        let auto = Automaton::build(&patterns);
        assert_eq!(auto.max_chain_len(), 3);
        assert_eq!(compute_stats(&patterns).lsc, auto.max_chain_len());
    }

    #[test]
    fn deepest_chain_is_reported_longest_first() {
        let auto = automaton_for("abc{*}z\nbc{*}z\nc{*}z");
        let events = run(&auto, "abc");
        let lens: Vec<u32> = events[2].l_arrivals.iter().map(|a| a.len).collect();
        assert_eq!(lens, vec![3, 2, 1]);
    }

    #[test]
    fn events_match_naive_suffix_scan_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let dict_lines: Vec<String> = (0..rng.gen_range(1..8))
                .map(|_| {
                    let sub = |rng: &mut rand_chacha::ChaCha8Rng| -> String {
                        (0..rng.gen_range(1..5))
                            .map(|_| (b'a' + rng.gen_range(0..3)) as char)
                            .collect()
                    };
                    if rng.gen_bool(0.3) {
                        sub(&mut rng)
                    } else {
                        format!("{}{{0,2}}{}", sub(&mut rng), sub(&mut rng))
                    }
                })
                .collect();
            let patterns = parse_dictionary(dict_lines.join("\n").as_bytes()).unwrap();
            let auto = Automaton::build(&patterns);
            let text: String = (0..40)
                .map(|_| (b'a' + rng.gen_range(0..3)) as char)
                .collect();
            let events = run(&auto, &text);
            let stats = compute_stats(&patterns);
            for (i, ev) in events.iter().enumerate() {
                let pos = i + 1;
                // Oracle: a subpattern arrives iff it is a suffix of the
                // prefix read so far.
                for (id, sub) in auto.subpatterns().iter().enumerate() {
                    let expect = pos >= sub.bytes.len()
                        && text.as_bytes()[pos - sub.bytes.len()..pos] == sub.bytes[..];
                    let in_r = ev.r_arrivals.iter().any(|a| a.subpat == id as u32);
                    let in_l = ev.l_arrivals.iter().any(|a| a.subpat == id as u32);
                    assert_eq!(in_r, expect && sub.is_second, "pos {pos} sub {id}");
                    assert_eq!(in_l, expect && sub.is_first, "pos {pos} sub {id}");
                }
                // Strictly decreasing lengths, bounded by lsc.
                for list in [&ev.r_arrivals, &ev.l_arrivals] {
                    assert!(list.windows(2).all(|w| w[0].len > w[1].len));
                    assert!(list.len() <= stats.lsc);
                }
            }
        }
    }

    #[test]
    fn suffix_tree_parents_are_longest_proper_suffixes() {
        // Gapped first subpatterns: aba, ba, a, plus unrelated xy.
        let auto = automaton_for("aba{*}q\nba{*}q\na{*}q\nxy{*}q");
        let tree = auto.build_suffix_tree();
        assert_eq!(tree.len(), 5); // root + 4
        let node_by_name = |name: &[u8]| -> u32 {
            (1..tree.len() as u32)
                .find(|&v| {
                    let id = tree.subpat_of[v as usize].unwrap();
                    auto.subpattern(id).bytes == name
                })
                .unwrap()
        };
        let (a, ba, aba, xy) = (
            node_by_name(b"a"),
            node_by_name(b"ba"),
            node_by_name(b"aba"),
            node_by_name(b"xy"),
        );
        assert_eq!(tree.parent[aba as usize], ba);
        assert_eq!(tree.parent[ba as usize], a);
        assert_eq!(tree.parent[a as usize], 0);
        assert_eq!(tree.parent[xy as usize], 0);
        assert_eq!(tree.depth[aba as usize], 3);
        assert!(tree.is_ancestor_or_self(a, aba));
        assert!(!tree.is_ancestor_or_self(xy, aba));
        assert_eq!(tree.children[0].len(), 2);
    }

    #[test]
    fn suffix_tree_skips_second_only_and_gapless_subpatterns() {
        // "cd" is second-only, "zz" is gapless: neither joins the tree.
        let auto = automaton_for("ab{0,1}cd\nzz");
        let tree = auto.build_suffix_tree();
        assert_eq!(tree.len(), 2); // root + "ab"
    }

    #[test]
    fn dense_limit_switches_representation() {
        let auto = automaton_for("abc{0,1}def");
        assert!(auto.is_dense());

        // Enough distinct material to exceed the dense limit. Built as
        // structs (not source lines) so arbitrary bytes are fine.
        let mut patterns = Vec::new();
        for a in 0..=255u8 {
            for b in [b'w', b'x', b'y', b'z'] {
                patterns.push(GappedPattern {
                    id: patterns.len() as u32,
                    p1: vec![a, b],
                    p2: vec![a, b, b'q', b'r', b's'],
                    gap: GapBounds::Bounded(0, 1),
                });
            }
        }
        let auto = Automaton::build(&patterns);
        assert!(auto.state_count() > DENSE_STATE_LIMIT);
        assert!(!auto.is_dense());
        // Sparse stepping still walks failures correctly on a probe.
        let mut ev = ArrivalEvent::default();
        let (s, _) = auto.step(auto.start_state(), 7, 1, &mut ev);
        let (s, _) = auto.step(s, b'x', 2, &mut ev);
        assert_eq!(ev.l_arrivals.len(), 1); // "\x07x" arrives.
        // A mismatched byte restarts matching mid-stream: "\x07x\x07x"
        // still produces the "\x07x" arrival at position 4.
        let (s, _) = auto.step(s, 7, 3, &mut ev);
        assert!(ev.l_arrivals.is_empty());
        let (_, _) = auto.step(s, b'x', 4, &mut ev);
        assert_eq!(ev.l_arrivals.len(), 1);
    }
}
