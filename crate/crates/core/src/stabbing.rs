//! Dynamic interval stabbing.
//!
//! The nonuniform engines keep, per vertex, the set of text positions at
//! which currently-pending witnesses would complete some edge. Each
//! witness contributes one interval of positions per edge; a stabbing
//! query at the current position returns every pending (edge, witness)
//! pair whose window covers it.
//!
//! [`IntervalSet`] is a treap ordered by `(lo, insertion seq)` with a
//! max-`hi` augmentation: insert and remove run in expected logarithmic
//! time, and a stab touches `O(log n + k)` nodes in expectation for `k`
//! reported intervals. Removal is by [`IntervalKey`]; keys carry a slot
//! generation, so removing an interval twice is detected rather than
//! silently corrupting a reused slot. Every operation adds the nodes it
//! touched to an internal work tally that callers drain into their own
//! accounting.

const NIL: u32 = u32::MAX;

/// Handle for removing a previously inserted interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalKey {
    index: u32,
    generation: u32,
}

struct Node {
    lo: u64,
    hi: u64,
    /// Maximum `hi` in this subtree.
    max_hi: u64,
    /// Insertion sequence number; ties on `lo` stay in insertion order.
    seq: u64,
    priority: u64,
    left: u32,
    right: u32,
    generation: u32,
    in_use: bool,
    payload: (u32, u32),
}

/// A multiset of closed intervals `[lo, hi]` supporting point stabbing.
pub struct IntervalSet {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    seq: u64,
    work: u64,
}

impl Default for IntervalSet {
    fn default() -> Self {
        Self::new()
    }
}

impl IntervalSet {
    pub fn new() -> IntervalSet {
        IntervalSet {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            len: 0,
            seq: 0,
            work: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Nodes touched since the last drain.
    pub fn take_work(&mut self) -> u64 {
        std::mem::take(&mut self.work)
    }

    /// Insert `[lo, hi]` carrying `payload`; returns the removal key.
    pub fn insert(&mut self, lo: u64, hi: u64, payload: (u32, u32)) -> IntervalKey {
        debug_assert!(lo <= hi, "reversed interval");
        let seq = self.seq;
        self.seq += 1;
        let priority = splitmix64(seq);
        let slot = match self.free.pop() {
            Some(slot) => {
                let node = &mut self.nodes[slot as usize];
                debug_assert!(!node.in_use);
                node.lo = lo;
                node.hi = hi;
                node.max_hi = hi;
                node.seq = seq;
                node.priority = priority;
                node.left = NIL;
                node.right = NIL;
                node.in_use = true;
                node.payload = payload;
                slot
            }
            None => {
                self.nodes.push(Node {
                    lo,
                    hi,
                    max_hi: hi,
                    seq,
                    priority,
                    left: NIL,
                    right: NIL,
                    generation: 0,
                    in_use: true,
                    payload,
                });
                (self.nodes.len() - 1) as u32
            }
        };
        self.root = self.insert_at(self.root, slot);
        self.len += 1;
        IntervalKey {
            index: slot,
            generation: self.nodes[slot as usize].generation,
        }
    }

    /// Remove the interval behind `key`. Returns false when the key is
    /// stale: already removed, or its slot since reused.
    pub fn remove(&mut self, key: IntervalKey) -> bool {
        let Some(node) = self.nodes.get(key.index as usize) else {
            return false;
        };
        if !node.in_use || node.generation != key.generation {
            return false;
        }
        let (lo, seq) = (node.lo, node.seq);
        self.root = self.remove_at(self.root, lo, seq);
        let node = &mut self.nodes[key.index as usize];
        node.in_use = false;
        node.generation += 1;
        self.free.push(key.index);
        self.len -= 1;
        true
    }

    /// Append the payloads of every interval containing `q`, in
    /// `(lo, insertion)` order.
    pub fn stab(&mut self, q: u64, out: &mut Vec<(u32, u32)>) {
        let root = self.root;
        self.stab_at(root, q, out);
    }

    fn insert_at(&mut self, node: u32, new: u32) -> u32 {
        if node == NIL {
            return new;
        }
        self.work += 1;
        let new_key = (self.nodes[new as usize].lo, self.nodes[new as usize].seq);
        let key = (self.nodes[node as usize].lo, self.nodes[node as usize].seq);
        if new_key < key {
            let left = self.insert_at(self.nodes[node as usize].left, new);
            self.nodes[node as usize].left = left;
            if self.nodes[left as usize].priority > self.nodes[node as usize].priority {
                return self.rotate_right(node);
            }
        } else {
            let right = self.insert_at(self.nodes[node as usize].right, new);
            self.nodes[node as usize].right = right;
            if self.nodes[right as usize].priority > self.nodes[node as usize].priority {
                return self.rotate_left(node);
            }
        }
        self.pull(node);
        node
    }

    fn remove_at(&mut self, node: u32, lo: u64, seq: u64) -> u32 {
        debug_assert_ne!(node, NIL, "removal key not in tree");
        self.work += 1;
        let key = (self.nodes[node as usize].lo, self.nodes[node as usize].seq);
        if (lo, seq) < key {
            let left = self.remove_at(self.nodes[node as usize].left, lo, seq);
            self.nodes[node as usize].left = left;
        } else if (lo, seq) > key {
            let right = self.remove_at(self.nodes[node as usize].right, lo, seq);
            self.nodes[node as usize].right = right;
        } else {
            let (l, r) = (self.nodes[node as usize].left, self.nodes[node as usize].right);
            return self.merge(l, r);
        }
        self.pull(node);
        node
    }

    /// Join two subtrees where every key in `a` precedes every key in `b`.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        self.work += 1;
        if self.nodes[a as usize].priority > self.nodes[b as usize].priority {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }

    fn stab_at(&mut self, node: u32, q: u64, out: &mut Vec<(u32, u32)>) {
        if node == NIL {
            return;
        }
        self.work += 1;
        let n = &self.nodes[node as usize];
        if n.max_hi < q {
            return;
        }
        let (left, right, lo, hi, payload) = (n.left, n.right, n.lo, n.hi, n.payload);
        self.stab_at(left, q, out);
        if lo <= q {
            if hi >= q {
                out.push(payload);
            }
            // Right keys have lo at least this one's, so only worth
            // descending while this lo still reaches q.
            self.stab_at(right, q, out);
        }
    }

    fn pull(&mut self, node: u32) {
        let (l, r) = (self.nodes[node as usize].left, self.nodes[node as usize].right);
        let mut m = self.nodes[node as usize].hi;
        if l != NIL {
            m = m.max(self.nodes[l as usize].max_hi);
        }
        if r != NIL {
            m = m.max(self.nodes[r as usize].max_hi);
        }
        self.nodes[node as usize].max_hi = m;
    }

    fn rotate_right(&mut self, y: u32) -> u32 {
        let x = self.nodes[y as usize].left;
        self.nodes[y as usize].left = self.nodes[x as usize].right;
        self.nodes[x as usize].right = y;
        self.pull(y);
        self.pull(x);
        x
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let y = self.nodes[x as usize].right;
        self.nodes[x as usize].right = self.nodes[y as usize].left;
        self.nodes[y as usize].left = x;
        self.pull(x);
        self.pull(y);
        y
    }
}

/// Deterministic priority stream (Steele et al.'s SplitMix64 step).
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stab_sorted(set: &mut IntervalSet, q: u64) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        set.stab(q, &mut out);
        out.sort_unstable();
        out
    }

    #[test]
    fn stab_reports_exactly_the_covering_intervals() {
        let mut set = IntervalSet::new();
        set.insert(1, 3, (0, 0));
        set.insert(2, 5, (1, 0));
        set.insert(7, 9, (2, 0));
        assert_eq!(stab_sorted(&mut set, 2), vec![(0, 0), (1, 0)]);
        assert_eq!(stab_sorted(&mut set, 6), vec![]);
        assert_eq!(stab_sorted(&mut set, 7), vec![(2, 0)]);
        assert_eq!(stab_sorted(&mut set, 1), vec![(0, 0)]);
        assert_eq!(stab_sorted(&mut set, 9), vec![(2, 0)]);
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn identical_intervals_are_independent() {
        let mut set = IntervalSet::new();
        let a = set.insert(2, 5, (10, 1));
        let _b = set.insert(2, 5, (11, 1));
        assert!(set.remove(a));
        assert_eq!(stab_sorted(&mut set, 3), vec![(11, 1)]);
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn stale_keys_are_rejected() {
        let mut set = IntervalSet::new();
        let a = set.insert(1, 2, (0, 0));
        assert!(set.remove(a));
        assert!(!set.remove(a), "double remove must fail");
        // The slot gets reused; the old key must still be dead.
        let b = set.insert(4, 6, (1, 0));
        assert_eq!(b.index, a.index);
        assert!(!set.remove(a));
        assert_eq!(stab_sorted(&mut set, 5), vec![(1, 0)]);
        assert!(set.remove(b));
        assert!(set.is_empty());
    }

    #[test]
    fn empty_set_stabs_nothing() {
        let mut set = IntervalSet::new();
        assert_eq!(stab_sorted(&mut set, 5), vec![]);
        assert!(set.is_empty());
    }

    #[test]
    fn point_intervals_work() {
        let mut set = IntervalSet::new();
        set.insert(4, 4, (0, 0));
        assert_eq!(stab_sorted(&mut set, 4), vec![(0, 0)]);
        assert_eq!(stab_sorted(&mut set, 3), vec![]);
        assert_eq!(stab_sorted(&mut set, 5), vec![]);
    }

    #[test]
    fn results_come_back_in_lo_then_insertion_order() {
        let mut set = IntervalSet::new();
        set.insert(5, 9, (0, 0));
        set.insert(1, 9, (1, 0));
        set.insert(5, 9, (2, 0));
        let mut out = Vec::new();
        set.stab(6, &mut out);
        assert_eq!(out, vec![(1, 0), (0, 0), (2, 0)]);
    }

    #[test]
    fn stab_work_is_logarithmic_plus_output() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut set = IntervalSet::new();
        let n = 1024usize;
        for i in 0..n {
            let lo = rng.gen_range(0..10_000u64);
            let hi = lo + rng.gen_range(0..50u64);
            set.insert(lo, hi, (i as u32, 0));
        }
        set.take_work();
        let mut total_work = 0u64;
        let mut total_budget = 0f64;
        let mut out = Vec::new();
        for _ in 0..2000 {
            out.clear();
            set.stab(rng.gen_range(0..10_000u64), &mut out);
            total_work += set.take_work();
            total_budget += (n as f64).log2() + out.len() as f64 + 1.0;
        }
        assert!(
            (total_work as f64) <= 32.0 * total_budget,
            "stab work {total_work} exceeds budget {total_budget}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn trace_matches_naive_oracle(ops in prop::collection::vec(
            (0u8..3, 0u64..60, 0u64..12, 0usize..32), 1..120,
        )) {
            let mut set = IntervalSet::new();
            // (payload, lo, hi, key): the naive mirror of the live set.
            let mut naive: Vec<(u32, u64, u64, IntervalKey)> = Vec::new();
            let mut next_payload = 0u32;
            for (op, lo, len, pick) in ops {
                match op {
                    0 => {
                        let key = set.insert(lo, lo + len, (next_payload, 0));
                        naive.push((next_payload, lo, lo + len, key));
                        next_payload += 1;
                    }
                    1 if !naive.is_empty() => {
                        let (_, _, _, key) = naive.remove(pick % naive.len());
                        prop_assert!(set.remove(key));
                    }
                    _ => {
                        let q = lo;
                        let mut got = Vec::new();
                        set.stab(q, &mut got);
                        got.sort_unstable();
                        let mut want: Vec<(u32, u32)> = naive
                            .iter()
                            .filter(|&&(_, l, h, _)| l <= q && q <= h)
                            .map(|&(p, _, _, _)| (p, 0))
                            .collect();
                        want.sort_unstable();
                        prop_assert_eq!(got, want, "stab at {} diverged", q);
                    }
                }
                prop_assert_eq!(set.len(), naive.len());
            }
        }
    }
}
