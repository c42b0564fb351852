//! Instrumentation shared by the engines.
//!
//! The engines count abstract work units (pointer touches, comparisons,
//! automaton transitions) and track an estimate of resident state in
//! words. The counters exist so that tests can check the *shape* of the
//! per-character cost against the design targets; they are cheap enough
//! to stay on in release builds.

/// Work-unit counter with a per-character history.
#[derive(Debug, Clone, Default)]
pub struct WorkCounter {
    total: u64,
    char_start: u64,
    per_char: Vec<u64>,
}

impl WorkCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `n` work units to the current character.
    #[inline]
    pub fn add(&mut self, n: u64) {
        self.total += n;
    }

    /// Close out the current character and start the next one.
    pub fn end_char(&mut self) {
        self.per_char.push(self.total - self.char_start);
        self.char_start = self.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Work units per processed character, in order.
    pub fn per_char(&self) -> &[u64] {
        &self.per_char
    }

    /// Percentile over the per-character history (0.0..=1.0), by the
    /// nearest-rank method. Returns 0 for an empty history.
    pub fn percentile(&self, p: f64) -> u64 {
        if self.per_char.is_empty() {
            return 0;
        }
        let mut sorted = self.per_char.clone();
        sorted.sort_unstable();
        let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
        sorted[rank - 1]
    }
}

/// Space gauge in words, tracking the running value and its peak.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpaceGauge {
    now: i64,
    peak: i64,
}

impl SpaceGauge {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn grow(&mut self, words: i64) {
        self.now += words;
        if self.now > self.peak {
            self.peak = self.now;
        }
    }

    #[inline]
    pub fn shrink(&mut self, words: i64) {
        self.now -= words;
    }

    pub fn now(&self) -> i64 {
        self.now
    }

    pub fn peak(&self) -> i64 {
        self.peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_char_deltas_and_percentiles() {
        let mut w = WorkCounter::new();
        w.add(3);
        w.end_char();
        w.add(1);
        w.end_char();
        w.add(10);
        w.end_char();
        assert_eq!(w.per_char(), &[3, 1, 10]);
        assert_eq!(w.total(), 14);
        assert_eq!(w.percentile(0.5), 3);
        assert_eq!(w.percentile(0.99), 10);
        assert_eq!(w.percentile(0.0), 1);
    }

    #[test]
    fn gauge_tracks_peak() {
        let mut g = SpaceGauge::new();
        g.grow(5);
        g.grow(7);
        g.shrink(10);
        g.grow(1);
        assert_eq!(g.now(), 3);
        assert_eq!(g.peak(), 12);
    }
}
