//! Streaming dictionary matching with one gap.
//!
//! A dictionary entry is a pattern `p1{α,β}p2` (or `p1{*}p2`, or a plain
//! string): the pattern occurs at text position `i` when `p2` ends at `i`,
//! `p1` ends at some earlier position `j`, and the gap between the end of
//! `p1` and the start of `p2` lies in `[α, β]` (`{*}` means any
//! non-negative gap). The engines in this crate preprocess the dictionary
//! and then consume a text one character at a time, reporting every
//! pattern occurrence that ends at the current position before the next
//! character is read.
//!
//! Module map:
//! * [`dictionary`] — pattern grammar, parsing, dictionary statistics.
//! * [`automaton`] — Aho-Corasick automaton over the distinct subpatterns
//!   plus the suffix tree used by the dense-case engine.
//! * [`graph`] — the bipartite subpattern graph, degeneracy and
//!   threshold orientations.
//! * [`stabbing`] — a dynamic interval set with stabbing queries.
//! * [`isg`] — streaming induced-subgraph engines (unbounded, uniform,
//!   per-edge windows).
//! * [`dmog`] — the orientation-based matching engines.
//! * [`threshold`] — the dense-case engine splitting vertices into heavy
//!   and light by a degree threshold.
//! * [`triangles`] — local triangle queries reduced to the streaming
//!   engines.
//! * [`oracle`] — brute-force reference implementations used as ground
//!   truth by the test suites.
//! * [`gen`] — deterministic instance generators shared by tests and the
//!   CLI bench command.

pub mod automaton;
pub mod counters;
pub mod dictionary;
pub mod dmog;
pub mod gen;
pub mod graph;
pub mod isg;
pub mod oracle;
pub mod stabbing;
pub mod threshold;
pub mod triangles;

pub use automaton::{Arrival, ArrivalEvent, Automaton, SuffixTree};
pub use counters::WorkCounter;
pub use isg::{IsgNonUniform, IsgUniform, IsgUnbounded};
pub use stabbing::{IntervalKey, IntervalSet};

pub use graph::{
    classify_heavy, degeneracy_orient, integer_theta, threshold_orient, DictEdge, DictGraph,
    HeavyLightSplit, Orientation, UNORIENTED,
};

pub use dmog::{DmogEngine, EngineIndex, EngineKind, Occurrence, OrientationEngine, ReportMode};
pub use threshold::ThresholdEngine;
pub use dictionary::{
    compute_stats, parse_dictionary, render_pattern, DictError, DictionaryStats, GapBounds,
    GappedPattern, GapRegime,
};
pub use counters::SpaceGauge;
pub use triangles::{
    vertex_triangles, vertex_triangles_bounded, GraphParseError, QueryGraph, TrianglePipeline,
};
