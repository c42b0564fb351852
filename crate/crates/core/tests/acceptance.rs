//! Acceptance suite. One test per criterion; each prints a single PASS
//! line (visible with `--nocapture`) carrying the measured scale and
//! elapsed time, and asserts its runtime budget. The companion online
//! criterion lives with the binary's integration tests, where the
//! compiled executable is available for the pipe harness.

use gapmatch_core::gen::{
    block_family_text, delta_family, enumerate_graphs, is_connected, random_dmog_instance,
    random_isg_nonuniform, random_isg_unbounded, random_isg_uniform, random_multigraph,
    space_family, space_family_text, threshold_family, CONNECTED_CLASS_COUNTS,
    GRAPH_CLASS_COUNTS,
};
use gapmatch_core::{
    compute_stats, degeneracy_orient, oracle, vertex_triangles_bounded, DmogEngine, GapRegime,
    GappedPattern, IsgNonUniform, IsgUniform, IsgUnbounded, OrientationEngine, QueryGraph,
    ReportMode, ThresholdEngine, TrianglePipeline,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

const REGIMES: [GapRegime; 3] = [GapRegime::Unbounded, GapRegime::Uniform, GapRegime::NonUniform];
const MODES: [ReportMode; 2] = [ReportMode::Dedup, ReportMode::Witness];

fn occurrences<E: DmogEngine>(mut engine: E, text: &[u8]) -> BTreeSet<(u32, u32, Option<u32>)> {
    let mut out = Vec::new();
    let mut got = BTreeSet::new();
    for &byte in text {
        engine.step(byte, &mut out);
        for occ in &out {
            assert_eq!(occ.end, engine.position(), "reports end at the current position");
            got.insert((occ.pattern, occ.end, occ.witness));
        }
    }
    got
}

#[test]
fn criterion_1_dmog_engines_match_the_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut instances = 0u32;
    for regime in REGIMES {
        for case in 0..500u32 {
            let (patterns, text) = random_dmog_instance(&mut rng, regime, case % 2 == 1);
            assert!(patterns.len() <= 50 && text.len() <= 500);
            for mode in MODES {
                let want =
                    oracle::dmog_occurrences(&patterns, &text, mode == ReportMode::Witness);
                let orientation = occurrences(OrientationEngine::new(&patterns, mode), &text);
                let threshold = occurrences(ThresholdEngine::new(&patterns, mode), &text);
                assert_eq!(orientation, want, "orientation {regime:?} {mode:?} case {case}");
                assert_eq!(threshold, want, "threshold {regime:?} {mode:?} case {case}");
            }
            instances += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 1 (dictionary-matching oracle equivalence): PASS — {instances} instances \
         across 3 regimes x 2 modes x 2 engines in {elapsed:?}"
    );
}

#[test]
fn criterion_2_isg_engines_match_the_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _case in 0..500 {
        let (n, edges, stream) = random_isg_unbounded(&mut rng);
        let want = oracle::isg_unbounded(&edges, &stream);
        let mut engine = IsgUnbounded::new(n, &edges);
        let mut out = Vec::new();
        for (i, &v) in stream.iter().enumerate() {
            engine.step(v, &mut out);
            let mut got = out.clone();
            got.sort_unstable();
            assert_eq!(got, want[i], "unbounded position {}", i + 1);
        }
    }
    for _case in 0..500 {
        let (n, edges, alpha, beta, stream) = random_isg_uniform(&mut rng);
        let windowed: Vec<(u32, u32, u32, u32)> =
            edges.iter().map(|&(u, v)| (u, v, alpha, beta)).collect();
        let want = oracle::isg_windowed(&windowed, &stream);
        let mut engine = IsgUniform::new(n, &edges, alpha, beta);
        let mut out = Vec::new();
        let mut got = BTreeSet::new();
        for (i, &v) in stream.iter().enumerate() {
            engine.step(v, &mut out);
            got.extend(out.iter().map(|&(e, j)| (e, j, (i + 1) as u32)));
        }
        assert_eq!(got, want, "uniform window [{alpha},{beta}]");
    }
    for _case in 0..500 {
        let (n, edges, stream) = random_isg_nonuniform(&mut rng);
        let want = oracle::isg_windowed(&edges, &stream);
        let mut engine = IsgNonUniform::new(n, &edges);
        let mut out = Vec::new();
        let mut got = BTreeSet::new();
        for (i, &v) in stream.iter().enumerate() {
            engine.step(v, &mut out);
            got.extend(out.iter().map(|&(e, j)| (e, j, (i + 1) as u32)));
        }
        assert_eq!(got, want, "per-edge windows");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 2 (element-stream oracle equivalence): PASS — 500 instances per variant \
         x 3 variants in {elapsed:?}"
    );
}

#[test]
fn criterion_3_greedy_degeneracy_is_exact() {
    let started = Instant::now();
    let check = |n: usize, edges: &[(u32, u32)]| {
        let orientation = degeneracy_orient(n, edges);
        assert_eq!(orientation.bound, oracle::degeneracy(n, edges));
        for owned in &orientation.out_edges {
            assert!(owned.len() <= orientation.bound, "out-degree within the bound");
        }
    };
    let mut connected_checked = 0usize;
    for n in 1..=8 {
        let all = enumerate_graphs(n);
        assert_eq!(all.len(), GRAPH_CLASS_COUNTS[n - 1], "class count, n = {n}");
        let connected: Vec<_> = all
            .into_iter()
            .filter(|g| is_connected(g.n, &g.edges))
            .collect();
        assert_eq!(connected.len(), CONNECTED_CLASS_COUNTS[n - 1], "connected count, n = {n}");
        for g in &connected {
            check(g.n, &g.edges);
        }
        connected_checked += connected.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..100 {
        let (n, mut edges) = random_multigraph(&mut rng, 12, 40);
        edges.retain(|&(u, v)| u != v);
        check(n, &edges);
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 3 (greedy degeneracy vs exhaustive oracle): PASS — {connected_checked} \
         connected classes on <= 8 vertices + 100 random 12-vertex graphs in {elapsed:?}"
    );
}

fn check_triangle_graph(graph: &QueryGraph, alpha: u32) {
    let n = graph.vertex_count();
    let mut pipeline = TrianglePipeline::new(graph.clone());
    let mut listed = Vec::new();
    for u in 0..n as u32 {
        let want: Vec<[u32; 3]> = oracle::triangles_at(n, graph.edges(), u)
            .into_iter()
            .collect();
        assert_eq!(pipeline.query(u), want, "unbounded pipeline at {u}");
        assert_eq!(
            vertex_triangles_bounded(graph, u, alpha),
            want,
            "bounded pipeline at {u}, alpha {alpha}"
        );
        listed.extend(want);
    }
    let distinct = oracle::triangles(n, graph.edges());
    assert_eq!(listed.len(), 3 * distinct.len(), "three listings per triangle");
    for t in distinct {
        assert_eq!(listed.iter().filter(|&&x| x == t).count(), 3, "{t:?}");
    }
}

#[test]
fn criterion_4_triangle_pipelines_match_enumeration() {
    let started = Instant::now();
    let fixtures = [
        QueryGraph::from_edges([(0, 1), (1, 2), (2, 0)]),
        QueryGraph::from_edges((0..4u32).flat_map(|a| (a + 1..4).map(move |b| (a, b)))),
        QueryGraph::from_edges((1..6u32).map(|b| (0, b))),
        QueryGraph::from_edges((0..5u32).map(|a| (a, (a + 1) % 5))),
    ];
    for (i, graph) in fixtures.iter().enumerate() {
        check_triangle_graph(graph, i as u32);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _case in 0..100 {
        let n = rng.gen_range(1..14u32);
        let m = rng.gen_range(0..=50usize);
        let edges: Vec<(u32, u32)> = (0..m)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let graph = QueryGraph::from_edges(edges);
        if graph.vertex_count() > 0 {
            check_triangle_graph(&graph, rng.gen_range(0..5));
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 4 (triangle pipelines vs enumeration, 3x corner multiplicity): PASS — \
         4 fixtures + 100 random graphs in {elapsed:?}"
    );
}

struct StreamCost {
    work_per_char: f64,
    reported_per_char: f64,
    space_peak: f64,
}

fn stream_cost<E: DmogEngine>(mut engine: E, text: &[u8]) -> StreamCost {
    let mut out = Vec::new();
    let mut reported = 0u64;
    for &byte in text {
        engine.step(byte, &mut out);
        reported += out.len() as u64;
    }
    StreamCost {
        work_per_char: engine.work().total() as f64 / text.len() as f64,
        reported_per_char: reported as f64 / text.len() as f64,
        space_peak: engine.space_peak() as f64,
    }
}

fn ratio_spread(label: &str, ratios: &[f64], max_abs: f64, report: &mut String) {
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        max / min <= 4.0,
        "{label}: ratio spread {:.2} exceeds 4x (ratios {ratios:?})",
        max / min
    );
    assert!(
        max <= max_abs,
        "{label}: ratio {max:.2} exceeds the sanity constant {max_abs}"
    );
    write!(report, " {label} ratios {:?};", ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()).unwrap();
}

#[test]
fn criterion_5_counters_fit_the_theorem_shapes() {
    let started = Instant::now();
    let mut report = String::new();

    // Orientation work vs lsc * delta + op across delta in {1, 2, 4, 8}.
    let mut ratios = Vec::new();
    for delta in [1u32, 2, 4, 8] {
        let patterns = delta_family(delta);
        let stats = compute_stats(&patterns);
        let text = block_family_text(delta, 10_000);
        let cost = stream_cost(OrientationEngine::new(&patterns, ReportMode::Dedup), &text);
        let budget = (stats.lsc as u32 * delta) as f64 + 1.0 + cost.reported_per_char;
        ratios.push(cost.work_per_char / budget);
    }
    ratio_spread("orientation-work", &ratios, 48.0, &mut report);

    // Threshold work vs lsc + sqrt(lsc * d) + op across d in {16, 64, 256}.
    let mut ratios = Vec::new();
    for s in [2u32, 4, 8] {
        let patterns = threshold_family(s);
        let stats = compute_stats(&patterns);
        let d = patterns.len() as f64;
        let text = block_family_text(s, 10_000);
        let cost = stream_cost(ThresholdEngine::new(&patterns, ReportMode::Dedup), &text);
        let budget = stats.lsc as f64 + (stats.lsc as f64 * d).sqrt().ceil() + 1.0
            + cost.reported_per_char;
        ratios.push(cost.work_per_char / budget);
    }
    ratio_spread("threshold-work", &ratios, 48.0, &mut report);

    // Uniform-engine space vs |D| + lsc * (beta - alpha + M) + alpha,
    // varying one window dimension at a time.
    let mut ratios = Vec::new();
    for (alpha, width, m_len) in [
        (0u32, 8u32, 4u32),
        (0, 64, 4),
        (0, 256, 4),
        (0, 8, 32),
        (0, 8, 128),
        (128, 8, 4),
        (512, 8, 4),
    ] {
        let patterns = space_family(alpha, width, m_len);
        let stats = compute_stats(&patterns);
        let text = space_family_text(alpha, width, m_len);
        let cost = stream_cost(OrientationEngine::new(&patterns, ReportMode::Witness), &text);
        let formula =
            (stats.total_len + stats.lsc * (width + m_len) as usize + alpha as usize) as f64;
        ratios.push(cost.space_peak / formula);
    }
    ratio_spread("uniform-space", &ratios, 48.0, &mut report);

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "budget exceeded: {elapsed:?}");
    println!("criterion 5 (theorem-shape counters): PASS —{report} in {elapsed:?}");
}

fn render<E: DmogEngine>(mut engine: E, text: &[u8]) -> String {
    let mut out = Vec::new();
    let mut lines = String::new();
    for &byte in text {
        engine.step(byte, &mut out);
        out.sort_unstable();
        for occ in &out {
            match occ.witness {
                Some(j) => writeln!(lines, "{}\t{}\t{}", occ.end, occ.pattern, j).unwrap(),
                None => writeln!(lines, "{}\t{}", occ.end, occ.pattern).unwrap(),
            }
        }
    }
    lines
}

#[test]
fn criterion_7_engines_render_byte_identical_output() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut instances = 0u32;
    let mut bytes = 0usize;
    for regime in REGIMES {
        for case in 0..500u32 {
            let (patterns, text): (Vec<GappedPattern>, Vec<u8>) =
                random_dmog_instance(&mut rng, regime, case % 2 == 1);
            for mode in MODES {
                let orientation = render(OrientationEngine::new(&patterns, mode), &text);
                let threshold = render(ThresholdEngine::new(&patterns, mode), &text);
                assert_eq!(orientation, threshold, "{regime:?} {mode:?} case {case}");
                bytes += orientation.len();
            }
            instances += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 7 (cross-engine byte-identical output): PASS — {instances} instances, \
         {bytes} output bytes compared in {elapsed:?}"
    );
}
