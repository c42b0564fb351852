//! gapmatch: stream text through a dictionary of gapped patterns.
//!
//! Subcommands: `stats` (dictionary shape as JSON), `match` (occurrence
//! lines, online), `triangles` (local triangle queries over an edge
//! list), and `bench` (deterministic per-character work CSV over the
//! generated families).
//!
//! Exit codes: 0 on success, 1 when an input fails to parse, 2 on I/O
//! errors.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gapmatch_core::gen::{block_family_text, delta_family, threshold_family};
use gapmatch_core::{
    classify_heavy, compute_stats, degeneracy_orient, parse_dictionary, threshold_orient,
    vertex_triangles_bounded, DictGraph, DmogEngine, GapRegime, GappedPattern, Occurrence,
    OrientationEngine, QueryGraph, ReportMode, ThresholdEngine, TrianglePipeline,
};
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gapmatch", version, about = "Streaming dictionary matching with one gap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dictionary statistics and an engine suggestion as JSON.
    Stats {
        /// Dictionary file, one pattern per line: `p1{a,b}p2`, `p1{*}p2`,
        /// or a plain string.
        dict: PathBuf,
    },
    /// Stream text through the dictionary, one occurrence line per match.
    Match(MatchArgs),
    /// List triangles of an undirected graph through one or all vertices.
    Triangles(TriangleArgs),
    /// Print a CSV of per-character work over the generated families.
    Bench(BenchArgs),
}

#[derive(Args)]
struct MatchArgs {
    dict: PathBuf,
    /// Text file; standard input when omitted.
    text: Option<PathBuf>,
    /// Matching engine.
    #[arg(long, value_enum, default_value_t = EngineChoice::Orientation)]
    engine: EngineChoice,
    /// Report one line per witness (end position of the first
    /// subpattern) instead of one line per pattern and position.
    #[arg(long)]
    witnesses: bool,
    /// Write a JSON summary of the work and space counters here.
    #[arg(long)]
    counters: Option<PathBuf>,
    /// Flush every position's occurrences before reading further input.
    #[arg(long)]
    online_flush: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum EngineChoice {
    Orientation,
    Threshold,
}

#[derive(Args)]
struct TriangleArgs {
    /// Edge-list file: one `u v` pair per line, `#` comments.
    graph: PathBuf,
    /// List triangles containing this vertex.
    #[arg(long, conflicts_with = "all")]
    query: Option<u32>,
    /// Query every vertex in turn; each triangle prints once per corner.
    #[arg(long)]
    all: bool,
    /// Use the bounded-window pipeline instead of the unbounded one.
    #[arg(long)]
    bounded: bool,
    /// Separator length for the bounded pipeline (any value lists the
    /// same triangles).
    #[arg(long, default_value_t = 0)]
    alpha: u32,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated families to run: `delta` and/or `threshold`.
    #[arg(long, default_value = "delta,threshold")]
    families: String,
    /// Seed for the filler bytes mixed into the family texts.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Characters streamed per family member.
    #[arg(long, default_value_t = 100_000)]
    chars: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// A closed output pipe (`gapmatch ... | head`) is the consumer saying
/// "enough", not a failure.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause
            .downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    })
}

/// 2 for I/O failures anywhere in the chain, 1 for everything else
/// (parse and usage errors).
fn classify(err: &anyhow::Error) -> u8 {
    if err.chain().any(|cause| cause.is::<io::Error>()) {
        2
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats { dict } => cmd_stats(&dict),
        Command::Match(args) => cmd_match(args),
        Command::Triangles(args) => cmd_triangles(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_dictionary(path: &PathBuf) -> Result<Vec<GappedPattern>> {
    let src = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let patterns = parse_dictionary(&src)
        .with_context(|| format!("parsing dictionary {}", path.display()))?;
    Ok(patterns)
}

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

fn cmd_stats(dict: &PathBuf) -> Result<()> {
    let patterns = load_dictionary(dict)?;
    let stats = compute_stats(&patterns);
    let graph = DictGraph::build(&patterns);
    let bip = graph.bipartite_edges();
    let orientation = degeneracy_orient(graph.vertex_count(), &bip);
    let split = classify_heavy(graph.vertex_count(), &bip, stats.lsc);
    let (_, heavy_heavy) = threshold_orient(graph.vertex_count(), &bip, &split.is_heavy);
    let d = graph.edges.len() as u64;
    let lsc = stats.lsc.max(1) as u64;
    let suggested = if d > 0 && lsc + isqrt_ceil(lsc * d) < lsc * orientation.bound as u64 {
        "threshold"
    } else {
        "orientation"
    };
    let regime = match stats.regime {
        GapRegime::Unbounded => "unbounded",
        GapRegime::Uniform => "uniform",
        GapRegime::NonUniform => "non-uniform",
    };
    let json = serde_json::json!({
        "patterns": stats.pattern_count,
        "dict_size": stats.total_len,
        "d": d,
        "lsc": stats.lsc,
        "max_p2_len": stats.max_p2_len,
        "alpha_star": stats.alpha_star,
        "beta_star": stats.beta_star,
        "regime": regime,
        "delta": orientation.bound,
        "theta": split.theta,
        "heavy_vertices": split.heavy.len(),
        "heavy_heavy_edges": heavy_heavy.len(),
        "suggested_engine": suggested,
    });
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&json)?)?;
    Ok(())
}

fn cmd_match(args: MatchArgs) -> Result<()> {
    let patterns = load_dictionary(&args.dict)?;
    let mode = if args.witnesses {
        ReportMode::Witness
    } else {
        ReportMode::Dedup
    };
    let mut engine: Box<dyn DmogEngine> = match args.engine {
        EngineChoice::Orientation => Box::new(OrientationEngine::new(&patterns, mode)),
        EngineChoice::Threshold => Box::new(ThresholdEngine::new(&patterns, mode)),
    };
    let mut reader: Box<dyn Read> = match &args.text {
        Some(path) => Box::new(
            fs::File::open(path).with_context(|| format!("opening {}", path.display()))?,
        ),
        None => Box::new(io::stdin().lock()),
    };
    let stdout = io::stdout().lock();
    let mut writer = io::BufWriter::new(stdout);
    let mut buf = [0u8; 4096];
    let mut out: Vec<Occurrence> = Vec::new();
    let mut chars = 0u64;
    let mut reported = 0u64;
    loop {
        let n = reader.read(&mut buf).context("reading text")?;
        if n == 0 {
            break;
        }
        for &byte in &buf[..n] {
            engine.step(byte, &mut out);
            chars += 1;
            reported += out.len() as u64;
            out.sort_unstable();
            for occ in &out {
                match occ.witness {
                    Some(j) => writeln!(writer, "{}\t{}\t{}", occ.end, occ.pattern, j)?,
                    None => writeln!(writer, "{}\t{}", occ.end, occ.pattern)?,
                }
            }
            if args.online_flush {
                writer.flush().context("flushing occurrences")?;
            }
        }
    }
    writer.flush().context("flushing occurrences")?;
    if let Some(path) = &args.counters {
        let work = engine.work();
        let summary = serde_json::json!({
            "chars": chars,
            "reported": reported,
            "total_work": work.total(),
            "work_per_char_mean": if chars > 0 { work.total() as f64 / chars as f64 } else { 0.0 },
            "work_p50": work.percentile(50.0),
            "work_p90": work.percentile(90.0),
            "work_p99": work.percentile(99.0),
            "work_max": work.percentile(100.0),
            "space_peak_words": engine.space_peak(),
        });
        fs::write(path, serde_json::to_string_pretty(&summary)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_triangles(args: TriangleArgs) -> Result<()> {
    let src = fs::read_to_string(&args.graph)
        .with_context(|| format!("reading {}", args.graph.display()))?;
    let graph = QueryGraph::parse(&src)
        .with_context(|| format!("parsing graph {}", args.graph.display()))?;
    let n = graph.vertex_count() as u32;
    let queries: Vec<u32> = if args.all {
        (0..n).collect()
    } else {
        let q = args.query.context("pass --query VERTEX or --all")?;
        if q >= n {
            bail!("query vertex {q} out of range (graph has {n} vertices)");
        }
        vec![q]
    };
    let stdout = io::stdout().lock();
    let mut writer = io::BufWriter::new(stdout);
    let mut pipeline = TrianglePipeline::new(graph.clone());
    for u in queries {
        let triangles = if args.bounded {
            vertex_triangles_bounded(&graph, u, args.alpha)
        } else {
            pipeline.query(u)
        };
        for t in triangles {
            writeln!(writer, "{} {} {}", t[0], t[1], t[2])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Benchmark rows stay deterministic for a fixed seed: the throughput
/// column is characters per work unit (a machine-independent model
/// rate), not wall-clock speed — wall-clock belongs to the criterion
/// benches.
fn cmd_bench(args: BenchArgs) -> Result<()> {
    let stdout = io::stdout().lock();
    let mut writer = io::BufWriter::new(stdout);
    writeln!(writer, "family,size,delta,lsc,work_p50,work_p99,chars_per_work")?;
    for family in args.families.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        match family {
            "delta" => {
                for delta in [1u32, 2, 4, 8] {
                    let patterns = delta_family(delta);
                    let engine = OrientationEngine::new(&patterns, ReportMode::Dedup);
                    bench_row(&mut writer, "delta", &patterns, engine, delta, args.seed, args.chars)?;
                }
            }
            "threshold" => {
                for s in [2u32, 4, 8] {
                    let patterns = threshold_family(s);
                    let engine = ThresholdEngine::new(&patterns, ReportMode::Dedup);
                    bench_row(&mut writer, "threshold", &patterns, engine, s, args.seed, args.chars)?;
                }
            }
            other => bail!("unknown family {other:?} (expected delta or threshold)"),
        }
    }
    writer.flush()?;
    Ok(())
}

fn bench_row<W: Write, E: DmogEngine>(
    writer: &mut W,
    family: &str,
    patterns: &[GappedPattern],
    mut engine: E,
    width: u32,
    seed: u64,
    chars: usize,
) -> Result<()> {
    let stats = compute_stats(patterns);
    let graph = DictGraph::build(patterns);
    let delta = degeneracy_orient(graph.vertex_count(), &graph.bipartite_edges()).bound;
    let mut text = block_family_text(width, chars / 4 + 1);
    text.truncate(chars.max(4));
    // Scatter seed-determined filler so streams differ across seeds but
    // never across runs.
    let mut state = seed | 1;
    for slot in text.iter_mut().step_by(97) {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        if state >> 60 == 0 {
            *slot = b'z';
        }
    }
    let mut out = Vec::new();
    for &b in &text {
        engine.step(b, &mut out);
    }
    let work = engine.work();
    let cpw = text.len() as f64 / work.total().max(1) as f64;
    writeln!(
        writer,
        "{family},{},{delta},{},{},{},{cpw:.4}",
        patterns.len(),
        stats.lsc,
        work.percentile(50.0),
        work.percentile(99.0),
    )?;
    Ok(())
}
