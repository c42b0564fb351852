//! Dictionary grammar, parsing, and aggregate statistics.
//!
//! A dictionary file holds one pattern per line:
//!
//! ```text
//! pattern := subpat [ gap subpat ]
//! gap     := '{' INT ',' INT '}' | '{*}'
//! ```
//!
//! Subpatterns are raw byte strings; `\{`, `\}`, and `\\` escape the three
//! metacharacters. Lines whose first byte is `#` are comments; empty lines
//! are skipped. Everything else on a line is significant (no trimming —
//! spaces are ordinary alphabet symbols).
//!
//! Invariants upheld here:
//! * `p1` is never empty; a missing gap yields a gapless pattern with an
//!   empty `p2`.
//! * Gap bounds satisfy `alpha <= beta`.
//! * Duplicate patterns are kept and keep distinct ids (they become
//!   parallel edges of the subpattern graph).

use serde::Serialize;
use thiserror::Error;

/// Gap constraint between the end of `p1` and the start of `p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GapBounds {
    /// `{*}`: any gap `g >= 0` (the two halves may not overlap).
    Unbounded,
    /// `{alpha,beta}`: gap `g` with `alpha <= g <= beta`.
    Bounded(u32, u32),
}

impl GapBounds {
    /// Does gap length `g` satisfy this constraint?
    pub fn contains(&self, g: i64) -> bool {
        match *self {
            GapBounds::Unbounded => g >= 0,
            GapBounds::Bounded(a, b) => g >= a as i64 && g <= b as i64,
        }
    }
}

/// One dictionary entry. `id` is the 0-based line-order index among
/// parsed patterns (comments and blank lines do not consume ids).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GappedPattern {
    pub id: u32,
    pub p1: Vec<u8>,
    pub p2: Vec<u8>,
    pub gap: GapBounds,
}

impl GappedPattern {
    /// A pattern with an empty `p2` is a plain string; its gap is ignored.
    pub fn is_gapless(&self) -> bool {
        self.p2.is_empty()
    }
}

/// Which gap structure the dictionary as a whole exhibits. Engines pick
/// their window machinery based on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRegime {
    /// Every gapped pattern uses `{*}`.
    Unbounded,
    /// Every gapped pattern uses the same `{alpha,beta}`.
    Uniform,
    /// Mixed bounds (possibly including `{*}` edges).
    NonUniform,
}

/// Aggregate dictionary statistics used to size the engines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DictionaryStats {
    /// Number of patterns (dictionary entries).
    pub pattern_count: usize,
    /// Sum of subpattern lengths over all entries.
    pub total_len: usize,
    /// Longest suffix chain: the maximum number of distinct subpatterns
    /// that can end at a single text position. Counted in vertices, so a
    /// dictionary whose subpatterns have no suffix relations has `lsc = 1`.
    pub lsc: usize,
    /// Maximum length of a second subpattern (`0` if none exist).
    pub max_p2_len: usize,
    /// Minimum `alpha` over bounded gaps (`0` if none).
    pub alpha_star: u32,
    /// Maximum `beta` over bounded gaps (`0` if none).
    pub beta_star: u32,
    pub regime: GapRegime,
}

/// Parse failure, tagged with the 1-based source line.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DictError {
    #[error("line {line}: empty first subpattern")]
    EmptyFirstSubpattern { line: usize },
    #[error("line {line}: malformed gap (expected `{{INT,INT}}` or `{{*}}`)")]
    MalformedGap { line: usize },
    #[error("line {line}: gap bounds reversed ({alpha} > {beta})")]
    GapBoundsReversed { line: usize, alpha: u32, beta: u32 },
    #[error("line {line}: missing second subpattern after gap")]
    MissingSecondSubpattern { line: usize },
    #[error("line {line}: more than one gap")]
    SecondGap { line: usize },
    #[error("line {line}: invalid escape `\\{found}` (only `\\{{`, `\\}}`, `\\\\` are allowed)")]
    InvalidEscape { line: usize, found: char },
    #[error("line {line}: trailing backslash")]
    TrailingBackslash { line: usize },
}

/// Parse a whole dictionary source. Bytes are the alphabet, so the input
/// is split on `\n` (with a trailing `\r` stripped per line) rather than
/// interpreted as UTF-8.
pub fn parse_dictionary(source: &[u8]) -> Result<Vec<GappedPattern>, DictError> {
    let mut patterns = Vec::new();
    for (idx, mut line) in source.split(|&b| b == b'\n').enumerate() {
        if let [head @ .., b'\r'] = line {
            line = head;
        }
        if line.is_empty() || line[0] == b'#' {
            continue;
        }
        let pattern = parse_line(line, idx + 1, patterns.len() as u32)?;
        patterns.push(pattern);
    }
    Ok(patterns)
}

fn parse_line(line: &[u8], lineno: usize, id: u32) -> Result<GappedPattern, DictError> {
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    let mut gap = None;
    let mut cur = &mut p1;
    let mut i = 0;
    while i < line.len() {
        match line[i] {
            b'\\' => {
                let next = line.get(i + 1).copied();
                match next {
                    Some(c @ (b'{' | b'}' | b'\\')) => {
                        cur.push(c);
                        i += 2;
                    }
                    Some(other) => {
                        return Err(DictError::InvalidEscape {
                            line: lineno,
                            found: other as char,
                        })
                    }
                    None => return Err(DictError::TrailingBackslash { line: lineno }),
                }
            }
            b'{' => {
                if gap.is_some() {
                    return Err(DictError::SecondGap { line: lineno });
                }
                let close = line[i..]
                    .iter()
                    .position(|&b| b == b'}')
                    .ok_or(DictError::MalformedGap { line: lineno })?;
                let body = &line[i + 1..i + close];
                gap = Some(parse_gap(body, lineno)?);
                i += close + 1;
                cur = &mut p2;
            }
            b => {
                cur.push(b);
                i += 1;
            }
        }
    }
    if p1.is_empty() {
        return Err(DictError::EmptyFirstSubpattern { line: lineno });
    }
    if gap.is_some() && p2.is_empty() {
        return Err(DictError::MissingSecondSubpattern { line: lineno });
    }
    Ok(GappedPattern {
        id,
        p1,
        p2,
        gap: gap.unwrap_or(GapBounds::Unbounded),
    })
}

fn parse_gap(body: &[u8], lineno: usize) -> Result<GapBounds, DictError> {
    if body == b"*" {
        return Ok(GapBounds::Unbounded);
    }
    let comma = body
        .iter()
        .position(|&b| b == b',')
        .ok_or(DictError::MalformedGap { line: lineno })?;
    let alpha = parse_int(&body[..comma]).ok_or(DictError::MalformedGap { line: lineno })?;
    let beta = parse_int(&body[comma + 1..]).ok_or(DictError::MalformedGap { line: lineno })?;
    if alpha > beta {
        return Err(DictError::GapBoundsReversed {
            line: lineno,
            alpha,
            beta,
        });
    }
    Ok(GapBounds::Bounded(alpha, beta))
}

fn parse_int(digits: &[u8]) -> Option<u32> {
    if digits.is_empty() || !digits.iter().all(|b| b.is_ascii_digit()) {
        return None;
    }
    std::str::from_utf8(digits).ok()?.parse().ok()
}

/// Render a pattern back to its canonical line form. Metacharacters in
/// subpatterns are always escaped, so `parse(render(p)) == p` and
/// rendering is idempotent on parsed input.
pub fn render_pattern(pattern: &GappedPattern) -> Vec<u8> {
    let mut out = Vec::new();
    escape_into(&pattern.p1, &mut out);
    if !pattern.p2.is_empty() {
        match pattern.gap {
            GapBounds::Unbounded => out.extend_from_slice(b"{*}"),
            GapBounds::Bounded(a, b) => {
                out.extend_from_slice(format!("{{{a},{b}}}").as_bytes());
            }
        }
        escape_into(&pattern.p2, &mut out);
    }
    out
}

fn escape_into(sub: &[u8], out: &mut Vec<u8>) {
    for &b in sub {
        if matches!(b, b'{' | b'}' | b'\\') {
            out.push(b'\\');
        }
        out.push(b);
    }
}

/// Compute dictionary-wide statistics. Total for any input; an empty
/// dictionary yields all-zero counts (regime defaults to `Unbounded`).
pub fn compute_stats(patterns: &[GappedPattern]) -> DictionaryStats {
    let mut subpatterns: Vec<&[u8]> = Vec::new();
    let mut total_len = 0;
    let mut max_p2_len = 0;
    let mut alpha_star = None;
    let mut beta_star = None;
    let mut bounded: Vec<(u32, u32)> = Vec::new();
    let mut any_unbounded_gap = false;
    for p in patterns {
        total_len += p.p1.len() + p.p2.len();
        subpatterns.push(&p.p1);
        if !p.p2.is_empty() {
            subpatterns.push(&p.p2);
            max_p2_len = max_p2_len.max(p.p2.len());
            match p.gap {
                GapBounds::Unbounded => any_unbounded_gap = true,
                GapBounds::Bounded(a, b) => {
                    alpha_star = Some(alpha_star.map_or(a, |x: u32| x.min(a)));
                    beta_star = Some(beta_star.map_or(b, |x: u32| x.max(b)));
                    bounded.push((a, b));
                }
            }
        }
    }
    let regime = if bounded.is_empty() {
        GapRegime::Unbounded
    } else if !any_unbounded_gap && bounded.iter().all(|&g| g == bounded[0]) {
        GapRegime::Uniform
    } else {
        GapRegime::NonUniform
    };
    DictionaryStats {
        pattern_count: patterns.len(),
        total_len,
        lsc: longest_suffix_chain(&mut subpatterns),
        max_p2_len,
        alpha_star: alpha_star.unwrap_or(0),
        beta_star: beta_star.unwrap_or(0),
        regime,
    }
}

/// Longest chain of distinct subpatterns, each a proper suffix of the
/// next, counted in vertices. Equivalently: the maximum over subpatterns
/// `s` of the number of subpatterns that are suffixes of `s` (including
/// `s`), which is the number of dictionary vertices on one suffix-link
/// chain of the matching automaton.
fn longest_suffix_chain(subpatterns: &mut Vec<&[u8]>) -> usize {
    subpatterns.sort_unstable();
    subpatterns.dedup();
    if subpatterns.is_empty() {
        return 0;
    }
    // Chain depth via the longest proper suffix that is itself a
    // subpattern: every shorter subpattern-suffix of `s` is also a suffix
    // of that parent, so depth(s) = depth(parent) + 1.
    let set: std::collections::HashSet<&[u8]> = subpatterns.iter().copied().collect();
    let mut depth: std::collections::HashMap<&[u8], usize> = std::collections::HashMap::new();
    let mut by_len: Vec<&[u8]> = subpatterns.clone();
    by_len.sort_unstable_by_key(|s| s.len());
    let mut best = 0;
    for s in by_len {
        let mut d = 1;
        for start in 1..s.len() {
            let suffix = &s[start..];
            if set.contains(suffix) {
                d = depth[suffix] + 1;
                break;
            }
        }
        best = best.max(d);
        depth.insert(s, d);
    }
    best
}
