//! Bench-only crate; the criterion targets live in `benches/`.
