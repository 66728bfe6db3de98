//! Benchmark-only crate; see `benches/fibers.rs`.
