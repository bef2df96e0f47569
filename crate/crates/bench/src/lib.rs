//! Benchmark-only crate; the measurements live in `benches/toolkit.rs`.
//!
//! Run with `cargo bench -p bicoset-bench`.
