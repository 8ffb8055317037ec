//! Criterion benchmarks for the trap library; see `benches/`.
