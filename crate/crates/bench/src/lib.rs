//! Criterion benchmarks for zealot-core; see `benches/`.
