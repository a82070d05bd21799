//! Criterion benchmarks for the sbflag engine; see `benches/`.
