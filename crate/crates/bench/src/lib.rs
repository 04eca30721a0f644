//! Criterion benchmarks for cascade-net live in `benches/`.
