//! Criterion benchmarks for `sl1-core`. The benchmarks live in `benches/`.
