//! Criterion benchmarks for `modaldoc`; see `benches/`.
