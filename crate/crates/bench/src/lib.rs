//! Criterion benchmarks for hcns-core live under `benches/`.
