//! Benchmarks for the perigraph pipeline; see `benches/`.
