//! Benchmarks for `emcover-core` live under `benches/`.
