//! Benchmarks for `dwkit`. See `benches/`.
