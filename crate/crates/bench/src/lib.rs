//! Criterion benchmarks for rayleigh-core; see `benches/rayleigh.rs`.
