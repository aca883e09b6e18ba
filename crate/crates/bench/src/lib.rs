//! Criterion benchmarks for the snowblower toolkit live in `benches/`.
