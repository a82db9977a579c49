//! Benchmarks for `opsets-core` live in `benches/analysis.rs`; run them with
//! `cargo bench -p opsets-bench`.
