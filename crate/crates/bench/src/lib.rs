//! Benchmark crate; see `benches/tables.rs`.
