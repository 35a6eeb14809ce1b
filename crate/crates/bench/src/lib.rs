//! Benchmark host crate.  All content lives in the benches targets.
