//! Library side of the `mdsipm` command-line driver: the benchmark sweep,
//! the verification suites, and the file formats (per-iteration CSV logs,
//! benchmark records, matrix dumps).

pub mod bench;
pub mod io;
pub mod verify;

pub use bench::{bench_sweep, BenchRecord};
pub use verify::{run_all_suites, SuiteReport, VerifyConfig};
