//! Reproduction harness for the `pgsor-core` solvers: parameter tables,
//! single solves, benchmark sweeps, randomized property checks and problem
//! export.

pub mod commands;
pub mod oracle;
pub mod presets;
pub mod random;
pub mod row;
pub mod verify;

pub use commands::{cmd_bench, cmd_gen, cmd_params, cmd_solve, BenchSpec, ParamsReport, SolveSpec, UsageError};
pub use row::{read_rows, write_rows, BenchMethod, BenchRow, CSV_HEADER};
pub use verify::{cmd_verify, PropertyResult, VerifyReport};
