//! Batch verification driver for [`opconvex`]: matrix file I/O, random
//! verification suites and JSON reports.
//!
//! Exit codes of the `opconvex` binary: 0 when every checked inequality
//! holds, 1 when one is violated, 2 on usage or input errors.

pub mod app;
pub mod error;
pub mod matrix_io;
pub mod report;
pub mod suites;

pub use app::{run, Cli, Outcome};
pub use error::{CliError, CliResult};
pub use matrix_io::{parse_matrix, parse_matrix_checked, serialize_matrix, MatrixFile};
pub use report::VerificationReport;
pub use suites::{run_suite, Suite, SuiteConfig};
