//! Case-file driver for `lechkit-core`: parsing, the check pipeline and
//! report rendering. The binary in `main.rs` is a thin layer over this.

pub mod case;
pub mod checks;
pub mod report;

pub use case::CaseFile;
pub use checks::{run_checks, run_checks_with_field, Selection};
pub use report::Report;
