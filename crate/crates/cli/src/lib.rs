//! Command-line front end: expression parsing, job files and reports.

pub mod job;
pub mod parser;
pub mod report;

pub use job::{EquationSpec, JobSpec};
pub use parser::{parse_expression, ParseError};
pub use report::{emit_json, emit_text, run_job, Report};
