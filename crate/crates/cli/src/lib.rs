//! Input format, command pipeline and report emitters for the `dox` tool.

pub mod commands;
pub mod dsl;
pub mod emit;
pub mod report;

pub use commands::{run, Command, Options, Outcome};
pub use dsl::{parse, DslError, ProblemSpec};
pub use emit::{emit, Format};
