//! Front end for the `nf` binary: specification files, the JSON output
//! document, and the subcommands.

pub mod doc;
pub mod error;
pub mod run;
pub mod spec;

pub use doc::OutputDocument;
pub use error::CliError;
pub use run::{render_text, run, Command, Outcome, RunOptions};
pub use spec::{parse_spec, ProblemSpec};
