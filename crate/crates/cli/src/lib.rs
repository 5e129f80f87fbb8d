//! Front end for `apolar-core`: a small expression language for forms and a dispatcher that
//! turns one request into one JSON document plus an exit code (0 success, 1 parse or schema
//! error, 2 violated precondition).

pub mod job;
pub mod parse;

pub use job::{run, CliError, Command, JobOutput, JobRequest};
pub use parse::{parse_form, parse_form_in, ParseError, RingSpec};
