//! Command-line front end: parses instances, runs a pipeline and renders a
//! key-value report whose every check is listed with its limit.

pub mod cache;
pub mod pipeline;
pub mod report;
pub mod request;

pub use pipeline::run;
pub use report::{Report, Status};
pub use request::{Args, Pipeline, RunRequest};
