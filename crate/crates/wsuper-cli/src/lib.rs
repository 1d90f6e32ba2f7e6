//! Command-line front end: job files in, canonical JSON or text reports out.

pub mod golden;
pub mod job;
pub mod tasks;
pub mod text;

pub use job::{Format, JobSpec, SpecError, Task};
pub use tasks::run_job;

/// Serializes a report canonically: sorted keys, two-space indentation,
/// trailing newline.
pub fn to_canonical_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
