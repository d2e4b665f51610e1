//! Problem files, reports and the command dispatch behind `specfact`.

pub mod problem;
pub mod report;
pub mod run;

pub use problem::{parse_problem, InputError, Payload, ProblemFile, Task};
pub use report::{render, RenderMode, Report, DEFAULT_PRECISION};
pub use run::{exit_code, load, run, RunOptions};
