//! Reading system descriptions and writing reports and drawings.

mod dot;
mod json;
mod parse;

pub use dot::{net_dot, prefix_dot, verifier_dot};
pub use json::{emit_report, report_json, verdict_json};
pub use parse::{parse_system, render, ParseError};
