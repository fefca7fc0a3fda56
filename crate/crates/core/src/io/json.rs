//! JSON reports. Objects have sorted keys and carry no timings, so the
//! same input always produces the same bytes.

use serde_json::{json, Value};

use crate::analysis::Verdict;
use crate::orchestrator::Report;

/// One verdict as a JSON object, tagged with the system name.
pub fn verdict_json(system: &str, v: &Verdict) -> Value {
    let mut value = serde_json::to_value(v).expect("verdicts serialize");
    value
        .as_object_mut()
        .expect("a verdict is an object")
        .insert("system".into(), Value::String(system.to_string()));
    value
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "system": r.system,
        "verdicts": r.verdicts.iter().map(|v| verdict_json(&r.system, v)).collect::<Vec<_>>(),
        "fallback_used": r.fallback_used,
        "components": r.components,
    })
}

/// Pretty-printed report followed by a newline.
pub fn emit_report(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&report_json(r)).expect("values serialize");
    s.push('\n');
    s
}
