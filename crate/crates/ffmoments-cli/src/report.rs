//! JSON report schema. The top-level field names are stable and part of the
//! test surface: {params, predicted, empirical, ratio, tolerances,
//! tail_bounds}.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Serialize)]
pub struct Report {
    pub params: Value,
    pub predicted: Value,
    pub empirical: Value,
    pub ratio: Value,
    pub tolerances: Value,
    pub tail_bounds: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn complex_json(v: num_complex::Complex64) -> Value {
    json!({ "re": v.re, "im": v.im })
}
