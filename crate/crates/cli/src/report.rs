//! Run reports. The text rendering is produced from the same JSON value as
//! the machine rendering, so both carry identical numbers.

use localchern::oracle::Rejections;
use localchern::stdbasis::Colength;
use serde::Serialize;
use serde_json::Value;

use crate::problem::ProblemFile;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Settings {
    pub seed: u64,
    pub trials: usize,
    pub height: i64,
    pub lambda: f64,
    pub radius: f64,
    pub starts: Option<usize>,
    pub tol: f64,
    pub pair_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleSummary {
    pub starts: usize,
    pub deformations_agreeing: usize,
    pub charts_agreeing: usize,
    pub rejected: Rejections,
    /// Accepted points of the first deformation, in `x` coordinates.
    pub points: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SchemeSummary {
    pub generators: Vec<String>,
    pub leading_ideal: Vec<String>,
    pub colength: Colength,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    pub problem: ProblemFile,
    pub settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alg_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chern: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial_values: Option<Vec<Colength>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resamples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    pub seed: u64,
    /// Seconds; only recorded on request since it breaks byte-identical
    /// reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, problem: ProblemFile, settings: Settings) -> Self {
        RunReport {
            command: command.to_string(),
            seed: settings.seed,
            problem,
            settings,
            scheme: None,
            alg_index: None,
            baseline: None,
            chern: None,
            negative: None,
            trial_values: None,
            resamples: None,
            oracle_count: None,
            oracle: None,
            verdict: None,
            cause: None,
            wall_time: None,
        }
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        if let Value::Object(map) = value {
            for (k, v) in map {
                write_entry(&mut out, &k, &v, 0);
            }
        }
        out
    }
}

fn write_entry(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                write_entry(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) && depth == 0 => {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                out.push_str(&format!("{pad}  - {}\n", scalar(item)));
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}
