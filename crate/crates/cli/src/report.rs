//! Versioned JSON report written by every `ctl` command.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "ctl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Verdict {
    pub fn new(
        name: &str,
        status: Status,
        tolerance: Option<f64>,
        detail: impl Into<String>,
    ) -> Self {
        Verdict {
            name: name.to_string(),
            status,
            tolerance,
            detail: detail.into(),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Verdict::new(name, Status::Skipped, None, reason)
    }
}

/// A single number with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub method: String,
    pub residual: f64,
}

impl Quantity {
    pub fn closed_form(value: f64) -> Self {
        Quantity::with_method(value, "closed-form", 0.0)
    }

    pub fn with_method(value: f64, method: &str, residual: f64) -> Self {
        Quantity {
            value,
            method: method.to_string(),
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

/// Arguments and environment overrides that reproduce the run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub argv: Vec<String>,
    #[serde(default)]
    pub env: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: Tool,
    pub invocation: Invocation,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Fields written by other tool versions, kept verbatim.
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl ReportDocument {
    pub fn new(command: &str, invocation: Invocation) -> Self {
        ReportDocument {
            schema: SCHEMA_VERSION,
            tool: Tool {
                name: TOOL_NAME.to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            invocation,
            command: command.to_string(),
            family: None,
            dimension: None,
            theory: None,
            numeric: None,
            empirical: None,
            checks: None,
            verdicts: Vec::new(),
            warnings: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses a report; fields this version does not know land in `extra`.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: ReportDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.schema != SCHEMA_VERSION {
            return Err(format!("unsupported report schema {}", doc.schema));
        }
        Ok(doc)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }
}
