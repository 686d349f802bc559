//! Output envelope, error records and the exit-code contract.

use std::process::ExitCode;

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Exit codes, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Domain = 2,
    Numeric = 3,
    AuditFailure = 4,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> ExitCode {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Clone)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    /// Where the error happened (grid cell, s value), if anywhere specific.
    pub at: Option<Value>,
}

impl ErrorRecord {
    pub fn from_core(e: &qgenocchi::Error, at: Option<Value>) -> Self {
        use qgenocchi::Error as E;
        let kind = match e {
            E::Domain(_) => "domain",
            E::NotConvergent { .. } => "not_convergent",
            E::PoleAtDenominator { .. } => "pole_at_denominator",
            E::DegenerateRecurrence => "degenerate_recurrence",
            E::DivisionByZero => "division_by_zero",
        };
        ErrorRecord { kind, message: e.to_string(), at }
    }

    pub fn exit(&self) -> Exit {
        match self.kind {
            "domain" => Exit::Domain,
            "usage" => Exit::Usage,
            "audit_failure" | "limit_mismatch" => Exit::AuditFailure,
            _ => Exit::Numeric,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), Value::String(self.kind.into()));
        m.insert("message".into(), Value::String(self.message.clone()));
        if let Some(at) = &self.at {
            m.insert("at".into(), at.clone());
        }
        Value::Object(m)
    }
}

#[derive(Debug)]
pub struct OutputEnvelope {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub errors: Vec<ErrorRecord>,
}

impl OutputEnvelope {
    pub fn new(command: &'static str, params: Value) -> Self {
        OutputEnvelope { command, params, results: Value::Null, errors: Vec::new() }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
        m.insert("command".into(), Value::String(self.command.into()));
        m.insert("params".into(), self.params.clone());
        m.insert("results".into(), self.results.clone());
        m.insert("errors".into(), Value::Array(self.errors.iter().map(ErrorRecord::to_json).collect()));
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        let mut s = qgenocchi::report::to_canonical_string(&self.to_json());
        s.push('\n');
        s
    }

    /// The most severe exit code among the recorded errors.
    pub fn exit(&self) -> Exit {
        self.errors.iter().map(ErrorRecord::exit).max().unwrap_or(Exit::Ok)
    }
}
