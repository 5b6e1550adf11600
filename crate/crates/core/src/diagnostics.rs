//! Failure records for internal inconsistencies.

use std::fmt::Write as _;

use crate::embed::PlaneGraph;

/// Everything needed to replay a failed construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub operation: String,
    pub host: String,
    pub params: Vec<(String, String)>,
    pub partial: Vec<String>,
}

impl Diagnostic {
    pub fn new(operation: &str, host: &PlaneGraph, message: impl Into<String>) -> Self {
        Diagnostic {
            message: message.into(),
            operation: operation.to_string(),
            host: host.to_pgr(),
            params: Vec::new(),
            partial: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl std::fmt::Debug) -> Self {
        self.params.push((key.to_string(), format!("{value:?}")));
        self
    }

    pub fn partial(mut self, obj: impl std::fmt::Debug) -> Self {
        self.partial.push(format!("{obj:?}"));
        self
    }

    /// Line-oriented dump: header lines, then the host in pgr format.
    pub fn to_failure_format(&self) -> String {
        let mut s = String::new();
        writeln!(s, "failure {}", self.operation).unwrap();
        writeln!(s, "message {}", self.message).unwrap();
        for (k, v) in &self.params {
            writeln!(s, "param {k} {v}").unwrap();
        }
        for p in &self.partial {
            writeln!(s, "partial {p}").unwrap();
        }
        s.push_str("host\n");
        s.push_str(&self.host);
        s
    }
}
