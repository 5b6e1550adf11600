//! Run reports and exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use prism_cactus::chains::{Branch, Recorder};

/// Failure classes, each with its own exit code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {message}")]
    Internal { message: String, bundle: Option<PathBuf> },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Internal { .. } => 5,
            CliError::Verification(_) => 6,
            CliError::Io(_) => 7,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub status: StageStatus,
    pub elapsed: Duration,
    pub note: String,
    pub diagnostic: Option<PathBuf>,
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub stages: Vec<Stage>,
    /// Named results, in insertion order.
    pub facts: Vec<(String, String)>,
    pub branches: BTreeMap<Branch, usize>,
    pub fallbacks: Vec<String>,
    pub trace: Vec<String>,
    /// Artifacts by file name; written under `--out` when given.
    pub artifacts: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub error: Option<CliError>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..Self::default()
        }
    }

    /// Runs one stage, timing it and recording its status.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T, CliError>) -> Result<T, CliError> {
        let t = Instant::now();
        let r = f();
        let diagnostic = match &r {
            Err(CliError::Internal { bundle, .. }) => bundle.clone(),
            _ => None,
        };
        self.stages.push(Stage {
            name: name.to_string(),
            status: if r.is_ok() { StageStatus::Ok } else { StageStatus::Failed },
            elapsed: t.elapsed(),
            note: r.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
            diagnostic,
        });
        r
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn artifact(&mut self, name: &str, content: String) {
        self.artifacts.push((name.to_string(), content));
    }

    pub fn absorb(&mut self, rec: &Recorder) {
        for (b, c) in &rec.branches {
            *self.branches.entry(*b).or_default() += c;
        }
        self.fallbacks.extend(rec.fallbacks.iter().cloned());
        self.trace.extend(rec.trace_lines().iter().cloned());
    }

    /// Required branches that did not execute.
    pub fn missing_branches(&self) -> Vec<Branch> {
        Branch::required().iter().copied().filter(|b| !self.branches.contains_key(b)).collect()
    }

    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }

    /// Line-oriented summary: `command`, `stage`, `fact`, `branch`,
    /// `fallback`, `output` and `status` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command {}", self.command);
        for st in &self.stages {
            let status = match st.status {
                StageStatus::Ok => "ok",
                StageStatus::Failed => "failed",
            };
            let _ = write!(s, "stage {} {} {:.3}ms", st.name, status, st.elapsed.as_secs_f64() * 1e3);
            if !st.note.is_empty() {
                let _ = write!(s, " {}", st.note);
            }
            if let Some(d) = &st.diagnostic {
                let _ = write!(s, " diagnostic={}", d.display());
            }
            s.push('\n');
        }
        for (k, v) in &self.facts {
            let _ = writeln!(s, "fact {k} {v}");
        }
        for (b, c) in &self.branches {
            let _ = writeln!(s, "branch {b} {c}");
        }
        for f in &self.fallbacks {
            let _ = writeln!(s, "fallback {f}");
        }
        for o in &self.outputs {
            let _ = writeln!(s, "output {}", o.display());
        }
        match &self.error {
            None => s.push_str("status ok\n"),
            Some(e) => {
                let _ = writeln!(s, "status error {} {e}", e.exit_code());
            }
        }
        s
    }
}
