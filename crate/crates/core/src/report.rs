//! Violation reports shared by the validators.

use serde::Serialize;

/// One failed check with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: &str, witness: String) {
        self.findings.push(Finding {
            check: check.to_string(),
            witness,
        });
    }

    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for f in other.findings {
            self.findings.push(Finding {
                check: format!("{prefix}: {}", f.check),
                witness: f.witness,
            });
        }
    }

    pub fn has(&self, check: &str) -> bool {
        self.findings.iter().any(|f| f.check.contains(check))
    }
}
