use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "ERROR"),
            Severity::Warning => write!(f, "WARNING"),
        }
    }
}

/// One validation outcome, tied to a rule from the documented catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub rule_id: String,
    pub subject: String,
    pub message: String,
}

impl Finding {
    pub fn new(
        severity: Severity,
        rule_id: impl Into<String>,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Finding {
            severity,
            rule_id: rule_id.into(),
            subject: subject.into(),
            message: message.into(),
        }
    }
}

/// Ordered list of findings. The order is fully deterministic so reports
/// can be compared byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport::default()
    }

    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    /// Sort by severity, then rule id, then subject, then message.
    pub fn finalize(&mut self) {
        self.findings.sort_by(|a, b| {
            (a.severity, &a.rule_id, &a.subject, &a.message).cmp(&(
                b.severity,
                &b.rule_id,
                &b.subject,
                &b.message,
            ))
        });
        self.findings.dedup();
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn error_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count()
    }

    pub fn warning_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
            .count()
    }

    /// Plain text rendering, one finding per line: `SEV RULE subject: message`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!(
                "{} {} {}: {}\n",
                f.severity, f.rule_id, f.subject, f.message
            ));
        }
        out
    }

    /// Machine readable JSON array, same order as the text rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.findings).expect("report serializes")
    }
}
