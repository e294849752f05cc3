use std::collections::BTreeMap;
use std::fmt::Write as _;

use gca_core::deciders::PropertyVerdict;
use serde::Serialize;

/// One requested check. `ms` is omitted when timings are disabled so that
/// reports of the same scenario are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: String,
    pub certificate: Option<String>,
    pub witness: Option<serde_json::Value>,
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub automaton: String,
    pub checks: Vec<CheckResult>,
    /// Broken implications and unmet expectations.
    pub violations: Vec<String>,
    #[serde(skip)]
    pub verdicts: BTreeMap<String, PropertyVerdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("scenario {} ({})\n", self.scenario, self.automaton);
        for c in &self.checks {
            let _ = write!(out, "  {:<16} {:<20}", c.name, c.status);
            if let Some(ms) = c.ms {
                let _ = write!(out, " {ms:>6} ms");
            }
            if let Some(cert) = &c.certificate {
                let _ = write!(out, "  {cert}");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  witness {}", abbreviate(&w.to_string(), 120));
            }
            out.push('\n');
        }
        if self.violations.is_empty() {
            out.push_str("no violations\n");
        }
        for v in &self.violations {
            let _ = writeln!(out, "VIOLATION {v}");
        }
        out
    }
}

pub(crate) fn abbreviate(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => format!("{}…", &s[..i]),
        None => s.to_string(),
    }
}
