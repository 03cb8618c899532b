//! Reports: the scenario, one record per check, a summary, and a digest.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::scenario::Scenario;
use crate::suites::{run_scenario_checks, CheckRecord};

pub const FORMAT: &str = "dynideal-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    fn of(checks: &[CheckRecord]) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Summary { total: checks.len(), passed, failed: checks.len() - passed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// SHA-256 of the compact JSON of the report with this field empty.
    pub digest: String,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0 && self.checks.iter().all(|c| c.pass)
    }

    pub fn compute_digest(&self) -> String {
        let mut bare = self.clone();
        bare.digest.clear();
        let bytes = serde_json::to_vec(&bare).expect("reports serialize");
        format!("{:x}", Sha256::digest(&bytes))
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str, source_name: &str) -> Result<Report, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(source_name, &e))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, self.to_text()).map_err(|e| CliError::io(path, e))
    }
}

pub fn scenario_run(sc: &Scenario) -> Result<Report, CliError> {
    let mut checks = run_scenario_checks(sc)?;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = Summary::of(&checks);
    let mut report = Report { format: FORMAT.into(), scenario: sc.clone(), checks, summary, digest: String::new() };
    report.digest = report.compute_digest();
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub problems: Vec<String>,
    pub checked: usize,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Re-check a report from its own contents: digest, summary, and every
/// certificate's claim against the recorded verdict.
pub fn verify_report(r: &Report) -> Verification {
    let mut v = Verification::default();
    if r.format != FORMAT {
        v.problems.push(format!("unknown format {:?}", r.format));
    }
    if r.compute_digest() != r.digest {
        v.problems.push("digest does not match the contents".into());
    }
    if Summary::of(&r.checks) != r.summary {
        v.problems.push("summary does not match the checks".into());
    }
    let ids: BTreeSet<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
    if ids.len() != r.checks.len() {
        v.problems.push("duplicate check ids".into());
    }
    for c in &r.checks {
        v.checked += 1;
        let recomputed = match &c.certificate {
            Some(cert) => match cert.verify() {
                Ok(p) => p,
                Err(e) => {
                    if c.pass {
                        v.problems.push(format!("{}: unreadable certificate: {e}", c.id));
                    }
                    false
                }
            },
            None => false,
        };
        if recomputed != c.pass {
            v.problems.push(format!("{}: recorded {} but the certificate gives {}", c.id, c.pass, recomputed));
        }
    }
    v
}

/// `Ok(true)` iff the text parses as a report and re-verifies completely.
pub fn report_verify(text: &str) -> Result<bool, CliError> {
    let r = Report::from_text(text, "report")?;
    Ok(verify_report(&r).ok())
}
