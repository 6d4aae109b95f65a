//! Report bundle assembly and emission.
//!
//! Reports are sorted by (suite, identity_id, dim, seed, operands) so
//! the serialized bundle is independent of execution order. The
//! `runtime_ms` and `timestamp_unix_ms` fields are the only volatile
//! parts; `canonicalize` zeroes them for byte comparison.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use bracketlab::ResidualReport;

use crate::config::SuiteConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteCount {
    pub passed: usize,
    pub failed: usize,
    pub artifacts: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub artifacts: usize,
    pub suites: BTreeMap<String, SuiteCount>,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportBundle {
    pub version: String,
    pub config: SuiteConfig,
    pub timestamp_unix_ms: u64,
    pub reports: Vec<ResidualReport>,
    pub summary: Summary,
}

impl ReportBundle {
    pub fn new(config: SuiteConfig, mut reports: Vec<ResidualReport>, runtime_ms: f64) -> Self {
        reports.sort_by(|a, b| {
            (&a.suite, &a.identity_id, a.dim, a.seed, &a.operands)
                .cmp(&(&b.suite, &b.identity_id, b.dim, b.seed, &b.operands))
        });
        let mut summary = Summary { total: reports.len(), runtime_ms, ..Summary::default() };
        for r in &reports {
            let entry = summary.suites.entry(r.suite.clone()).or_default();
            if r.artifact {
                summary.artifacts += 1;
                entry.artifacts += 1;
            }
            if r.pass {
                summary.passed += 1;
                entry.passed += 1;
            } else {
                summary.failed += 1;
                entry.failed += 1;
            }
        }
        let timestamp_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        Self { version: VERSION.to_string(), config, timestamp_unix_ms, reports, summary }
    }

    /// Overall verdict: every non-artifact report passes.
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// Zero the volatile fields so two runs with the same config
    /// serialize to identical bytes.
    pub fn canonicalize(&mut self) {
        self.timestamp_unix_ms = 0;
        self.summary.runtime_ms = 0.0;
        for r in &mut self.reports {
            r.runtime_ms = 0.0;
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("suite,identity_id,operands,dim,seed,residual,tolerance,pass,artifact,runtime_ms\n");
        for r in &self.reports {
            out.push_str(&format!(
                "{},{},{},{},{},{:.17e},{:.17e},{},{},{}\n",
                r.suite,
                csv_quote(&r.identity_id),
                csv_quote(&r.operands),
                r.dim,
                r.seed,
                r.residual,
                r.tolerance,
                r.pass,
                r.artifact,
                r.runtime_ms
            ));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# bracketlab report\n\nversion {} | {} reports | {} passed | {} failed\n",
            self.version, self.summary.total, self.summary.passed, self.summary.failed
        );
        for (suite, count) in &self.summary.suites {
            out.push_str(&format!(
                "\n## {suite} ({} passed, {} failed)\n\n",
                count.passed, count.failed
            ));
            out.push_str("| identity | operands | dim | residual | tolerance | pass |\n");
            out.push_str("|---|---|---|---|---|---|\n");
            for r in self.reports.iter().filter(|r| &r.suite == suite) {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.3e} | {:.3e} | {} |\n",
                    r.identity_id,
                    r.operands.replace('|', "\\|"),
                    r.dim,
                    r.residual,
                    r.tolerance,
                    if r.artifact { "artifact" } else if r.pass { "yes" } else { "NO" }
                ));
            }
        }
        out
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_bundle() {
        let b = ReportBundle::new(SuiteConfig::default(), vec![], 1.0);
        assert!(b.all_pass());
        assert_eq!(b.summary.total, 0);
        let json: serde_json::Value = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(json["reports"].as_array().unwrap().len(), 0);
        assert_eq!(json["summary"]["failed"], 0);
    }

    #[test]
    fn failing_report_counted() {
        let r = ResidualReport::new("x", 1.0, 1e-12).with_suite("identities");
        let b = ReportBundle::new(SuiteConfig::default(), vec![r], 1.0);
        assert!(!b.all_pass());
        assert_eq!(b.summary.failed, 1);
        assert!(b.to_markdown().contains("## identities"));
    }

    #[test]
    fn canonical_form_is_stable() {
        let r = ResidualReport::new("x", 0.0, 1e-12).with_suite("reps").with_runtime(3.0);
        let mut a = ReportBundle::new(SuiteConfig::default(), vec![r.clone()], 5.0);
        let mut b = ReportBundle::new(SuiteConfig::default(), vec![r], 9.0);
        a.canonicalize();
        b.canonicalize();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn reports_sorted_for_determinism() {
        let r1 = ResidualReport::new("b", 0.0, 1.0).with_suite("reps");
        let r2 = ResidualReport::new("a", 0.0, 1.0).with_suite("reps");
        let b = ReportBundle::new(SuiteConfig::default(), vec![r1, r2], 0.0);
        assert_eq!(b.reports[0].identity_id, "a");
    }
}
