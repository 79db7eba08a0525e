use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CheckResult, Format, RunConfig, Status};
use crate::error::{Error, Result};
use crate::wreath::certificate::SubdegreeCertificate;

/// Schema version of the JSON report.
pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: RunConfig, results: Vec<CheckResult>) -> Report {
        Report {
            version: REPORT_VERSION.to_string(),
            config,
            results,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }

    /// 0 iff nothing failed; skipped long checks do not count as failures.
    pub fn exit_code(&self) -> i32 {
        if self.failures().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per check: `check_id,status,expected,actual,runtime_ms`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["check_id", "status", "expected", "actual", "runtime_ms"])
            .map_err(io)?;
        for r in &self.results {
            w.write_record([
                r.check_id.as_str(),
                r.status.as_str(),
                &r.expected,
                &r.actual,
                &r.runtime_ms.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Certificates embedded in check witnesses under the `certificate` key.
pub fn certificates_of(results: &[CheckResult]) -> Vec<SubdegreeCertificate> {
    results
        .iter()
        .filter_map(|r| r.witness.as_ref()?.get("certificate"))
        .filter_map(|c| serde_json::from_value(c.clone()).ok())
        .collect()
}
