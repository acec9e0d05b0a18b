//! Run reports and job configuration.
//!
//! Reports are TOML documents built from fixed-order structs and sorted
//! maps, so identical runs serialize to identical bytes. Configuration
//! files use the same field names as the command-line flags.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::DegreeReport;
use crate::verify::VerifyReport;
use crate::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One cutoff row of a dimension table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRow {
    pub cutoff: i64,
    pub kernel: usize,
    pub image: usize,
    pub dim: usize,
}

/// Dimension table for a single degree, with its stabilization verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSection {
    pub label: String,
    pub degree: usize,
    pub stabilized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub rows: Vec<RunRow>,
}

/// Pass/fail counts for one identity suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSection {
    pub name: String,
    pub summary: String,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A complete run report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub engine_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `"ok"`, or `"failed: ..."` naming the violated identity or table.
    pub status: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteSection>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            engine_version: ENGINE_VERSION.to_string(),
            command: command.to_string(),
            fixture: None,
            seed: None,
            status: "ok".to_string(),
            notes: Vec::new(),
            params: BTreeMap::new(),
            degrees: Vec::new(),
            suites: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn fail(&mut self, why: impl std::fmt::Display) {
        if self.status == "ok" {
            self.status = format!("failed: {why}");
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "ok"
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("report emission: {e}")))
    }
}

/// Turn engine dimension tables into report sections, ordered by degree.
pub fn degree_sections(label: &str, reports: &BTreeMap<usize, DegreeReport>) -> Vec<DegreeSection> {
    reports
        .values()
        .map(|rep| DegreeSection {
            label: format!("{label}^{}", rep.degree),
            degree: rep.degree,
            stabilized: rep.stabilized,
            dim: rep.stabilized_dim,
            rows: rep
                .runs
                .iter()
                .map(|run| RunRow {
                    cutoff: run.cutoff,
                    kernel: run.kernel_dim,
                    image: run.incoming_rank,
                    dim: run.dim,
                })
                .collect(),
        })
        .collect()
}

/// Turn an identity-suite run into report sections.
pub fn suite_sections(vr: &VerifyReport) -> Vec<SuiteSection> {
    vr.outcomes
        .iter()
        .map(|o| SuiteSection {
            name: o.name.clone(),
            summary: o.summary.clone(),
            trials: o.trials,
            failures: o.failures,
            detail: o.detail.clone(),
        })
        .collect()
}

/// Configuration file contents; field names mirror the CLI flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: String,
    pub model: Option<String>,
    pub fixture: Option<String>,
    pub f: Option<String>,
    pub theta: Option<String>,
    pub omega: Option<String>,
    pub m: Option<String>,
    pub map: Option<String>,
    pub alpha: Option<String>,
    pub operator: Option<String>,
    pub suite: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub degrees: Option<String>,
    #[serde(alias = "Dmin")]
    pub dmin: Option<i64>,
    #[serde(alias = "Dmax")]
    pub dmax: Option<i64>,
    pub stability: Option<usize>,
    pub out: Option<String>,
}

pub fn load_config(src: &str) -> Result<JobConfig> {
    toml::from_str(src).map_err(|e| Error::Config(format!("config file: {e}")))
}

/// `"t3"` (or `"T3"`) names the 3-torus.
pub fn parse_model(s: &str) -> Result<usize> {
    let rest = s
        .strip_prefix('t')
        .or_else(|| s.strip_prefix('T'))
        .ok_or_else(|| Error::Config(format!("bad model {s:?}; expected t1, t2, ...")))?;
    let dim: usize = rest
        .parse()
        .map_err(|_| Error::Config(format!("bad model {s:?}; expected t1, t2, ...")))?;
    if dim == 0 || dim > 8 {
        return Err(Error::Config(format!("model {s:?} out of range; tori t1..t8 supported")));
    }
    Ok(dim)
}

/// Comma-separated degree list, deduplicated and sorted.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let d: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad degree {part:?} in {s:?}")))?;
        out.push(d);
    }
    if out.is_empty() {
        return Err(Error::Config("degree list is empty".into()));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The cutoff schedule `dmin, dmin+1, ..., dmax`.
pub fn schedule(dmin: i64, dmax: i64) -> Result<Vec<i64>> {
    if dmin < 0 || dmin > dmax {
        return Err(Error::Config(format!("bad schedule {dmin}..{dmax}")));
    }
    Ok((dmin..=dmax).collect())
}
