//! Run results in machine (JSON) and human (aligned text) form.

use casimir_core::report::VerificationReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRow {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// One run's complete result. Field order is fixed, so identical inputs
/// produce byte-identical machine output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub mode: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRow>>,
    pub checks: Vec<CheckRow>,
    pub ok: bool,
}

impl RunResult {
    pub fn attach_report(&mut self, report: &VerificationReport) {
        for item in &report.items {
            self.checks.push(CheckRow {
                name: item.name.clone(),
                passed: item.passed,
                detail: item.detail.clone(),
            });
        }
        self.ok = self.checks.iter().all(|c| c.passed);
    }

    pub fn machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "chart ({}), dimension {}\n",
            self.coordinates.join(", "),
            self.dimension
        ));
        if let Some(k) = self.k {
            out.push_str(&format!("k    = {k}\n"));
        }
        if let Some(table) = &self.table {
            out.push_str(&format!("bracket table ({} nonzero pairs)\n", table.len()));
            let width = table
                .iter()
                .map(|r| r.left.len() + r.right.len())
                .max()
                .unwrap_or(0);
            for row in table {
                let head = format!("{{{}, {}}}", row.left, row.right);
                out.push_str(&format!("  {head:<w$} = {}\n", row.value, w = width + 4));
            }
        }
        if let Some(f) = &self.f {
            out.push_str(&format!("f    = {f}\n"));
        }
        if let Some(g) = &self.g {
            out.push_str(&format!("g    = {g}\n"));
        }
        if let Some(rank) = self.rank {
            out.push_str(&format!("rank = {rank}\n"));
        }
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            if check.detail.is_empty() || check.passed {
                out.push_str(&format!("check {status}  {}\n", check.name));
            } else {
                out.push_str(&format!("check {status}  {} ({})\n", check.name, check.detail));
            }
        }
        out.push_str(if self.ok { "result: OK\n" } else { "result: FAILED\n" });
        out
    }
}
