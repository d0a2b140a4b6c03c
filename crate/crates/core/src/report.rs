//! Verification reports: named pass/fail line items with details.

use std::fmt;

/// One verified identity or property.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    /// Human-readable evidence: the first failing witness, a computed value,
    /// or empty.
    pub detail: String,
}

impl CheckItem {
    pub fn pass(name: impl Into<String>) -> CheckItem {
        CheckItem { name: name.into(), passed: true, detail: String::new() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> CheckItem {
        CheckItem { name: name.into(), passed: false, detail: detail.into() }
    }

    pub fn from_bool(name: impl Into<String>, passed: bool, detail_on_fail: impl Into<String>) -> CheckItem {
        if passed {
            CheckItem::pass(name)
        } else {
            CheckItem::fail(name, detail_on_fail)
        }
    }
}

/// An ordered bundle of check items.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.items.extend(other.items);
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let status = if item.passed { "PASS" } else { "FAIL" };
            if item.detail.is_empty() {
                writeln!(f, "{status}  {}", item.name)?;
            } else {
                writeln!(f, "{status}  {} ({})", item.name, item.detail)?;
            }
        }
        Ok(())
    }
}
