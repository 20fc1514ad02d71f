//! Pass/fail reports produced by the verification suites.
//!
//! A report is an ordered list of named checks.  Suites that scan many
//! individual cases per check use [`Family`] to count failures and keep the
//! first counterexample; merging families chunk-by-chunk in input order keeps
//! the reported counterexample independent of how work was split.

/// One named check with an optional human-readable detail (typically a
/// counterexample on failure).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

/// An ordered collection of checks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
        });
    }

    /// Append another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for check in other.checks {
            self.checks.push(Check {
                name: format!("{prefix}.{}", check.name),
                pass: check.pass,
                detail: check.detail,
            });
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// A one-line summary per check, for logs and test output.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("{status} {}", check.name));
            if let Some(detail) = &check.detail {
                out.push_str(&format!(" ({detail})"));
            }
            out.push('\n');
        }
        out
    }
}

/// Failure accumulator for one family of point checks.
#[derive(Debug, Clone, Default)]
pub struct Family {
    failures: u64,
    first: Option<String>,
}

impl Family {
    pub fn new() -> Self {
        Family::default()
    }

    /// Record one failing case; the detail closure runs only for the first.
    pub fn record(&mut self, detail: impl FnOnce() -> String) {
        if self.first.is_none() {
            self.first = Some(detail());
        }
        self.failures += 1;
    }

    /// Record the outcome of one case.
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.record(detail);
        }
    }

    /// Fold in a later chunk's accumulator (call in input order).
    pub fn merge(&mut self, later: Family) {
        if self.first.is_none() {
            self.first = later.first;
        }
        self.failures += later.failures;
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    /// Convert into a named check.
    pub fn into_check(self, name: impl Into<String>) -> Check {
        let pass = self.failures == 0;
        let detail = if pass {
            None
        } else {
            self.first
                .map(|d| format!("{} failing case(s); first: {d}", self.failures))
        };
        Check {
            name: name.into(),
            pass,
            detail,
        }
    }
}
