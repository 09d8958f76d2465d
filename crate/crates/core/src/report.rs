//! Verification reports: named checks with expected and computed values.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// A value printed in the literature the engine reproduces.
    #[serde(rename = "PAPER")]
    Published,
    /// Follows directly from a definition.
    #[serde(rename = "TRIVIAL")]
    Trivial,
    /// Computed by an independent route.
    #[serde(rename = "DERIVED")]
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "PAPER",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub tag: Provenance,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Records a check that passes when `expected == computed` as strings.
    pub fn compare(
        &mut self,
        id: impl Into<String>,
        tag: Provenance,
        expected: impl ToString,
        computed: impl ToString,
    ) -> bool {
        let expected = expected.to_string();
        let computed = computed.to_string();
        let pass = expected == computed;
        self.push(Check {
            id: id.into(),
            expected,
            tag,
            computed,
            pass,
        });
        pass
    }

    /// Records a check whose pass/fail is decided by the caller.
    pub fn record(
        &mut self,
        id: impl Into<String>,
        tag: Provenance,
        expected: impl ToString,
        computed: impl ToString,
        pass: bool,
    ) -> bool {
        self.push(Check {
            id: id.into(),
            expected: expected.to_string(),
            tag,
            computed: computed.to_string(),
            pass,
        });
        pass
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(Check {
                id: format!("{}/{}", other.suite, c.id),
                ..c
            });
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Markdown table, one row per check.
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "## {}: {}\n\n| check | expected | tag | computed | result |\n|---|---|---|---|---|\n",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                c.id,
                c.expected,
                c.tag,
                c.computed,
                if c.pass { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}
