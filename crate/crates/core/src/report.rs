//! Law-checking reports shared by every validator in the crate.

use serde::Serialize;
use std::fmt;

/// Number of violations kept verbatim; the rest are only counted.
const MAX_RECORDED: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

/// Outcome of a family of law checks: how many instances were evaluated and
/// which ones failed, each with a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub subject: String,
    pub checked: usize,
    pub failed: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            checked: 0,
            failed: 0,
            violations: Vec::new(),
        }
    }

    /// Records one law instance. The witness closure only runs on failure.
    pub fn check<W>(&mut self, law: &str, ok: bool, witness: W) -> bool
    where
        W: FnOnce() -> String,
    {
        self.checked += 1;
        if !ok {
            self.fail(law, witness());
        }
        ok
    }

    pub fn fail(&mut self, law: &str, witness: String) {
        self.failed += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation {
                law: law.to_string(),
                witness,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn violates(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn merge(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for v in other.violations {
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(v);
            }
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checked, {} failed",
            self.subject, self.checked, self.failed
        )?;
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.law, v.witness)?;
        }
        Ok(())
    }
}
