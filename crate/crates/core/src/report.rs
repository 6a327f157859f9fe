//! Violation bookkeeping shared by every theorem check.
//!
//! Checks never abort on the first failure: each clause is evaluated and a
//! failing clause is recorded with the offending element(s) so that a single
//! run surfaces everything that went wrong.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checker {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl Checker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record one clause evaluation; `witness` is only materialised on failure.
    pub fn check<W>(&mut self, ok: bool, clause: &str, witness: W) -> bool
    where
        W: FnOnce() -> Vec<usize>,
    {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                clause: clause.to_string(),
                witness: witness(),
            });
        }
        ok
    }

    pub fn expect(&mut self, ok: bool, clause: &str) -> bool {
        self.check(ok, clause, Vec::new)
    }

    pub fn absorb(&mut self, other: Checker) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    /// Merge another checker, prefixing its clause names.
    pub fn absorb_prefixed(&mut self, prefix: &str, other: Checker) {
        self.checks += other.checks;
        self.violations
            .extend(other.violations.into_iter().map(|mut v| {
                v.clause = format!("{prefix}: {}", v.clause);
                v
            }));
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}
