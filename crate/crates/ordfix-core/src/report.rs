//! Machine-checkable claim reports.
//!
//! Every verification routine in this crate reduces to a list of claims,
//! each carrying a stable identifier, the expected statement, the measured
//! value and a pass flag.  Reports serialize as a JSON array of
//! `{"claim", "expected", "measured", "pass"}` objects.

use serde::{Deserialize, Serialize};

/// One checked statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    /// Stable identifier, e.g. `"lemma_2_4/norm_const"`.
    pub claim: String,
    /// Human-readable statement of what was expected.
    pub expected: String,
    /// What was actually measured, rendered deterministically.
    pub measured: String,
    /// Whether the measurement matches the expectation.
    pub pass: bool,
}

impl Claim {
    pub fn new(
        claim: impl Into<String>,
        expected: impl Into<String>,
        measured: impl Into<String>,
        pass: bool,
    ) -> Self {
        Claim {
            claim: claim.into(),
            expected: expected.into(),
            measured: measured.into(),
            pass,
        }
    }
}

/// An ordered list of claims; serializes as a bare JSON array.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClaimReport {
    pub claims: Vec<Claim>,
}

impl ClaimReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    /// Records a claim and returns whether it passed.
    pub fn check(
        &mut self,
        id: impl Into<String>,
        expected: impl Into<String>,
        measured: impl Into<String>,
        pass: bool,
    ) -> bool {
        self.push(Claim::new(id, expected, measured, pass));
        pass
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// Appends all claims of `other`, prefixing their ids with `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: ClaimReport) {
        for mut claim in other.claims {
            claim.claim = format!("{prefix}{}", claim.claim);
            self.claims.push(claim);
        }
    }
}
