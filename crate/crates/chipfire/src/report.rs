//! Structured pass/fail reports emitted by the verification sweeps.

use serde::Serialize;

/// One counterexample (or suspected one): the game and what went wrong.
#[derive(Serialize, Clone, Debug)]
pub struct FailureRecord {
    /// Graph in the text file format.
    pub graph: String,
    /// Initial configuration in the comma-separated text form.
    pub sigma: String,
    pub t0: usize,
    #[serde(rename = "T")]
    pub period: usize,
    pub detail: String,
}

/// Outcome of a claim sweep. `pass` is set exactly when `failures` is
/// empty. `elapsed_ms` is only serialized when timing was requested, so
/// that reports are byte-identical across repeated runs and worker counts.
#[derive(Serialize, Clone, Debug)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: serde_json::Value,
    pub games_checked: u64,
    pub failures: Vec<FailureRecord>,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(
        claim: impl Into<String>,
        parameters: serde_json::Value,
        games_checked: u64,
        failures: Vec<FailureRecord>,
        incomplete: bool,
    ) -> Self {
        let pass = failures.is_empty();
        VerificationReport {
            claim: claim.into(),
            parameters,
            games_checked,
            failures,
            pass,
            incomplete,
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Report shape specific to the period-2 range sweep on `K_{a,a}`. The
/// statement range `(2a^2 - a, 2a^2)` sits inside the wider proof range
/// `(2a^2 - 2a, 2a^2)`; both are swept and tallied separately.
#[derive(Serialize, Clone, Debug)]
pub struct Theorem2Report {
    pub claim: String,
    pub a: usize,
    /// Open-interval bounds on the total checked: the proof range.
    pub range: [u64; 2],
    /// Open-interval bounds of the narrower statement range.
    pub range_statement: [u64; 2],
    pub mode: String,
    pub games_checked: u64,
    pub games_statement_range: u64,
    pub undefined_conjugates: u64,
    pub failures: Vec<FailureRecord>,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Theorem2Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
