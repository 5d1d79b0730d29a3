//! Structured verification records.
//!
//! Every corpus check and every CLI run that verifies a claim emits a
//! [`CheckRecord`]: which claim was tested (a short id plus the claim text
//! itself as the anchor), with which parameters and seed, and what came of
//! it. Records are serialized as JSON with stable field names; the schema
//! string is bumped if a field is ever renamed or removed, so downstream
//! consumers can pin what they parse.

use serde::Serialize;

/// Schema tag stamped on every serialized report.
pub const REPORT_SCHEMA: &str = "chevkit-report/1";

/// Outcome of one check.
///
/// `Pass` means the claim verified exactly. `Finding` means the check ran
/// to completion and the claim did *not* hold — the interesting outcome,
/// kept distinct from a crash. `Fail` means the check could not be carried
/// out (an internal error such as a budget stop); the payload carries the
/// error text.
#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Finding,
    Fail,
}

/// One verified (or refuted) claim.
#[derive(Serialize, Clone, Debug)]
pub struct CheckRecord {
    /// Stable short identifier, e.g. `"e73.trigger.s3"`.
    pub id: String,
    /// The claim being checked, quoted or closely paraphrased.
    pub anchor: String,
    /// Human-readable parameter summary (field, sample counts, …).
    pub parameters: String,
    /// RNG seed used for sampled witnesses; `None` for deterministic checks.
    pub seed: Option<u64>,
    pub verdict: Verdict,
    /// Check-specific details: witness values, computed cells, counts.
    pub payload: serde_json::Value,
}

impl CheckRecord {
    /// Build a record from a check body: `Ok(payload)` is a pass, a
    /// `Finding` error carries the refutation detail.
    pub fn from_outcome(
        id: &str,
        anchor: &str,
        parameters: String,
        seed: Option<u64>,
        outcome: Result<serde_json::Value, String>,
    ) -> CheckRecord {
        let (verdict, payload) = match outcome {
            Ok(payload) => (Verdict::Pass, payload),
            Err(detail) => (Verdict::Finding, serde_json::json!({ "detail": detail })),
        };
        CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            parameters,
            seed,
            verdict,
            payload,
        }
    }
}

/// A full corpus run: schema tag, suite name, master seed, records.
#[derive(Serialize, Clone, Debug)]
pub struct CorpusReport {
    pub schema: &'static str,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl CorpusReport {
    pub fn new(suite: &str, seed: u64) -> CorpusReport {
        CorpusReport { schema: REPORT_SCHEMA, suite: suite.to_string(), seed, checks: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
