//! Report envelope shared by every JSON-emitting subcommand.

use rendezvous_core::simulator::Violation;
use serde::Serialize;

/// Version of the report layout; kept in lock step with
/// `schema/report.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Uniform envelope: fields serialize in declaration order, so identical
/// payloads yield byte-identical documents.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report<T: Serialize> {
    pub schema_version: &'static str,
    pub command: String,
    /// Seed driving any randomized part of the command; echoed even when it
    /// was generated rather than supplied.
    pub seed: Option<u64>,
    pub results: T,
    /// Trials that broke the analytic bound of a deterministic family.
    /// Nonempty violations exit with status 1.
    pub bound_violations: Vec<Violation>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, seed: Option<u64>, results: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            results,
            bound_violations: Vec::new(),
        }
    }

    pub fn with_violations(mut self, violations: Vec<Violation>) -> Self {
        self.bound_violations = violations;
        self
    }

    /// Renders compact JSON by default, pretty-printed with `--pretty`.
    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        }
    }
}
