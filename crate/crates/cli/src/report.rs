use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Envelope printed by `--json` for every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    /// SHA-256 of the canonical presentation text, when the command works over one algebra.
    pub algebra_hash: Option<String>,
    pub pass: bool,
    pub results: Value,
    /// Seconds.
    pub wall_time: f64,
}

impl RunReport {
    pub fn new(
        command: String,
        parameters: BTreeMap<String, Value>,
        algebra_hash: Option<String>,
        pass: bool,
        results: Value,
        elapsed: Duration,
    ) -> Self {
        RunReport { command, parameters, algebra_hash, pass, results, wall_time: elapsed.as_secs_f64() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let mut params = BTreeMap::new();
        params.insert("cutoff".to_string(), Value::from(12));
        let r = RunReport::new("module pdim".into(), params, Some("ab".into()), true, serde_json::json!({"kind": "exact"}), Duration::from_millis(5));
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), r);
    }
}
