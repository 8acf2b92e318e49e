//! JSON and plain-text rendering of command results.

use serde::Serialize;
use serde_json::Value;
use titeica_core::verify::Check;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config_echo: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub timing_ms: u64,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, config_echo: Value, checks: Vec<Check>, data: Value) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report {
            command: command.to_string(),
            config_echo,
            checks,
            summary: Summary { passed, failed },
            timing_ms: 0,
            data,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        out.push_str(&format!("command: {}\n", self.command));
        for check in &self.checks {
            let verdict = if check.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{verdict}  {:width$}  defect {:>12.4e}  tolerance {:>12.4e}  samples {}\n",
                check.name, check.max_defect, check.tolerance, check.n_samples,
            ));
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed ({} ms)\n",
            self.summary.passed, self.summary.failed, self.timing_ms,
        ));
        out
    }
}
