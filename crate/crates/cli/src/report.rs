//! Suite reports: per-check records with a stable serialization.
//!
//! Serialized reports (CSV or JSON) are bit-identical across runs for a
//! fixed config and seed; wall-clock time is kept out of them and goes to
//! stderr instead.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub instance: String,
    pub params: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        instance: impl Into<String>,
        params: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        pass: bool,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            instance: instance.into(),
            params: params.into(),
            expected: expected.into(),
            actual: actual.into(),
            pass,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub instance: String,
    pub seed: u64,
    pub verdict: String,
    pub checks: Vec<CheckRecord>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn new(instance: String, seed: u64, mut checks: Vec<CheckRecord>, wall_ms: u128) -> Self {
        // Stable ordering: by check id, then parameters.
        checks.sort_by(|a, b| a.id.cmp(&b.id).then(a.params.cmp(&b.params)));
        let verdict = if checks.iter().all(|c| c.pass) {
            "pass".to_string()
        } else {
            "fail".to_string()
        };
        SuiteReport {
            instance,
            seed,
            verdict,
            checks,
            wall_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,anchor,instance,params,expected,actual,pass,witness\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_field(&c.id),
                csv_field(&c.anchor),
                csv_field(&c.instance),
                csv_field(&c.params),
                csv_field(&c.expected),
                csv_field(&c.actual),
                c.pass,
                csv_field(c.witness.as_deref().unwrap_or("")),
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
