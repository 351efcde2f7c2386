//! Verification reports: sample counts, passes and failure certificates.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Result of checking one sample.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// The sample did not meet the hypotheses of the property.
    Vacuous,
    Fail(Value),
    /// Passed, with an observation worth recording.
    Finding(Value),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub samples: usize,
    pub passes: usize,
    pub vacuous: usize,
    pub failures: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<Value>,
    pub bounds: Value,
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(check: impl Into<String>, bounds: Value, seed: Option<u64>) -> Self {
        Report {
            check: check.into(),
            samples: 0,
            passes: 0,
            vacuous: 0,
            failures: Vec::new(),
            findings: Vec::new(),
            bounds,
            seed,
        }
    }

    /// Builds a report from per-sample outcomes listed in sample order.
    pub fn from_outcomes(
        check: impl Into<String>,
        outcomes: impl IntoIterator<Item = Outcome>,
        bounds: Value,
        seed: Option<u64>,
    ) -> Self {
        let mut r = Report::new(check, bounds, seed);
        for o in outcomes {
            r.record(o);
        }
        r
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.samples += 1;
        match outcome {
            Outcome::Pass => self.passes += 1,
            Outcome::Vacuous => self.vacuous += 1,
            Outcome::Fail(cert) => self.failures.push(cert),
            Outcome::Finding(note) => {
                self.passes += 1;
                self.findings.push(note);
            }
        }
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: Report) {
        self.samples += other.samples;
        self.passes += other.passes;
        self.vacuous += other.vacuous;
        self.failures.extend(other.failures);
        self.findings.extend(other.findings);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Number of samples that met the hypotheses.
    pub fn effective(&self) -> usize {
        self.samples - self.vacuous
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {}: {}/{} passed, {} vacuous, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.passes,
            self.samples,
            self.vacuous,
            self.failures.len()
        )
    }
}

/// A failure certificate embedding a scenario that reproduces it.
///
/// `category` is the `{"ambient", "predicate"}` description, `morphisms`
/// the named inputs, and `task` the single scenario task to replay.
pub fn certificate(reason: &str, category: &Value, morphisms: &[(String, Value)], task: Value) -> Value {
    let mut named = serde_json::Map::new();
    for (k, v) in morphisms {
        named.insert(k.clone(), v.clone());
    }
    let mut scenario = serde_json::json!({
        "schema": 1,
        "ambient": category["ambient"],
        "predicate": category["predicate"],
        "seed": 0,
        "morphisms": Value::Object(named.clone()),
        "tasks": [task],
    });
    if named.is_empty() {
        scenario.as_object_mut().expect("object").remove("morphisms");
    }
    serde_json::json!({
        "reason": reason,
        "morphisms": Value::Object(named),
        "scenario": scenario,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn counts_and_verdict() {
        let r = Report::from_outcomes(
            "demo",
            [Outcome::Pass, Outcome::Vacuous, Outcome::Fail(json!({"x": 1}))],
            json!({}),
            Some(3),
        );
        assert_eq!((r.samples, r.passes, r.vacuous), (3, 1, 1));
        assert!(!r.passed());
        assert_eq!(r.effective(), 2);
        assert!(r.summary().starts_with("FAIL demo"));
    }
}
