//! Scenarios: a category, named inputs and a list of tasks, run into a
//! deterministic report.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "ambient": "fgab",
//!   "predicate": "torsion-free",
//!   "seed": 7,
//!   "bounds": {"rank": 3, "entry": 3, "samples": 500, "chain_depth": 8},
//!   "morphisms": {"two": {"source": {"generators": 1}, "target": {"generators": 1}, "matrix": [[2]]}},
//!   "tasks": [{"op": "factor", "morphism": "two"}]
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abcat::{PresentedMorphism, PresentedObject};
use crate::complexes::{lh_cohomology_full, verify_two_descriptions, BoundedComplex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freyd::{famous_diagram_chase, membership, torsion_decomposition, FreydClass, FreydObject};
use crate::heart::{
    check_effaceable_percolating, check_percolating, check_percolating_instance, verify_cohomology_coherence,
    verify_cone_bookkeeping, verify_effaceable_characterization, verify_embedding_properties,
    verify_heart_equivalence, verify_hull_sandwich, verify_localization_agreement, verify_mon_vs_hmon,
    verify_torsion_pair, weak_isomorphisms, HeartModel, Subclass,
};
use crate::intlin::{Q, Ring, Z};
use crate::monloc::{hull_membership, localized_hom, HullClass, MonObject};
use crate::regular::{check_axiom, check_subobject_closed, run_axiom, Ambient, Axiom, AxiomSample, Predicate, RegularCategory};
use crate::report::{Outcome, Report};
use crate::sample::Bounds;

pub const SCHEMA: u64 = 1;

/// Task operations that draw random samples and so need a seed.
const RANDOMIZED: &[&str] = &[
    "check-axioms",
    "localize-check",
    "percolate-check",
    "heart-suite",
    "cohomology-suite",
    "torsion-suite",
];

/// A parsed scenario, with its named inputs still in JSON form until the
/// ring is known.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub ambient: Ambient,
    pub predicate: Predicate,
    pub seed: Option<u64>,
    pub bounds: Bounds,
    pub objects: BTreeMap<String, Value>,
    pub morphisms: BTreeMap<String, Value>,
    pub complexes: BTreeMap<String, Value>,
    pub tasks: Vec<Value>,
}

fn predicate_from(v: &Value) -> Result<Predicate> {
    match v {
        Value::String(s) => Predicate::parse(s),
        Value::Object(m) => {
            let name = m.get("name").and_then(Value::as_str).ok_or_else(|| Error::Parse("predicate needs a name".into()))?;
            match m.get("parameter") {
                None => Predicate::parse(name),
                Some(Value::Number(n)) => Predicate::parse(&format!("{name}:{n}")),
                Some(Value::String(s)) => Predicate::parse(&format!("{name}:{s}")),
                Some(other) => Err(Error::Parse(format!("bad predicate parameter {other}"))),
            }
        }
        other => Err(Error::Parse(format!("bad predicate {other}"))),
    }
}

fn named(value: &Value, key: &str) -> Result<BTreeMap<String, Value>> {
    match value.get(key) {
        None => Ok(BTreeMap::new()),
        Some(Value::Object(m)) => Ok(m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
        Some(_) => Err(Error::Parse(format!("\"{key}\" must be a table of named entries"))),
    }
}

impl Scenario {
    pub fn from_value(value: &Value) -> Result<Self> {
        let schema = value.get("schema").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing \"schema\"".into()))?;
        if schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {schema}")));
        }
        let ambient = Ambient::parse(value.get("ambient").and_then(Value::as_str).unwrap_or("fgab"))?;
        let predicate = predicate_from(value.get("predicate").unwrap_or(&json!("all")))?;
        let seed = match value.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| Error::Parse("seed must be a nonnegative integer".into()))?),
        };
        let bounds = match value.get("bounds") {
            None => Bounds::default(),
            Some(b) => serde_json::from_value(b.clone()).map_err(|e| Error::Parse(format!("bad bounds: {e}")))?,
        };
        let tasks = match value.get("tasks") {
            None => Vec::new(),
            Some(Value::Array(t)) => t.clone(),
            Some(_) => return Err(Error::Parse("\"tasks\" must be a list".into())),
        };
        let sc = Scenario {
            ambient,
            predicate,
            seed,
            bounds,
            objects: named(value, "objects")?,
            morphisms: named(value, "morphisms")?,
            complexes: named(value, "complexes")?,
            tasks,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Checks that tasks are well formed and their references resolve.
    fn validate(&self) -> Result<()> {
        for (i, t) in self.tasks.iter().enumerate() {
            let op = t.get("op").and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("task {i} has no op")))?;
            if RANDOMIZED.contains(&op) && self.seed.is_none() {
                return Err(Error::Parse(format!("task {i} ({op}) is randomized and needs a seed")));
            }
            for key in ["morphism", "x", "y", "f", "g", "beta", "alpha"] {
                if let Some(name) = t.get(key).and_then(Value::as_str) {
                    self.require_morphism(name)?;
                }
            }
            if let Some(list) = t.get("morphisms").and_then(Value::as_array) {
                for name in list {
                    self.require_morphism(name.as_str().ok_or_else(|| Error::Parse("morphism names are strings".into()))?)?;
                }
            }
            if let Some(name) = t.get("complex").and_then(Value::as_str) {
                if !self.complexes.contains_key(name) {
                    return Err(Error::Parse(format!("unknown complex {name}")));
                }
            }
        }
        Ok(())
    }

    fn require_morphism(&self, name: &str) -> Result<()> {
        if self.morphisms.contains_key(name) {
            Ok(())
        } else {
            Err(Error::Parse(format!("unknown morphism {name}")))
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Runs every task in order. Task-level failures land in the report;
    /// malformed inputs and invariant breaches are returned as errors.
    pub fn run(&self, exec: Execution) -> Result<ScenarioReport> {
        match self.ambient {
            Ambient::VecQ => Runner::<Q>::new(self)?.run(exec),
            _ => Runner::<Z>::new(self)?.run(exec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskReport {
    pub op: String,
    pub passed: bool,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub output: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub schema: u64,
    pub category: Value,
    pub seed: Option<u64>,
    pub bounds: Value,
    pub passed: bool,
    pub tasks: Vec<TaskReport>,
}

impl ScenarioReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict} {} / {}", self.category["ambient"], self.category["predicate"]);
        for t in &self.tasks {
            let _ = writeln!(out, "{} {}", if t.passed { "PASS" } else { "FAIL" }, t.op);
            for r in &t.reports {
                let _ = writeln!(out, "  {}", r.summary());
                for f in r.failures.iter().take(3) {
                    let reason = f.get("reason").and_then(Value::as_str).unwrap_or("failure");
                    let _ = writeln!(out, "    {reason}");
                }
            }
            if let Some(e) = &t.error {
                let _ = writeln!(out, "  error: {e}");
            }
        }
        out
    }
}

struct Runner<'a, R> {
    sc: &'a Scenario,
    cat: RegularCategory<R>,
    morphisms: BTreeMap<String, PresentedMorphism<R>>,
    complexes: BTreeMap<String, BoundedComplex<R>>,
}

fn str_field<'v>(t: &'v Value, key: &str) -> Result<&'v str> {
    t.get(key).and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("task needs \"{key}\"")))
}

fn usize_field(t: &Value, key: &str, default: usize) -> usize {
    t.get(key).and_then(Value::as_u64).map_or(default, |v| v as usize)
}

impl<'a, R: Ring> Runner<'a, R> {
    fn new(sc: &'a Scenario) -> Result<Self> {
        let cat = RegularCategory::new(sc.ambient, sc.predicate.clone())?;
        let mut morphisms = BTreeMap::new();
        for (k, v) in &sc.morphisms {
            let m = PresentedMorphism::from_json(v).map_err(|e| Error::Parse(format!("morphism {k}: {e}")))?;
            morphisms.insert(k.clone(), m);
        }
        for (k, v) in &sc.objects {
            // an object stands for its identity morphism
            let x = PresentedObject::from_json(v).map_err(|e| Error::Parse(format!("object {k}: {e}")))?;
            morphisms.entry(k.clone()).or_insert_with(|| PresentedMorphism::identity(&x));
        }
        let mut complexes = BTreeMap::new();
        for (k, v) in &sc.complexes {
            let c = BoundedComplex::from_json(v).map_err(|e| Error::Parse(format!("complex {k}: {e}")))?;
            complexes.insert(k.clone(), c);
        }
        Ok(Runner { sc, cat, morphisms, complexes })
    }

    fn run(&self, exec: Execution) -> Result<ScenarioReport> {
        let results = exec.map(self.sc.tasks.len(), |i| self.task(&self.sc.tasks[i], exec));
        let mut tasks = Vec::new();
        for (t, r) in self.sc.tasks.iter().zip(results) {
            let op = t["op"].as_str().unwrap_or_default().to_string();
            tasks.push(match r {
                Ok(tr) => tr,
                Err(Error::Invariant(e)) => return Err(Error::Invariant(format!("{op}: {e}"))),
                Err(Error::Parse(e)) => return Err(Error::Parse(format!("{op}: {e}"))),
                Err(e) => TaskReport { op, passed: false, reports: Vec::new(), output: Value::Null, error: Some(e.to_string()) },
            });
        }
        Ok(ScenarioReport {
            schema: SCHEMA,
            category: self.cat.describe(),
            seed: self.sc.seed,
            bounds: self.sc.bounds.to_json(),
            passed: tasks.iter().all(|t| t.passed),
            tasks,
        })
    }

    fn morphism(&self, t: &Value, key: &str) -> Result<&PresentedMorphism<R>> {
        let name = str_field(t, key)?;
        self.morphisms.get(name).ok_or_else(|| Error::Parse(format!("unknown morphism {name}")))
    }

    fn morphism_list(&self, t: &Value) -> Result<Vec<PresentedMorphism<R>>> {
        let names = t.get("morphisms").and_then(Value::as_array).ok_or_else(|| Error::Parse("task needs \"morphisms\"".into()))?;
        names
            .iter()
            .map(|n| {
                let n = n.as_str().unwrap_or_default();
                self.morphisms.get(n).cloned().ok_or_else(|| Error::Parse(format!("unknown morphism {n}")))
            })
            .collect()
    }

    fn bounds(&self, t: &Value) -> Bounds {
        let mut b = self.sc.bounds;
        b.samples = usize_field(t, "samples", b.samples);
        b.chain_depth = usize_field(t, "chain_depth", b.chain_depth);
        b
    }

    fn seed(&self) -> u64 {
        self.sc.seed.unwrap_or(0)
    }

    fn task(&self, t: &Value, exec: Execution) -> Result<TaskReport> {
        let op = str_field(t, "op")?;
        let cat = &self.cat;
        let done = |reports: Vec<Report>, output: Value| {
            let passed = reports.iter().all(Report::passed);
            Ok(TaskReport { op: op.to_string(), passed, reports, output, error: None })
        };
        let single = |name: &str, outcome: Outcome, output: Value| {
            let mut r = Report::new(name, Value::Null, None);
            r.record(outcome);
            done(vec![r], output)
        };
        match op {
            "check-axioms" => {
                let axioms: Vec<Axiom> = match t.get("axioms").and_then(Value::as_array) {
                    Some(list) => list.iter().map(|a| Axiom::parse(a.as_str().unwrap_or_default())).collect::<Result<_>>()?,
                    None => Axiom::ALL.to_vec(),
                };
                let mut reports = Vec::new();
                for a in axioms {
                    reports.push(run_axiom(cat, a, self.bounds(t), self.seed(), exec)?);
                }
                done(reports, Value::Null)
            }
            "check-axiom-instance" => {
                let axiom = Axiom::parse(str_field(t, "axiom")?)?;
                let sample = AxiomSample::from_morphisms(axiom, self.morphism_list(t)?)?;
                done(vec![check_axiom(cat, axiom, &[sample], exec)?], Value::Null)
            }
            "subobject-closed" => {
                let r = check_subobject_closed(cat, usize_field(t, "rank", 2), usize_field(t, "max_factor", 8) as i64, exec);
                done(vec![r], Value::Null)
            }
            "factor" => {
                let f = self.morphism(t, "morphism")?;
                let fac = match t.get("kind").and_then(Value::as_str).unwrap_or("deflation-mono") {
                    "deflation-mono" => cat.deflation_mono_factorization(f)?,
                    "cokernel-mono" => cat.cokernel_mono_factorization(f)?,
                    other => return Err(Error::Parse(format!("unknown factorization {other}"))),
                };
                let ok = fac.mono.compose(&fac.deflation).equals(f);
                let out = json!({ "deflation": fac.deflation.to_json(), "mono": fac.mono.to_json(), "middle": fac.middle().to_string() });
                single("factor", if ok { Outcome::Pass } else { Outcome::Fail(json!({"reason": "factors do not compose to the map"})) }, out)
            }
            "cohomology" => {
                let name = str_field(t, "complex")?;
                let c = &self.complexes[name];
                let n = t.get("degree").and_then(Value::as_i64).ok_or_else(|| Error::Parse("cohomology needs \"degree\"".into()))?;
                let h = lh_cohomology_full(c, n);
                let ok = verify_two_descriptions(cat, c, n)?;
                let out = json!({ "cohomology": h.two_term.to_json(), "shadow": h.two_term.shadow().object.to_string() });
                single("cohomology:two-descriptions", if ok { Outcome::Pass } else { Outcome::Fail(json!({"reason": "representatives disagree"})) }, out)
            }
            "heart-hom" => {
                let x = MonObject::new(self.morphism(t, "x")?.clone())?;
                let y = MonObject::new(self.morphism(t, "y")?.clone())?;
                let h = localized_hom(cat, &x, &y)?;
                let out = json!({
                    "group": h.group().to_string(),
                    "presentation": h.group().to_json(),
                    "roofs": h.roofs.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                });
                single("heart-hom", Outcome::Pass, out)
            }
            "torsion-split" => {
                let x = FreydObject::in_category(cat, self.morphism(t, "morphism")?.clone())?;
                let d = torsion_decomposition(cat, &x)?;
                let out = json!({ "torsion": d.torsion.to_json(), "torsion_free": d.torsion_free.to_json() });
                single("torsion-split", if d.is_exact() { Outcome::Pass } else { Outcome::Fail(json!({"reason": "not exact"})) }, out)
            }
            "membership" => {
                let x = FreydObject::in_category(cat, self.morphism(t, "morphism")?.clone())?;
                let class = FreydClass::parse(str_field(t, "class")?)?;
                let m = membership(cat, &x, class, self.bounds(t).chain_depth)?;
                let out = json!({ "class": class.name(), "result": m.label(), "witness": m.found().cloned() });
                single("membership", Outcome::Pass, out)
            }
            "chase" => {
                let ch = famous_diagram_chase(
                    self.morphism(t, "f")?,
                    self.morphism(t, "g")?,
                    self.morphism(t, "beta")?,
                    self.morphism(t, "alpha")?,
                )?;
                let ok = ch.verify();
                single("chase", if ok { Outcome::Pass } else { Outcome::Fail(json!({"reason": "sequence is not exact"})) }, ch.to_json())
            }
            "hull-classify" => {
                let x = MonObject::new(self.morphism(t, "morphism")?.clone())?;
                let h = hull_membership(cat, &x, self.bounds(t).chain_depth)?;
                let chain = match &h {
                    HullClass::InHull(c) => Value::Array(c.iter().map(|m| m.to_json()).collect()),
                    _ => Value::Null,
                };
                single("hull-classify", Outcome::Pass, json!({ "class": h.label(), "chain": chain }))
            }
            "localize-check" => {
                let b = self.bounds(t);
                done(
                    vec![
                        verify_localization_agreement(cat, b, self.seed(), exec)?,
                        verify_mon_vs_hmon(cat, b, self.seed(), exec)?,
                    ],
                    Value::Null,
                )
            }
            "percolate-check" => {
                let sub = str_field(t, "subclass")?;
                let b = self.bounds(t);
                let reports = if sub == "effaceable" {
                    check_effaceable_percolating(cat, b, self.seed(), exec)?
                } else {
                    check_percolating(cat, &Subclass::parse(sub)?, b, self.seed(), exec)?
                };
                done(reports, Value::Null)
            }
            "percolate-instance" => {
                let sub = Subclass::parse(str_field(t, "subclass")?)?;
                let outcome = check_percolating_instance(cat, &sub, str_field(t, "check")?, &self.morphism_list(t)?)?;
                single("percolate-instance", outcome, Value::Null)
            }
            "weak-iso" => {
                let sub = Subclass::parse(str_field(t, "subclass")?)?;
                let v = weak_isomorphisms(cat, &sub, self.morphism(t, "morphism")?)?;
                single("weak-iso", Outcome::Pass, json!({ "inverted": v }))
            }
            "heart-suite" => {
                let model = HeartModel::new(cat.clone())?;
                let b = self.bounds(t);
                let max_factor = t.get("max_factor").and_then(Value::as_i64).unwrap_or(12);
                let mut reports = verify_heart_equivalence(&model, b, max_factor, self.seed(), exec)?;
                reports.push(verify_embedding_properties(&model, b, self.seed(), exec)?);
                reports.push(verify_hull_sandwich(&model, b, self.seed(), exec)?);
                done(reports, Value::Null)
            }
            "cohomology-suite" => {
                let b = self.bounds(t);
                let mut reports = verify_cohomology_coherence(cat, b, self.seed(), exec)?;
                reports.push(verify_cone_bookkeeping(cat, b, self.seed(), exec)?);
                done(reports, Value::Null)
            }
            "torsion-suite" => {
                let b = self.bounds(t);
                let mut reports = verify_torsion_pair(cat, b, self.seed(), exec)?;
                reports.push(verify_effaceable_characterization(cat, b, self.seed(), exec)?);
                done(reports, Value::Null)
            }
            other => Err(Error::Parse(format!("unknown task op {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(k: i64) -> Value {
        json!({ "source": {"generators": 1}, "target": {"generators": 1}, "matrix": [[k]] })
    }

    #[test]
    fn empty_scenario_passes() {
        let sc = Scenario::from_value(&json!({ "schema": 1, "ambient": "fgab", "predicate": "all", "tasks": [] })).unwrap();
        let r = sc.run(Execution::Sequential).unwrap();
        assert!(r.passed && r.tasks.is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(Scenario::from_value(&json!({ "schema": 2 })).is_err());
        let missing = json!({ "schema": 1, "tasks": [{"op": "factor", "morphism": "nope"}] });
        assert!(matches!(Scenario::from_value(&missing), Err(Error::Parse(_))));
        let unseeded = json!({ "schema": 1, "tasks": [{"op": "check-axioms"}] });
        assert!(matches!(Scenario::from_value(&unseeded), Err(Error::Parse(_))));
    }

    #[test]
    fn negative_control_fails_with_certificate() {
        let sc = Scenario::from_value(&json!({
            "schema": 1, "ambient": "fgab", "predicate": "free-or-Z4", "seed": 1,
            "tasks": [{"op": "subobject-closed", "rank": 1, "max_factor": 4}],
        }))
        .unwrap();
        let r = sc.run(Execution::Sequential).unwrap();
        assert!(!r.passed);
        let cert = &r.tasks[0].reports[0].failures[0];
        assert_eq!(cert["subobject"], "Z/2");
        assert_eq!(cert["object"], "Z/4");
        // the embedded scenario reproduces the failure on its own
        let replay = Scenario::from_value(&cert["scenario"]).unwrap().run(Execution::Sequential).unwrap();
        assert!(!replay.passed);
    }

    #[test]
    fn single_operations() {
        let sc = Scenario::from_value(&json!({
            "schema": 1, "ambient": "fgab", "predicate": "torsion-exponent:2",
            "morphisms": { "two": mul(2), "four": mul(4) },
            "complexes": { "c": [
                {"degree": -1, "object": {"generators": 1}, "differential": [[2]]},
                {"degree": 0, "object": {"generators": 1}},
            ] },
            "tasks": [
                {"op": "factor", "morphism": "two"},
                {"op": "hull-classify", "morphism": "two"},
                {"op": "hull-classify", "morphism": "four"},
                {"op": "heart-hom", "x": "two", "y": "four"},
                {"op": "torsion-split", "morphism": "four"},
                {"op": "cohomology", "complex": "c", "degree": 0},
            ],
        }))
        .unwrap();
        let r = sc.run(Execution::Sequential).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.tasks[1].output["class"], "in_E");
        assert_eq!(r.tasks[2].output["class"], "in_hull");
        assert_eq!(r.tasks[3].output["group"], "Z/2");
        assert_eq!(r.tasks[5].output["shadow"], "Z/2");
    }
}
