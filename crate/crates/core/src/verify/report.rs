use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::backend::BackendKind;

/// Witnesses kept per report; the smallest tuples win.
pub const WITNESS_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkipCount {
    pub reason: String,
    pub count: u64,
}

/// A failing tuple with both sides and their difference.
///
/// Characters are recorded by exponent, field elements by code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub tuple: BTreeMap<String, u64>,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
    pub difference: serde_json::Value,
    pub deviation: f64,
}

/// Outcomes at arguments that are reported but not asserted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub label: String,
    pub tested: u64,
    pub agreed: u64,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub field: String,
    pub backend: BackendKind,
    pub tested: u64,
    pub passed: u64,
    pub skipped: Vec<SkipCount>,
    pub failed: u64,
    pub witnesses: Vec<Witness>,
    /// Wall time; zero when timing is disabled.
    pub millis: u64,
    #[serde(default = "yes")]
    pub applicable: bool,
    /// Largest `|lhs - rhs|` over passing tuples.
    #[serde(default)]
    pub max_deviation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
    /// Per-case detail for sweeps that are not indexed by field tuples.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<serde_json::Value>,
}

fn yes() -> bool {
    true
}

impl IdentityReport {
    pub fn skipped_total(&self) -> u64 {
        self.skipped.iter().map(|s| s.count).sum()
    }

    pub fn skipped_for(&self, reason: &str) -> u64 {
        self.skipped.iter().filter(|s| s.reason == reason).map(|s| s.count).sum()
    }

    pub fn is_success(&self) -> bool {
        self.failed == 0
    }

    pub fn observation(&self, label: &str) -> Option<&Observation> {
        self.observations.iter().find(|o| o.label == label)
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ObservationTally {
    tested: u64,
    agreed: u64,
    max_deviation: f64,
}

/// Partial result of a sweep; merging is associative and keeps witnesses
/// sorted, so the final report does not depend on how work was split.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tally {
    pub passed: u64,
    pub failed: u64,
    pub max_deviation: f64,
    pub skipped: BTreeMap<&'static str, u64>,
    pub witnesses: Vec<Witness>,
    pub observations: BTreeMap<&'static str, ObservationTally>,
}

impl Tally {
    pub fn pass(&mut self, deviation: f64) {
        self.passed += 1;
        self.max_deviation = self.max_deviation.max(deviation);
    }

    pub fn fail(&mut self, witness: Witness) {
        self.failed += 1;
        insert_witness(&mut self.witnesses, witness);
    }

    pub fn skip(&mut self, reason: &'static str) {
        *self.skipped.entry(reason).or_default() += 1;
    }

    pub fn observe(&mut self, label: &'static str, agreed: bool, deviation: f64) {
        let o = self.observations.entry(label).or_default();
        o.tested += 1;
        o.agreed += agreed as u64;
        o.max_deviation = o.max_deviation.max(deviation);
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.passed += other.passed;
        self.failed += other.failed;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        for (k, v) in other.skipped {
            *self.skipped.entry(k).or_default() += v;
        }
        for w in other.witnesses {
            insert_witness(&mut self.witnesses, w);
        }
        for (k, v) in other.observations {
            let o = self.observations.entry(k).or_default();
            o.tested += v.tested;
            o.agreed += v.agreed;
            o.max_deviation = o.max_deviation.max(v.max_deviation);
        }
        self
    }

    pub fn into_report(
        self,
        identity: &str,
        field: String,
        backend: BackendKind,
        millis: u64,
    ) -> IdentityReport {
        IdentityReport {
            identity: identity.to_string(),
            field,
            backend,
            tested: self.passed + self.failed,
            passed: self.passed,
            skipped: self
                .skipped
                .into_iter()
                .map(|(reason, count)| SkipCount { reason: reason.to_string(), count })
                .collect(),
            failed: self.failed,
            witnesses: self.witnesses,
            millis,
            applicable: true,
            max_deviation: self.max_deviation,
            observations: self
                .observations
                .into_iter()
                .map(|(label, o)| Observation {
                    label: label.to_string(),
                    tested: o.tested,
                    agreed: o.agreed,
                    max_deviation: o.max_deviation,
                })
                .collect(),
            entries: Vec::new(),
        }
    }
}

fn tuple_key(w: &Witness) -> Vec<(&str, u64)> {
    w.tuple.iter().map(|(k, &v)| (k.as_str(), v)).collect()
}

fn insert_witness(list: &mut Vec<Witness>, w: Witness) {
    let key = tuple_key(&w);
    let at = list.partition_point(|x| tuple_key(x) < key);
    if at < WITNESS_CAP {
        list.insert(at, w);
        list.truncate(WITNESS_CAP);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(a: u64, x: u64) -> Witness {
        Witness {
            tuple: [("A".to_string(), a), ("x".to_string(), x)].into_iter().collect(),
            lhs: serde_json::Value::Null,
            rhs: serde_json::Value::Null,
            difference: serde_json::Value::Null,
            deviation: 1.0,
        }
    }

    #[test]
    fn merge_is_order_independent() {
        let mut parts = Vec::new();
        for a in 0..10u64 {
            let mut t = Tally::default();
            t.pass(0.5 * a as f64);
            t.skip(if a % 2 == 0 { "even" } else { "odd" });
            for x in 0..10 {
                t.fail(witness(a, x));
            }
            t.observe("edge", a % 3 == 0, a as f64);
            parts.push(t);
        }
        let forward = parts.iter().cloned().fold(Tally::default(), Tally::merge);
        let backward = parts.iter().rev().cloned().fold(Tally::default(), Tally::merge);
        let a = forward.into_report("id", "5".into(), BackendKind::Exact, 0);
        let b = backward.into_report("id", "5".into(), BackendKind::Exact, 0);
        assert_eq!(a, b);
        assert_eq!(a.failed, 100);
        assert_eq!(a.tested, 110);
        assert_eq!(a.witnesses.len(), WITNESS_CAP);
        assert_eq!(a.witnesses[0].tuple["A"], 0);
        assert_eq!(a.witnesses[WITNESS_CAP - 1].tuple["A"], 6);
        assert_eq!(a.skipped_total(), 10);
        assert_eq!(a.observation("edge").unwrap().agreed, 4);
    }

    #[test]
    fn report_round_trips() {
        let mut t = Tally::default();
        t.pass(0.0);
        t.fail(witness(1, 2));
        t.skip("x = 0");
        let r = t.into_report("eq42", "5".into(), BackendKind::Float, 12);
        let text = serde_json::to_string(&r).unwrap();
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["identity", "field", "backend", "tested", "passed", "skipped", "failed", "witnesses", "millis"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["skipped"][0]["reason"], "x = 0");
        assert_eq!(v["backend"], "float");
    }
}
