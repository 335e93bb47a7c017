//! Executable checks: each one turns an inequality or identity into a
//! reproducible pass / fail / inconclusive verdict with witness data.

pub mod conformal;
pub mod controllability;
pub mod distribution;
pub mod good_lambda;
pub mod lp_bound;
pub mod thresholds;
pub mod two_sided;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One named data point backing a verdict (worst grid cell, offending
/// sample, binding resource limit, ...).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub data: BTreeMap<String, f64>,
}

/// A tabular byproduct of a check, written out as CSV by the front end.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub params: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub seed: u64,
    #[serde(default)]
    pub tables: Vec<Table>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        CheckReport {
            name: name.into(),
            verdict: Verdict::Pass,
            params: BTreeMap::new(),
            metrics: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            seed,
            tables: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn metric(&mut self, key: &str, value: f64) -> &mut Self {
        self.metrics.insert(key.into(), value);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Downgrade the verdict (pass < inconclusive < fail never upgrades).
    pub fn demote(&mut self, to: Verdict) {
        let rank = |v: Verdict| match v {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
        };
        if rank(to) > rank(self.verdict) {
            self.verdict = to;
        }
    }

    pub fn fail_with(&mut self, label: impl Into<String>, data: BTreeMap<String, f64>) {
        self.demote(Verdict::Fail);
        self.witnesses.push(Witness {
            label: label.into(),
            data,
        });
    }

    pub fn inconclusive_with(&mut self, label: impl Into<String>, data: BTreeMap<String, f64>) {
        self.demote(Verdict::Inconclusive);
        self.witnesses.push(Witness {
            label: label.into(),
            data,
        });
    }
}

/// Convenience constructor for witness maps.
pub fn wdata<const N: usize>(entries: [(&str, f64); N]) -> BTreeMap<String, f64> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}
