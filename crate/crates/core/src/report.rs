//! JSON report records. Reports carry no timing data so that equal seeds give
//! byte-identical output.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serde helper writing a complex number as `[re, im]`.
pub mod complex {
    use crate::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    /// Fixed parameters of the check (index ranges, M, N, ...).
    pub params: BTreeMap<String, serde_json::Value>,
    pub samples: usize,
    /// Draws abandoned after exhausting the redraw budget on poles.
    pub rejected: usize,
    pub max_rel_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, check: &str, tol: f64) -> Self {
        CheckRecord {
            suite: suite.into(),
            check: check.into(),
            params: BTreeMap::new(),
            samples: 0,
            rejected: 0,
            max_rel_residual: 0.0,
            tol,
            pass: true,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), v.into());
        self
    }

    /// Fold one residual in. NaN counts as a failure.
    pub fn observe(&mut self, r: f64) {
        self.samples += 1;
        if r.is_nan() || r > self.max_rel_residual {
            self.max_rel_residual = if r.is_nan() { f64::INFINITY } else { r };
        }
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.samples > 0 && self.max_rel_residual <= self.tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub artifact: String,
    pub version: String,
    pub config: BTreeMap<String, serde_json::Value>,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: BTreeMap<String, serde_json::Value>, records: Vec<CheckRecord>) -> Self {
        let pass = !records.is_empty() && records.iter().all(|r| r.pass);
        Report {
            artifact: "ellqg".into(),
            version: ARTIFACT_VERSION.into(),
            config,
            records,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
