//! Machine-readable verification reports (JSON and CSV).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ext::Ext;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// f64 that serializes non-finite values as strings.
mod num {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("+inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.as_str() {
                "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad number {t:?}"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    /// |lhs − rhs| ≤ tolerance
    Identity,
    /// lhs ≤ rhs up to tolerance
    Inequality,
    /// recorded, never fails
    Informational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    #[serde(with = "num")]
    pub lhs: f64,
    #[serde(with = "num")]
    pub rhs: f64,
    #[serde(with = "num")]
    pub slack: f64,
    #[serde(with = "num")]
    pub tolerance: f64,
    pub pass: bool,
    pub kind: CaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ext_f64(x: Ext) -> f64 {
    match x {
        Ext::Finite(v) => v,
        Ext::Infinite => f64::INFINITY,
    }
}

impl Case {
    pub fn identity(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let diff = if diff.is_nan() { f64::INFINITY } else { diff };
        Case {
            name: name.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            slack: -diff,
            tolerance,
            pass: diff <= tolerance,
            kind: CaseKind::Identity,
            note: None,
        }
    }

    /// lhs ≤ rhs with slack rhs − lhs ≥ −tolerance.
    pub fn le(name: impl Into<String>, lhs: Ext, rhs: Ext, tolerance: f64) -> Self {
        let (l, r) = (ext_f64(lhs), ext_f64(rhs));
        let slack = match (lhs, rhs) {
            (_, Ext::Infinite) => f64::INFINITY,
            (Ext::Infinite, Ext::Finite(_)) => f64::NEG_INFINITY,
            (Ext::Finite(a), Ext::Finite(b)) => b - a,
        };
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        Case {
            name: name.into(),
            params: BTreeMap::new(),
            lhs: l,
            rhs: r,
            slack,
            tolerance,
            pass: slack >= -tolerance,
            kind: CaseKind::Inequality,
            note: None,
        }
    }

    pub fn info(name: impl Into<String>, lhs: f64, rhs: f64, note: impl Into<String>) -> Self {
        Case {
            name: name.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            slack: rhs - lhs,
            tolerance: f64::INFINITY,
            pass: true,
            kind: CaseKind::Informational,
            note: Some(note.into()),
        }
    }

    /// A failed case carrying an error message instead of numbers.
    pub fn error(name: impl Into<String>, message: impl Into<String>) -> Self {
        Case {
            name: name.into(),
            params: BTreeMap::new(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NEG_INFINITY,
            tolerance: 0.0,
            pass: false,
            kind: CaseKind::Identity,
            note: Some(message.into()),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            cases: Vec::new(),
            seed,
            version: VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn push(&mut self, case: Case) {
        self.cases.push(case);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.cases.extend(other.cases);
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,case,param_json,lhs,rhs,slack,tolerance,pass\n");
        for c in &self.cases {
            let params = serde_json::to_string(&c.params).expect("params serialize");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_field(&self.suite),
                csv_field(&c.name),
                csv_field(&params),
                fmt17(c.lhs),
                fmt17(c.rhs),
                fmt17(c.slack),
                fmt17(c.tolerance),
                c.pass
            ));
        }
        out
    }
}

/// 17 significant digits; non-finite values spelled out.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "+inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(Case::identity("a", 1.0, 1.0 + 1e-13, 1e-12).pass);
        assert!(!Case::identity("a", 1.0, 1.1, 1e-12).pass);
        assert!(Case::le("b", Ext::Finite(1.0), Ext::Finite(1.0 - 1e-9), 1e-8).pass);
        assert!(!Case::le("b", Ext::Finite(1.0), Ext::Finite(0.9), 1e-8).pass);
        assert!(Case::le("c", Ext::Finite(1e9), Ext::Infinite, 0.0).pass);
        assert!(!Case::le("c", Ext::Infinite, Ext::Finite(1.0), 1.0).pass);
        assert!(!Case::identity("nan", f64::NAN, 0.0, 1.0).pass);
    }

    #[test]
    fn json_round_trip_and_csv() {
        let mut r = VerificationReport::new("unit", 3);
        r.push(Case::identity("x", 0.1, 0.1, 1e-12).param("n", 4));
        r.push(Case::le("y", Ext::Finite(0.5), Ext::Infinite, 1e-8).param("dims", "2,3"));
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "suite,case,param_json,lhs,rhs,slack,tolerance,pass");
        let row = lines.next().unwrap();
        assert!(row.starts_with("unit,x,\"{\"\"n\"\":4}\",1.0000000000000001e-1,"), "{row}");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
