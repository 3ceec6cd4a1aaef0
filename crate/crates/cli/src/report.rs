use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Empirical,
    Diagnostic,
}

/// A numeric result tagged with its certification status.
#[derive(Clone, Debug, PartialEq)]
pub struct Valued {
    pub value: Value,
    pub status: Status,
}

impl Serialize for Valued {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("value", &self.value)?;
        m.serialize_entry("status", &self.status)?;
        m.end()
    }
}

/// JSON has no infinities; non-finite values become the strings `inf`, `-inf`, `nan`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn certified(x: f64) -> Valued {
    Valued {
        value: number(x),
        status: Status::Certified,
    }
}

pub fn empirical(x: f64) -> Valued {
    Valued {
        value: number(x),
        status: Status::Empirical,
    }
}

pub fn diagnostic(x: f64) -> Valued {
    Valued {
        value: number(x),
        status: Status::Diagnostic,
    }
}

pub fn exact_count(n: usize) -> Valued {
    Valued {
        value: Value::from(n),
        status: Status::Certified,
    }
}

pub fn diagnostic_count(n: usize) -> Valued {
    Valued {
        value: Value::from(n),
        status: Status::Diagnostic,
    }
}

pub fn with_status(x: f64, status: Status) -> Valued {
    Valued {
        value: number(x),
        status,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub version: &'static str,
    pub payload: Value,
    /// Kept apart from the payload so reports of identical runs differ only here.
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
