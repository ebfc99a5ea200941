//! Three-valued results shared by every condition and relation tester.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    /// Conjunction: any `Fails` wins, then any `Inconclusive`.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Holds,
        }
    }

    /// Disjunction: any `Holds` wins, then any `Inconclusive`.
    pub fn or(self, other: Status) -> Status {
        match (self, other) {
            (Status::Holds, _) | (_, Status::Holds) => Status::Holds,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Fails,
        }
    }

    pub fn all<I: IntoIterator<Item = Status>>(items: I) -> Status {
        items.into_iter().fold(Status::Holds, Status::and)
    }

    pub fn any<I: IntoIterator<Item = Status>>(items: I) -> Status {
        items.into_iter().fold(Status::Fails, Status::or)
    }

    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn is_decided(self) -> bool {
        self != Status::Inconclusive
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Structured payload of constants, indices and pairings backing a verdict.
pub type Witness = BTreeMap<String, Value>;

/// JSON value for a float; infinities become the strings `"inf"` / `"-inf"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Verdict>,
}

impl Verdict {
    pub fn new(condition: impl Into<String>, status: Status) -> Self {
        Verdict {
            condition: condition.into(),
            status,
            witness: Witness::new(),
            reason: None,
            parts: Vec::new(),
        }
    }

    pub fn holds(condition: impl Into<String>) -> Self {
        Self::new(condition, Status::Holds)
    }

    pub fn fails(condition: impl Into<String>) -> Self {
        Self::new(condition, Status::Fails)
    }

    pub fn inconclusive(condition: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(condition, Status::Inconclusive).because(reason)
    }

    /// Attach a float witness entry.
    pub fn with(mut self, key: &str, x: f64) -> Self {
        self.witness.insert(key.to_string(), num(x));
        self
    }

    /// Attach an arbitrary JSON witness entry.
    pub fn with_value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.witness.insert(key.to_string(), v.into());
        self
    }

    pub fn because(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn with_part(mut self, part: Verdict) -> Self {
        self.parts.push(part);
        self
    }

    pub fn with_parts(mut self, parts: impl IntoIterator<Item = Verdict>) -> Self {
        self.parts.extend(parts);
        self
    }

    pub fn renamed(mut self, condition: impl Into<String>) -> Self {
        self.condition = condition.into();
        self
    }

    /// Conjunction of the given parts, nested under one name.
    pub fn conjunction(condition: impl Into<String>, parts: Vec<Verdict>) -> Self {
        let status = Status::all(parts.iter().map(|p| p.status));
        let n = parts.len();
        let mut v = Verdict::new(condition, status).with_value("parts", n as u64);
        v.parts = parts;
        v
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn witness_f64(&self, key: &str) -> Option<f64> {
        match self.witness.get(key)? {
            Value::Number(n) => n.as_f64(),
            Value::String(s) if s == "inf" => Some(f64::INFINITY),
            Value::String(s) if s == "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        }
    }

    /// Depth-first search for a named sub-verdict.
    pub fn find(&self, condition: &str) -> Option<&Verdict> {
        if self.condition == condition {
            return Some(self);
        }
        self.parts.iter().find_map(|p| p.find(condition))
    }

    /// Every decided verdict in the tree carries a witness.
    pub fn witnesses_complete(&self) -> bool {
        (!self.status.is_decided() || !self.witness.is_empty())
            && self.parts.iter().all(Verdict::witnesses_complete)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.status)?;
        if let Some(r) = &self.reason {
            write!(f, " ({r})")?;
        }
        Ok(())
    }
}
