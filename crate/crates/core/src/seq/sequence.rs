use serde::{Deserialize, Serialize};

use super::law::{ln_factorial, Growth, TailLaw};
use crate::error::{Error, Result};

/// Default truncation depth.
pub const DEFAULT_PMAX: usize = 200;

/// Relative tolerance when comparing stored values against a tail law.
pub const TAIL_TOL: f64 = 1e-9;

/// Tolerance for exact log-domain identities.
pub const EXACT_TOL: f64 = 1e-12;

/// A closed form that gives log M_p for every p >= `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tail {
    #[serde(flatten)]
    pub law: TailLaw,
    #[serde(default)]
    pub start: usize,
}

impl Tail {
    pub fn new(law: TailLaw) -> Self {
        Tail { law, start: 0 }
    }

    pub fn from(law: TailLaw, start: usize) -> Self {
        Tail { law, start }
    }
}

/// A weight sequence stored as L_p = log M_p for p = 0..=P, optionally
/// continued past P by a tail law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence")]
pub struct LogWeightSequence {
    label: String,
    log_values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<Tail>,
}

#[derive(Deserialize)]
struct RawSequence {
    #[serde(default)]
    label: String,
    log_values: Vec<f64>,
    #[serde(default)]
    tail: Option<Tail>,
}

impl TryFrom<RawSequence> for LogWeightSequence {
    type Error = Error;
    fn try_from(r: RawSequence) -> Result<Self> {
        LogWeightSequence::new(r.label, r.log_values, r.tail)
    }
}

/// μ_p = M_p / M_{p−1} (μ_0 = 1) and log m_p = log M_p − log p!.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedQuotients {
    pub mu: Vec<f64>,
    pub log_mu: Vec<f64>,
    pub m_log: Vec<f64>,
}

impl LogWeightSequence {
    pub fn new(label: impl Into<String>, log_values: Vec<f64>, tail: Option<Tail>) -> Result<Self> {
        if log_values.len() < 3 {
            return Err(Error::InvalidSequence(format!(
                "need log M_p for p = 0..P with P >= 2, got {} values",
                log_values.len()
            )));
        }
        if let Some(i) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence(format!("log M_{i} is not finite")));
        }
        if let Some(t) = &tail {
            t.law.validate()?;
            if t.start > log_values.len() {
                return Err(Error::InvalidSequence(format!(
                    "tail starts at {} beyond the stored prefix of length {}",
                    t.start,
                    log_values.len()
                )));
            }
            for (p, &v) in log_values.iter().enumerate().skip(t.start) {
                let w = t.law.log_value(p as u64);
                let deviation = (v - w).abs();
                if deviation > TAIL_TOL * v.abs().max(1.0) {
                    return Err(Error::TailMismatch { index: p, deviation });
                }
            }
        }
        Ok(LogWeightSequence {
            label: label.into(),
            log_values,
            tail,
        })
    }

    /// Sequence with no symbolic continuation.
    pub fn prefix_only(label: impl Into<String>, log_values: Vec<f64>) -> Result<Self> {
        Self::new(label, log_values, None)
    }

    /// Sequence given by a law at every index, materialized for p <= pmax.
    pub fn from_law(label: impl Into<String>, law: TailLaw, pmax: usize) -> Result<Self> {
        law.validate()?;
        let values = (0..=pmax.max(2)).map(|p| law.log_value(p as u64)).collect();
        Self::new(label, values, Some(Tail::new(law)))
    }

    /// M_p = p!^s.
    pub fn gevrey(s: f64, pmax: usize) -> Result<Self> {
        Self::from_law(format!("gevrey({s})"), TailLaw::gevrey(s), pmax)
    }

    /// M_p = p!^s a^p.
    pub fn factorial_power(s: f64, a: f64, pmax: usize) -> Result<Self> {
        Self::from_law(
            format!("factorial_power({s},{a})"),
            TailLaw::FactorialPower { s, a },
            pmax,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn law(&self) -> Option<&TailLaw> {
        self.tail.as_ref().map(|t| &t.law)
    }

    /// Largest stored index P.
    pub fn pmax(&self) -> usize {
        self.log_values.len() - 1
    }

    /// Drop the symbolic continuation.
    pub fn without_tail(&self) -> Self {
        LogWeightSequence {
            tail: None,
            ..self.clone()
        }
    }

    /// Keep only p <= pmax (and the tail).
    pub fn truncated(&self, pmax: usize) -> Result<Self> {
        let values = self.materialize(pmax).ok_or_else(|| Error::DomainExceeded {
            requested: pmax as f64,
            limit: self.pmax() as f64,
        })?;
        let tail = self.tail.clone().filter(|t| t.start <= values.len());
        Self::new(self.label.clone(), values, tail)
    }

    /// log M_p, if known.
    pub fn value_at(&self, p: usize) -> Option<f64> {
        if let Some(&v) = self.log_values.get(p) {
            return Some(v);
        }
        let t = self.tail.as_ref()?;
        (p >= t.start).then(|| t.law.log_value(p as u64))
    }

    /// log M_p for p = 0..=pmax, if known at every index.
    pub fn materialize(&self, pmax: usize) -> Option<Vec<f64>> {
        if pmax <= self.pmax() {
            return Some(self.log_values[..=pmax].to_vec());
        }
        self.tail.as_ref()?;
        (0..=pmax).map(|p| self.value_at(p)).collect()
    }

    /// Same sequence with the stored prefix extended to pmax.
    pub fn extended_to(&self, pmax: usize) -> Result<Self> {
        if pmax <= self.pmax() {
            return Ok(self.clone());
        }
        let values = self
            .materialize(pmax)
            .ok_or_else(|| Error::TailNotCertified(self.label.clone()))?;
        Ok(LogWeightSequence {
            label: self.label.clone(),
            log_values: values,
            tail: self.tail.clone(),
        })
    }

    /// First index from which every value is given by the tail law.
    pub fn tail_start(&self) -> Option<usize> {
        self.tail.as_ref().map(|t| t.start)
    }

    pub fn growth(&self) -> Option<Growth> {
        self.law().map(TailLaw::growth)
    }

    /// log μ_p for p >= 1, if known.
    pub fn log_quotient(&self, p: usize) -> Option<f64> {
        debug_assert!(p >= 1);
        if p < self.log_values.len() {
            return Some(self.log_values[p] - self.log_values[p - 1]);
        }
        let t = self.tail.as_ref()?;
        if p > t.start {
            Some(t.law.log_quotient(p as u64))
        } else {
            Some(self.value_at(p)? - self.value_at(p - 1)?)
        }
    }

    /// log (M_p)^{1/p} for p >= 1, if known.
    pub fn log_root(&self, p: usize) -> Option<f64> {
        Some(self.value_at(p)? / p as f64)
    }

    /// |L_0| <= 1e-12 and M_1 >= M_0.
    pub fn is_normalized(&self) -> bool {
        self.log_values[0].abs() <= EXACT_TOL && self.log_values[1] >= self.log_values[0] - EXACT_TOL
    }

    pub fn derive_quotients(&self) -> DerivedQuotients {
        let n = self.log_values.len();
        let mut log_mu = Vec::with_capacity(n);
        log_mu.push(0.0);
        for p in 1..n {
            log_mu.push(self.log_values[p] - self.log_values[p - 1]);
        }
        let mu = log_mu.iter().map(|v| v.exp()).collect();
        let m_log = self
            .log_values
            .iter()
            .enumerate()
            .map(|(p, v)| v - ln_factorial(p as f64))
            .collect();
        DerivedQuotients { mu, log_mu, m_log }
    }
}
