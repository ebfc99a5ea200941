//! Report envelopes, deterministic JSON and the exit-code contract.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fourier::{domain, lemmas, norms, spectral};
use crate::seq::sequence::{EXACT_TOL, TAIL_TOL};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every float is written with 17 significant digits.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

/// Compact JSON with fixed float formatting; map keys keep their
/// serialization order, so equal inputs give byte-identical output.
pub fn to_json(value: &impl Serialize) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// Tolerances that decide verdicts anywhere in the library.
pub fn tolerances() -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("exact_tol", EXACT_TOL),
        ("tail_tol", TAIL_TOL),
        ("identity_tol", crate::matrix::chain::IDENTITY_TOL),
        ("spectral_noise_rel", spectral::NOISE_REL),
        ("spectral_reliability", spectral::RELIABILITY),
        ("fourier_bracket_rel", norms::BRACKET_REL),
        ("lemma53_d_max", lemmas::D_MAX),
        ("power_law_residual", lemmas::POWER_RESIDUAL),
        ("grid_points", domain::DEFAULT_POINTS as f64),
        ("grid_span_factor", domain::SPAN_FACTOR),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub tolerances: BTreeMap<&'static str, f64>,
    /// holds / fails / inconclusive, or partial for truncated constructions.
    pub status: String,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, config: Value, status: impl Into<String>, result: T) -> Self {
        Report {
            tool: "wcalc",
            version: VERSION,
            command: command.into(),
            config,
            tolerances: tolerances(),
            status: status.into(),
            result,
        }
    }
}

impl Error {
    /// 2 parse, 3 precondition, 4 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::RoutesDisagree { .. } | Error::Consistency(_) => 4,
            _ => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Verdict;

    #[test]
    fn fixed_digits() {
        let v = Verdict::holds("nq").with("sum_low", 1.5).with_value("n", 3u64);
        let s = to_json(&v).unwrap();
        assert!(s.contains("\"sum_low\":1.5000000000000000e0"), "{s}");
        assert!(s.contains("\"n\":3"));
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(to_json(&0.1f64).unwrap(), "1.0000000000000001e-1");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::Precondition("x".into()).exit_code(), 3);
        let e = Error::RoutesDisagree {
            hull_route: "holds".into(),
            root_route: "fails".into(),
        };
        assert_eq!(e.exit_code(), 4);
    }
}
