//! Matrix-level growth conditions, resolved by search over row labels.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::matrix::{RowLabel, WeightMatrix};
use crate::error::{Error, Result};
use crate::seq::law::{mg_bounded, Growth, Limit, TailLaw};
use crate::seq::LogWeightSequence;
use crate::verdict::{num, Status, Verdict};
use crate::weight::conditions::GRID_MAX_EXP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Roumieu,
    Beurling,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Roumieu => "roumieu",
            Sense::Beurling => "beurling",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixCondition {
    Dc(Sense),
    Mg(Sense),
    L(Sense),
    Strict(Sense),
    Br(Sense),
    AnalyticRoumieu,
    H,
    AnalyticBeurling,
}

impl MatrixCondition {
    pub const ALL: [MatrixCondition; 13] = [
        MatrixCondition::Dc(Sense::Roumieu),
        MatrixCondition::Dc(Sense::Beurling),
        MatrixCondition::Mg(Sense::Roumieu),
        MatrixCondition::Mg(Sense::Beurling),
        MatrixCondition::L(Sense::Roumieu),
        MatrixCondition::L(Sense::Beurling),
        MatrixCondition::Strict(Sense::Roumieu),
        MatrixCondition::Strict(Sense::Beurling),
        MatrixCondition::Br(Sense::Roumieu),
        MatrixCondition::Br(Sense::Beurling),
        MatrixCondition::AnalyticRoumieu,
        MatrixCondition::H,
        MatrixCondition::AnalyticBeurling,
    ];
}

impl fmt::Display for MatrixCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixCondition::Dc(s) => write!(f, "dc_{s}"),
            MatrixCondition::Mg(s) => write!(f, "mg_{s}"),
            MatrixCondition::L(s) => write!(f, "L_{s}"),
            MatrixCondition::Strict(s) => write!(f, "strict_{s}"),
            MatrixCondition::Br(s) => write!(f, "BR_{s}"),
            MatrixCondition::AnalyticRoumieu => f.write_str("C_omega_roumieu"),
            MatrixCondition::H => f.write_str("H"),
            MatrixCondition::AnalyticBeurling => f.write_str("C_omega_beurling"),
        }
    }
}

impl FromStr for MatrixCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixCondition::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown matrix condition '{s}'")))
    }
}

/// Rows fetched (and generated) on demand, cached by label.
pub(crate) struct RowCache<'a> {
    matrix: &'a WeightMatrix,
    rows: HashMap<String, Option<LogWeightSequence>>,
}

impl<'a> RowCache<'a> {
    pub(crate) fn new(matrix: &'a WeightMatrix) -> Self {
        RowCache {
            matrix,
            rows: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, label: &RowLabel) -> Option<LogWeightSequence> {
        self.rows
            .entry(label.to_string())
            .or_insert_with(|| self.matrix.row(label).ok())
            .clone()
    }
}

/// lim (L^a_p − L^b_p)/p for the given growths.
pub(crate) fn limit(a: Option<Growth>, b: Option<Growth>) -> Limit {
    match (a, b) {
        (Some(a), Some(b)) => a.scaled_difference_limit(&b),
        _ => Limit::Unknown,
    }
}

pub(crate) fn limit_value(l: Limit) -> Value {
    match l {
        Limit::PlusInfinity => num(f64::INFINITY),
        Limit::MinusInfinity => num(f64::NEG_INFINITY),
        Limit::Finite(c) => num(c),
        Limit::Unknown => Value::String("unknown".into()),
    }
}

fn common(a: &LogWeightSequence, b: &LogWeightSequence) -> usize {
    a.pmax().min(b.pmax())
}

/// max over j of (L^a_{j+1} − L^b_j)/(j+1).
fn dc_prefix(a: &LogWeightSequence, b: &LogWeightSequence) -> f64 {
    let (va, vb) = (a.log_values(), b.log_values());
    (0..common(a, b))
        .map(|j| (va[j + 1] - vb[j]) / (j + 1) as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// max over 1 <= j+k <= P of (L^x_{j+k} − L^y_j − L^y_k)/(j+k).
fn mg_prefix(x: &LogWeightSequence, y: &LogWeightSequence) -> f64 {
    let (vx, vy) = (x.log_values(), y.log_values());
    let mut best = f64::NEG_INFINITY;
    for s in 1..=common(x, y) {
        for j in 0..=s / 2 {
            best = best.max((vx[s] - vy[j] - vy[s - j]) / s as f64);
        }
    }
    best
}

/// max over k of (k log c + L^a_k − L^b_k).
fn domination_prefix(a: &LogWeightSequence, b: &LogWeightSequence, log_c: f64) -> f64 {
    let (va, vb) = (a.log_values(), b.log_values());
    (0..=common(a, b))
        .map(|k| k as f64 * log_c + va[k] - vb[k])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// sup over k >= 1 of (L^a_k − L^b_k)/k.
fn root_sup(a: &LogWeightSequence, b: &LogWeightSequence) -> f64 {
    let (va, vb) = (a.log_values(), b.log_values());
    (1..=common(a, b))
        .map(|k| (va[k] - vb[k]) / k as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn status_of_limit(l: Limit, holds: impl Fn(Limit) -> bool) -> Status {
    match l {
        Limit::Unknown => Status::Inconclusive,
        l => Status::from_bool(holds(l)),
    }
}

/// Resolve ∀x ∃y for a pair test. Each per-x part names the first
/// witness found; the top-level witness is the pairing map.
pub(crate) fn forall_exists(
    name: &str,
    cache: &mut RowCache<'_>,
    xs: &[(RowLabel, LogWeightSequence)],
    candidates: impl Fn(&RowLabel) -> Vec<RowLabel>,
    mut pair: impl FnMut(&LogWeightSequence, &LogWeightSequence) -> Verdict,
) -> Verdict {
    let mut parts = Vec::new();
    let mut pairing = Map::new();
    for (x, row_x) in xs {
        let mut tried = Vec::new();
        let mut found = None;
        for y in candidates(x) {
            let Some(row_y) = cache.get(&y) else { continue };
            let v = pair(row_x, &row_y).with_value("y", y.to_string());
            if v.is_holds() {
                found = Some(v);
                break;
            }
            tried.push(v);
        }
        let part = match found {
            Some(v) => {
                pairing.insert(x.to_string(), json!(v.witness["y"].clone()));
                let mut p = Verdict::holds(format!("x={x}"));
                p.witness = v.witness.clone();
                p
            }
            None => {
                let status = Status::any(tried.iter().map(|v| v.status));
                let p = Verdict::new(format!("x={x}"), status)
                    .with_value("candidates", tried.len() as u64)
                    .with_parts(tried);
                if status == Status::Fails {
                    p
                } else {
                    p.because("no candidate decided")
                }
            }
        };
        parts.push(part);
    }
    let status = Status::all(parts.iter().map(|p| p.status));
    Verdict::new(name, status)
        .with_value("pairing", Value::Object(pairing))
        .with_parts(parts)
}

fn growth_vs_factorial(seq: &LogWeightSequence) -> Limit {
    limit(seq.growth(), Some(TailLaw::gevrey(1.0).growth()))
}

/// lim of the root difference against p! with a prefix witness.
fn analytic_part(label: &RowLabel, seq: &LogWeightSequence, holds: impl Fn(Limit) -> bool) -> Verdict {
    let lim = growth_vs_factorial(seq);
    let pf = LogWeightSequence::gevrey(1.0, seq.pmax()).expect("factorial row");
    Verdict::new(format!("x={label}"), status_of_limit(lim, holds))
        .with_value("log_root_limit_vs_factorial", limit_value(lim))
        .with("prefix_min_root", (-root_sup(&pf, seq)).exp())
}

pub fn check_matrix_condition(m: &WeightMatrix, condition: MatrixCondition) -> Verdict {
    let name = condition.to_string();
    let xs: Vec<(RowLabel, LogWeightSequence)> =
        m.rows().iter().map(|r| (r.label.clone(), r.seq.clone())).collect();
    let mut cache = RowCache::new(m);
    let cands = |x: &RowLabel| m.candidates(&[x]);
    let grid_limit = GRID_MAX_EXP as f64 * std::f64::consts::LN_2;
    let v = match condition {
        MatrixCondition::Dc(sense) => forall_exists(&name, &mut cache, &xs, cands, |x, y| {
            let (a, b) = match sense {
                Sense::Roumieu => (x, y),
                Sense::Beurling => (y, x),
            };
            let lim = limit(a.growth().map(|g| g.shifted()), b.growth());
            Verdict::new("pair", status_of_limit(lim, |l| l != Limit::PlusInfinity))
                .with("c", dc_prefix(a, b).exp())
                .with_value("log_root_limit", limit_value(lim))
        }),
        MatrixCondition::Mg(sense) => forall_exists(&name, &mut cache, &xs, cands, |x, y| {
            // with ordered rows one y serves both y_1 and y_2 (resp. x_1, x_2)
            let (big, small) = match sense {
                Sense::Roumieu => (x, y),
                Sense::Beurling => (y, x),
            };
            let status = match (big.growth(), small.growth()) {
                (Some(g), Some(h)) => match mg_bounded(&g, &h, &h) {
                    Some(b) => Status::from_bool(b),
                    None => Status::Inconclusive,
                },
                _ => Status::Inconclusive,
            };
            Verdict::new("pair", status).with("c", mg_prefix(big, small).exp())
        }),
        MatrixCondition::L(sense) => forall_exists(&name, &mut cache, &xs, cands, |x, y| {
            let (a, b) = match sense {
                Sense::Roumieu => (x, y),
                Sense::Beurling => (y, x),
            };
            let lim = limit(a.growth(), b.growth());
            let status = match lim {
                Limit::MinusInfinity => Status::Holds,
                Limit::PlusInfinity => Status::Fails,
                // admits every C below exp(-d); the grid cannot refute beyond 2^20
                Limit::Finite(d) if -d >= grid_limit => Status::Inconclusive,
                Limit::Finite(_) => Status::Fails,
                Limit::Unknown => Status::Inconclusive,
            };
            Verdict::new("pair", status)
                .with("c", 2.0)
                .with("d", domination_prefix(a, b, std::f64::consts::LN_2).exp())
                .with_value("log_root_limit", limit_value(lim))
        }),
        MatrixCondition::Strict(sense) => forall_exists(&name, &mut cache, &xs, cands, |x, y| {
            let (a, b) = match sense {
                Sense::Roumieu => (y, x),
                Sense::Beurling => (x, y),
            };
            let lim = limit(a.growth(), b.growth());
            Verdict::new("pair", status_of_limit(lim, |l| l == Limit::PlusInfinity))
                .with("prefix_sup", root_sup(a, b).exp())
                .with_value("log_root_limit", limit_value(lim))
        }),
        MatrixCondition::Br(sense) => forall_exists(&name, &mut cache, &xs, cands, |x, y| {
            let (a, b) = match sense {
                Sense::Roumieu => (x, y),
                Sense::Beurling => (y, x),
            };
            let lim = limit(a.growth(), b.growth());
            Verdict::new("pair", status_of_limit(lim, |l| l == Limit::MinusInfinity))
                .with("prefix_sup", root_sup(a, b).exp())
                .with_value("log_root_limit", limit_value(lim))
        }),
        MatrixCondition::AnalyticRoumieu => {
            let parts: Vec<Verdict> = m
                .rows()
                .iter()
                .map(|r| analytic_part(&r.label, &r.seq, |l| l != Limit::MinusInfinity))
                .collect();
            let status = Status::any(parts.iter().map(|p| p.status));
            let mut v = Verdict::new(&name, status).with_parts(parts.clone());
            if let Some(p) = parts.iter().find(|p| p.is_holds()) {
                v = v.with_value("x", p.condition.trim_start_matches("x=").to_string());
            } else {
                v = v.with_value("rows", parts.len() as u64);
            }
            v
        }
        MatrixCondition::H | MatrixCondition::AnalyticBeurling => {
            let beurling = condition == MatrixCondition::AnalyticBeurling;
            let parts: Vec<Verdict> = m
                .rows()
                .iter()
                .map(|r| {
                    analytic_part(&r.label, &r.seq, |l| {
                        if beurling {
                            l == Limit::PlusInfinity
                        } else {
                            l != Limit::MinusInfinity
                        }
                    })
                })
                .collect();
            Verdict::conjunction(&name, parts)
        }
    };
    if m.kind.m.is_fails() {
        return Verdict::inconclusive(name, "not a weight matrix").with_part(m.kind.m.clone());
    }
    v
}

/// Every condition in a fixed order.
pub fn check_all_matrix_conditions(m: &WeightMatrix) -> Vec<Verdict> {
    MatrixCondition::ALL
        .iter()
        .map(|&c| check_matrix_condition(m, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gevrey() -> WeightMatrix {
        WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 60).unwrap()
    }

    fn constant() -> WeightMatrix {
        WeightMatrix::constant(LogWeightSequence::gevrey(1.0, 60).unwrap()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in MatrixCondition::ALL {
            assert_eq!(c.to_string().parse::<MatrixCondition>().unwrap(), c);
        }
        assert!("nope".parse::<MatrixCondition>().is_err());
    }

    #[test]
    fn gevrey_matrix_conditions() {
        let g = gevrey();
        for c in MatrixCondition::ALL {
            let v = check_matrix_condition(&g, c);
            assert!(v.is_holds(), "{c}: {v:#?}");
        }
        let mg = check_matrix_condition(&g, MatrixCondition::Mg(Sense::Roumieu));
        assert_eq!(mg.witness["pairing"]["1"], json!("1"));
        let l = check_matrix_condition(&g, MatrixCondition::L(Sense::Roumieu));
        assert_eq!(l.witness["pairing"]["1"], json!("2"));
        let br = check_matrix_condition(&g, MatrixCondition::Br(Sense::Beurling));
        assert_eq!(br.witness["pairing"]["1"], json!("0.25"));
    }

    #[test]
    fn constant_matrix() {
        let c = constant();
        assert!(check_matrix_condition(&c, MatrixCondition::Strict(Sense::Roumieu)).is_fails());
        assert!(check_matrix_condition(&c, MatrixCondition::L(Sense::Roumieu)).is_fails());
        assert!(check_matrix_condition(&c, MatrixCondition::Br(Sense::Roumieu)).is_fails());
        assert!(check_matrix_condition(&c, MatrixCondition::Mg(Sense::Roumieu)).is_holds());
        assert!(check_matrix_condition(&c, MatrixCondition::AnalyticRoumieu).is_holds());
        assert!(check_matrix_condition(&c, MatrixCondition::AnalyticBeurling).is_fails());
    }

    #[test]
    fn prefix_rows_are_inconclusive() {
        let g = LogWeightSequence::gevrey(1.0, 40).unwrap().without_tail();
        let m = WeightMatrix::constant(g).unwrap();
        let v = check_matrix_condition(&m, MatrixCondition::Mg(Sense::Roumieu));
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness["pairing"], json!({}));
    }

    #[test]
    fn witness_replays() {
        let g = gevrey();
        let v = check_matrix_condition(&g, MatrixCondition::L(Sense::Roumieu));
        for part in &v.parts {
            let x: f64 = part.condition.trim_start_matches("x=").parse().unwrap();
            let y: f64 = part.witness["y"].as_str().unwrap().parse().unwrap();
            let d = part.witness_f64("d").unwrap().ln();
            let (rx, ry) = (g.row(&RowLabel::base(x)).unwrap(), g.row(&RowLabel::base(y)).unwrap());
            for k in 0..=60 {
                let lhs = k as f64 * std::f64::consts::LN_2 + rx.log_values()[k];
                assert!(lhs <= d + ry.log_values()[k] + 1e-9);
            }
        }
    }
}
