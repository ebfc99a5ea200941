//! Relations between weight matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::conditions::{forall_exists, RowCache};
use super::matrix::WeightMatrix;
use crate::error::{Error, Result};
use crate::seq::relations::{relation_preceq, relation_triangle};
use crate::verdict::{Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixRelation {
    /// ∀x ∃y: M^x ≼ N^y.
    RoumieuPreceq,
    /// ∀y ∃x: M^x ≼ N^y.
    BeurlingPreceq,
    RoumieuApprox,
    BeurlingApprox,
    /// ∀x ∀y: M^x ◁ N^y.
    Triangle,
}

impl MatrixRelation {
    pub const ALL: [MatrixRelation; 5] = [
        MatrixRelation::RoumieuPreceq,
        MatrixRelation::BeurlingPreceq,
        MatrixRelation::RoumieuApprox,
        MatrixRelation::BeurlingApprox,
        MatrixRelation::Triangle,
    ];
}

impl fmt::Display for MatrixRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixRelation::RoumieuPreceq => "roumieu_preceq",
            MatrixRelation::BeurlingPreceq => "beurling_preceq",
            MatrixRelation::RoumieuApprox => "roumieu_approx",
            MatrixRelation::BeurlingApprox => "beurling_approx",
            MatrixRelation::Triangle => "triangle",
        })
    }
}

impl FromStr for MatrixRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixRelation::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown matrix relation '{s}'")))
    }
}

fn roumieu_preceq(m: &WeightMatrix, n: &WeightMatrix, name: &str) -> Verdict {
    let mut cache = RowCache::new(n);
    let mut parts = Vec::new();
    for r in m.rows() {
        let sub = forall_exists(
            name,
            &mut cache,
            &[(r.label.clone(), r.seq.clone())],
            |_| n.search_labels(r.label.x),
            relation_preceq,
        );
        parts.extend(sub.parts);
    }
    collect(name, parts)
}

fn beurling_preceq(m: &WeightMatrix, n: &WeightMatrix, name: &str) -> Verdict {
    let mut cache = RowCache::new(m);
    let mut parts = Vec::new();
    for r in n.rows() {
        let sub = forall_exists(
            name,
            &mut cache,
            &[(r.label.clone(), r.seq.clone())],
            |_| m.search_labels(r.label.x),
            |y, x| relation_preceq(x, y),
        );
        parts.extend(sub.parts);
    }
    collect(name, parts)
}

fn collect(name: &str, parts: Vec<Verdict>) -> Verdict {
    let status = Status::all(parts.iter().map(|p| p.status));
    let mut pairing = serde_json::Map::new();
    for p in &parts {
        if let Some(y) = p.witness.get("y") {
            pairing.insert(p.condition.trim_start_matches("x=").to_string(), y.clone());
        }
    }
    Verdict::new(name, status)
        .with_value("pairing", serde_json::Value::Object(pairing))
        .with_parts(parts)
}

pub fn relation_matrix(m: &WeightMatrix, n: &WeightMatrix, kind: MatrixRelation) -> Verdict {
    let name = kind.to_string();
    match kind {
        MatrixRelation::RoumieuPreceq => roumieu_preceq(m, n, &name),
        MatrixRelation::BeurlingPreceq => beurling_preceq(m, n, &name),
        MatrixRelation::RoumieuApprox => Verdict::conjunction(
            name,
            vec![
                roumieu_preceq(m, n, "roumieu_preceq"),
                roumieu_preceq(n, m, "roumieu_preceq_reverse"),
            ],
        ),
        MatrixRelation::BeurlingApprox => Verdict::conjunction(
            name,
            vec![
                beurling_preceq(m, n, "beurling_preceq"),
                beurling_preceq(n, m, "beurling_preceq_reverse"),
            ],
        ),
        MatrixRelation::Triangle => {
            let mut parts = Vec::new();
            for a in m.rows() {
                for b in n.rows() {
                    parts.push(
                        relation_triangle(&a.seq, &b.seq)
                            .renamed(format!("{}<{}", a.label, b.label)),
                    );
                }
            }
            Verdict::conjunction(name, parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::LogWeightSequence;
    use serde_json::json;

    fn gevrey(s: &[f64]) -> WeightMatrix {
        WeightMatrix::gevrey(s, 60).unwrap()
    }

    #[test]
    fn self_relations() {
        let g = gevrey(&[1.0, 2.0, 3.0]);
        for kind in [MatrixRelation::RoumieuApprox, MatrixRelation::BeurlingApprox] {
            let v = relation_matrix(&g, &g, kind);
            assert!(v.is_holds(), "{kind}: {v:#?}");
        }
    }

    #[test]
    fn shifted_labels() {
        let g = gevrey(&[1.0, 2.0, 3.0]);
        let h = gevrey(&[2.0, 3.0, 4.0]);
        let v = relation_matrix(&g, &h, MatrixRelation::RoumieuPreceq);
        assert!(v.is_holds());
        assert_eq!(v.witness["pairing"]["1"], json!("2"));
        let fixed_g = WeightMatrix::new("g", g.rows().iter().map(|r| (r.label.clone(), r.seq.clone())).collect()).unwrap();
        let fixed_h = WeightMatrix::new("h", h.rows().iter().map(|r| (r.label.clone(), r.seq.clone())).collect()).unwrap();
        assert!(relation_matrix(&fixed_h, &fixed_g, MatrixRelation::RoumieuPreceq).is_fails());
    }

    #[test]
    fn factorial_below_gevrey() {
        let p = WeightMatrix::constant(LogWeightSequence::gevrey(1.0, 60).unwrap()).unwrap();
        let g = gevrey(&[1.0, 2.0]);
        assert!(relation_matrix(&p, &g, MatrixRelation::Triangle).is_holds());
        assert!(relation_matrix(&g, &p, MatrixRelation::Triangle).is_fails());
        assert!("triangle".parse::<MatrixRelation>().is_ok());
    }
}
