//! A single non-quasianalytic sequence L with N ◁ L ◁ M.
//!
//! P is the minorant of M from the recursion. The interpolant Q is the
//! termwise maximum over a finite schedule of pairs (x, σ(x)) of the log-mean
//! of N^x and M^{σ(x)}. Q is only a candidate: N ◁ Q ◁ M is checked before
//! it is used, and L = (max{P^lc, Q})^lc is checked again afterwards.

use serde::Serialize;

use super::minorant::{construct_minorant, MinorantTrace};
use super::verdicts::class_nq_verdict;
use crate::error::{Error, Result};
use crate::matrix::{relation_matrix, MatrixRelation, WeightMatrix};
use crate::seq::conditions::check_log_convex;
use crate::seq::law::{Limit, TailLaw};
use crate::seq::regularize::lc_minorant;
use crate::seq::sequence::Tail;
use crate::seq::LogWeightSequence;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich {
    #[serde(rename = "L")]
    pub l: LogWeightSequence,
    #[serde(rename = "Q")]
    pub interpolant: LogWeightSequence,
    /// Name of the schedule that produced a verified Q.
    pub schedule: String,
    pub minorant: MinorantTrace,
    /// log_convex, class_nq, N ◁ L and L ◁ M, each replayed on L.
    pub checks: Vec<Verdict>,
}

/// Pairs of (row of N, row of M) by index.
type Schedule = Vec<(usize, usize)>;

fn schedules(n_rows: usize, m_rows: usize) -> Vec<(&'static str, Schedule)> {
    let diagonal = (0..n_rows).map(|i| (i, i.min(m_rows - 1))).collect();
    let bottom = (0..n_rows).map(|i| (i, 0)).collect();
    vec![("diagonal", diagonal), ("bottom_row", bottom)]
}

/// The law among `laws` that is eventually largest, if the tails decide it.
fn dominant_law(laws: &[TailLaw]) -> Option<TailLaw> {
    'outer: for cand in laws {
        let g = cand.growth();
        for other in laws {
            match g.scaled_difference_limit(&other.growth()) {
                Limit::PlusInfinity => {}
                Limit::Finite(d) if d >= 0.0 => {}
                _ if other == cand => {}
                _ => continue 'outer,
            }
        }
        return Some(cand.clone());
    }
    None
}

fn interpolant(
    n_rows: &[LogWeightSequence],
    m: &WeightMatrix,
    schedule: &[(usize, usize)],
    pmax: usize,
) -> Result<LogWeightSequence> {
    let mut values = vec![f64::NEG_INFINITY; pmax + 1];
    let mut laws = Vec::new();
    for &(i, j) in schedule {
        let a = n_rows[i].materialize(pmax).ok_or(Error::DomainExceeded {
            requested: pmax as f64,
            limit: n_rows[i].pmax() as f64,
        })?;
        let b = m.rows()[j].seq.materialize(pmax).ok_or(Error::DomainExceeded {
            requested: pmax as f64,
            limit: m.rows()[j].seq.pmax() as f64,
        })?;
        for (k, v) in values.iter_mut().enumerate() {
            *v = v.max(0.5 * (a[k] + b[k]));
        }
        if let (Some(x), Some(y)) = (n_rows[i].law(), m.rows()[j].seq.law()) {
            laws.push(TailLaw::mean(x.clone(), y.clone()));
        }
    }
    let tail = if laws.len() == schedule.len() {
        dominant_law(&laws).map(|law| Tail::from(law, pmax + 1))
    } else {
        None
    };
    LogWeightSequence::new("Q", values, tail)
}

/// Replay N ◁ S ◁ M with S as a one-row matrix.
fn between(n: &WeightMatrix, s: &LogWeightSequence, m: &WeightMatrix) -> Result<(Verdict, Verdict)> {
    let single = WeightMatrix::constant(s.clone())?;
    let lower = relation_matrix(n, &single, MatrixRelation::Triangle).renamed("N_triangle_L");
    let upper = relation_matrix(&single, m, MatrixRelation::Triangle).renamed("L_triangle_M");
    Ok((lower, upper))
}

pub fn sandwich_construct(n: &WeightMatrix, m: &WeightMatrix) -> Result<Sandwich> {
    let tri = relation_matrix(n, m, MatrixRelation::Triangle);
    if !tri.is_holds() {
        return Err(Error::Precondition(format!("N ◁ M is {}", tri.status)));
    }
    for r in m.rows() {
        if !class_nq_verdict(&r.seq)?.is_holds() {
            return Err(Error::Precondition(format!("row {} of M is not nq", r.label)));
        }
    }
    let minorant = construct_minorant(m)?;
    let n_rows: Vec<LogWeightSequence> = n
        .rows()
        .iter()
        .map(|r| lc_minorant(&r.seq))
        .collect::<Result<_>>()?;
    let n_lc = WeightMatrix::new(
        n.name.clone(),
        n.rows().iter().map(|r| r.label.clone()).zip(n_rows.iter().cloned()).collect(),
    )?;
    let pmax = n_rows
        .iter()
        .map(LogWeightSequence::pmax)
        .chain(m.rows().iter().map(|r| r.seq.pmax()))
        .chain([minorant.n.pmax()])
        .min()
        .unwrap_or(0);
    let p_lc = lc_minorant(&minorant.n)?;

    let mut failures = Vec::new();
    for (name, schedule) in schedules(n_rows.len(), m.rows().len()) {
        let q = interpolant(&n_rows, m, &schedule, pmax)?;
        let (lower, upper) = between(&n_lc, &q, m)?;
        if !(lower.is_holds() && upper.is_holds()) {
            failures.push(format!("{name}: N◁Q {}, Q◁M {}", lower.status, upper.status));
            continue;
        }
        let q_values = q.log_values();
        let joined: Vec<f64> = (0..=pmax).map(|k| p_lc.log_values()[k].max(q_values[k])).collect();
        let l = lc_minorant(&LogWeightSequence::new("L", joined, q.tail().cloned())?)?;
        let (lower, upper) = between(&n_lc, &l, m)?;
        let checks = vec![check_log_convex(&l), class_nq_verdict(&l)?, lower, upper];
        if !checks.iter().all(Verdict::is_holds) {
            let summary: Vec<String> = checks.iter().map(|v| format!("{} {}", v.condition, v.status)).collect();
            failures.push(format!("{name}: L checks {}", summary.join(", ")));
            continue;
        }
        return Ok(Sandwich {
            l,
            interpolant: q,
            schedule: name.to_string(),
            minorant,
            checks,
        });
    }
    Err(Error::InterpolantUnverified(failures.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gevrey_sandwich() {
        let n = WeightMatrix::gevrey(&[0.1], 400).unwrap();
        let m = WeightMatrix::gevrey(&[1.0, 0.5, 1.0 / 3.0], 400).unwrap();
        let s = sandwich_construct(&n, &m).unwrap();
        assert!(s.checks.iter().all(Verdict::is_holds), "{:#?}", s.checks);
        assert_eq!(s.l.log_values()[0], 0.0);
        let lc = check_log_convex(&s.l);
        assert!(lc.is_holds());
    }

    #[test]
    fn equal_rows_rejected() {
        let m = WeightMatrix::gevrey(&[1.0], 100).unwrap();
        assert!(matches!(sandwich_construct(&m, &m), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_convex_lower_row_is_regularized() {
        let g = LogWeightSequence::gevrey(1.1, 400).unwrap();
        let mut values = g.log_values().to_vec();
        values[3] += 2.0;
        let bumped = LogWeightSequence::new("bumped", values, Some(Tail::from(g.law().unwrap().clone(), 4))).unwrap();
        let n = WeightMatrix::constant(bumped).unwrap();
        let m = WeightMatrix::gevrey(&[1.0, 0.5, 1.0 / 3.0], 400).unwrap();
        assert!(sandwich_construct(&n, &m).is_ok());
    }
}
