//! Non-quasianalyticity of sequences and matrices.

use crate::error::{Error, Result};
use crate::matrix::{Sense, WeightMatrix};
use crate::seq::conditions::{check_nq, check_root_series};
use crate::seq::law::{Lead, Limit, TailLaw};
use crate::seq::regularize::{increasing_root_minorant, lc_minorant};
use crate::seq::sequence::EXACT_TOL;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};

fn copy_sums(v: Verdict, from: &Verdict, prefix: &str) -> Verdict {
    ["sum_low", "sum_high", "partial_sum"]
        .iter()
        .fold(v, |acc, key| match from.witness.get(*key) {
            Some(x) => acc.with_value(&format!("{prefix}_{key}"), x.clone()),
            None => acc,
        })
}

/// (nq) decided twice: on the log-convex minorant via Σ 1/μ^lc_p, and on
/// the increasing-root minorant via Σ 1/(M^I_p)^{1/p}. The two must agree.
pub fn class_nq_verdict(seq: &LogWeightSequence) -> Result<Verdict> {
    if seq.log_values()[0].abs() > EXACT_TOL {
        return Err(Error::Precondition(format!("{}: M_0 must be 1", seq.label())));
    }
    let hull = check_nq(&lc_minorant(seq)?).renamed("hull_route");
    let root = check_root_series(&increasing_root_minorant(seq)?).renamed("root_route");
    let status = match (hull.status, root.status) {
        (a, b) if a.is_decided() && b.is_decided() && a != b => {
            return Err(Error::RoutesDisagree {
                hull_route: a.to_string(),
                root_route: b.to_string(),
            })
        }
        (a, _) if a.is_decided() => a,
        (_, b) => b,
    };
    let v = Verdict::new("class_nq", status)
        .with_value("hull_route", hull.status.to_string())
        .with_value("root_route", root.status.to_string());
    let v = copy_sums(copy_sums(v, &hull, "hull"), &root, "root");
    Ok(v.with_parts([hull, root]))
}

/// Roumieu: some row is non-quasianalytic. Beurling: every row is.
pub fn matrix_nq_verdict(m: &WeightMatrix, sense: Sense) -> Result<Verdict> {
    let mut parts = Vec::new();
    for r in m.rows() {
        parts.push(class_nq_verdict(&r.seq)?.renamed(format!("class_nq[{}]", r.label)));
    }
    let statuses = parts.iter().map(|p| p.status);
    let status = match sense {
        Sense::Roumieu => Status::any(statuses),
        Sense::Beurling => Status::all(statuses),
    };
    let mut v = Verdict::new(format!("matrix_nq_{sense}"), status).with_value("rows", parts.len() as u64);
    let pick = match sense {
        Sense::Roumieu => parts.iter().find(|p| p.is_holds()),
        Sense::Beurling => parts.iter().find(|p| p.is_fails()),
    };
    if let Some(p) = pick {
        let key = if sense == Sense::Roumieu { "x0" } else { "failing_row" };
        let label = p.condition.trim_start_matches("class_nq[").trim_end_matches(']');
        v = v.with_value(key, label.to_string());
    }
    Ok(v.with_parts(parts))
}

/// p · (M^I_p)^{-1/p} → 0, together with the equivalence
/// lim (m_p)^{1/p} = ∞ ⟺ lim (M_p)^{1/p}/p = ∞.
pub fn small_terms_diagnostic(seq: &LogWeightSequence) -> Result<Verdict> {
    let nq = class_nq_verdict(seq)?;
    if !nq.is_holds() {
        return Err(Error::Precondition(format!(
            "{} is not certified non-quasianalytic ({})",
            seq.label(),
            nq.status
        )));
    }
    let inc = increasing_root_minorant(seq)?;
    let v = inc.log_values();
    let pmax = inc.pmax();
    let term = |p: usize| (p as f64).ln() - v[p] / p as f64;
    let half = (pmax / 2).max(1);
    let decreasing = (half..pmax).all(|p| term(p + 1) <= term(p) + 1e-12);
    let prefix = Verdict::new("prefix_decreasing", Status::from_bool(decreasing))
        .with("p_a_p_at_half", term(half).exp())
        .with("p_a_p_at_end", term(pmax).exp());

    let growth = inc.growth();
    let (tail, root_over_p) = match growth.map(|g| g.lead) {
        Some(Lead::Entropy { coef }) => {
            let unbounded = coef > 1.0 + 1e-12;
            (Status::from_bool(unbounded), Status::from_bool(unbounded))
        }
        Some(Lead::Power { .. }) => (Status::Holds, Status::Holds),
        Some(Lead::Bounded) => (Status::Fails, Status::Fails),
        None => (Status::Inconclusive, Status::Inconclusive),
    };
    let tail = Verdict::new("tail_to_zero", tail).with("p_a_p_at_end", term(pmax).exp());
    let m_root = match growth.map(|g| g.scaled_difference_limit(&TailLaw::gevrey(1.0).growth())) {
        Some(Limit::PlusInfinity) => Status::Holds,
        Some(Limit::Unknown) | None => Status::Inconclusive,
        Some(_) => Status::Fails,
    };
    let eq_status = if m_root.is_decided() && root_over_p.is_decided() {
        Status::from_bool(m_root == root_over_p)
    } else {
        Status::Inconclusive
    };
    let equivalence = Verdict::new("root_equivalence", eq_status)
        .with_value("m_root_unbounded", m_root.to_string())
        .with_value("root_over_p_unbounded", root_over_p.to_string());
    Ok(Verdict::conjunction("small_terms", vec![prefix, tail, equivalence]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gev(s: f64) -> LogWeightSequence {
        LogWeightSequence::gevrey(s, 200).unwrap()
    }

    #[test]
    fn gevrey_routes() {
        let v = class_nq_verdict(&gev(2.0)).unwrap();
        assert!(v.is_holds());
        assert!(v.witness_f64("hull_sum_high").unwrap().is_finite());
        assert!(v.witness_f64("root_sum_high").unwrap().is_finite());
        assert!(class_nq_verdict(&gev(1.0)).unwrap().is_fails());
        assert!(class_nq_verdict(&gev(1.5)).unwrap().is_holds());
    }

    #[test]
    fn perturbed_row_keeps_verdict() {
        let g = gev(2.0);
        let mut values = g.log_values().to_vec();
        values[5] += 3.0;
        let bumped = LogWeightSequence::new(
            "bumped",
            values,
            Some(crate::seq::sequence::Tail::from(g.law().unwrap().clone(), 6)),
        ).unwrap();
        assert_eq!(class_nq_verdict(&bumped).unwrap().status, Status::Holds);
    }

    #[test]
    fn matrix_verdicts() {
        let pair = WeightMatrix::new(
            "pair",
            vec![
                (crate::matrix::RowLabel::base(1.0), gev(1.0)),
                (crate::matrix::RowLabel::base(2.0), gev(2.0)),
            ],
        )
        .unwrap();
        let r = matrix_nq_verdict(&pair, Sense::Roumieu).unwrap();
        assert!(r.is_holds());
        assert_eq!(r.witness["x0"], "2");
        assert!(matrix_nq_verdict(&pair, Sense::Beurling).unwrap().is_fails());
        let g = WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 100).unwrap();
        assert!(matrix_nq_verdict(&g, Sense::Roumieu).unwrap().is_holds());
        assert!(matrix_nq_verdict(&g, Sense::Beurling).unwrap().is_holds());
        let p = WeightMatrix::constant(gev(1.0)).unwrap();
        assert!(matrix_nq_verdict(&p, Sense::Roumieu).unwrap().is_fails());
    }

    #[test]
    fn small_terms() {
        assert!(small_terms_diagnostic(&gev(2.0)).unwrap().is_holds());
        let v = small_terms_diagnostic(&gev(1.5)).unwrap();
        assert!(v.is_holds(), "{v:#?}");
        assert!(matches!(small_terms_diagnostic(&gev(1.0)), Err(Error::Precondition(_))));
    }
}
