//! Equivalence dossier comparing a sequence class with its weight-function
//! class, or a weight function with its matrix Ω.

use serde::Serialize;

use super::matrix::WeightMatrix;
use crate::error::{Error, Result};
use crate::seq::conditions::{check_beta3, check_in_lc, check_moderate_growth};
use crate::seq::relations::relation_equivalent;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};
use crate::weight::conditions::{check_omega1, check_omega2, check_omega5, check_omega6, check_w0};
use crate::weight::function::{associated_function, sequence_from_weight, WeightFunction};
use crate::weight::relations::{relation_omega, OmegaRelation};

/// Derived-row parameters used by the dossier.
pub const REPORT_LS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
/// Largest Q searched for (β3) on prefix-only rows.
const BETA3_Q_MAX: usize = 8;

#[derive(Debug, Clone)]
pub enum ReportInput {
    Sequence(LogWeightSequence),
    Weight(WeightFunction),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub input: String,
    /// Conjunction of every assertion.
    pub status: Status,
    /// Every stated equivalence came out with matching sides.
    pub consistent: bool,
    pub verdicts: Vec<Verdict>,
}

/// Both sides decided and equal.
fn equivalence(name: &str, left: &Verdict, right: &Verdict) -> Verdict {
    let status = if left.status.is_decided() && right.status.is_decided() {
        Status::from_bool(left.status == right.status)
    } else {
        Status::Inconclusive
    };
    Verdict::new(name, status)
        .with_value("left", left.status.to_string())
        .with_value("right", right.status.to_string())
        .with_parts([left.clone(), right.clone()])
}

fn finish(input: String, verdicts: Vec<Verdict>) -> ComparisonReport {
    let status = Status::all(verdicts.iter().map(|v| v.status));
    let consistent = verdicts
        .iter()
        .filter(|v| v.condition.starts_with("equivalence"))
        .all(|v| v.is_holds());
    ComparisonReport {
        input,
        status,
        consistent,
        verdicts,
    }
}

fn sequence_report(n: &LogWeightSequence) -> Result<ComparisonReport> {
    let lc = check_in_lc(n);
    let beta3 = check_beta3(n, BETA3_Q_MAX)?;
    if !lc.is_holds() || !beta3.is_holds() {
        return Err(Error::ClassMembershipFailed(format!(
            "{}: in_LC {}, beta3 {}",
            n.label(),
            lc.status,
            beta3.status
        )));
    }
    let w = associated_function(n)?;
    let mut verdicts = vec![lc, beta3.clone(), check_moderate_growth(n)];
    let omega2 = check_omega2(&w);
    let omega5 = check_omega5(&w);
    for l in REPORT_LS {
        let nl = sequence_from_weight(&w, l, n.pmax())?;
        let tag = format!("[l={l}]");
        if l == 1.0 {
            let reach = n.pmax().min(nl.pmax());
            let dev = (0..=reach)
                .map(|p| (n.log_values()[p] - nl.log_values()[p]).abs())
                .fold(0.0, f64::max);
            verdicts.push(
                Verdict::new("reconstruction", Status::from_bool(dev <= 1e-9)).with("max_deviation", dev),
            );
        }
        verdicts.push(relation_equivalent(n, &nl).renamed(format!("approx{tag}")));
        verdicts.push(check_moderate_growth(&nl).renamed(format!("mg{tag}")));
        let wl = associated_function(&nl)?;
        verdicts.push(relation_omega(&w, &wl, OmegaRelation::Sim).renamed(format!("omega_sim{tag}")));
        verdicts.push(equivalence(&format!("equivalence_omega2{tag}"), &omega2, &check_omega2(&wl)));
        verdicts.push(equivalence(&format!("equivalence_omega5{tag}"), &omega5, &check_omega5(&wl)));
        verdicts.push(equivalence(
            &format!("equivalence_beta3{tag}"),
            &beta3,
            &check_beta3(&nl, BETA3_Q_MAX)?,
        ));
    }
    Ok(finish(n.label().to_string(), verdicts))
}

fn weight_report(w: &WeightFunction) -> Result<ComparisonReport> {
    let w0 = check_w0(w);
    let omega1 = check_omega1(w);
    if !w0.is_holds() || !omega1.is_holds() {
        return Err(Error::ClassMembershipFailed(format!(
            "{}: W0 {}, omega1 {}",
            w.label, w0.status, omega1.status
        )));
    }
    let omega6 = check_omega6(w);
    let m = WeightMatrix::omega(w, &REPORT_LS, 100)?;
    let rows = m.rows();
    let mut pairs = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            pairs.push(relation_equivalent(&a.seq, &b.seq).renamed(format!("approx[{}~{}]", a.label, b.label)));
        }
    }
    let approx = Verdict::conjunction("rows_pairwise_approx", pairs);
    let mg = Verdict::conjunction(
        "rows_mg",
        rows.iter()
            .map(|r| check_moderate_growth(&r.seq).renamed(format!("mg[{}]", r.label)))
            .collect(),
    );
    let consequences = Verdict::conjunction("approx_and_mg", vec![approx.clone(), mg.clone()]);
    let eq = equivalence("equivalence_omega6", &omega6, &consequences);
    Ok(finish(w.label.clone(), vec![w0, omega1, omega6, approx, mg, eq]))
}

pub fn comparison_report(input: &ReportInput) -> Result<ComparisonReport> {
    match input {
        ReportInput::Sequence(n) => sequence_report(n),
        ReportInput::Weight(w) => weight_report(w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gevrey_two_dossier() {
        let r = comparison_report(&ReportInput::Sequence(LogWeightSequence::gevrey(2.0, 200).unwrap())).unwrap();
        assert_eq!(r.status, Status::Holds, "{:#?}", r.verdicts);
        assert!(r.consistent);
    }

    #[test]
    fn factorial_dossier() {
        let r = comparison_report(&ReportInput::Sequence(LogWeightSequence::gevrey(1.0, 200).unwrap())).unwrap();
        assert_eq!(r.status, Status::Holds, "{:#?}", r.verdicts);
    }

    #[test]
    fn power_log_is_consistent_fails() {
        let r = comparison_report(&ReportInput::Weight(WeightFunction::power_log(2.0).unwrap())).unwrap();
        assert_eq!(r.status, Status::Fails);
        assert!(r.consistent, "{:#?}", r.verdicts);
        let approx = r.verdicts.iter().find(|v| v.condition == "rows_pairwise_approx").unwrap();
        assert!(approx.is_fails());
    }

    #[test]
    fn gevrey_weight_dossier() {
        let w = associated_function(&LogWeightSequence::gevrey(2.0, 200).unwrap()).unwrap();
        let r = comparison_report(&ReportInput::Weight(w)).unwrap();
        assert_eq!(r.status, Status::Holds, "{:#?}", r.verdicts);
    }

    #[test]
    fn membership_enforced() {
        let bounded = LogWeightSequence::factorial_power(0.0, 2.0, 50).unwrap();
        assert!(matches!(
            comparison_report(&ReportInput::Sequence(bounded)),
            Err(Error::ClassMembershipFailed(_))
        ));
    }
}
