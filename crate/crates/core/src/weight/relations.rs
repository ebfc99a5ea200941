//! O/o relations between weight functions and the self-tests tying them to
//! sequence relations.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::conditions::{check_omega1, check_omega2, check_omega5, check_w0};
use super::function::{associated_function, WeightFunction};
use crate::error::{Error, Result};
use crate::seq::conditions::{check_in_lc, check_moderate_growth};
use crate::seq::law::{Limit, TailLaw};
use crate::seq::relations::relation_preceq;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaRelation {
    /// σ ≼ τ: τ = O(σ).
    Preceq,
    /// σ ∼ τ: both directions.
    Sim,
    /// σ ◁ τ: τ = o(σ).
    Triangle,
}

impl OmegaRelation {
    fn name(self) -> &'static str {
        match self {
            OmegaRelation::Preceq => "omega_preceq",
            OmegaRelation::Sim => "omega_sim",
            OmegaRelation::Triangle => "omega_triangle",
        }
    }
}

/// Upper end of the ratio grid in s = log t.
const RATIO_SPAN: f64 = 30.0;
const RATIO_POINTS: usize = 300;

/// (min, max) of τ/σ on the shared grid, s in [1, top].
pub fn ratio_range(sigma: &WeightFunction, tau: &WeightFunction) -> (f64, f64) {
    let top = sigma.valid_to.min(tau.valid_to).min(RATIO_SPAN).max(1.0);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for i in 0..RATIO_POINTS {
        let s = 1.0 + (top - 1.0) * i as f64 / (RATIO_POINTS - 1) as f64;
        let a = sigma.phi_at(s);
        if a > 0.0 {
            let r = tau.phi_at(s) / a;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (lo, hi)
}

/// Decide the O/o relation between σ and τ as t → ∞.
pub fn relation_omega(sigma: &WeightFunction, tau: &WeightFunction, kind: OmegaRelation) -> Verdict {
    let (lo, hi) = ratio_range(sigma, tau);
    let exact = sigma.is_exact_everywhere() && tau.is_exact_everywhere();
    let order = match (sigma.omega_growth(), tau.omega_growth()) {
        (Some(a), Some(b)) if exact => b.compare(&a),
        _ => None,
    };
    let status = match order {
        None => Status::Inconclusive,
        Some(o) => match kind {
            OmegaRelation::Preceq => Status::from_bool(o != Ordering::Greater),
            OmegaRelation::Sim => Status::from_bool(o == Ordering::Equal),
            OmegaRelation::Triangle => Status::from_bool(o == Ordering::Less),
        },
    };
    let v = Verdict::new(kind.name(), status)
        .with("grid_min_ratio", lo)
        .with("grid_max_ratio", hi);
    if status == Status::Inconclusive {
        v.because("growth classes not both determined")
    } else {
        v
    }
}

fn implication(name: &str, hypothesis: &Verdict, antecedent: &Verdict, consequent: Verdict) -> Verdict {
    let gate = hypothesis.status.and(antecedent.status);
    let status = match gate {
        Status::Fails => Status::Holds,
        Status::Inconclusive => Status::Inconclusive,
        Status::Holds => consequent.status,
    };
    Verdict::new(name, status)
        .with_value("hypothesis", hypothesis.status.to_string())
        .with_value("antecedent", antecedent.status.to_string())
        .with_value("consequent", consequent.status.to_string())
        .with_parts([hypothesis.clone(), antecedent.clone(), consequent])
}

/// ω_M ∈ W_0 for M ∈ LC, plus the (ω2) and (ω5) implications from the
/// growth of (m_p)^{1/p}.
pub fn check_lemma_assofunc(seq: &LogWeightSequence) -> Result<Verdict> {
    let lc = check_in_lc(seq);
    if !lc.is_holds() {
        return Err(Error::Precondition(format!("{} is not certified in LC", seq.label())));
    }
    let w = associated_function(seq)?;
    let w0 = check_w0(&w);
    let g = seq.growth().expect("LC membership needs a tail law");
    let m_root = g.scaled_difference_limit(&TailLaw::gevrey(1.0).growth());
    let (liminf_pos, lim_inf) = match m_root {
        Limit::PlusInfinity => (Status::Holds, Status::Holds),
        Limit::Finite(_) => (Status::Holds, Status::Fails),
        Limit::MinusInfinity => (Status::Fails, Status::Fails),
        Limit::Unknown => (Status::Inconclusive, Status::Inconclusive),
    };
    let witness = |v: Verdict| match m_root {
        Limit::Finite(c) => v.with("log_m_root_limit", c),
        Limit::PlusInfinity => v.with("log_m_root_limit", f64::INFINITY),
        Limit::MinusInfinity => v.with("log_m_root_limit", f64::NEG_INFINITY),
        Limit::Unknown => v,
    };
    let yes = Verdict::holds("hypothesis").with("certified", 1.0);
    let h2 = witness(Verdict::new("m_root_liminf_positive", liminf_pos));
    let h5 = witness(Verdict::new("m_root_unbounded", lim_inf));
    let i2 = implication("implies_omega2", &yes, &h2, check_omega2(&w));
    let i5 = implication("implies_omega5", &yes, &h5, check_omega5(&w));
    Ok(Verdict::conjunction("lemma_assofunc", vec![w0, i2, i5]))
}

/// M ≼ N ⟹ ω_M ≼ ω_N under (ω1) for ω_M, and ω_N ≼ ω_M ⟹ N ≼ M under
/// (mg) for N.
pub fn check_relation_comparison(m: &LogWeightSequence, n: &LogWeightSequence) -> Result<Verdict> {
    let wm = associated_function(m)?;
    let wn = associated_function(n)?;
    let part1 = implication(
        "comparison_1",
        &check_omega1(&wm),
        &relation_preceq(m, n),
        relation_omega(&wm, &wn, OmegaRelation::Preceq),
    );
    let part2 = implication(
        "comparison_2",
        &check_moderate_growth(n),
        &relation_omega(&wn, &wm, OmegaRelation::Preceq),
        relation_preceq(n, m),
    );
    Ok(Verdict::conjunction("relation_comparison", vec![part1, part2]))
}
