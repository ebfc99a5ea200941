//! Growth conditions on a single weight sequence.

use serde_json::json;

use super::law::{mg_bounded, Lead, Series, TailSum};
use super::sequence::{LogWeightSequence, EXACT_TOL};
use super::series::{series_bracket, SeriesBracket};
use crate::error::{Error, Result};
use crate::verdict::{Status, Verdict};

/// Second differences L_{p+1} − 2L_p + L_{p−1} over the known range.
fn second_differences(seq: &LogWeightSequence) -> (Vec<f64>, usize) {
    let reach = seq.pmax().max(seq.tail_start().unwrap_or(0) + 1);
    let v = seq.materialize(reach).unwrap_or_else(|| seq.log_values().to_vec());
    let d = (1..v.len() - 1).map(|p| v[p + 1] - 2.0 * v[p] + v[p - 1]).collect();
    (d, v.len() - 1)
}

/// Index of the first negative second difference, if any.
pub fn first_convexity_violation(seq: &LogWeightSequence) -> Option<usize> {
    let (d, _) = second_differences(seq);
    d.iter().position(|&x| x < -EXACT_TOL).map(|i| i + 1)
}

pub fn check_log_convex(seq: &LogWeightSequence) -> Verdict {
    let (d, checked_to) = second_differences(seq);
    if let Some(i) = d.iter().position(|&x| x < -EXACT_TOL) {
        return Verdict::fails("lc")
            .with_value("index", (i + 1) as u64)
            .with("second_difference", d[i]);
    }
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let v = Verdict::holds("lc")
        .with("min_second_difference", min)
        .with_value("checked_to", checked_to as u64);
    if seq.tail().is_some() {
        v.with_value("tail", "log-convex law")
    } else {
        v
    }
}

pub fn check_normalized(seq: &LogWeightSequence) -> Verdict {
    let l = seq.log_values();
    Verdict::new("normalized", Status::from_bool(seq.is_normalized()))
        .with("log_m0", l[0])
        .with("log_m1", l[1])
}

/// Normalized, log-convex and (M_p)^{1/p} → ∞.
pub fn check_in_lc(seq: &LogWeightSequence) -> Verdict {
    let norm = check_normalized(seq);
    let lc = check_log_convex(seq);
    let p = seq.pmax();
    let half = (p / 2).max(1);
    let slope = seq.log_values()[p] / p as f64 - seq.log_values()[half] / half as f64;
    let root = match seq.growth() {
        Some(g) => Verdict::new("root_unbounded", Status::from_bool(g.root_unbounded()))
            .with("prefix_root_slope", slope)
            .with_value("lead", json!(g.lead))
            .with_value("root_limit", root_limit(seq)),
        None => Verdict::inconclusive("root_unbounded", "no tail law, limit undecidable from a prefix")
            .with("prefix_root_slope", slope),
    };
    let mut v = Verdict::conjunction("in_LC", vec![norm, lc, root]);
    v.witness.insert("prefix_root_slope".into(), crate::verdict::num(slope));
    v
}

fn root_limit(seq: &LogWeightSequence) -> serde_json::Value {
    match seq.growth() {
        Some(g) if !g.root_unbounded() => match g.linear {
            Some(b) => crate::verdict::num(b.exp()),
            None => json!("finite"),
        },
        _ => crate::verdict::num(f64::INFINITY),
    }
}

/// max over 1 <= j+k <= P of (L_{j+k} − L_j − L_k)/(j+k).
pub fn mg_prefix_exponent(seq: &LogWeightSequence) -> (f64, usize, usize) {
    let v = seq.log_values();
    let n = v.len() - 1;
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for s in 1..=n {
        for j in 0..=s / 2 {
            let k = s - j;
            let e = (v[s] - v[j] - v[k]) / s as f64;
            if e > best.0 {
                best = (e, j, k);
            }
        }
    }
    best
}

pub fn check_moderate_growth(seq: &LogWeightSequence) -> Verdict {
    let (e, j, k) = mg_prefix_exponent(seq);
    let attach = |v: Verdict| {
        v.with("c", e.exp())
            .with_value("j", j as u64)
            .with_value("k", k as u64)
    };
    match seq.growth() {
        None => attach(Verdict::inconclusive("mg", "asymptotic condition, prefix only")),
        Some(g) => match mg_bounded(&g, &g, &g) {
            Some(true) => attach(Verdict::holds("mg")),
            Some(false) => attach(Verdict::fails("mg"))
                .with_value("lead", json!(g.lead))
                .because("tail growth forces the exponent to infinity"),
            None => attach(Verdict::inconclusive("mg", "borderline growth without lower-order terms")),
        },
    }
}

fn series_verdict(name: &str, seq: &LogWeightSequence, b: &SeriesBracket) -> Verdict {
    let base = |v: Verdict| {
        v.with("partial_sum", b.partial)
            .with_value("partial_upto", b.upto as u64)
    };
    match b.tail {
        TailSum::Converges { low, high } => base(Verdict::holds(name))
            .with("sum_low", b.partial + low)
            .with("sum_high", b.partial + high),
        TailSum::Diverges => base(Verdict::fails(name)).with_value("tail", "diverges"),
        TailSum::Unknown => match seq.growth() {
            Some(g) if g.summable() => base(Verdict::holds(name))
                .with("sum_low", b.partial)
                .with("sum_high", f64::INFINITY)
                .because("convergence decided from growth, tail bracket unavailable"),
            Some(_) => base(Verdict::fails(name)).with_value("tail", "diverges"),
            None => base(Verdict::inconclusive(name, "no tail law")),
        },
    }
}

/// Σ 1/μ_p < ∞.
pub fn check_nq(seq: &LogWeightSequence) -> Verdict {
    series_verdict("nq", seq, &series_bracket(seq, Series::Quotient))
}

/// Σ 1/(M_p)^{1/p} < ∞.
pub fn check_root_series(seq: &LogWeightSequence) -> Verdict {
    series_verdict("root_series", seq, &series_bracket(seq, Series::Root))
}

/// Both series of a log-convex sequence must converge or diverge together.
pub fn check_carleman_consistency(seq: &LogWeightSequence) -> Result<Verdict> {
    if let Some(i) = first_convexity_violation(seq) {
        return Err(Error::NotLogConvex(i));
    }
    let nq = check_nq(seq);
    let root = check_root_series(seq);
    let status = if !nq.status.is_decided() || !root.status.is_decided() {
        Status::Inconclusive
    } else {
        Status::from_bool(nq.status == root.status)
    };
    Ok(Verdict::new("carleman", status)
        .with_value("quotient_series", nq.status.to_string())
        .with_value("root_series", root.status.to_string())
        .with_parts([nq, root]))
}

/// Search Q in 2..=q_max with liminf μ_{Qp}/μ_p > 1.
pub fn check_beta3(seq: &LogWeightSequence, q_max: usize) -> Result<Verdict> {
    if q_max < 2 {
        return Err(Error::Precondition("beta3 needs Q_max >= 2".into()));
    }
    if let Some(g) = seq.growth() {
        return Ok(match g.lead {
            // μ_p ~ e^{A+B} p^A
            Lead::Entropy { coef } => Verdict::holds("beta3")
                .with_value("q", 2u64)
                .with("liminf_ratio", 2f64.powf(coef)),
            Lead::Power { .. } => Verdict::holds("beta3")
                .with_value("q", 2u64)
                .with("liminf_ratio", f64::INFINITY),
            Lead::Bounded => Verdict::fails("beta3")
                .with_value("q_max", q_max as u64)
                .with("liminf_ratio", 1.0)
                .because("quotients converge, every ratio tends to 1"),
        });
    }
    let lm = seq.derive_quotients().log_mu;
    let p_max = seq.pmax();
    let mut best = (f64::NEG_INFINITY, 0usize);
    for q in 2..=q_max {
        let lo = (p_max / 4).max(1);
        let hi = p_max / q;
        if hi < lo {
            break;
        }
        let min = (lo..=hi)
            .map(|p| lm[q * p] - lm[p])
            .fold(f64::INFINITY, f64::min);
        if min >= 1.05f64.ln() {
            return Ok(Verdict::holds("beta3")
                .with_value("q", q as u64)
                .with("min_prefix_ratio", min.exp())
                .because("prefix ratio bound"));
        }
        if min > best.0 {
            best = (min, q);
        }
    }
    Ok(Verdict::inconclusive("beta3", "no Q up to Q_max separates the prefix ratios")
        .with("best_prefix_ratio", best.0.exp())
        .with_value("q_max", q_max as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::law::TailLaw;

    fn gev(s: f64) -> LogWeightSequence {
        LogWeightSequence::gevrey(s, 200).unwrap()
    }

    #[test]
    fn log_convexity() {
        assert!(check_log_convex(&gev(2.0)).is_holds());
        assert!(check_log_convex(&gev(1.0)).is_holds());
        let bad = LogWeightSequence::prefix_only("b", vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        let v = check_log_convex(&bad);
        assert!(v.is_fails());
        assert_eq!(v.witness_f64("index"), Some(1.0));
    }

    #[test]
    fn membership_in_lc() {
        assert!(check_in_lc(&gev(2.0)).is_holds());
        let two = LogWeightSequence::factorial_power(0.0, 2.0, 50).unwrap();
        let v = check_in_lc(&two);
        assert!(v.is_fails());
        assert!((v.find("root_unbounded").unwrap().witness_f64("root_limit").unwrap() - 2.0).abs() < 1e-12);
        let short = LogWeightSequence::prefix_only("s", (0..=10).map(|p| (p * p) as f64).collect()).unwrap();
        assert_eq!(check_in_lc(&short).status, Status::Inconclusive);
    }

    #[test]
    fn moderate_growth() {
        let v = check_moderate_growth(&LogWeightSequence::gevrey(1.0, 100).unwrap());
        assert!(v.is_holds());
        assert!(v.witness_f64("c").unwrap() <= 2.0 + 1e-12);
        let v = check_moderate_growth(&LogWeightSequence::gevrey(2.0, 100).unwrap());
        assert!(v.witness_f64("c").unwrap() <= 4.0 + 1e-12);
        let p = LogWeightSequence::prefix_only("p", gev(1.0).log_values()[..=20].to_vec()).unwrap();
        assert_eq!(check_moderate_growth(&p).status, Status::Inconclusive);
        let q = LogWeightSequence::from_law("q", TailLaw::PowerExp { coef: 0.5, exponent: 2.0 }, 50).unwrap();
        assert!(check_moderate_growth(&q).is_fails());
    }

    #[test]
    fn non_quasianalyticity() {
        for (s, holds) in [(1.0, false), (1.5, true), (2.0, true), (3.0, true)] {
            let v = check_nq(&gev(s));
            assert_eq!(v.is_holds(), holds, "s = {s}");
        }
        let v = check_nq(&gev(2.0));
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(v.witness_f64("sum_low").unwrap() <= z2 && z2 <= v.witness_f64("sum_high").unwrap());
        let p = LogWeightSequence::prefix_only("p", vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(check_nq(&p).status, Status::Inconclusive);
    }

    #[test]
    fn carleman() {
        assert!(check_carleman_consistency(&gev(2.0)).unwrap().is_holds());
        assert!(check_carleman_consistency(&gev(1.0)).unwrap().is_holds());
        let bad = LogWeightSequence::prefix_only("b", vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(check_carleman_consistency(&bad), Err(Error::NotLogConvex(1)));
    }

    #[test]
    fn beta3() {
        let v = check_beta3(&gev(2.0), 4).unwrap();
        assert!(v.is_holds());
        assert!((v.witness_f64("liminf_ratio").unwrap() - 4.0).abs() < 1e-12);
        assert!(check_beta3(&gev(1.0), 4).unwrap().is_holds());
        let two = LogWeightSequence::factorial_power(0.0, 2.0, 50).unwrap();
        assert!(check_beta3(&two, 4).unwrap().is_fails());
        let p = LogWeightSequence::prefix_only("p", gev(1.0).log_values().to_vec()).unwrap();
        assert!(check_beta3(&p, 4).unwrap().is_holds());
    }
}
