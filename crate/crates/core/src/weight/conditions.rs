//! Conditions (ω0)–(ω7) and (ω_nq) on a weight function.

use std::collections::BTreeMap;

use statrs::function::gamma::gamma;

use super::function::{WeightFunction, WeightSource};
use crate::seq::law::OmegaGrowth;
use crate::verdict::{Status, Verdict};

/// Largest exponent k in the witness grid {2^k}.
pub const GRID_MAX_EXP: i32 = 20;
/// Number of s-samples in witness searches.
const GRID_POINTS: usize = 400;
/// Upper end of witness grids in s = log t when φ is exact everywhere.
const GRID_SPAN: f64 = 30.0;

/// Sample points s in [0, top].
pub fn s_grid(w: &WeightFunction) -> Vec<f64> {
    let top = w.valid_to.min(GRID_SPAN);
    (0..GRID_POINTS)
        .map(|i| top * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

fn top(w: &WeightFunction) -> f64 {
    w.valid_to.min(GRID_SPAN)
}

fn undecided(name: &str, w: &WeightFunction) -> Verdict {
    let why = if w.is_exact_everywhere() {
        "growth class undetermined"
    } else {
        "truncation-limited: φ known only up to valid_to"
    };
    Verdict::inconclusive(name, why).with("valid_to", w.valid_to)
}

fn growth_verdict(name: &str, w: &WeightFunction, decide: impl Fn(&OmegaGrowth) -> Option<bool>) -> Verdict {
    match w.omega_growth().as_ref().and_then(|g| decide(g).map(|b| (g, b))) {
        Some((g, b)) if w.is_exact_everywhere() => {
            Verdict::new(name, Status::from_bool(b)).with_value("growth", serde_json::json!(g))
        }
        _ => undecided(name, w),
    }
}

/// φ(0) = 0, φ non-decreasing, ω → ∞.
pub fn check_omega0(w: &WeightFunction) -> Verdict {
    let zero = w.phi_at(0.0);
    let grid = s_grid(w);
    let monotone = grid.windows(2).all(|p| w.phi_at(p[1]) >= w.phi_at(p[0]) - 1e-12);
    let end = w.phi_at(top(w));
    let unbounded = match w.omega_growth() {
        Some(OmegaGrowth::Degenerate) => Status::Fails,
        Some(_) => Status::Holds,
        None => {
            if matches!(w.source, WeightSource::FromSequence { .. }) || w.phi.right_slope() > 0.0 {
                Status::Holds
            } else {
                Status::Inconclusive
            }
        }
    };
    let status = Status::from_bool(zero.abs() <= 1e-12 && monotone).and(unbounded);
    Verdict::new("omega0", status)
        .with("phi_at_0", zero)
        .with("phi_at_grid_end", end)
}

/// ω(2t) = O(ω(t)).
pub fn check_omega1(w: &WeightFunction) -> Verdict {
    let l2 = std::f64::consts::LN_2;
    let c = s_grid(w)
        .into_iter()
        .filter(|s| s + l2 <= top(w))
        .map(|s| w.phi_at(s + l2) / (w.phi_at(s) + 1.0))
        .fold(0.0, f64::max);
    growth_verdict("omega1", w, |g| match g {
        OmegaGrowth::Degenerate => None,
        _ => Some(true),
    })
    .with("c", c)
}

/// ω(t) = O(t).
pub fn check_omega2(w: &WeightFunction) -> Verdict {
    let c = s_grid(w).into_iter().map(|s| w.phi_at(s) * (-s).exp()).fold(0.0, f64::max);
    growth_verdict("omega2", w, |g| match *g {
        OmegaGrowth::Power { exponent, coef } => {
            if (exponent - 1.0).abs() < 1e-12 {
                coef.map(|_| true)
            } else {
                Some(exponent < 1.0)
            }
        }
        OmegaGrowth::LogPower { .. } => Some(true),
        OmegaGrowth::Degenerate => None,
    })
    .with("sup_ratio", c)
}

/// log t = o(ω(t)).
pub fn check_omega3(w: &WeightFunction) -> Verdict {
    let s = top(w);
    growth_verdict("omega3", w, |g| match *g {
        OmegaGrowth::Power { .. } => Some(true),
        OmegaGrowth::LogPower { exponent, .. } => Some(exponent > 1.0 + 1e-12),
        OmegaGrowth::Degenerate => None,
    })
    .with("ratio_at_grid_end", w.phi_at(s) / s)
}

/// φ convex: structural for every representation.
pub fn check_omega4(w: &WeightFunction) -> Verdict {
    Verdict::holds("omega4").with_value("breakpoints", w.phi.len() as u64)
}

/// ω(t) = o(t).
pub fn check_omega5(w: &WeightFunction) -> Verdict {
    let s = top(w);
    growth_verdict("omega5", w, |g| match *g {
        OmegaGrowth::Power { exponent, .. } => Some(exponent < 1.0 - 1e-12),
        OmegaGrowth::LogPower { .. } => Some(true),
        OmegaGrowth::Degenerate => None,
    })
    .with("ratio_at_grid_end", w.phi_at(s) * (-s).exp())
}

/// First H = 2^k with 2φ(s) <= φ(s + log H) + H on the grid.
pub fn omega6_witness(w: &WeightFunction) -> Result<f64, (f64, f64)> {
    let grid = s_grid(w);
    let mut worst = (0.0, 0.0);
    for k in 0..=GRID_MAX_EXP {
        let h = 2f64.powi(k);
        let lh = h.ln();
        let bad = grid
            .iter()
            .filter(|&&s| s + lh <= top(w))
            .find(|&&s| 2.0 * w.phi_at(s) > w.phi_at(s + lh) + h);
        match bad {
            None => return Ok(h),
            Some(&s) => worst = (h, s),
        }
    }
    Err(worst)
}

/// 2ω(t) <= ω(Ht) + H.
pub fn check_omega6(w: &WeightFunction) -> Verdict {
    let analytic = growth_verdict("omega6", w, |g| match g {
        OmegaGrowth::Power { .. } => Some(true),
        OmegaGrowth::LogPower { .. } => Some(false),
        OmegaGrowth::Degenerate => None,
    });
    match (analytic.status, omega6_witness(w)) {
        (Status::Holds, Ok(h)) | (Status::Inconclusive, Ok(h)) => {
            let v = if analytic.status == Status::Holds {
                analytic
            } else {
                Verdict::inconclusive("omega6", "grid witness on a truncated range only")
            };
            v.with("h", h)
        }
        (Status::Holds, Err(_)) => {
            Verdict::inconclusive("omega6", "no H on the grid although asymptotics allow one")
        }
        (Status::Fails, res) => {
            let v = analytic;
            match res {
                Err((h, s)) => v.with("largest_h_tried", h).with("violating_s", s),
                Ok(h) => v.with("grid_h", h).because("grid range too short to expose the failure"),
            }
        }
        (Status::Inconclusive, Err((h, s))) => analytic.with("largest_h_tried", h).with("violating_s", s),
    }
}

/// First (C, H) from {2^k}² with φ(2s) <= C φ(s + log H) + C on the grid.
pub fn omega7_witness(w: &WeightFunction) -> Option<(f64, f64)> {
    let grid = s_grid(w);
    for total in 0..=2 * GRID_MAX_EXP {
        for kc in 0..=total.min(GRID_MAX_EXP) {
            let kh = total - kc;
            if kh > GRID_MAX_EXP {
                continue;
            }
            let (c, h) = (2f64.powi(kc), 2f64.powi(kh));
            let lh = h.ln();
            let ok = grid
                .iter()
                .filter(|&&s| 2.0 * s <= top(w) && s + lh <= top(w))
                .all(|&s| w.phi_at(2.0 * s) <= c * w.phi_at(s + lh) + c);
            if ok {
                return Some((c, h));
            }
        }
    }
    None
}

/// ω(t²) <= C ω(Ht) + C.
pub fn check_omega7(w: &WeightFunction) -> Verdict {
    let analytic = growth_verdict("omega7", w, |g| match g {
        OmegaGrowth::Power { .. } => Some(false),
        OmegaGrowth::LogPower { .. } => Some(true),
        OmegaGrowth::Degenerate => None,
    });
    let wit = omega7_witness(w);
    let v = match (analytic.status, wit) {
        (Status::Holds, None) => Verdict::inconclusive("omega7", "no (C, H) on the grid"),
        _ => analytic,
    };
    match wit {
        Some((c, h)) => v.with("c", c).with("h", h),
        None => v.with_value("grid_witness", "none"),
    }
}

/// ∫_0^{s_max} φ(s) e^{−s} ds, piecewise exact where φ is a stored PL function.
pub fn omega_nq_integral(w: &WeightFunction, s_max: f64) -> f64 {
    match w.source {
        WeightSource::PowerLog { s } if s_max.is_infinite() => gamma(s + 1.0),
        WeightSource::RootPower { a, c } if s_max.is_infinite() && a < 1.0 => c * a / (1.0 - a),
        _ => {
            // exact on each linear piece: ∫ f e^{−s} = −e^{−s}(f + f')
            let mut cuts: Vec<f64> = w.phi.xs().iter().copied().filter(|&x| x > 0.0 && x < s_max).collect();
            let upper = s_max.min(60.0);
            let n = 6000;
            cuts.extend((0..=n).map(|i| upper * i as f64 / n as f64));
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let piece = |a: f64, b: f64| {
                let (fa, fb) = (w.phi_at(a), w.phi_at(b));
                let m = (fb - fa) / (b - a);
                (-a).exp() * (fa + m) - (-b).exp() * (fb + m)
            };
            cuts.windows(2).map(|c| piece(c[0], c[1])).sum()
        }
    }
}

/// ∫_1^∞ ω(t)/t² dt < ∞.
pub fn check_omega_nq(w: &WeightFunction) -> Verdict {
    let v = growth_verdict("omega_nq", w, |g| match *g {
        OmegaGrowth::Power { exponent, .. } => Some(exponent < 1.0 - 1e-12),
        OmegaGrowth::LogPower { .. } => Some(true),
        OmegaGrowth::Degenerate => None,
    });
    match w.source {
        WeightSource::PowerLog { .. } | WeightSource::RootPower { .. } if v.is_holds() => {
            v.with("integral", omega_nq_integral(w, f64::INFINITY))
        }
        _ => {
            let s = top(w);
            v.with("integral_to_grid_end", omega_nq_integral(w, s)).with("grid_end", s)
        }
    }
}

/// Every condition, keyed by name.
pub fn check_omega_conditions(w: &WeightFunction) -> BTreeMap<String, Verdict> {
    [
        check_omega0(w),
        check_omega1(w),
        check_omega2(w),
        check_omega3(w),
        check_omega4(w),
        check_omega5(w),
        check_omega6(w),
        check_omega7(w),
        check_omega_nq(w),
    ]
    .into_iter()
    .map(|v| (v.condition.clone(), v))
    .collect()
}

/// (ω0), (ω3), (ω4) together.
pub fn check_w0(w: &WeightFunction) -> Verdict {
    Verdict::conjunction("W0", vec![check_omega0(w), check_omega3(w), check_omega4(w)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::LogWeightSequence;
    use crate::weight::convex_pl::ConvexPL;
    use crate::weight::function::associated_function;

    #[test]
    fn power_log_two() {
        let w = WeightFunction::power_log(2.0).unwrap();
        let m = check_omega_conditions(&w);
        for (k, v) in &m {
            let want = if k == "omega6" { Status::Fails } else { Status::Holds };
            assert_eq!(v.status, want, "{k}: {v:?}");
        }
        assert!((m["omega_nq"].witness_f64("integral").unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn root_half_has_omega6() {
        let w = WeightFunction::root_power(0.5, 1.0).unwrap();
        let v = check_omega6(&w);
        assert!(v.is_holds());
        assert!(v.witness_f64("h").unwrap() <= 16.0);
    }

    #[test]
    fn gevrey_weights() {
        let w1 = associated_function(&LogWeightSequence::gevrey(1.0, 200).unwrap()).unwrap();
        assert!(check_omega2(&w1).is_holds());
        assert!(check_omega5(&w1).is_fails());
        let w2 = associated_function(&LogWeightSequence::gevrey(2.0, 200).unwrap()).unwrap();
        assert!(check_omega_nq(&w2).is_holds());
        assert!(check_omega6(&w2).is_holds());
        assert!(check_omega7(&w2).is_fails());
        assert!(check_w0(&w2).is_holds());
    }

    #[test]
    fn prefix_only_is_truncated() {
        let s = LogWeightSequence::gevrey(2.0, 50).unwrap().without_tail();
        let w = associated_function(&s).unwrap();
        assert_eq!(check_omega5(&w).status, Status::Inconclusive);
        assert!(check_omega4(&w).is_holds());
    }

    #[test]
    fn explicit_linear_tail() {
        let phi = ConvexPL::new(vec![(0.0, 0.0), (1.0, 0.5), (3.0, 3.5)], f64::NEG_INFINITY, 2.0).unwrap();
        let w = WeightFunction::explicit("pl", phi).unwrap();
        let m = check_omega_conditions(&w);
        assert!(m["omega3"].is_fails());
        assert!(m["omega5"].is_holds());
        assert!(m["omega_nq"].is_holds());
    }
}
