//! Denjoy–Carleman bumps: an indicator convolved with normalized boxes of
//! widths 1/μ_1, …, 1/μ_d.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::domain::{grid_for, CompactBox, SampledFunction};
use super::spectral::FunctionAnalysis;
use crate::error::{Error, Result};
use crate::quasi::class_nq_verdict;
use crate::seq::conditions::check_log_convex;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Box widths w_p = 1/μ_p, p = 1..=d.
fn widths(seq: &LogWeightSequence, d: usize) -> Result<Vec<f64>> {
    (1..=d)
        .map(|p| {
            seq.log_quotient(p)
                .map(|q| (-q).exp())
                .ok_or(Error::DomainExceeded {
                    requested: p as f64,
                    limit: seq.pmax() as f64,
                })
        })
        .collect()
}

/// Indicator of a core interval centered in K smoothed by d boxes. Since the
/// boxes add Σ w_p to the support, the core has length |K| − Σ w_p.
pub fn bump_builder(k: &CompactBox, seq: &LogWeightSequence, d: usize, n: usize) -> Result<SampledFunction> {
    if !check_log_convex(seq).is_holds() {
        return Err(Error::Precondition(format!("{} is not log-convex", seq.label())));
    }
    if !class_nq_verdict(seq)?.is_holds() {
        return Err(Error::Precondition(format!("{} is not non-quasianalytic", seq.label())));
    }
    let w = widths(seq, d)?;
    let spread: f64 = w.iter().sum();
    let core = k.width() - spread;
    if core <= 0.0 {
        return Err(Error::WidthBudgetExceeded {
            needed: spread,
            available: k.width(),
        });
    }
    let label = format!("bump[{}, d={d}]", seq.label());
    let c = k.center();
    match d {
        0 => SampledFunction::sample(label, k.clone(), n, |_| 1.0),
        1 => {
            // trapezoid: plateau of length core − w, linear ramps of length w
            let (half_core, w1) = (0.5 * core, w[0]);
            SampledFunction::sample(label, k.clone(), n, move |x| {
                let r = (x - c).abs();
                let lo = (half_core - 0.5 * w1).abs();
                let hi = half_core + 0.5 * w1;
                let top = core.min(w1) / w1;
                if r <= lo {
                    top
                } else if r >= hi {
                    0.0
                } else {
                    top * (hi - r) / (hi - lo)
                }
            })
        }
        _ => synthesize(label, k, core, &w, n),
    }
}

/// Samples of the inverse transform of core·sinc(ξ·core/2)·Π sinc(ξ w_p/2).
fn synthesize(label: String, k: &CompactBox, core: f64, w: &[f64], n: usize) -> Result<SampledFunction> {
    let (x0, dx) = grid_for(k, n)?;
    let span = dx * n as f64;
    let c = k.center();
    let dxi = 2.0 * std::f64::consts::PI / span;
    let mut coef: Vec<Complex64> = (0..n)
        .map(|j| {
            let xi = if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dxi;
            let mag = core * sinc(0.5 * xi * core) * w.iter().map(|wp| sinc(0.5 * xi * wp)).product::<f64>();
            // shift by the center, then move the origin to x0
            Complex64::from_polar(mag / span, -xi * c) * Complex64::from_polar(1.0, xi * x0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut coef);
    let values = (0..n)
        .map(|j| {
            let x = x0 + dx * j as f64;
            if k.contains(x) {
                coef[j].re
            } else {
                0.0
            }
        })
        .collect();
    SampledFunction::new(label, x0, dx, values, k.clone())
}

/// sup |f^{(k)}| ≤ 2^k M_k for k ≤ k_max, up to the spectral error estimate.
pub fn check_bump_derivatives(f: &SampledFunction, seq: &LogWeightSequence, k_max: usize) -> Result<Verdict> {
    let a = FunctionAnalysis::new(f, k_max);
    if let Some(order) = a.first_unreliable(k_max) {
        return Err(Error::DerivativeOrderUnreliable { order });
    }
    let mut worst = (f64::NEG_INFINITY, 0usize);
    for o in &a.orders {
        let bound = (o.k as f64 * 2f64.ln() + seq.value_at(o.k).unwrap_or(f64::INFINITY)).exp();
        let ratio = (o.sup - o.error).max(0.0) / bound;
        if ratio > worst.0 {
            worst = (ratio, o.k);
        }
    }
    Ok(Verdict::new("bump_derivative_bound", Status::from_bool(worst.0 <= 1.0))
        .with("max_ratio", worst.0)
        .with_value("at_k", worst.1 as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::domain::DEFAULT_POINTS;

    fn unit() -> CompactBox {
        CompactBox::interval(-1.0, 1.0).unwrap()
    }

    #[test]
    fn gevrey_bumps_meet_derivative_bound() {
        // orders resolved in double precision: the narrower boxes of
        // gevrey(3) leave more of the spectrum near the noise floor
        for (s, k_max) in [(2.0, 8), (3.0, 5)] {
            let seq = LogWeightSequence::gevrey(s, 200).unwrap();
            let f = bump_builder(&unit(), &seq, 30, DEFAULT_POINTS).unwrap();
            let v = check_bump_derivatives(&f, &seq, k_max).unwrap();
            assert!(v.is_holds(), "s = {s}: {v:?}");
            // mass of the core is preserved by normalized boxes
            let mass: f64 = f.values().iter().sum::<f64>() * f.dx();
            let core = 2.0 - (1..=30).map(|p| (p as f64).powf(-s)).sum::<f64>();
            assert!((mass - core).abs() < 1e-9, "{mass} vs {core}");
        }
        let seq = LogWeightSequence::gevrey(3.0, 200).unwrap();
        let f = bump_builder(&unit(), &seq, 30, DEFAULT_POINTS).unwrap();
        assert!(matches!(
            check_bump_derivatives(&f, &seq, 10),
            Err(Error::DerivativeOrderUnreliable { .. })
        ));
    }

    #[test]
    fn budget_and_preconditions() {
        let seq = LogWeightSequence::factorial_power(1.5, 1.0, 200).unwrap();
        assert!(matches!(
            bump_builder(&unit(), &seq, 30, 1024),
            Err(Error::WidthBudgetExceeded { .. })
        ));
        let q = LogWeightSequence::gevrey(1.0, 200).unwrap();
        assert!(matches!(bump_builder(&unit(), &q, 5, 1024), Err(Error::Precondition(_))));
    }

    #[test]
    fn controls() {
        let seq = LogWeightSequence::gevrey(2.0, 200).unwrap();
        let ind = bump_builder(&unit(), &seq, 0, 1024).unwrap();
        assert_eq!(ind.values()[512], 1.0);
        let tent = bump_builder(&unit(), &seq, 1, 1024).unwrap();
        let mass: f64 = tent.values().iter().sum::<f64>() * tent.dx();
        assert!((mass - 1.0).abs() < 1e-2);
    }
}
