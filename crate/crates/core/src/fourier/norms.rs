//! The derivative seminorm, its weight-function form and the Fourier norm.

use serde::Serialize;

use super::domain::{CompactBox, SampledFunction};
use super::spectral::{spectrum, FunctionAnalysis, SpectralData};
use crate::error::{Error, Result};
use crate::seq::LogWeightSequence;
use crate::weight::function::{associated_function, sequence_from_weight, WeightFunction};

/// A Fourier norm bracket wider than this share of its lower end is refused.
pub const BRACKET_REL: f64 = 0.1;

/// ‖f‖_{M,K,h} with the place it is attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Seminorm {
    pub value: f64,
    /// Order and point of the maximum.
    pub k: usize,
    pub x: f64,
    /// Largest spectral error estimate, on the same scale as `value`.
    pub spectral_error: f64,
    /// sup_x |f^{(k)}| / (h^k M_k) for every k.
    pub ratios: Vec<f64>,
}

fn denominator(seq: &LogWeightSequence, h: f64, k: usize) -> Result<f64> {
    let lm = seq.value_at(k).ok_or(Error::DomainExceeded {
        requested: k as f64,
        limit: seq.pmax() as f64,
    })?;
    Ok((k as f64 * h.ln() + lm).exp())
}

/// max_{k ≤ k_max, x ∈ K} |f^{(k)}(x)| / (h^k M_k) from a precomputed analysis.
pub fn seminorm_from(
    a: &FunctionAnalysis,
    seq: &LogWeightSequence,
    k: &CompactBox,
    h: f64,
    k_max: usize,
) -> Result<Seminorm> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Precondition("h must be positive".into()));
    }
    if k_max > a.k_max() {
        return Err(Error::Precondition(format!(
            "analysis only reaches order {}, {k_max} requested",
            a.k_max()
        )));
    }
    if let Some(order) = a.first_unreliable(k_max) {
        return Err(Error::DerivativeOrderUnreliable { order });
    }
    let mut best = Seminorm {
        value: 0.0,
        k: 0,
        x: f64::NAN,
        spectral_error: 0.0,
        ratios: Vec::with_capacity(k_max + 1),
    };
    for o in 0..=k_max {
        let d = denominator(seq, h, o)?;
        let (sup, x) = a.sup_on(o, k);
        let ratio = sup / d;
        best.ratios.push(ratio);
        best.spectral_error = best.spectral_error.max(a.orders[o].error / d);
        if ratio > best.value || best.x.is_nan() {
            best.value = ratio;
            best.k = o;
            best.x = x;
        }
    }
    Ok(best)
}

pub fn seminorm_derivative(
    f: &SampledFunction,
    seq: &LogWeightSequence,
    k: &CompactBox,
    h: f64,
    k_max: usize,
) -> Result<Seminorm> {
    seminorm_from(&FunctionAnalysis::new(f, k_max), seq, k, h, k_max)
}

/// The seminorm with denominators exp((1/l) φ*(lk)), i.e. against Ω^l with h = 1.
pub fn seminorm_weightfn(
    f: &SampledFunction,
    w: &WeightFunction,
    k: &CompactBox,
    l: f64,
    k_max: usize,
) -> Result<Seminorm> {
    let row = sequence_from_weight(w, l, k_max)?;
    seminorm_derivative(f, &row, k, 1.0, k_max)
}

/// [low, high] bracket of ∫ |f̂(ξ)| exp(h ω(|ξ|)) dξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierNorm {
    pub low: f64,
    pub high: f64,
    /// Upper bound of the part beyond the resolved band.
    pub tail: f64,
}

impl FourierNorm {
    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

/// Bracket of the Fourier norm for a weight function.
pub fn fourier_norm_weight(s: &SpectralData, w: &WeightFunction, h: f64) -> Result<FourierNorm> {
    if !(h.is_finite() && h >= 0.0) {
        return Err(Error::Precondition("h must be non-negative".into()));
    }
    if s.is_zero() {
        return Ok(FourierNorm {
            low: 0.0,
            high: 0.0,
            tail: 0.0,
        });
    }
    let low: f64 = s
        .band()
        .map(|j| s.modulus[j] * (h * w.omega(s.xi[j].abs())).exp() * s.weights[j])
        .sum();
    let tail = s
        .tail_model()
        .and_then(|m| m.integral(|xi| h * w.omega(xi)))
        .map_or(f64::INFINITY, |t| 2.0 * t);
    let high = low + tail;
    if !(low.is_finite() && tail <= BRACKET_REL * low) {
        return Err(Error::TailDominates { low, high });
    }
    Ok(FourierNorm { low, high, tail })
}

/// ‖f‖^_{M,h} with ω = ω_M.
pub fn fourier_norm(f: &SampledFunction, seq: &LogWeightSequence, h: f64) -> Result<FourierNorm> {
    fourier_norm_weight(&spectrum(f), &associated_function(seq)?, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::domain::DEFAULT_POINTS;

    fn unit() -> CompactBox {
        CompactBox::interval(-1.0, 1.0).unwrap()
    }

    fn bump(n: usize) -> SampledFunction {
        SampledFunction::standard_bump(unit(), n).unwrap()
    }

    #[test]
    fn derivative_seminorm_of_bump() {
        let g2 = LogWeightSequence::gevrey(2.0, 200).unwrap();
        let a = seminorm_derivative(&bump(DEFAULT_POINTS), &g2, &unit(), 4.0, 10).unwrap();
        let b = seminorm_derivative(&bump(1 << 13), &g2, &unit(), 4.0, 10).unwrap();
        assert!(a.value.is_finite() && a.value > 0.0);
        assert!((a.value / b.value - 1.0).abs() < 0.02, "{} vs {}", a.value, b.value);
        assert_eq!(a.ratios.len(), 11);
        let only_values = seminorm_derivative(&bump(DEFAULT_POINTS), &g2, &unit(), 4.0, 0).unwrap();
        assert!((only_values.value - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_function_norms() {
        let z = SampledFunction::zero(unit(), 1024).unwrap();
        let g2 = LogWeightSequence::gevrey(2.0, 200).unwrap();
        assert_eq!(seminorm_derivative(&z, &g2, &unit(), 1.0, 6).unwrap().value, 0.0);
        let w = associated_function(&g2).unwrap();
        assert_eq!(seminorm_weightfn(&z, &w, &unit(), 1.0, 6).unwrap().value, 0.0);
        assert_eq!(fourier_norm(&z, &g2, 1.0).unwrap().high, 0.0);
    }

    #[test]
    fn weight_form_is_the_omega_row() {
        let f = bump(DEFAULT_POINTS);
        let w = associated_function(&LogWeightSequence::gevrey(2.0, 200).unwrap()).unwrap();
        for l in [0.5, 1.0, 2.0] {
            let a = seminorm_weightfn(&f, &w, &unit(), l, 8).unwrap();
            let row = sequence_from_weight(&w, l, 8).unwrap();
            let b = seminorm_derivative(&f, &row, &unit(), 1.0, 8).unwrap();
            assert_eq!(a, b);
            assert!(a.value.is_finite());
        }
    }

    #[test]
    fn fourier_norm_cases() {
        let f = bump(DEFAULT_POINTS);
        let g2 = LogWeightSequence::gevrey(2.0, 200).unwrap();
        let n = fourier_norm(&f, &g2, 0.1).unwrap();
        assert!(n.low > 0.0 && n.width() <= BRACKET_REL * n.low, "{n:?}");
        let g1 = LogWeightSequence::gevrey(1.0, 200).unwrap();
        assert!(matches!(fourier_norm(&f, &g1, 1.0), Err(Error::TailDominates { .. })));
        let ind = SampledFunction::indicator(unit(), DEFAULT_POINTS).unwrap();
        assert!(matches!(fourier_norm(&ind, &g2, 0.1), Err(Error::TailDominates { .. })));
    }

    #[test]
    fn homogeneity() {
        let f = bump(DEFAULT_POINTS);
        let g2 = LogWeightSequence::gevrey(2.0, 200).unwrap();
        for c in [-3.0, 0.25, 1e3] {
            let g = f.scaled(c);
            let a = seminorm_derivative(&f, &g2, &unit(), 4.0, 10).unwrap().value;
            let b = seminorm_derivative(&g, &g2, &unit(), 4.0, 10).unwrap().value;
            assert!((b / (c.abs() * a) - 1.0).abs() < 1e-10);
            let a = fourier_norm(&f, &g2, 0.1).unwrap();
            let b = fourier_norm(&g, &g2, 0.1).unwrap();
            assert!((b.low / (c.abs() * a.low) - 1.0).abs() < 1e-10);
            assert!((b.high / (c.abs() * a.high) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn monotone_in_h() {
        let f = bump(DEFAULT_POINTS);
        let g2 = LogWeightSequence::gevrey(2.0, 200).unwrap();
        let a = FunctionAnalysis::new(&f, 10);
        let mut last = f64::INFINITY;
        for h in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = seminorm_from(&a, &g2, &unit(), h, 10).unwrap().value;
            assert!(v <= last);
            last = v;
        }
        let s = spectrum(&f);
        let w = associated_function(&g2).unwrap();
        let mut last = 0.0;
        for h in [0.0, 0.05, 0.1, 0.2] {
            let n = fourier_norm_weight(&s, &w, h).unwrap();
            assert!(n.low >= last);
            last = n.low;
        }
    }
}
