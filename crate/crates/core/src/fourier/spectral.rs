//! Discrete Fourier data, spectral derivatives and decay fits.
//!
//! Convention: f̂(ξ) = ∫ f(x) e^{−ixξ} dx, approximated by Δ·DFT on the grid,
//! so that f(x) = (2π)^{−1} ∫ f̂(ξ) e^{ixξ} dξ.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::domain::{CompactBox, SampledFunction};
use crate::error::{Error, Result};

/// Coefficients below this fraction of max |f̂| count as roundoff.
pub const NOISE_REL: f64 = 1e-15;
/// Samples per window when taking the envelope of an oscillating |f̂|.
const ENVELOPE_WINDOW: usize = 8;
/// Largest frequency used when integrating a fitted tail.
const TAIL_CAP: f64 = 1e15;
/// Number of envelope points at the band limit the tail amplitude dominates.
const TAIL_ANCHOR: usize = 3;
/// Geometric step of the tail quadrature.
const TAIL_STEP: f64 = 1.02;
/// An order is refused once its error estimate exceeds this share of its value.
pub const RELIABILITY: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    /// ξ_k in FFT order (non-negative first, then negative).
    pub xi: Vec<f64>,
    pub modulus: Vec<f64>,
    /// Quadrature weight of every frequency (dξ).
    pub weights: Vec<f64>,
    /// Largest |ξ| with |f̂(ξ)| above the noise floor.
    pub band_limit: f64,
    pub max_modulus: f64,
    #[serde(skip)]
    coefficients: Vec<Complex64>,
}

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    plan.process(data);
}

pub fn spectrum(f: &SampledFunction) -> SpectralData {
    let n = f.len();
    let dx = f.dx();
    let mut c: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut c, false);
    for z in &mut c {
        *z *= dx;
    }
    let dxi = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    let xi: Vec<f64> = (0..n)
        .map(|k| if k < n / 2 { k as f64 } else { k as f64 - n as f64 } * dxi)
        .collect();
    let modulus: Vec<f64> = c.iter().map(|z| z.norm()).collect();
    let max_modulus = modulus.iter().fold(0.0f64, |m, &v| m.max(v));
    let floor = NOISE_REL * max_modulus;
    let band_limit = xi
        .iter()
        .zip(&modulus)
        .filter(|&(_, &m)| max_modulus > 0.0 && m > floor)
        .fold(0.0f64, |b, (x, _)| b.max(x.abs()));
    SpectralData {
        weights: vec![dxi; n],
        xi,
        modulus,
        band_limit,
        max_modulus,
        coefficients: c,
    }
}

/// |f̂(ξ)| ≈ A exp(−c ξ^γ) beyond the resolved band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailModel {
    pub amplitude: f64,
    pub coef: f64,
    pub exponent: f64,
    pub from: f64,
}

impl TailModel {
    pub fn log_bound(&self, xi: f64) -> f64 {
        self.amplitude.ln() - self.coef * xi.powf(self.exponent)
    }

    /// ∫_from^∞ exp(log_bound(ξ) + log_weight(ξ)) dξ; None when the integrand
    /// is still growing at the frequency cap.
    pub fn integral(&self, log_weight: impl Fn(f64) -> f64) -> Option<f64> {
        let g = |u: f64| {
            let xi = u.exp();
            self.log_bound(xi) + log_weight(xi) + u
        };
        let (start, end, du) = (self.from.ln(), TAIL_CAP.ln(), TAIL_STEP.ln());
        let mut peak = f64::NEG_INFINITY;
        let mut total = 0.0;
        let mut prev = g(start);
        let mut u = start;
        while u < end {
            let next = g(u + du);
            peak = peak.max(next);
            total += 0.5 * (prev.exp() + next.exp()) * du;
            if next < prev && next < peak - 60.0 {
                return Some(total);
            }
            prev = next;
            u += du;
        }
        None
    }

    /// sup_{ξ ≥ from} of log_bound(ξ) + log_weight(ξ) on the quadrature grid;
    /// None when the sum is still growing at the frequency cap.
    pub fn sup_log(&self, log_weight: impl Fn(f64) -> f64) -> Option<f64> {
        let g = |xi: f64| self.log_bound(xi) + log_weight(xi);
        let mut xi = self.from;
        let mut prev = g(xi);
        let mut peak = prev;
        while xi < TAIL_CAP {
            xi *= TAIL_STEP;
            let next = g(xi);
            peak = peak.max(next);
            if next < prev && next < peak - 60.0 {
                return Some(peak);
            }
            prev = next;
        }
        None
    }
}

/// Least-squares fit log|f̂| ≈ a + slope·log ξ on an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub slope: f64,
    /// Largest absolute residual in log|f̂|.
    pub residual: f64,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

/// Fit of −log(|f̂(ξ)|/|f̂(0)|) ≈ c ξ^γ on an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub coef: f64,
    /// Range of ξ actually used.
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn noise_floor(&self) -> f64 {
        NOISE_REL * self.max_modulus
    }

    pub fn is_zero(&self) -> bool {
        self.max_modulus == 0.0
    }

    /// Highest ξ representable on the grid.
    pub fn nyquist(&self) -> f64 {
        self.xi[self.len() / 2 - 1]
    }

    /// Indices k with |ξ_k| in the resolved band.
    pub fn band(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&k| self.xi[k].abs() <= self.band_limit && self.modulus[k] > 0.0)
    }

    /// (2π)^{−1}·∫|f̂|² dξ against ∫|f|² dx, relative.
    pub fn parseval_deviation(&self, f: &SampledFunction) -> f64 {
        let spectral: f64 = self
            .modulus
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| m * m * w)
            .sum::<f64>()
            / (2.0 * std::f64::consts::PI);
        let direct = f.l2_norm_sq();
        if direct == 0.0 {
            return spectral.abs();
        }
        (spectral - direct).abs() / direct
    }

    /// Window maxima of |f̂| at ξ ≥ 0 within [lo, hi] and the resolved band.
    pub fn envelope(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let floor = self.noise_floor();
        let idx: Vec<usize> = (0..self.len() / 2)
            .filter(|&k| self.xi[k] >= lo && self.xi[k] <= hi.min(self.band_limit) && self.modulus[k] > floor)
            .collect();
        idx.chunks(ENVELOPE_WINDOW)
            .filter_map(|w| {
                w.iter()
                    .max_by(|&&a, &&b| self.modulus[a].total_cmp(&self.modulus[b]))
                    .map(|&k| (self.xi[k], self.modulus[k]))
            })
            .collect()
    }

    pub fn fit_decay(&self, lo: f64, hi: f64) -> Result<DecayFit> {
        let f0 = self.modulus[0];
        let pts: Vec<(f64, f64)> = self
            .envelope(lo, hi)
            .into_iter()
            .filter(|&(x, m)| x > 0.0 && m < f0)
            .map(|(x, m)| (x.ln(), (-(m / f0).ln()).ln()))
            .collect();
        if pts.len() < 3 {
            return Err(Error::Precondition(format!(
                "fewer than 3 resolved envelope points in [{lo}, {hi}]"
            )));
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / n, sy / n);
        let (sxy, sxx) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        let exponent = sxy / sxx;
        Ok(DecayFit {
            exponent,
            coef: (my - exponent * mx).exp(),
            lo: pts[0].0.exp(),
            hi: pts[pts.len() - 1].0.exp(),
            points: pts.len(),
        })
    }

    pub fn power_law_fit(&self, lo: f64, hi: f64) -> Option<PowerFit> {
        let pts: Vec<(f64, f64)> = self
            .envelope(lo, hi)
            .into_iter()
            .filter(|&(x, _)| x > 0.0)
            .map(|(x, m)| (x.ln(), m.ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let (sxy, sxx) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        let slope = sxy / sxx;
        let residual = pts
            .iter()
            .map(|(x, y)| (y - my - slope * (x - mx)).abs())
            .fold(0.0, f64::max);
        Some(PowerFit {
            slope,
            residual,
            lo: pts[0].0.exp(),
            hi: pts[pts.len() - 1].0.exp(),
            points: pts.len(),
        })
    }

    /// Whether |f̂| stays above the noise floor up to Nyquist.
    pub fn is_unresolved(&self) -> bool {
        !self.is_zero() && self.band_limit >= self.nyquist()
    }

    /// Decay model fitted on the last resolved octave, scaled to dominate
    /// the envelope near the band limit. None when |f̂| never reaches the noise floor
    /// below Nyquist: nothing is known beyond the grid.
    pub fn tail_model(&self) -> Option<TailModel> {
        if self.is_zero() || self.is_unresolved() {
            return None;
        }
        let top = self.band_limit;
        let fit = self.fit_decay(0.5 * top, top).ok()?;
        let (c, g) = (fit.coef, fit.exponent);
        if !(c.is_finite() && g.is_finite() && c > 0.0 && g > 0.0) {
            return None;
        }
        // anchored at the last envelope points: interior humps of
        // oscillating spectra would otherwise inflate the amplitude
        let env = self.envelope(0.5 * top, top);
        let log_amp = env[env.len().saturating_sub(TAIL_ANCHOR)..]
            .iter()
            .map(|&(x, m)| m.ln() + c * x.powf(g))
            .fold(f64::NEG_INFINITY, f64::max);
        Some(TailModel {
            amplitude: log_amp.exp(),
            coef: c,
            exponent: g,
            from: top,
        })
    }

    /// f^{(k)} on the grid from the band-limited multiplier (iξ)^k.
    pub fn derivative(&self, k: usize) -> Vec<f64> {
        let n = self.len();
        let dxi = self.weights[0];
        let mut c: Vec<Complex64> = (0..n)
            .map(|j| {
                if self.xi[j].abs() > self.band_limit {
                    return Complex64::new(0.0, 0.0);
                }
                // the Nyquist bin has no conjugate partner
                if j == n / 2 && k % 2 == 1 {
                    return Complex64::new(0.0, 0.0);
                }
                self.coefficients[j] * Complex64::new(0.0, self.xi[j]).powu(k as u32)
            })
            .collect();
        fft(&mut c, true);
        c.iter().map(|z| z.re * dxi / (2.0 * std::f64::consts::PI)).collect()
    }

    /// Error estimate for the order-k derivative: roundoff amplified by |ξ|^k
    /// across the band plus the modelled tail beyond it.
    pub fn derivative_error(&self, k: usize) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let noise: f64 = self
            .band()
            .map(|j| f64::EPSILON * self.max_modulus * self.xi[j].abs().powi(k as i32) * self.weights[j])
            .sum::<f64>()
            / two_pi;
        let tail = match self.tail_model() {
            Some(model) => match model.integral(|xi| k as f64 * xi.ln()) {
                Some(t) => 2.0 * t / two_pi,
                None => f64::INFINITY,
            },
            None => f64::INFINITY,
        };
        noise + tail
    }
}

/// Sup of each derivative order on the support, with its location and error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderStats {
    pub k: usize,
    pub sup: f64,
    pub argmax_x: f64,
    pub error: f64,
    pub reliable: bool,
}

/// Spectrum and derivative statistics of one function, computed once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionAnalysis {
    pub label: String,
    pub spectrum: SpectralData,
    pub orders: Vec<OrderStats>,
    #[serde(skip)]
    grid: (f64, f64),
    #[serde(skip)]
    derivatives: Vec<Vec<f64>>,
}

impl FunctionAnalysis {
    /// Derivatives up to `k_max`, sups taken over the support of f.
    pub fn new(f: &SampledFunction, k_max: usize) -> Self {
        let spectrum = spectrum(f);
        let derivatives: Vec<Vec<f64>> = (0..=k_max)
            .map(|k| if k == 0 { f.values().to_vec() } else { spectrum.derivative(k) })
            .collect();
        let mut a = FunctionAnalysis {
            label: f.label.clone(),
            spectrum,
            orders: Vec::new(),
            grid: (f.x0(), f.dx()),
            derivatives,
        };
        a.orders = (0..=k_max)
            .map(|k| {
                let error = if k == 0 { 0.0 } else { a.spectrum.derivative_error(k) };
                let (sup, argmax_x) = a.sup_on(k, f.support());
                OrderStats {
                    k,
                    sup,
                    argmax_x,
                    error,
                    reliable: error <= RELIABILITY * sup || error == 0.0,
                }
            })
            .collect();
        a
    }

    pub fn k_max(&self) -> usize {
        self.orders.len() - 1
    }

    /// (sup, argmax) of |f^{(k)}| over the grid points in K.
    pub fn sup_on(&self, k: usize, set: &CompactBox) -> (f64, f64) {
        let (x0, dx) = self.grid;
        self.derivatives[k]
            .iter()
            .enumerate()
            .map(|(j, v)| (v.abs(), x0 + dx * j as f64))
            .filter(|&(_, x)| set.contains(x))
            .fold((0.0, f64::NAN), |best, cur| if cur.0 > best.0 || best.1.is_nan() { cur } else { best })
    }

    /// First order whose error estimate is too large, if any up to `k_max`.
    pub fn first_unreliable(&self, k_max: usize) -> Option<usize> {
        self.orders.iter().take(k_max + 1).find(|o| !o.reliable).map(|o| o.k)
    }

    /// Highest order up to which every order is reliable.
    pub fn reliable_through(&self) -> usize {
        self.first_unreliable(self.k_max()).map_or(self.k_max(), |k| k - 1)
    }
}
