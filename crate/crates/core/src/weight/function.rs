//! Weight functions ω, their log-coordinate form φ(s) = ω(e^s), Young
//! conjugates φ*, associated functions ω_M and the sequences Ω^l.

use serde::Serialize;

use super::convex_pl::ConvexPL;
use crate::error::{Error, Result};
use crate::seq::law::{OmegaGrowth, TailLaw};
use crate::seq::regularize::lc_minorant;
use crate::seq::sequence::{LogWeightSequence, Tail, EXACT_TOL};

/// Where a weight function comes from; decides how it is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSource {
    /// ω_M for a log-convex sequence (stored as its own hull).
    FromSequence { sequence: LogWeightSequence },
    /// ω(t) = max{0, (log t)^s}.
    PowerLog { s: f64 },
    /// ω(t) = max{0, c (t^a − 1)}.
    RootPower { a: f64, c: f64 },
    /// φ given directly as a convex piecewise-linear function.
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightFunction {
    pub label: String,
    /// φ on the range where it is stored exactly.
    pub phi: ConvexPL,
    pub source: WeightSource,
    /// Largest s up to which `phi` alone is exact (∞ when evaluation
    /// beyond the stored breakpoints is exact as well).
    pub valid_to: f64,
}

/// Number of grid points used for symbolic `phi` snapshots.
const SNAPSHOT_POINTS: usize = 256;
/// Upper end of symbolic `phi` snapshots in s = log t.
const SNAPSHOT_SPAN: f64 = 40.0;

fn snapshot(f: impl Fn(f64) -> f64) -> ConvexPL {
    let pts = (0..SNAPSHOT_POINTS)
        .map(|i| {
            let s = SNAPSHOT_SPAN * i as f64 / (SNAPSHOT_POINTS - 1) as f64;
            (s, f(s))
        })
        .collect();
    // secant interpolation of a convex function is convex
    ConvexPL::new(pts, f64::NEG_INFINITY, f64::INFINITY).expect("convex samples")
}

/// φ*(x) = sup_{y >= 0} (xy − φ(y)) as an exact piecewise-linear function.
pub fn young_conjugate(phi: &ConvexPL) -> Result<ConvexPL> {
    Ok(phi.restrict_from(0.0)?.conjugate())
}

/// ω_M with φ(s) = max_p (ps − L_p).
pub fn associated_function(seq: &LogWeightSequence) -> Result<WeightFunction> {
    let values = seq.log_values();
    if values[0].abs() > EXACT_TOL || values.iter().any(|&v| v < -EXACT_TOL) {
        return Err(Error::NotNormalized);
    }
    let hull = lc_minorant(seq)?;
    let lines = ConvexPL::interpolating(hull.log_values())?;
    let phi = lines.conjugate().restrict_from(0.0)?;
    let valid_to = if hull.tail().is_some() {
        f64::INFINITY
    } else {
        let v = hull.log_values();
        let p = v.len() - 1;
        v[p] - v[p - 1]
    };
    Ok(WeightFunction {
        label: format!("omega[{}]", seq.label()),
        phi,
        source: WeightSource::FromSequence { sequence: hull },
        valid_to,
    })
}

impl WeightFunction {
    /// ω_s(t) = max{0, (log t)^s}, s >= 1.
    pub fn power_log(s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 1.0) {
            return Err(Error::Precondition("power_log needs s >= 1".into()));
        }
        Ok(WeightFunction {
            label: format!("power_log({s})"),
            phi: snapshot(|y| y.powf(s)),
            source: WeightSource::PowerLog { s },
            valid_to: f64::INFINITY,
        })
    }

    /// ω(t) = max{0, c (t^a − 1)}, a, c > 0.
    pub fn root_power(a: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && c.is_finite() && c > 0.0) {
            return Err(Error::Precondition("root_power needs a, c > 0".into()));
        }
        Ok(WeightFunction {
            label: format!("root_power({a},{c})"),
            phi: snapshot(|y| c * (a * y).exp_m1()),
            source: WeightSource::RootPower { a, c },
            valid_to: f64::INFINITY,
        })
    }

    /// φ given as a convex PL function on s >= 0 with φ(0) = 0.
    pub fn explicit(label: impl Into<String>, phi: ConvexPL) -> Result<Self> {
        let phi = phi.restrict_from(0.0)?;
        if phi.eval(0.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized);
        }
        if phi.slope_at(0.0) < -EXACT_TOL {
            return Err(Error::Precondition("φ must be non-decreasing".into()));
        }
        let valid_to = phi.domain().1;
        Ok(WeightFunction {
            label: label.into(),
            phi,
            source: WeightSource::Explicit,
            valid_to,
        })
    }

    pub fn sequence(&self) -> Option<&LogWeightSequence> {
        match &self.source {
            WeightSource::FromSequence { sequence } => Some(sequence),
            _ => None,
        }
    }

    /// Whether φ is known exactly at every s >= 0.
    pub fn is_exact_everywhere(&self) -> bool {
        self.valid_to == f64::INFINITY
    }

    /// φ(s) = ω(e^s).
    pub fn phi_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.source {
            WeightSource::PowerLog { s: e } => s.powf(*e),
            WeightSource::RootPower { a, c } => c * (a * s).exp_m1(),
            WeightSource::Explicit => self.phi.eval(s),
            WeightSource::FromSequence { sequence } => {
                let p = sequence.pmax();
                match sequence.law() {
                    Some(_) if s >= sequence.log_quotient(p + 1).unwrap() => crossing_value(sequence, s),
                    _ => self.phi.eval(s),
                }
            }
        }
    }

    /// ω(t).
    pub fn omega(&self, t: f64) -> f64 {
        if t <= 1.0 {
            0.0
        } else {
            self.phi_at(t.ln())
        }
    }

    /// φ*(x) for x >= 0.
    pub fn phi_star(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        match &self.source {
            WeightSource::PowerLog { s } => {
                if *s == 1.0 {
                    return if x <= 1.0 {
                        Ok(0.0)
                    } else {
                        Err(Error::DomainExceeded { requested: x, limit: 1.0 })
                    };
                }
                let b = s / (s - 1.0);
                Ok((s - 1.0) * (x / s).powf(b))
            }
            WeightSource::RootPower { a, c } => {
                let u = x / a;
                Ok(if x >= c * a { u * (x / (c * a)).ln() - u + c } else { 0.0 })
            }
            WeightSource::Explicit => {
                let v = young_conjugate(&self.phi)?.eval(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::DomainExceeded {
                        requested: x,
                        limit: self.phi.right_slope(),
                    })
                }
            }
            WeightSource::FromSequence { sequence } => {
                let k = x.floor() as usize;
                let f = x - k as f64;
                let at = |p: usize| {
                    sequence.value_at(p).ok_or(Error::DomainExceeded {
                        requested: x,
                        limit: sequence.pmax() as f64,
                    })
                };
                if f == 0.0 {
                    at(k)
                } else {
                    Ok((1.0 - f) * at(k)? + f * at(k + 1)?)
                }
            }
        }
    }

    /// Asymptotic class of ω, when it is determined.
    pub fn omega_growth(&self) -> Option<OmegaGrowth> {
        match &self.source {
            WeightSource::PowerLog { s } => Some(OmegaGrowth::LogPower {
                exponent: *s,
                coef: Some(1.0),
            }),
            WeightSource::RootPower { a, c } => Some(OmegaGrowth::Power {
                exponent: *a,
                coef: Some(*c),
            }),
            WeightSource::FromSequence { sequence } => sequence.growth().map(|g| g.omega()),
            WeightSource::Explicit => {
                let r = self.phi.right_slope();
                (r.is_finite() && r > 0.0).then_some(OmegaGrowth::LogPower {
                    exponent: 1.0,
                    coef: Some(r),
                })
            }
        }
    }

    /// (t, ω(t)) on a geometric grid t ∈ [1, exp(min(valid_to, 50))].
    pub fn grid(&self, points: usize) -> Vec<(f64, f64)> {
        let top = self.valid_to.min(50.0);
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let s = top * i as f64 / (n - 1) as f64;
                (s.exp(), self.phi_at(s))
            })
            .collect()
    }
}

/// Crossing-index evaluation p s − L_p with log μ_p <= s < log μ_{p+1}.
fn crossing_value(seq: &LogWeightSequence, s: f64) -> f64 {
    let lq = |p: usize| seq.log_quotient(p).unwrap();
    let mut lo = seq.pmax().max(1);
    let mut hi = lo;
    const CAP: usize = 1 << 62;
    while lq(hi + 1) <= s {
        lo = hi + 1;
        if hi >= CAP {
            return f64::INFINITY;
        }
        hi = hi.saturating_mul(2);
    }
    // invariant: lq(lo) <= s (or lo is the prefix end), lq(hi + 1) > s
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if lq(mid) <= s {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo as f64 * s - seq.value_at(lo).unwrap()
}

/// Ω^l_j = exp((1/l) φ*(lj)) for j = 0..=pmax, continued by a tail law
/// whenever the source determines one.
pub fn sequence_from_weight(w: &WeightFunction, l: f64, pmax: usize) -> Result<LogWeightSequence> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Precondition("l must be a positive real".into()));
    }
    let label = format!("Omega^{l}[{}]", w.label);
    let (tail, start) = match &w.source {
        WeightSource::FromSequence { sequence } => match sequence.tail() {
            Some(t) => {
                let start = (t.start as f64 / l).ceil() as usize;
                (Some(Tail::from(t.law.clone().rescaled(l), start)), start)
            }
            None => (None, 0),
        },
        WeightSource::PowerLog { s } => {
            if *s <= 1.0 {
                return Err(Error::DomainExceeded {
                    requested: l * pmax as f64,
                    limit: 1.0,
                });
            }
            let b = s / (s - 1.0);
            let law = TailLaw::PowerExp {
                coef: (s - 1.0) * l.powf(b - 1.0) * s.powf(-b),
                exponent: b,
            };
            (Some(Tail::new(law)), 0)
        }
        WeightSource::RootPower { a, c } => {
            let law = TailLaw::EntropyLinear {
                p_log_p: 1.0 / a,
                linear: ((l / (c * a)).ln() - 1.0) / a,
                constant: c / l,
                threshold: c * a / l,
            };
            (Some(Tail::new(law)), 0)
        }
        WeightSource::Explicit => (None, 0),
    };
    let n = pmax.max(start).max(2);
    let mut values = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let v = match &tail {
            // symbolic sources: the law is the closed form itself
            Some(t) if !matches!(w.source, WeightSource::FromSequence { .. }) => t.law.log_value(j as u64),
            _ => w.phi_star(l * j as f64)? / l,
        };
        values.push(v);
    }
    LogWeightSequence::new(label, values, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::law::ln_factorial;
    use rand::{Rng, SeedableRng};

    #[test]
    fn vanishes_below_one() {
        let w = associated_function(&LogWeightSequence::gevrey(1.0, 50).unwrap()).unwrap();
        for t in [0.1, 0.5, 1.0] {
            assert_eq!(w.omega(t), 0.0);
        }
    }

    #[test]
    fn factorial_at_e() {
        let w = associated_function(&LogWeightSequence::gevrey(1.0, 200).unwrap()).unwrap();
        let want = (0..=200).map(|p| p as f64 - ln_factorial(p as f64)).fold(f64::NEG_INFINITY, f64::max);
        assert!((w.omega(std::f64::consts::E) - want).abs() < 1e-12);
        assert!((want - (2.0 - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn three_lines() {
        let s = LogWeightSequence::prefix_only("x", vec![0.0, 0.0, 2.0]).unwrap();
        let w = associated_function(&s).unwrap();
        assert!((w.omega(std::f64::consts::E) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn crossing_agrees_with_envelope() {
        let g = LogWeightSequence::gevrey(2.0, 60).unwrap();
        let w = associated_function(&g).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..2000 {
            let s: f64 = rng.gen_range(0.0..9.0);
            let brute = (0..=20_000u64)
                .map(|p| p as f64 * s - g.law().unwrap().log_value(p))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((w.phi_at(s) - brute).abs() <= 1e-10 * brute.abs().max(1.0), "s = {s}");
        }
    }

    #[test]
    fn reconstruction() {
        for s in [1.0, 2.0, 3.0] {
            let g = LogWeightSequence::gevrey(s, 100).unwrap();
            let w = associated_function(&g).unwrap();
            let back = sequence_from_weight(&w, 1.0, 100).unwrap();
            for p in 0..=100 {
                assert!((back.log_values()[p] - g.log_values()[p]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn integer_l_identity() {
        let g = LogWeightSequence::gevrey(2.0, 100).unwrap();
        let w = associated_function(&g).unwrap();
        let o = sequence_from_weight(&w, 2.0, 50).unwrap();
        for j in 0..=50 {
            assert!((o.log_values()[j] - ln_factorial(2.0 * j as f64)).abs() < 1e-9);
        }
        assert!((o.value_at(400).unwrap() - ln_factorial(800.0)).abs() < 1e-9 * ln_factorial(800.0));
    }

    #[test]
    fn non_convex_reconstructs_hull() {
        let s = LogWeightSequence::prefix_only("x", vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        let w = associated_function(&s).unwrap();
        let o = sequence_from_weight(&w, 1.0, 3).unwrap();
        for (a, b) in o.log_values().iter().zip([0.0, 0.5, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(sequence_from_weight(&w, 2.0, 3), Err(Error::DomainExceeded { .. })));
    }

    #[test]
    fn symbolic_conjugates_match_pl() {
        for w in [WeightFunction::power_log(2.0).unwrap(), WeightFunction::root_power(0.5, 1.0).unwrap()] {
            for l in [0.5, 1.0, 2.0] {
                let o = sequence_from_weight(&w, l, 30).unwrap();
                for j in 1..=30 {
                    let x = l * j as f64;
                    // brute-force sup over a fine y-grid
                    let brute = (0..=100_000)
                        .map(|i| {
                            let y = i as f64 * 4e-4;
                            x * y - w.phi_at(y)
                        })
                        .fold(f64::NEG_INFINITY, f64::max);
                    let v = o.log_values()[j] * l;
                    assert!((v - brute).abs() < 1e-3 * v.abs().max(1.0), "{} l={l} j={j} {v} {brute}", w.label);
                }
            }
        }
    }

    #[test]
    fn young_conjugate_of_line() {
        let f = ConvexPL::new(vec![(0.0, 0.0)], f64::NEG_INFINITY, 1.5).unwrap();
        let g = young_conjugate(&f).unwrap();
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(2.0), f64::INFINITY);
    }
}
