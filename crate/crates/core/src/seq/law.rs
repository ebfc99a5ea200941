//! Closed-form tail laws: exact formulas for log M_p at every index, their
//! growth classes, and certified bounds on the two series used by (nq).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{checked_gamma_ui, ln_gamma};

use crate::error::{Error, Result};

/// Relative tolerance used when comparing growth coefficients.
pub const GROWTH_TOL: f64 = 1e-12;

/// log p! (log Γ(p+1)), exact zero at p = 0 and p = 1.
pub fn ln_factorial(p: f64) -> f64 {
    if p <= 1.0 {
        0.0
    } else {
        ln_gamma(p + 1.0)
    }
}

/// A closed form for log M_p valid at every index.
///
/// Every law is log-convex with log M_0 = 0, so its p-th roots are
/// non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum TailLaw {
    /// M_p = p!^s a^p.
    FactorialPower { s: f64, a: f64 },
    /// M_p = exp(coef · p^exponent), exponent > 1.
    PowerExp { coef: f64, exponent: f64 },
    /// log M_p = A p log p + B p + D for p >= threshold and 0 below.
    EntropyLinear {
        p_log_p: f64,
        linear: f64,
        constant: f64,
        threshold: f64,
    },
    /// log M_j = (1/l) · (linear interpolation of the base at l·j).
    Rescaled { base: Box<TailLaw>, l: f64 },
    /// log M_p = (base_1 + base_2) / 2.
    Mean {
        first: Box<TailLaw>,
        second: Box<TailLaw>,
    },
}

/// Leading super-linear term of log M_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lead {
    /// log M_p = O(p).
    Bounded,
    /// A · p log p with A > 0.
    Entropy { coef: f64 },
    /// coef · p^exponent with exponent > 1.
    Power { coef: f64, exponent: f64 },
}

/// log M_p = lead + linear · p + o(p); `linear` is `None` when a
/// super-linear correction below the lead is not tracked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub lead: Lead,
    pub linear: Option<f64>,
}

/// Limit of (log M_p − log N_p) / p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    PlusInfinity,
    MinusInfinity,
    Finite(f64),
    Unknown,
}

/// Asymptotic class of an associated function ω(t) as t → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaGrowth {
    /// ω(t) ~ coef · t^exponent.
    Power { exponent: f64, coef: Option<f64> },
    /// ω(t) ~ coef · (log t)^exponent.
    LogPower { exponent: f64, coef: Option<f64> },
    /// ω is infinite for large t (bounded p-th roots).
    Degenerate,
}

/// log M_p = A p log p + B p + C log p + D + r_p, |r_p| <= remainder(p), p >= from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub p_log_p: f64,
    pub linear: f64,
    pub log: f64,
    pub constant: f64,
    pub from: u64,
}

/// Certified statement about an infinite tail sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailSum {
    Converges { low: f64, high: f64 },
    Diverges,
    Unknown,
}

/// Which series of the two used by (nq) and its Carleman counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    /// Σ 1/μ_p.
    Quotient,
    /// Σ 1/(M_p)^{1/p}.
    Root,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= GROWTH_TOL * a.abs().max(b.abs()).max(1.0)
}

fn cmp_tol(a: f64, b: f64) -> Ordering {
    if close(a, b) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl TailLaw {
    pub fn gevrey(s: f64) -> Self {
        TailLaw::FactorialPower { s, a: 1.0 }
    }

    pub fn rescaled(self, l: f64) -> Self {
        if l == 1.0 {
            return self;
        }
        TailLaw::Rescaled {
            base: Box::new(self),
            l,
        }
    }

    pub fn mean(first: TailLaw, second: TailLaw) -> Self {
        TailLaw::Mean {
            first: Box::new(first),
            second: Box::new(second),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSequence(m.to_string()));
        match self {
            TailLaw::FactorialPower { s, a } => {
                if !(s.is_finite() && *s >= 0.0) {
                    return bad("factorial_power needs s >= 0");
                }
                if !(a.is_finite() && *a > 0.0) {
                    return bad("factorial_power needs a > 0");
                }
            }
            TailLaw::PowerExp { coef, exponent } => {
                if !(coef.is_finite() && *coef > 0.0 && exponent.is_finite() && *exponent > 1.0) {
                    return bad("power_exp needs coef > 0 and exponent > 1");
                }
            }
            TailLaw::EntropyLinear {
                p_log_p,
                linear,
                constant,
                threshold,
            } => {
                if !(p_log_p.is_finite()
                    && *p_log_p > 0.0
                    && linear.is_finite()
                    && constant.is_finite()
                    && threshold.is_finite()
                    && *threshold >= 0.0)
                {
                    return bad("entropy_linear coefficients out of range");
                }
            }
            TailLaw::Rescaled { base, l } => {
                if !(l.is_finite() && *l > 0.0) {
                    return bad("rescaling parameter must be positive");
                }
                base.validate()?;
            }
            TailLaw::Mean { first, second } => {
                first.validate()?;
                second.validate()?;
            }
        }
        Ok(())
    }

    /// log M_p.
    pub fn log_value(&self, p: u64) -> f64 {
        self.log_value_at(p as f64)
    }

    // `x` is always an integer except inside interpolation, which only
    // evaluates bases at integers.
    fn log_value_at(&self, x: f64) -> f64 {
        match self {
            TailLaw::FactorialPower { s, a } => {
                let lf = ln_factorial(x);
                let la = if *a == 1.0 { 0.0 } else { x * a.ln() };
                if *s == 0.0 {
                    la
                } else {
                    s * lf + la
                }
            }
            TailLaw::PowerExp { coef, exponent } => coef * x.powf(*exponent),
            TailLaw::EntropyLinear {
                p_log_p,
                linear,
                constant,
                threshold,
            } => {
                if x < *threshold || x == 0.0 {
                    0.0
                } else {
                    p_log_p * x * x.ln() + linear * x + constant
                }
            }
            TailLaw::Rescaled { base, l } => {
                let y = l * x;
                let k = y.floor();
                let frac = y - k;
                if frac == 0.0 {
                    base.log_value_at(k) / l
                } else {
                    ((1.0 - frac) * base.log_value_at(k) + frac * base.log_value_at(k + 1.0)) / l
                }
            }
            TailLaw::Mean { first, second } => {
                0.5 * (first.log_value_at(x) + second.log_value_at(x))
            }
        }
    }

    /// log μ_p = log M_p − log M_{p−1}, p >= 1.
    pub fn log_quotient(&self, p: u64) -> f64 {
        let x = p as f64;
        match self {
            TailLaw::FactorialPower { s, a } => s * x.ln() + a.ln(),
            TailLaw::PowerExp { coef, exponent } => {
                // k (p^β − (p−1)^β) without cancellation
                coef * x.powf(*exponent) * -(exponent * (-1.0 / x).ln_1p()).exp_m1()
            }
            TailLaw::EntropyLinear {
                p_log_p,
                linear,
                threshold,
                ..
            } if x - 1.0 >= *threshold && p >= 2 => {
                let d = x.ln() + (x - 1.0) * (1.0 / (x - 1.0)).ln_1p();
                p_log_p * d + linear
            }
            TailLaw::Rescaled { base, l } => {
                base.slope_integral(l * (x - 1.0), l * x) / l
            }
            TailLaw::Mean { first, second } => {
                0.5 * (first.log_quotient(p) + second.log_quotient(p))
            }
            _ => self.log_value(p) - self.log_value(p - 1),
        }
    }

    /// ∫_a^b of the step function u ↦ log μ_{ceil(u)}, i.e. the increment of
    /// the linear interpolation of log M between a and b (0 <= a <= b).
    fn slope_integral(&self, a: f64, b: f64) -> f64 {
        let steps = b.ceil() - a.floor();
        if steps > 4096.0 {
            let value = |y: f64| {
                let k = y.floor();
                let f = y - k;
                (1.0 - f) * self.log_value_at(k) + f * self.log_value_at(k + 1.0)
            };
            return value(b) - value(a);
        }
        let mut total = 0.0;
        let mut k = a.floor() as u64 + 1;
        loop {
            let lo = a.max(k as f64 - 1.0);
            let hi = b.min(k as f64);
            if hi > lo {
                total += (hi - lo) * self.log_quotient(k);
            }
            if k as f64 >= b {
                break;
            }
            k += 1;
        }
        total
    }

    /// log M_p / p, p >= 1.
    pub fn log_root(&self, p: u64) -> f64 {
        self.log_value(p) / p as f64
    }

    /// Asymptotic expansion for laws whose lead is at most p log p.
    pub fn expansion(&self) -> Option<Expansion> {
        match self {
            TailLaw::FactorialPower { s, a } => Some(Expansion {
                p_log_p: *s,
                linear: a.ln() - s,
                log: s / 2.0,
                constant: s / 2.0 * (2.0 * std::f64::consts::PI).ln(),
                from: 1,
            }),
            TailLaw::PowerExp { .. } => None,
            TailLaw::EntropyLinear {
                p_log_p,
                linear,
                constant,
                threshold,
            } => Some(Expansion {
                p_log_p: *p_log_p,
                linear: *linear,
                log: 0.0,
                constant: *constant,
                from: (threshold.ceil() as u64).max(1),
            }),
            TailLaw::Rescaled { base, l } => {
                let e = base.expansion()?;
                let ll = l.ln();
                let start = (e.from.max(1) as f64 / l).ceil() as u64;
                Some(Expansion {
                    p_log_p: e.p_log_p,
                    linear: e.linear + e.p_log_p * ll,
                    log: e.log / l,
                    constant: (e.log * ll + e.constant) / l,
                    from: start.max(1),
                })
            }
            TailLaw::Mean { first, second } => {
                let a = first.expansion()?;
                let b = second.expansion()?;
                Some(Expansion {
                    p_log_p: 0.5 * (a.p_log_p + b.p_log_p),
                    linear: 0.5 * (a.linear + b.linear),
                    log: 0.5 * (a.log + b.log),
                    constant: 0.5 * (a.constant + b.constant),
                    from: a.from.max(b.from),
                })
            }
        }
    }

    /// Bound on |log M_p − expansion(p)|, valid for p >= expansion().from,
    /// non-increasing in p.
    pub fn remainder(&self, p: u64) -> f64 {
        let pf = p.max(1) as f64;
        match self {
            TailLaw::FactorialPower { s, .. } => s / (12.0 * pf),
            TailLaw::PowerExp { .. } => f64::INFINITY,
            TailLaw::EntropyLinear { .. } => 0.0,
            TailLaw::Rescaled { base, l } => {
                let Some(e) = base.expansion() else {
                    return f64::INFINITY;
                };
                let k = (l * pf).floor().max(1.0);
                let curvature = (e.p_log_p / k + e.log.abs() / (k * k)) / 8.0;
                (base.remainder(k as u64) + curvature) / l
            }
            TailLaw::Mean { first, second } => 0.5 * (first.remainder(p) + second.remainder(p)),
        }
    }

    /// (coef, exponent) with log M_p >= coef · p^exponent for every p, for
    /// laws led by a power term.
    pub fn power_floor(&self) -> Option<(f64, f64)> {
        match self {
            TailLaw::PowerExp { coef, exponent } => Some((*coef, *exponent)),
            TailLaw::Rescaled { base, l } => {
                let (k, b) = base.power_floor()?;
                Some((k * l.powf(b - 1.0), b))
            }
            TailLaw::Mean { first, second } => {
                let (k1, b1) = first.power_floor()?;
                let (k2, b2) = second.power_floor()?;
                close(b1, b2).then(|| (0.5 * (k1 + k2), b1.min(b2)))
            }
            _ => None,
        }
    }

    pub fn growth(&self) -> Growth {
        if let Some(e) = self.expansion() {
            let lead = if e.p_log_p > 0.0 {
                Lead::Entropy { coef: e.p_log_p }
            } else {
                Lead::Bounded
            };
            return Growth {
                lead,
                linear: Some(e.linear),
            };
        }
        match self {
            TailLaw::PowerExp { coef, exponent } => Growth {
                lead: Lead::Power {
                    coef: *coef,
                    exponent: *exponent,
                },
                linear: Some(0.0),
            },
            TailLaw::Rescaled { base, l } => {
                let g = base.growth();
                match g.lead {
                    Lead::Power { coef, exponent } => Growth {
                        lead: Lead::Power {
                            coef: coef * l.powf(exponent - 1.0),
                            exponent,
                        },
                        // interpolation error is O(p^{exponent-2})
                        linear: if exponent < 3.0 { g.linear } else { None },
                    },
                    _ => g,
                }
            }
            TailLaw::Mean { first, second } => {
                let a = first.growth();
                let b = second.growth();
                mean_growth(a, b)
            }
            _ => unreachable!("laws with an expansion handled above"),
        }
    }

    /// Certified bound on Σ_{p>n} of the chosen series' terms.
    pub fn tail_sum(&self, series: Series, n: u64) -> TailSum {
        if let TailLaw::FactorialPower { s, a } = self {
            if series == Series::Quotient {
                // exact terms p^{-s}/a
                let c = 1.0 / a;
                return power_series_tail(c, c, *s, n.max(1));
            }
        }
        if let Some(e) = self.expansion() {
            // explicit terms until the envelope is valid
            let start = n.max(e.from + 1).max(3);
            let mut explicit = 0.0;
            for p in (n + 1)..=start {
                explicit += self.term(series, p);
            }
            let nf = start as f64;
            let a = e.p_log_p;
            let (lo, hi) = match series {
                Series::Root => {
                    let eps = (e.log.abs() * (nf + 1.0).ln() + e.constant.abs()
                        + self.remainder(start + 1))
                        / (nf + 1.0);
                    ((-e.linear - eps).exp(), (-e.linear + eps).exp())
                }
                Series::Quotient => {
                    let eps = (a / 2.0 + e.log.abs()) / nf + 2.0 * self.remainder(start);
                    ((-a - e.linear - eps).exp(), (-a - e.linear + eps).exp())
                }
            };
            return match power_series_tail(lo, hi, a, start) {
                TailSum::Converges { low, high } => TailSum::Converges {
                    low: low + explicit,
                    high: high + explicit,
                },
                other => other,
            };
        }
        if let Some((k, beta)) = self.power_floor() {
            // terms <= exp(-k (p - shift)^{beta-1}), decreasing
            let gamma = beta - 1.0;
            let shift = match series {
                Series::Root => 0.0,
                Series::Quotient => 1.0,
            };
            let start = n.max(2);
            let mut explicit = 0.0;
            for p in (n + 1)..=start {
                explicit += self.term(series, p);
            }
            let x0 = start as f64 - shift;
            let z = k * x0.powf(gamma);
            let integral = match checked_gamma_ui(1.0 / gamma, z) {
                Ok(g) => g / (gamma * k.powf(1.0 / gamma)),
                Err(_) => return TailSum::Unknown,
            };
            if !integral.is_finite() {
                return TailSum::Unknown;
            }
            return TailSum::Converges {
                low: explicit,
                high: explicit + integral,
            };
        }
        TailSum::Unknown
    }

    /// Term p of the chosen series.
    pub fn term(&self, series: Series, p: u64) -> f64 {
        match series {
            Series::Quotient => (-self.log_quotient(p)).exp(),
            Series::Root => (-self.log_root(p)).exp(),
        }
    }
}

fn mean_growth(a: Growth, b: Growth) -> Growth {
    let avg = |x: Option<f64>, y: Option<f64>| Some(0.5 * (x? + y?));
    match (a.lead, b.lead) {
        (Lead::Power { coef: k1, exponent: b1 }, Lead::Power { coef: k2, exponent: b2 }) => {
            match cmp_tol(b1, b2) {
                Ordering::Equal => Growth {
                    lead: Lead::Power {
                        coef: 0.5 * (k1 + k2),
                        exponent: b1,
                    },
                    linear: avg(a.linear, b.linear),
                },
                Ordering::Greater => Growth {
                    lead: Lead::Power {
                        coef: 0.5 * k1,
                        exponent: b1,
                    },
                    linear: None,
                },
                Ordering::Less => Growth {
                    lead: Lead::Power {
                        coef: 0.5 * k2,
                        exponent: b2,
                    },
                    linear: None,
                },
            }
        }
        (Lead::Power { coef, exponent }, other) | (other, Lead::Power { coef, exponent }) => {
            let linear = match other {
                Lead::Bounded => avg(a.linear, b.linear),
                _ => None,
            };
            Growth {
                lead: Lead::Power {
                    coef: 0.5 * coef,
                    exponent,
                },
                linear,
            }
        }
        (x, y) => {
            let ca = match x {
                Lead::Entropy { coef } => coef,
                _ => 0.0,
            };
            let cb = match y {
                Lead::Entropy { coef } => coef,
                _ => 0.0,
            };
            let c = 0.5 * (ca + cb);
            Growth {
                lead: if c > 0.0 {
                    Lead::Entropy { coef: c }
                } else {
                    Lead::Bounded
                },
                linear: avg(a.linear, b.linear),
            }
        }
    }
}

/// Σ_{p>n} c p^{-e} with lower and upper coefficients, by the integral test.
fn power_series_tail(c_lo: f64, c_hi: f64, e: f64, n: u64) -> TailSum {
    if e <= 1.0 + GROWTH_TOL {
        return TailSum::Diverges;
    }
    let nf = n as f64;
    TailSum::Converges {
        low: c_lo * (nf + 1.0).powf(1.0 - e) / (e - 1.0),
        high: c_hi * nf.powf(1.0 - e) / (e - 1.0),
    }
}

impl Lead {
    fn rank(&self) -> u8 {
        match self {
            Lead::Bounded => 0,
            Lead::Entropy { .. } => 1,
            Lead::Power { .. } => 2,
        }
    }

    /// Compare growth of leads; `Equal` means the leading terms cancel.
    pub fn compare(&self, other: &Lead) -> Ordering {
        match (self, other) {
            (Lead::Entropy { coef: a }, Lead::Entropy { coef: b }) => cmp_tol(*a, *b),
            (
                Lead::Power {
                    coef: k1,
                    exponent: b1,
                },
                Lead::Power {
                    coef: k2,
                    exponent: b2,
                },
            ) => match cmp_tol(*b1, *b2) {
                Ordering::Equal => cmp_tol(*k1, *k2),
                o => o,
            },
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Growth {
    /// Limit of (log M_p − log N_p)/p for M with growth `self`, N with `other`.
    pub fn scaled_difference_limit(&self, other: &Growth) -> Limit {
        match self.lead.compare(&other.lead) {
            Ordering::Greater => Limit::PlusInfinity,
            Ordering::Less => Limit::MinusInfinity,
            Ordering::Equal => match (self.linear, other.linear) {
                (Some(a), Some(b)) => Limit::Finite(a - b),
                _ => Limit::Unknown,
            },
        }
    }

    /// Growth of the shifted sequence p ↦ log M_{p+1}.
    pub fn shifted(&self) -> Growth {
        match self.lead {
            Lead::Power { coef, exponent } => {
                let linear = if exponent < 2.0 - GROWTH_TOL {
                    self.linear
                } else if close(exponent, 2.0) {
                    self.linear.map(|b| b + 2.0 * coef)
                } else {
                    None
                };
                Growth {
                    lead: self.lead,
                    linear,
                }
            }
            _ => *self,
        }
    }

    /// lim (log M_p)/p = +∞.
    pub fn root_unbounded(&self) -> bool {
        !matches!(self.lead, Lead::Bounded)
    }

    /// Asymptotic class of the associated function.
    pub fn omega(&self) -> OmegaGrowth {
        match self.lead {
            Lead::Bounded => OmegaGrowth::Degenerate,
            Lead::Entropy { coef } => OmegaGrowth::Power {
                exponent: 1.0 / coef,
                coef: self.linear.map(|b| coef * (-1.0 - b / coef).exp()),
            },
            Lead::Power { coef, exponent } => {
                let delta = exponent / (exponent - 1.0);
                OmegaGrowth::LogPower {
                    exponent: delta,
                    coef: Some((exponent - 1.0) * coef * (coef * exponent).powf(-delta)),
                }
            }
        }
    }

    /// Convergence of Σ 1/μ_p (equivalently Σ 1/(M_p)^{1/p} for log-convex M).
    pub fn summable(&self) -> bool {
        match self.lead {
            Lead::Bounded => false,
            Lead::Entropy { coef } => coef > 1.0 + GROWTH_TOL,
            Lead::Power { .. } => true,
        }
    }
}

/// Whether log M^x_{j+k} − log M^{y1}_j − log M^{y2}_k = O(j+k);
/// `None` when lower-order information is missing.
pub fn mg_bounded(x: &Growth, y1: &Growth, y2: &Growth) -> Option<bool> {
    match x.lead {
        Lead::Bounded => Some(true),
        Lead::Entropy { coef } => {
            let ok = |y: &Growth| match y.lead {
                Lead::Bounded => false,
                Lead::Entropy { coef: c } => cmp_tol(coef, c) != Ordering::Greater,
                Lead::Power { .. } => true,
            };
            Some(ok(y1) && ok(y2))
        }
        Lead::Power { coef, exponent } => {
            // Hölder bound: min over u of K1 u^β + K2 (1-u)^β
            let weight = |y: &Growth| -> Option<f64> {
                match y.lead {
                    Lead::Power {
                        coef: k,
                        exponent: b,
                    } => match cmp_tol(b, exponent) {
                        Ordering::Equal => Some(k.powf(-1.0 / (exponent - 1.0))),
                        Ordering::Greater => Some(0.0),
                        Ordering::Less => None,
                    },
                    _ => None,
                }
            };
            let (Some(w1), Some(w2)) = (weight(y1), weight(y2)) else {
                return Some(false);
            };
            let w = w1 + w2;
            if w == 0.0 {
                return Some(true);
            }
            let bound = w.powf(-(exponent - 1.0));
            match cmp_tol(coef, bound) {
                Ordering::Less => Some(true),
                Ordering::Greater => Some(false),
                Ordering::Equal => {
                    if x.linear.is_some() && y1.linear.is_some() && y2.linear.is_some() {
                        Some(true)
                    } else {
                        None
                    }
                }
            }
        }
    }
}

impl OmegaGrowth {
    fn rank(&self) -> u8 {
        match self {
            OmegaGrowth::LogPower { .. } => 0,
            OmegaGrowth::Power { .. } => 1,
            OmegaGrowth::Degenerate => 2,
        }
    }

    /// Limit class of ω_self(t)/ω_other(t): `Greater` for ∞, `Less` for 0,
    /// `Equal` for a finite positive limit; `None` if undecided.
    pub fn compare(&self, other: &OmegaGrowth) -> Option<Ordering> {
        use OmegaGrowth::*;
        match (self, other) {
            (Degenerate, _) | (_, Degenerate) => None,
            (
                Power {
                    exponent: e1,
                    coef: c1,
                },
                Power {
                    exponent: e2,
                    coef: c2,
                },
            )
            | (
                LogPower {
                    exponent: e1,
                    coef: c1,
                },
                LogPower {
                    exponent: e2,
                    coef: c2,
                },
            ) => match cmp_tol(*e1, *e2) {
                Ordering::Equal => match (c1, c2) {
                    (Some(_), Some(_)) => Some(Ordering::Equal),
                    _ => None,
                },
                o => Some(o),
            },
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}
