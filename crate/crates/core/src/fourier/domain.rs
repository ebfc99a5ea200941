//! Compact boxes and functions sampled on uniform grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 1 << 14;
/// Grid span as a multiple of the support width.
pub const SPAN_FACTOR: f64 = 4.0;
/// Minimum distance, in grid steps, between the support and the grid ends.
pub const SUPPORT_MARGIN: f64 = 10.0;
const VANISH_TOL: f64 = 1e-14;

/// K = [a_1, b_1] × … × [a_r, b_r].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactBox {
    intervals: Vec<(f64, f64)>,
}

impl CompactBox {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Precondition("a box needs at least one axis".into()));
        }
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return Err(Error::Precondition(format!("invalid interval [{a}, {b}]")));
            }
        }
        Ok(CompactBox { intervals })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// λ_r(K).
    pub fn volume(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).product()
    }

    /// Width and center of the first axis.
    pub fn width(&self) -> f64 {
        self.intervals[0].1 - self.intervals[0].0
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.intervals[0].0 + self.intervals[0].1)
    }

    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = self.intervals[0];
        a <= x && x <= b
    }
}

/// H_K(t) = sup_{s ∈ K} ⟨t, s⟩.
pub fn support_function(k: &CompactBox, t: &[f64]) -> Result<f64> {
    if t.len() != k.dim() {
        return Err(Error::Precondition(format!(
            "t has dimension {}, K has dimension {}",
            t.len(),
            k.dim()
        )));
    }
    Ok(k.intervals.iter().zip(t).map(|(&(a, b), &ti)| (a * ti).max(b * ti)).sum())
}

/// Real samples f(x_0 + kΔ), k = 0..n−1, of a function supported in a box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub label: String,
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    support: CompactBox,
}

/// (x_0, Δ) of the default grid around a support.
pub fn grid_for(support: &CompactBox, n: usize) -> Result<(f64, f64)> {
    let width = support.width();
    if width <= 0.0 {
        return Err(Error::Precondition("support must have positive width".into()));
    }
    let span = SPAN_FACTOR * width;
    Ok((support.center() - 0.5 * span, span / n as f64))
}

impl SampledFunction {
    pub fn new(
        label: impl Into<String>,
        x0: f64,
        dx: f64,
        values: Vec<f64>,
        support: CompactBox,
    ) -> Result<Self> {
        let n = values.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Precondition(format!("grid size {n} is not a power of two")));
        }
        if support.dim() != 1 {
            return Err(Error::Precondition("sampled functions are one-dimensional".into()));
        }
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("grid and values must be finite".into()));
        }
        let (a, b) = support.intervals()[0];
        let end = x0 + dx * (n - 1) as f64;
        if a - x0 < SUPPORT_MARGIN * dx || end - b < SUPPORT_MARGIN * dx {
            return Err(Error::Precondition(format!(
                "support [{a}, {b}] needs a margin of {SUPPORT_MARGIN} steps inside [{x0}, {end}]"
            )));
        }
        let f = SampledFunction {
            label: label.into(),
            x0,
            dx,
            values,
            support,
        };
        let scale = f.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let outside = (0..n)
            .filter(|&k| !f.support.contains(f.x(k)))
            .fold(0.0f64, |m, k| m.max(f.values[k].abs()));
        if outside > VANISH_TOL * scale {
            return Err(Error::Precondition(format!(
                "values reach {outside:e} outside the support"
            )));
        }
        Ok(f)
    }

    /// Samples of `f` inside the support on the default grid, zero outside.
    pub fn sample(
        label: impl Into<String>,
        support: CompactBox,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let (x0, dx) = grid_for(&support, n)?;
        let values = (0..n)
            .map(|k| {
                let x = x0 + dx * k as f64;
                if support.contains(x) {
                    f(x)
                } else {
                    0.0
                }
            })
            .collect();
        Self::new(label, x0, dx, values, support)
    }

    pub fn zero(support: CompactBox, n: usize) -> Result<Self> {
        Self::sample("zero", support, n, |_| 0.0)
    }

    pub fn indicator(support: CompactBox, n: usize) -> Result<Self> {
        Self::sample("indicator", support, n, |_| 1.0)
    }

    /// exp(−1/(1−u²)) with u the affine coordinate mapping K onto [−1, 1].
    pub fn standard_bump(support: CompactBox, n: usize) -> Result<Self> {
        let (c, r) = (support.center(), 0.5 * support.width());
        let label = format!("standard_bump[{}, {}]", c - r, c + r);
        Self::sample(label, support, n, move |x| {
            let u = (x - c) / r;
            if u * u < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        })
    }

    /// c · f.
    pub fn scaled(&self, c: f64) -> Self {
        SampledFunction {
            label: format!("{c}*{}", self.label),
            values: self.values.iter().map(|v| c * v).collect(),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + self.dx * k as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &CompactBox {
        &self.support
    }

    /// ∫ |f|² dx by the rectangle rule.
    pub fn l2_norm_sq(&self) -> f64 {
        self.dx * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "value"])?;
        for (k, v) in self.values.iter().enumerate() {
            w.write_record([self.x(k).to_string(), v.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads `x,value` rows on a uniform grid.
    pub fn from_csv(label: impl Into<String>, text: &str, support: CompactBox) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for row in r.records() {
            let row = row?;
            let field = |i: usize| -> Result<f64> {
                row.get(i)
                    .ok_or_else(|| Error::Parse(format!("row {} has fewer than 2 fields", xs.len() + 1)))?
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", xs.len() + 1)))
            };
            let (x, v) = (field(0)?, field(1)?);
            xs.push(x);
            values.push(v);
        }
        if xs.len() < 2 {
            return Err(Error::Parse("need at least two samples".into()));
        }
        let dx = xs[1] - xs[0];
        for (k, x) in xs.iter().enumerate() {
            if (x - (xs[0] + dx * k as f64)).abs() > 1e-9 * dx.abs().max(1.0) {
                return Err(Error::Parse(format!("x is not uniformly spaced at row {}", k + 1)));
            }
        }
        Self::new(label, xs[0], dx, values, support)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_function_examples() {
        let k = CompactBox::interval(-1.0, 2.0).unwrap();
        assert_eq!(support_function(&k, &[1.0]).unwrap(), 2.0);
        assert_eq!(support_function(&k, &[-1.0]).unwrap(), 1.0);
        let point = CompactBox::interval(0.0, 0.0).unwrap();
        assert_eq!(support_function(&point, &[5.0]).unwrap(), 0.0);
        let square = CompactBox::new(vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(support_function(&square, &[1.0, 1.0]).unwrap(), 2.0);
        assert!(support_function(&square, &[1.0]).is_err());
    }

    #[test]
    fn bump_grid_layout() {
        let k = CompactBox::interval(-1.0, 1.0).unwrap();
        let f = SampledFunction::standard_bump(k, DEFAULT_POINTS).unwrap();
        assert_eq!(f.x0(), -4.0);
        assert!((f.dx() - 8.0 / DEFAULT_POINTS as f64).abs() < 1e-15);
        let mid = f.values()[DEFAULT_POINTS / 2];
        assert!((mid - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_leaking_values() {
        let k = CompactBox::interval(-1.0, 1.0).unwrap();
        let (x0, dx) = grid_for(&k, 64).unwrap();
        let values = vec![1.0; 64];
        assert!(SampledFunction::new("flat", x0, dx, values, k.clone()).is_err());
        assert!(SampledFunction::indicator(k.clone(), 63).is_err());
        // support too close to the grid end
        assert!(SampledFunction::new("tight", -1.0, 0.01, vec![0.0; 256], k).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let k = CompactBox::interval(-1.0, 1.0).unwrap();
        let f = SampledFunction::standard_bump(k.clone(), 256).unwrap();
        let g = SampledFunction::from_csv("g", &f.to_csv().unwrap(), k).unwrap();
        assert_eq!(g.len(), 256);
        for (a, b) in f.values().iter().zip(g.values()) {
            assert_eq!(a, b);
        }
    }
}
