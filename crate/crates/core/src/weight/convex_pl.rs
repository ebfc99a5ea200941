//! Convex piecewise-linear functions on the real line with exact
//! Legendre-Fenchel conjugation.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::verdict::num;

/// Relative tolerance for slope comparisons.
pub const SLOPE_TOL: f64 = 1e-12;

/// A convex piecewise-linear function.
///
/// Between consecutive breakpoints the function is affine; outside the
/// breakpoint range it continues with `left_slope` / `right_slope`. An
/// infinite boundary slope marks the end of the domain (the function is
/// +∞ beyond the outermost breakpoint).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPL {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // slopes[i] is the slope on [xs[i], xs[i+1]]; kept alongside the
    // values so that conjugation never recomputes a slope from a quotient
    slopes: Vec<f64>,
    left_slope: f64,
    right_slope: f64,
}

fn slope_le(a: f64, b: f64) -> bool {
    a <= b + SLOPE_TOL * a.abs().max(b.abs()).max(1.0)
}

fn slope_eq(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && b.is_finite() && (a - b).abs() <= SLOPE_TOL * a.abs().max(b.abs()).max(1.0))
}

impl ConvexPL {
    /// Build from breakpoints (s, v) and boundary slopes.
    pub fn new(breakpoints: Vec<(f64, f64)>, left_slope: f64, right_slope: f64) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidPiecewise("at least one breakpoint required".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = breakpoints.into_iter().unzip();
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPiecewise("breakpoints must be finite".into()));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPiecewise(format!(
                "breakpoint abscissae not strictly increasing at {}",
                i + 1
            )));
        }
        if left_slope.is_nan() || right_slope.is_nan() || left_slope == f64::INFINITY || right_slope == f64::NEG_INFINITY {
            return Err(Error::InvalidPiecewise("boundary slopes out of range".into()));
        }
        let slopes = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect();
        Self::from_parts(xs, ys, slopes, left_slope, right_slope)
    }

    fn from_parts(xs: Vec<f64>, ys: Vec<f64>, slopes: Vec<f64>, left_slope: f64, right_slope: f64) -> Result<Self> {
        let f = ConvexPL {
            xs,
            ys,
            slopes,
            left_slope,
            right_slope,
        };
        if let Some(i) = f.first_concave_breakpoint() {
            return Err(Error::NotConvex(i));
        }
        Ok(f)
    }

    /// Affine function x ↦ slope·x + intercept.
    pub fn affine(slope: f64, intercept: f64) -> Self {
        ConvexPL {
            xs: vec![0.0],
            ys: vec![intercept],
            slopes: vec![],
            left_slope: slope,
            right_slope: slope,
        }
    }

    /// Linear interpolation of (i, values[i]) on [0, n−1], +∞ outside.
    pub fn interpolating(values: &[f64]) -> Result<Self> {
        let xs: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let slopes = values.windows(2).map(|w| w[1] - w[0]).collect();
        Self::from_parts(xs, values.to_vec(), slopes, f64::NEG_INFINITY, f64::INFINITY)
    }

    fn all_slopes(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.left_slope)
            .chain(self.slopes.iter().copied())
            .chain(std::iter::once(self.right_slope))
    }

    fn first_concave_breakpoint(&self) -> Option<usize> {
        let s: Vec<f64> = self.all_slopes().collect();
        s.windows(2).position(|w| !slope_le(w[0], w[1]))
    }

    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        self.xs.iter().copied().zip(self.ys.iter().copied()).collect()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn segment_slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn left_slope(&self) -> f64 {
        self.left_slope
    }

    pub fn right_slope(&self) -> f64 {
        self.right_slope
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Closed interval where the function is finite.
    pub fn domain(&self) -> (f64, f64) {
        let lo = if self.left_slope == f64::NEG_INFINITY {
            self.xs[0]
        } else {
            f64::NEG_INFINITY
        };
        let hi = if self.right_slope == f64::INFINITY {
            *self.xs.last().unwrap()
        } else {
            f64::INFINITY
        };
        (lo, hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] {
            if self.left_slope == f64::NEG_INFINITY {
                return f64::INFINITY;
            }
            return self.ys[0] + self.left_slope * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            if x == self.xs[n - 1] {
                return self.ys[n - 1];
            }
            if self.right_slope == f64::INFINITY {
                return f64::INFINITY;
            }
            return self.ys[n - 1] + self.right_slope * (x - self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|&b| b <= x) - 1;
        if x == self.xs[i] {
            return self.ys[i];
        }
        self.ys[i] + self.slopes[i] * (x - self.xs[i])
    }

    /// Right derivative at x.
    pub fn slope_at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] {
            return self.left_slope;
        }
        if x >= self.xs[n - 1] {
            return self.right_slope;
        }
        let i = self.xs.partition_point(|&b| b <= x) - 1;
        self.slopes[i]
    }

    /// Remove breakpoints where the slope does not change.
    pub fn canonical(&self) -> Self {
        let n = self.xs.len();
        let before = |i: usize| if i == 0 { self.left_slope } else { self.slopes[i - 1] };
        let after = |i: usize| if i + 1 == n { self.right_slope } else { self.slopes[i] };
        let kept: Vec<usize> = (0..n).filter(|&i| !slope_eq(before(i), after(i))).collect();
        if kept.is_empty() {
            return ConvexPL::affine(self.left_slope, self.eval(0.0));
        }
        ConvexPL {
            xs: kept.iter().map(|&i| self.xs[i]).collect(),
            ys: kept.iter().map(|&i| self.ys[i]).collect(),
            // every merged run has one slope; keep the stored value
            slopes: kept[..kept.len() - 1].iter().map(|&i| self.slopes[i]).collect(),
            left_slope: self.left_slope,
            right_slope: self.right_slope,
        }
    }

    /// Legendre-Fenchel conjugate f*(σ) = sup_x (σx − f(x)).
    ///
    /// Breakpoints of f* are the slopes of f and its slopes are the
    /// breakpoints of f; the input is merged to canonical form first.
    pub fn conjugate(&self) -> Self {
        let f = self.canonical();
        let n = f.xs.len();
        let t: Vec<f64> = f.all_slopes().collect(); // t[0] = left, t[n] = right
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        let mut slopes = Vec::with_capacity(n);
        // breakpoint t[i] of f* touches f at xs[i] (and xs[i-1])
        for i in 0..=n {
            if !t[i].is_finite() {
                continue;
            }
            let k = if i < n { i } else { n - 1 };
            let v = t[i] * f.xs[k] - f.ys[k];
            if !xs.is_empty() {
                slopes.push(f.xs[i - 1]);
            }
            xs.push(t[i]);
            ys.push(v);
        }
        let left = if t[0] == f64::NEG_INFINITY { f.xs[0] } else { f64::NEG_INFINITY };
        let right = if t[n] == f64::INFINITY { f.xs[n - 1] } else { f64::INFINITY };
        if xs.is_empty() {
            // f is finite at a single point: f* is affine
            return ConvexPL::affine(f.xs[0], -f.ys[0]);
        }
        ConvexPL {
            xs,
            ys,
            slopes,
            left_slope: left,
            right_slope: right,
        }
    }

    /// f + indicator of [a, ∞).
    pub fn restrict_from(&self, a: f64) -> Result<Self> {
        let (lo, hi) = self.domain();
        if a > hi {
            return Err(Error::InvalidPiecewise(format!("restriction point {a} beyond the domain")));
        }
        if a <= lo && self.left_slope == f64::NEG_INFINITY {
            return Ok(self.clone());
        }
        let va = self.eval(a);
        let keep = self.xs.partition_point(|&x| x <= a);
        let mut xs = vec![a];
        let mut ys = vec![va];
        let mut slopes = Vec::new();
        if keep < self.xs.len() {
            slopes.push(self.slope_at(a));
            xs.extend_from_slice(&self.xs[keep..]);
            ys.extend_from_slice(&self.ys[keep..]);
            slopes.extend_from_slice(&self.slopes[keep..]);
        }
        Ok(ConvexPL {
            xs,
            ys,
            slopes,
            left_slope: f64::NEG_INFINITY,
            right_slope: self.right_slope,
        })
    }

    /// Breakpoint-for-breakpoint comparison of canonical forms.
    pub fn approx_eq(&self, other: &ConvexPL, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        let close = |x: f64, y: f64| x == y || (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
        a.xs.len() == b.xs.len()
            && close(a.left_slope, b.left_slope)
            && close(a.right_slope, b.right_slope)
            && a.xs.iter().zip(&b.xs).all(|(x, y)| close(*x, *y))
            && a.ys.iter().zip(&b.ys).all(|(x, y)| close(*x, *y))
    }
}

fn ext_from_value(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
            "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Serialize, Deserialize)]
struct RawPL {
    breakpoints: Vec<(f64, f64)>,
    left_slope: Value,
    right_slope: Value,
}

impl Serialize for ConvexPL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPL {
            breakpoints: self.breakpoints(),
            left_slope: num(self.left_slope),
            right_slope: num(self.right_slope),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPL::deserialize(d)?;
        let l = ext_from_value(&raw.left_slope).ok_or_else(|| D::Error::custom("bad left_slope"))?;
        let r = ext_from_value(&raw.right_slope).ok_or_else(|| D::Error::custom("bad right_slope"))?;
        ConvexPL::new(raw.breakpoints, l, r).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_on_half_line() {
        // φ(y) = a y, y >= 0
        let f = ConvexPL::new(vec![(0.0, 0.0)], f64::NEG_INFINITY, 2.0).unwrap();
        let g = f.conjugate();
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(2.0), 0.0);
        assert_eq!(g.eval(2.5), f64::INFINITY);
        assert_eq!(g.eval(-3.0), 0.0);
        assert!(f.approx_eq(&g.conjugate(), 1e-12));
    }

    #[test]
    fn rejects_concave() {
        let e = ConvexPL::new(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)], 0.0, 5.0).unwrap_err();
        assert_eq!(e, Error::NotConvex(1));
    }

    #[test]
    fn envelope_conjugate_is_sequence() {
        // f = interpolation of a convex sequence; f* is the envelope of
        // lines p s − L_p and f** recovers the sequence
        let l = [0.0, 0.0, 0.7, 1.8, 3.2, 5.0];
        let f = ConvexPL::interpolating(&l).unwrap();
        let phi = f.conjugate();
        for s in [-1.0, 0.0, 0.3, 1.0, 2.5, 10.0] {
            let want = (0..l.len()).map(|p| p as f64 * s - l[p]).fold(f64::NEG_INFINITY, f64::max);
            assert!((phi.eval(s) - want).abs() < 1e-12);
        }
        let back = phi.conjugate();
        for (p, v) in l.iter().enumerate() {
            assert!((back.eval(p as f64) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn json_shape() {
        let f = ConvexPL::new(vec![(0.0, 0.0), (1.0, 1.0)], f64::NEG_INFINITY, 3.0).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"breakpoints":[[0.0,0.0],[1.0,1.0]],"left_slope":"-inf","right_slope":3.0}"#);
        let back: ConvexPL = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn restriction() {
        let f = ConvexPL::new(vec![(-2.0, 4.0), (0.0, 0.0), (2.0, 4.0)], -3.0, 3.0).unwrap();
        let g = f.restrict_from(-1.0).unwrap();
        assert_eq!(g.eval(-1.5), f64::INFINITY);
        assert_eq!(g.eval(-1.0), 2.0);
        assert_eq!(g.eval(1.0), 2.0);
    }

    fn random_pl() -> impl Strategy<Value = ConvexPL> {
        (
            -10.0f64..10.0,
            prop::collection::vec((0.01f64..3.0, 0.001f64..2.0), 1..64),
            -5.0f64..5.0,
            -2.0f64..2.0,
            0u8..4,
        )
            .prop_map(|(x0, steps, s0, y0, ends)| {
                let mut pts = vec![(x0, y0)];
                let mut slope = s0;
                let mut x = x0;
                let mut y = y0;
                let mut slopes = vec![];
                for (dx, ds) in steps {
                    slope += ds;
                    slopes.push(slope);
                    x += dx;
                    y += slope * dx;
                    pts.push((x, y));
                }
                let left = if ends & 1 == 0 { f64::NEG_INFINITY } else { s0 - 1.0 };
                let right = if ends & 2 == 0 { f64::INFINITY } else { slope + 0.5 };
                ConvexPL::new(pts, left, right).unwrap()
            })
    }

    proptest! {
        #[test]
        fn involution(f in random_pl()) {
            let g = f.conjugate().conjugate();
            prop_assert!(f.approx_eq(&g, 1e-12), "{:?}\n{:?}", f.canonical(), g.canonical());
        }

        #[test]
        fn fenchel_young(f in random_pl(), x in -10.0f64..80.0, s in -5.0f64..150.0) {
            let g = f.conjugate();
            let (fx, gs) = (f.eval(x), g.eval(s));
            if fx.is_finite() && gs.is_finite() {
                prop_assert!(fx + gs >= x * s - 1e-9 * (x * s).abs().max(1.0));
            }
        }
    }
}
