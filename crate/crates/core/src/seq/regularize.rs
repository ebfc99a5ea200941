//! The log-convex minorant M^lc and the increasing-root minorant M^I.

use super::sequence::{LogWeightSequence, Tail, EXACT_TOL};
use crate::error::Result;

/// Largest prefix a tail junction may be pushed to before giving up on it.
const JUNCTION_CAP: usize = 1 << 20;

/// Indices of the lower convex hull vertices of (p, values[p]).
pub fn lower_hull(values: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(values.len());
    for (i, &y) in values.iter().enumerate() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or above the chord a -> i
            let lhs = (values[b] - values[a]) * (i - a) as f64;
            let rhs = (y - values[a]) * (b - a) as f64;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Values of the lower convex hull at every integer index.
pub fn hull_values(values: &[f64]) -> Vec<f64> {
    let hull = lower_hull(values);
    let mut out = vec![0.0; values.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (values[b] - values[a]) / (b - a) as f64;
        for (k, slot) in out.iter_mut().enumerate().take(b).skip(a) {
            *slot = values[a] + slope * (k - a) as f64;
        }
    }
    let last = *hull.last().expect("non-empty");
    out[last] = values[last];
    out
}

/// Brute-force log-convex minorant from the inf over chords through
/// (k, L_k) and (l, L_l), k <= j <= l.
pub fn lc_minorant_pairwise(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|j| {
            let mut best = values[j];
            for k in 0..=j {
                for l in j..n {
                    if l == k {
                        continue;
                    }
                    let t = (j - k) as f64 / (l - k) as f64;
                    best = best.min((1.0 - t) * values[k] + t * values[l]);
                }
            }
            best
        })
        .collect()
}

/// Lower convex hull of (p, log M_p).
///
/// With a tail law, the hull of the prefix is joined to the law once the
/// last hull slope no longer exceeds the law's quotients; the output keeps
/// the law from the junction on.
pub fn lc_minorant(seq: &LogWeightSequence) -> Result<LogWeightSequence> {
    let label = format!("{}^lc", seq.label());
    let Some(tail) = seq.tail() else {
        return LogWeightSequence::prefix_only(label, hull_values(seq.log_values()));
    };
    let law = &tail.law;
    let mut reach = seq.pmax().max(tail.start).max(2);
    loop {
        let values = seq.materialize(reach).expect("tail covers the range");
        let hull = hull_values(&values);
        let h = lower_hull(&values);
        let last_slope = if h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            (values[b] - values[a]) / (b - a) as f64
        } else {
            f64::NEG_INFINITY
        };
        if last_slope <= law.log_quotient(reach as u64 + 1) + EXACT_TOL {
            let start = junction(&values, &hull).max(tail.start);
            let keep = seq.pmax().max(start).max(2);
            let out = hull[..=keep.min(reach)].to_vec();
            return LogWeightSequence::new(label, out, Some(Tail::from(law.clone(), start)));
        }
        if reach >= JUNCTION_CAP {
            return LogWeightSequence::prefix_only(label, hull_values(seq.log_values()));
        }
        reach *= 2;
    }
}

// First index from which the hull coincides with the input.
fn junction(values: &[f64], hull: &[f64]) -> usize {
    let tol = |v: f64| EXACT_TOL * v.abs().max(1.0);
    let mut start = values.len();
    while start > 0 && (values[start - 1] - hull[start - 1]).abs() <= tol(values[start - 1]) {
        start -= 1;
    }
    start
}

/// L^I_k = k · inf_{j>=k} L_j / j.
///
/// A tail law is convex with L_0 = 0, so its roots are already
/// non-decreasing and the infimum only involves the prefix before the tail.
pub fn increasing_root_minorant(seq: &LogWeightSequence) -> Result<LogWeightSequence> {
    let label = format!("{}^I", seq.label());
    let reach = seq.pmax().max(seq.tail_start().unwrap_or(0));
    let values = seq.materialize(reach).expect("tail covers the range");
    let mut out = values.clone();
    let mut best = f64::INFINITY;
    for k in (1..=reach).rev() {
        best = best.min(values[k] / k as f64);
        out[k] = k as f64 * best;
    }
    out[0] = 0.0;
    let tail = seq.tail().cloned();
    LogWeightSequence::new(label, out, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::law::TailLaw;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn small_hull_example() {
        let h = hull_values(&[0.0, 2.0, 1.0, 3.0]);
        assert!(close(&h, &[0.0, 0.5, 1.0, 3.0], 1e-15));
        let o = lc_minorant_pairwise(&[0.0, 2.0, 1.0, 3.0]);
        assert!(close(&h, &o, 1e-12));
    }

    #[test]
    fn hull_skips_spike() {
        let v = [0.0, 10.0, 0.1, 3.0, 7.0];
        let h = lower_hull(&v);
        assert!(!h.contains(&1));
        assert!(close(&hull_values(&v), &lc_minorant_pairwise(&v), 1e-12));
    }

    #[test]
    fn root_minorant_example() {
        let s = LogWeightSequence::prefix_only("x", vec![0.0, 3.0, 2.0]).unwrap();
        let i = increasing_root_minorant(&s).unwrap();
        assert!(close(i.log_values(), &[0.0, 1.0, 2.0], 1e-15));
    }

    #[test]
    fn convex_law_is_fixed() {
        let g = LogWeightSequence::gevrey(1.0, 60).unwrap();
        let lc = lc_minorant(&g).unwrap();
        let i = increasing_root_minorant(&g).unwrap();
        assert!(close(lc.log_values(), g.log_values(), 1e-12));
        assert!(close(i.log_values(), g.log_values(), 1e-12));
        assert_eq!(lc.tail_start(), Some(0));
    }

    #[test]
    fn perturbed_prefix_rejoins_law() {
        let law = TailLaw::gevrey(2.0);
        let mut v: Vec<f64> = (0..=20).map(|p| law.log_value(p)).collect();
        v[3] += 5.0;
        let s = LogWeightSequence::new("x", v, Some(Tail::from(law.clone(), 4))).unwrap();
        let lc = lc_minorant(&s).unwrap();
        assert!(lc.value_at(3).unwrap() < s.value_at(3).unwrap());
        assert!((lc.value_at(500).unwrap() - law.log_value(500)).abs() < 1e-9);
        // a bump far out makes the junction move right of the prefix
        let mut w: Vec<f64> = (0..=10).map(|p| law.log_value(p)).collect();
        w[10] += 40.0;
        let s = LogWeightSequence::new("y", w, Some(Tail::from(law.clone(), 11))).unwrap();
        let lc = lc_minorant(&s).unwrap();
        assert!(lc.tail_start().unwrap() >= 11);
        assert!(lc.value_at(10).unwrap() < s.value_at(10).unwrap());
    }

    proptest! {
        #[test]
        fn hull_matches_pairwise(v in prop::collection::vec(-5.0f64..20.0, 3..50)) {
            let mut v = v;
            v[0] = 0.0;
            let h = hull_values(&v);
            let o = lc_minorant_pairwise(&v);
            prop_assert!(close(&h, &o, 1e-9));
        }

        #[test]
        fn sandwich_and_idempotence(v in prop::collection::vec(0.0f64..30.0, 3..40)) {
            let mut v = v;
            v[0] = 0.0;
            let s = LogWeightSequence::prefix_only("r", v.clone()).unwrap();
            let lc = lc_minorant(&s).unwrap();
            let i = increasing_root_minorant(&s).unwrap();
            for p in 0..v.len() {
                prop_assert!(lc.log_values()[p] <= i.log_values()[p] + 1e-12);
                prop_assert!(i.log_values()[p] <= v[p] + 1e-12);
            }
            let lc2 = lc_minorant(&lc).unwrap();
            let i2 = increasing_root_minorant(&i).unwrap();
            prop_assert!(close(lc2.log_values(), lc.log_values(), 1e-12));
            prop_assert!(close(i2.log_values(), i.log_values(), 1e-12));
        }

        #[test]
        fn monotone(v in prop::collection::vec(0.0f64..30.0, 3..40),
                    d in prop::collection::vec(0.0f64..5.0, 40)) {
            let mut v = v;
            v[0] = 0.0;
            let w: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + b).collect();
            let m = LogWeightSequence::prefix_only("m", v).unwrap();
            let n = LogWeightSequence::prefix_only("n", w).unwrap();
            let (lm, ln) = (lc_minorant(&m).unwrap(), lc_minorant(&n).unwrap());
            let (im, in_) = (increasing_root_minorant(&m).unwrap(), increasing_root_minorant(&n).unwrap());
            for p in 0..lm.log_values().len() {
                prop_assert!(lm.log_values()[p] <= ln.log_values()[p] + 1e-12);
                prop_assert!(im.log_values()[p] <= in_.log_values()[p] + 1e-12);
            }
        }
    }
}
