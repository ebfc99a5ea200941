//! Seeded random sweeps over invariants that have an exact oracle.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::seq::regularize::{hull_values, lc_minorant_pairwise};
use crate::verdict::{Status, Verdict};
use crate::weight::ConvexPL;

pub const CONJUGATE_TOL: f64 = 1e-12;
pub const HULL_TOL: f64 = 1e-9;
/// Upper bound on breakpoints of a random convex PL function.
pub const MAX_BREAKPOINTS: usize = 64;
/// Upper bound on the length of a random sequence.
pub const MAX_SEQUENCE_LEN: usize = 50;

/// Convex by construction: increments of the slope are positive.
pub fn random_convex_pl(rng: &mut StdRng) -> ConvexPL {
    let n = rng.gen_range(2..=MAX_BREAKPOINTS);
    let (mut x, mut y) = (rng.gen_range(-10.0..10.0), rng.gen_range(-2.0..2.0));
    let s0: f64 = rng.gen_range(-5.0..5.0);
    let mut slope = s0;
    let mut pts = vec![(x, y)];
    for _ in 1..n {
        let dx = rng.gen_range(0.01..3.0);
        slope += rng.gen_range(0.001..2.0);
        x += dx;
        y += slope * dx;
        pts.push((x, y));
    }
    let left = if rng.gen_bool(0.5) { f64::NEG_INFINITY } else { s0 - 1.0 };
    let right = if rng.gen_bool(0.5) { f64::INFINITY } else { slope + 0.5 };
    ConvexPL::new(pts, left, right).expect("slopes increase")
}

pub fn random_log_sequence(rng: &mut StdRng) -> Vec<f64> {
    let n = rng.gen_range(3..=MAX_SEQUENCE_LEN);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..20.0)).collect();
    v[0] = 0.0;
    v
}

/// (f*)* = f on `count` random functions.
pub fn conjugate_involution(count: usize, seed: u64) -> Verdict {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = 0u64;
    let mut first = None;
    for i in 0..count {
        let f = random_convex_pl(&mut rng);
        if !f.approx_eq(&f.conjugate().conjugate(), CONJUGATE_TOL) {
            failures += 1;
            first.get_or_insert(i as u64);
        }
    }
    let mut v = Verdict::new("conjugate_involution", Status::from_bool(failures == 0))
        .with_value("samples", count as u64)
        .with_value("seed", seed)
        .with_value("failures", failures)
        .with("tolerance", CONJUGATE_TOL);
    if let Some(i) = first {
        v = v.with_value("first_failure", i);
    }
    v
}

/// Lower-hull regularization against the O(n²) pairwise oracle.
pub fn hull_oracle(count: usize, seed: u64) -> Verdict {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let v = random_log_sequence(&mut rng);
        let h = hull_values(&v);
        let o = lc_minorant_pairwise(&v);
        let dev = h.iter().zip(&o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    Verdict::new("hull_oracle", Status::from_bool(worst <= HULL_TOL))
        .with_value("samples", count as u64)
        .with_value("seed", seed)
        .with("max_deviation", worst)
        .with("tolerance", HULL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_hold_and_repeat() {
        let a = conjugate_involution(50, 3);
        assert!(a.is_holds(), "{a:?}");
        let b = hull_oracle(50, 3);
        assert!(b.is_holds(), "{b:?}");
        assert_eq!(hull_oracle(50, 3), b);
    }

    #[test]
    fn generators_respect_bounds() {
        let mut rng = StdRng::seed_from_u64(0);
        for _ in 0..200 {
            assert!(random_convex_pl(&mut rng).len() <= MAX_BREAKPOINTS);
            let v = random_log_sequence(&mut rng);
            assert!(v.len() <= MAX_SEQUENCE_LEN && v[0] == 0.0);
        }
    }
}
