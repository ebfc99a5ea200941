//! Relations ≼, ◁ and ≈ between weight sequences.

use super::law::Limit;
use super::sequence::LogWeightSequence;
use crate::verdict::Verdict;

/// sup over the common known range of (L^M_p − L^N_p)/p, with its argmax.
pub fn prefix_root_sup(m: &LogWeightSequence, n: &LogWeightSequence) -> (f64, usize) {
    let reach = common_reach(m, n);
    let mut best = (f64::NEG_INFINITY, 1);
    for p in 1..=reach {
        let d = (m.value_at(p).unwrap() - n.value_at(p).unwrap()) / p as f64;
        if d > best.0 {
            best = (d, p);
        }
    }
    best
}

fn common_reach(m: &LogWeightSequence, n: &LogWeightSequence) -> usize {
    let known = |s: &LogWeightSequence| {
        if s.tail().is_some() {
            usize::MAX
        } else {
            s.pmax()
        }
    };
    let want = m
        .pmax()
        .max(n.pmax())
        .max(m.tail_start().unwrap_or(0))
        .max(n.tail_start().unwrap_or(0));
    want.min(known(m)).min(known(n))
}

/// lim (L^M_p − L^N_p)/p, decided from the tail laws.
pub fn root_difference_limit(m: &LogWeightSequence, n: &LogWeightSequence) -> Limit {
    match (m.growth(), n.growth()) {
        (Some(a), Some(b)) => a.scaled_difference_limit(&b),
        _ => Limit::Unknown,
    }
}

fn with_limit(v: Verdict, lim: Limit) -> Verdict {
    match lim {
        Limit::PlusInfinity => v.with("log_root_limit", f64::INFINITY),
        Limit::MinusInfinity => v.with("log_root_limit", f64::NEG_INFINITY),
        Limit::Finite(c) => v.with("log_root_limit", c),
        Limit::Unknown => v,
    }
}

/// M ≼ N: sup_p (M_p/N_p)^{1/p} < ∞.
pub fn relation_preceq(m: &LogWeightSequence, n: &LogWeightSequence) -> Verdict {
    let (sup, at) = prefix_root_sup(m, n);
    let lim = root_difference_limit(m, n);
    let base = |v: Verdict| v.with("prefix_sup", sup.exp()).with_value("argmax_p", at as u64);
    let v = match lim {
        Limit::PlusInfinity => base(Verdict::fails("preceq")),
        Limit::MinusInfinity => base(Verdict::holds("preceq")).with("c1", sup.exp()),
        Limit::Finite(c) => base(Verdict::holds("preceq")).with("c1", sup.max(c).exp()),
        Limit::Unknown => base(Verdict::inconclusive("preceq", "limit not decided by tails")),
    };
    with_limit(v, lim)
}

/// M ◁ N: (M_p/N_p)^{1/p} → 0.
pub fn relation_triangle(m: &LogWeightSequence, n: &LogWeightSequence) -> Verdict {
    let (sup, at) = prefix_root_sup(m, n);
    let lim = root_difference_limit(m, n);
    let base = |v: Verdict| v.with("prefix_sup", sup.exp()).with_value("argmax_p", at as u64);
    let v = match lim {
        Limit::MinusInfinity => base(Verdict::holds("triangle")),
        Limit::Finite(_) | Limit::PlusInfinity => base(Verdict::fails("triangle")),
        Limit::Unknown => base(Verdict::inconclusive("triangle", "limit not decided by tails")),
    };
    with_limit(v, lim)
}

/// M ≈ N: M ≼ N and N ≼ M.
pub fn relation_equivalent(m: &LogWeightSequence, n: &LogWeightSequence) -> Verdict {
    Verdict::conjunction("approx", vec![relation_preceq(m, n), relation_preceq(n, m)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Status;

    fn gev(s: f64) -> LogWeightSequence {
        LogWeightSequence::gevrey(s, 200).unwrap()
    }

    #[test]
    fn gevrey_ordering() {
        let v = relation_preceq(&gev(1.0), &gev(2.0));
        assert!(v.is_holds());
        assert!((v.witness_f64("c1").unwrap() - 1.0).abs() < 1e-12);
        assert!(relation_preceq(&gev(2.0), &gev(1.0)).is_fails());
        assert!(relation_triangle(&gev(1.0), &gev(2.0)).is_holds());
    }

    #[test]
    fn reflexive() {
        let g = gev(2.0);
        let v = relation_preceq(&g, &g);
        assert!(v.is_holds());
        assert!((v.witness_f64("c1").unwrap() - 1.0).abs() < 1e-15);
        assert!(relation_triangle(&g, &g).is_fails());
        assert!(relation_equivalent(&g, &g).is_holds());
    }

    #[test]
    fn prefix_pairs_are_inconclusive() {
        let a = LogWeightSequence::prefix_only("a", vec![0.0, 1.0, 3.0]).unwrap();
        let b = LogWeightSequence::prefix_only("b", vec![0.0, 2.0, 5.0, 9.0]).unwrap();
        assert_eq!(relation_triangle(&a, &b).status, Status::Inconclusive);
        assert_eq!(relation_preceq(&a, &b).status, Status::Inconclusive);
    }
}
