//! Non-quasianalytic minorant of a decreasing family of rows.
//!
//! Row q (q = 1, 2, …) is the matrix row with the q-th largest label. With
//! R_q(p) = log((M^{1/q})^I_p)^{1/p} the recursion is
//!
//! * a_q: first integer > b_{q−1} with Σ_{p>a_q} e^{−R_{q+1}(p)} ≤ 2^{−q}/(q+1),
//! * b_q: first integer with R_q(a_q) − log q < R_{q+1}(b_q) − log(q+1),
//!
//! and log N_p / p = R_q(p) − log q on [b_{q−1}, a_q], constant
//! R_q(a_q) − log q on (a_q, b_q). Beyond the last completed b the clause of
//! the next row continues indefinitely.

use serde::Serialize;

use super::verdicts::class_nq_verdict;
use crate::error::{Error, Result};
use crate::matrix::WeightMatrix;
use crate::seq::law::{Series, TailLaw, TailSum};
use crate::seq::regularize::increasing_root_minorant;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};

/// a_q and b_q are searched up to this index using the row laws.
pub const SEARCH_HORIZON: u64 = 1 << 50;
const ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorantTrace {
    /// a_1, a_2, …
    pub a: Vec<u64>,
    /// b_1, b_2, …
    pub b: Vec<u64>,
    /// log N_p on the represented range.
    #[serde(rename = "N")]
    pub n: LogWeightSequence,
    /// Certified bound on Σ_{p>a_1} (N_p)^{−1/p}.
    pub tail_sum_bound: f64,
    /// Largest q with both a_q and b_q found.
    pub completed: usize,
    /// q at which the search horizon ran out, if it did.
    pub exhausted_at: Option<usize>,
    pub checks: Vec<Verdict>,
}

impl MinorantTrace {
    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(Verdict::is_holds)
    }

    /// N as CSV rows `p,logN`.
    pub fn n_csv(&self) -> String {
        let mut out = String::from("p,logN\n");
        for (p, v) in self.n.log_values().iter().enumerate() {
            out.push_str(&format!("{p},{v}\n"));
        }
        out
    }
}

struct RootRow {
    q: usize,
    values: Vec<f64>,
    law: TailLaw,
}

impl RootRow {
    fn root(&self, p: u64) -> f64 {
        match self.values.get(p as usize) {
            Some(v) => v / p as f64,
            None => self.law.log_root(p),
        }
    }

    fn scaled(&self, p: u64) -> f64 {
        self.root(p) - (self.q as f64).ln()
    }

    /// Bracket on Σ_{p>n} e^{−R(p)}.
    fn tail(&self, n: u64) -> Option<(f64, f64)> {
        let last = (self.values.len() - 1) as u64;
        let (explicit, from) = if n < last {
            ((n + 1..=last).map(|p| (-self.root(p)).exp()).sum(), last)
        } else {
            (0.0, n)
        };
        match self.law.tail_sum(Series::Root, from) {
            TailSum::Converges { low, high } => Some((explicit + low, explicit + high)),
            _ => None,
        }
    }
}

/// Smallest integer in (lo, horizon] satisfying a predicate that is
/// monotone (false … false true … true).
fn first_true(lo: u64, horizon: u64, ok: impl Fn(u64) -> bool) -> Option<u64> {
    let mut bad = lo;
    let mut step = 1u64;
    let good = loop {
        let probe = bad.saturating_add(step).min(horizon);
        if ok(probe) {
            break probe;
        }
        if probe >= horizon {
            return None;
        }
        bad = probe;
        step = step.saturating_mul(2);
    };
    let (mut lo, mut hi) = (bad, good);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

struct Clauses<'a> {
    rows: &'a [RootRow],
    a: &'a [u64],
    b: &'a [u64],
}

impl Clauses<'_> {
    /// log N_p / p, p >= 1.
    fn root(&self, p: u64) -> f64 {
        for (i, (&a, &b)) in self.a.iter().zip(self.b).enumerate() {
            if p <= a {
                return self.rows[i].scaled(p);
            }
            if p < b {
                return self.rows[i].scaled(a);
            }
        }
        self.rows[self.a.len()].scaled(p)
    }

    /// Index q (1-based) of the row governing p.
    fn row_of(&self, p: u64) -> usize {
        self.b.iter().position(|&b| p < b).unwrap_or(self.b.len()) + 1
    }
}

fn load_rows(m: &WeightMatrix) -> Result<Vec<RootRow>> {
    if !m.kind.m.is_holds() {
        return Err(Error::Precondition("rows must form a weight matrix".into()));
    }
    let mut rows = Vec::new();
    for (i, r) in m.rows().iter().rev().enumerate() {
        let nq = class_nq_verdict(&r.seq)?;
        if !nq.is_holds() {
            return Err(Error::Precondition(format!("row {} is not certified (nq): {}", r.label, nq.status)));
        }
        let inc = increasing_root_minorant(&r.seq)?;
        let law = inc
            .law()
            .cloned()
            .ok_or_else(|| Error::TailNotCertified(r.label.to_string()))?;
        rows.push(RootRow {
            q: i + 1,
            values: inc.log_values().to_vec(),
            law,
        });
    }
    Ok(rows)
}

/// Run the recursion over the matrix rows, ordered by decreasing label.
pub fn construct_minorant(m: &WeightMatrix) -> Result<MinorantTrace> {
    let rows = load_rows(m)?;
    let pmax = m.rows().iter().map(|r| r.seq.pmax()).min().unwrap_or(0);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut exhausted_at = None;
    let mut prev_b = 0u64;
    for q in 1..rows.len() {
        let next = &rows[q];
        let bound = 0.5f64.powi(q as i32) / (q + 1) as f64;
        if next.tail(SEARCH_HORIZON).is_none() {
            return Err(Error::TailNotCertified(format!("row q = {}", q + 1)));
        }
        let aq = first_true(prev_b, SEARCH_HORIZON, |n| next.tail(n).is_some_and(|(_, high)| high <= bound));
        let Some(aq) = aq else {
            exhausted_at = Some(q);
            break;
        };
        let level = rows[q - 1].scaled(aq);
        let Some(bq) = first_true(aq, SEARCH_HORIZON, |p| next.scaled(p) > level) else {
            exhausted_at = Some(q);
            break;
        };
        a.push(aq);
        b.push(bq);
        prev_b = bq;
    }
    if a.is_empty() && rows.len() > 1 {
        return Err(Error::TruncationExhausted { q: 1 });
    }
    let clauses = Clauses { rows: &rows, a: &a, b: &b };
    let mut values = vec![0.0];
    values.extend((1..=pmax as u64).map(|p| p as f64 * clauses.root(p)));
    let n = LogWeightSequence::prefix_only("N", values)?;

    let tail_sum_bound = tail_bound(&clauses)?;
    let mut checks = vec![
        check_interlacing(&a, &b),
        check_monotone(&clauses, pmax as u64),
        check_clauses(&clauses, &n),
        check_domination(&clauses, pmax as u64),
    ];
    // With a single row there is no a_1 and the bound covers every p >= 1.
    if !a.is_empty() {
        checks.push(
            Verdict::new("tail_sum_bound", Status::from_bool(tail_sum_bound <= 1.0)).with("bound", tail_sum_bound),
        );
    }
    Ok(MinorantTrace {
        completed: a.len(),
        a,
        b,
        n,
        tail_sum_bound,
        exhausted_at,
        checks,
    })
}

fn tail_bound(c: &Clauses<'_>) -> Result<f64> {
    let uncertified = |q: usize| Error::TailNotCertified(format!("row q = {q}"));
    let mut total = 0.0;
    for (i, (&a, &b)) in c.a.iter().zip(c.b).enumerate() {
        let row = &c.rows[i];
        if i > 0 {
            let start = c.b[i - 1];
            let (_, high) = row.tail(start - 1).ok_or_else(|| uncertified(row.q))?;
            let (low, _) = row.tail(a).ok_or_else(|| uncertified(row.q))?;
            total += row.q as f64 * (high - low).max(0.0);
        }
        total += (b - a - 1) as f64 * (-row.scaled(a)).exp();
    }
    let last = &c.rows[c.a.len()];
    let from = c.b.last().map_or(0, |b| b - 1);
    let (_, high) = last.tail(from).ok_or_else(|| uncertified(last.q))?;
    Ok(total + last.q as f64 * high)
}

fn check_interlacing(a: &[u64], b: &[u64]) -> Verdict {
    let mut prev = 0;
    let mut ok = true;
    for (&x, &y) in a.iter().zip(b) {
        ok &= x > prev && x < y;
        prev = y;
    }
    Verdict::new("interlacing", Status::from_bool(ok))
        .with_value("a", a.to_vec())
        .with_value("b", b.to_vec())
}

/// Sample indices: the prefix, every clause boundary and a log-spaced sweep.
fn samples(c: &Clauses<'_>, pmax: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (1..=pmax).collect();
    for (&a, &b) in c.a.iter().zip(c.b) {
        pts.extend([a.saturating_sub(1).max(1), a, a + 1, b - 1, b, b + 1]);
    }
    let end = c.b.last().copied().unwrap_or(pmax).saturating_mul(4).min(SEARCH_HORIZON);
    let mut p = pmax.max(1) as f64;
    while (p as u64) < end {
        pts.push(p as u64);
        p *= 1.05;
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

fn check_monotone(c: &Clauses<'_>, pmax: u64) -> Verdict {
    let pts = samples(c, pmax);
    let mut worst = (0.0f64, 0u64);
    for w in pts.windows(2) {
        let drop = c.root(w[0]) - c.root(w[1]);
        if drop > worst.0 {
            worst = (drop, w[1]);
        }
    }
    Verdict::new("monotone_roots", Status::from_bool(worst.0 <= ROOT_TOL))
        .with("max_drop", worst.0)
        .with_value("at_p", worst.1)
        .with_value("samples", pts.len() as u64)
}

fn check_clauses(c: &Clauses<'_>, n: &LogWeightSequence) -> Verdict {
    let v = n.log_values();
    let mut dev: f64 = 0.0;
    for (p, &value) in v.iter().enumerate().skip(1) {
        let p = p as u64;
        let q = c.row_of(p);
        let row = &c.rows[q - 1];
        let want = match (c.a.get(q - 1), c.b.get(q - 1)) {
            (Some(&a), Some(_)) if p > a => row.scaled(a),
            _ => row.scaled(p),
        };
        dev = dev.max((value / p as f64 - want).abs());
    }
    Verdict::new("clauses", Status::from_bool(dev <= ROOT_TOL)).with("max_deviation", dev)
}

/// (N_p)^{1/p} ≤ (1/q)((M^{1/q})_p)^{1/p} for p ≥ b_{q−1}.
fn check_domination(c: &Clauses<'_>, pmax: u64) -> Verdict {
    let pts = samples(c, pmax);
    let mut worst = (f64::NEG_INFINITY, 0usize, 0u64);
    for q in 1..=c.a.len() + 1 {
        let from = if q == 1 { 1 } else { c.b[q - 2] };
        let row = &c.rows[q - 1];
        for &p in pts.iter().filter(|&&p| p >= from) {
            let excess = c.root(p) - row.scaled(p);
            if excess > worst.0 {
                worst = (excess, q, p);
            }
        }
    }
    Verdict::new("domination", Status::from_bool(worst.0 <= ROOT_TOL))
        .with("max_excess", worst.0)
        .with_value("q", worst.1 as u64)
        .with_value("p", worst.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_true_finds_threshold() {
        assert_eq!(first_true(0, 1 << 40, |n| n >= 12345), Some(12345));
        assert_eq!(first_true(5, 1 << 40, |n| n >= 3), Some(6));
        assert_eq!(first_true(0, 100, |n| n >= 1000), None);
    }

    #[test]
    fn factorial_power_rows() {
        let m = WeightMatrix::gevrey(&[1.0, 0.5, 0.25], 400).unwrap();
        let t = construct_minorant(&m).unwrap();
        assert_eq!(t.completed, 2);
        assert!(t.all_checks_hold(), "{:#?}", t.checks);
        assert!(t.tail_sum_bound <= 1.0);
        assert!(t.a[0] > 0 && t.a[0] < t.b[0] && t.b[0] < t.a[1]);
    }

    #[test]
    fn single_row_is_its_own_clause() {
        let m = WeightMatrix::gevrey(&[1.0], 100).unwrap();
        let t = construct_minorant(&m).unwrap();
        assert!(t.a.is_empty() && t.all_checks_hold());
        let inc = increasing_root_minorant(&m.rows()[0].seq).unwrap();
        for (x, y) in t.n.log_values().iter().zip(inc.log_values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn quasianalytic_row_rejected() {
        let m = WeightMatrix::gevrey(&[0.0001, 1.0], 100).unwrap();
        let m2 = WeightMatrix::new(
            "with p!",
            vec![
                (crate::matrix::RowLabel::base(1.0), LogWeightSequence::gevrey(1.0, 100).unwrap()),
                (crate::matrix::RowLabel::base(2.0), LogWeightSequence::gevrey(2.0, 100).unwrap()),
            ],
        )
        .unwrap();
        assert!(matches!(construct_minorant(&m2), Err(Error::Precondition(_))));
        // Σ (p!)^{-1.0001/p} converges too slowly to reach 1/4 before the horizon.
        assert!(matches!(construct_minorant(&m), Err(Error::TruncationExhausted { q: 1 })));
    }
}
