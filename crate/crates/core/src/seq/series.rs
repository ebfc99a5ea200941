//! Partial sums plus certified tail brackets for Σ 1/μ_p and Σ 1/(M_p)^{1/p}.

use super::law::{Series, TailSum};
use super::sequence::LogWeightSequence;

/// Σ_{p=1}^{n} of a series' terms, with a statement about Σ_{p>n}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBracket {
    pub partial: f64,
    pub upto: usize,
    pub tail: TailSum,
}

impl SeriesBracket {
    /// Bracket on the full sum, when the tail is certified to converge.
    pub fn total(&self) -> Option<(f64, f64)> {
        match self.tail {
            TailSum::Converges { low, high } => Some((self.partial + low, self.partial + high)),
            _ => None,
        }
    }
}

fn term(seq: &LogWeightSequence, series: Series, p: usize) -> f64 {
    let x = match series {
        Series::Quotient => seq.log_quotient(p),
        Series::Root => seq.log_root(p),
    };
    (-x.expect("index within the known range")).exp()
}

/// Partial sum over the stored prefix (and up to the tail start), plus the
/// law's tail statement when a law is present.
pub fn series_bracket(seq: &LogWeightSequence, series: Series) -> SeriesBracket {
    let n = seq.pmax().max(seq.tail_start().unwrap_or(0));
    let partial = (1..=n).map(|p| term(seq, series, p)).sum();
    let tail = match seq.law() {
        Some(law) => law.tail_sum(series, n as u64),
        None => TailSum::Unknown,
    };
    SeriesBracket {
        partial,
        upto: n,
        tail,
    }
}
