//! Weight matrices: ordered families of weight sequences.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::conditions::check_in_lc;
use crate::seq::law::TailLaw;
use crate::seq::sequence::{LogWeightSequence, EXACT_TOL};
use crate::verdict::{Status, Verdict};
use crate::weight::function::{associated_function, sequence_from_weight, WeightFunction};

/// Index of a row: a base label x and the parameters l_1..l_j of the
/// multi-index steps applied to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowLabel {
    pub x: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<f64>,
}

impl RowLabel {
    pub fn base(x: f64) -> Self {
        RowLabel { x, path: vec![] }
    }

    pub fn extended(&self, l: f64) -> Self {
        let mut path = self.path.clone();
        path.push(l);
        RowLabel { x: self.x, path }
    }

    pub fn with_x(&self, x: f64) -> Self {
        RowLabel {
            x,
            path: self.path.clone(),
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        let by_path = self
            .path
            .len()
            .cmp(&other.path.len())
            .then_with(|| {
                self.path
                    .iter()
                    .zip(&other.path)
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            });
        by_path.then_with(|| self.x.total_cmp(&other.x))
    }
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x)?;
        if !self.path.is_empty() {
            let parts: Vec<String> = self.path.iter().map(|l| l.to_string()).collect();
            write!(f, ";{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// Produces the base row for any positive label, so that existential
/// searches can look beyond the listed labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowGenerator {
    /// x ↦ p!^{x+1}.
    Gevrey { pmax: usize },
    /// l ↦ Ω^l of a weight function.
    Omega { weight: Box<WeightFunction>, pmax: usize },
}

impl RowGenerator {
    pub fn row(&self, x: f64) -> Result<LogWeightSequence> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Precondition("labels must be positive".into()));
        }
        match self {
            RowGenerator::Gevrey { pmax } => {
                LogWeightSequence::from_law(format!("G{x}"), TailLaw::gevrey(x + 1.0), *pmax)
            }
            RowGenerator::Omega { weight, pmax } => sequence_from_weight(weight, x, *pmax),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: RowLabel,
    pub seq: LogWeightSequence,
}

/// Cached structural verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixKind {
    /// Normalized, non-decreasing rows, ordered in x.
    pub m: Verdict,
    /// Additionally every row in LC.
    pub msc: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightMatrix {
    pub name: String,
    rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<RowGenerator>,
    pub kind: MatrixKind,
}

/// Output depth of a derived row.
fn derived_pmax(seq: &LogWeightSequence, l: f64) -> usize {
    if seq.tail().is_some() {
        seq.pmax()
    } else {
        ((seq.pmax() as f64) / l).floor() as usize
    }
}

/// One multi-index step on a single row: ω_M, then Ω^l.
pub fn derive_row(seq: &LogWeightSequence, l: f64) -> Result<LogWeightSequence> {
    let w = associated_function(seq)?;
    let out = sequence_from_weight(&w, l, derived_pmax(seq, l))?;
    Ok(out.with_label(format!("{};{l}", seq.label())))
}

impl WeightMatrix {
    pub fn new(name: impl Into<String>, rows: Vec<(RowLabel, LogWeightSequence)>) -> Result<Self> {
        Self::with_generator(name, rows, None)
    }

    pub fn with_generator(
        name: impl Into<String>,
        rows: Vec<(RowLabel, LogWeightSequence)>,
        generator: Option<RowGenerator>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Precondition("a matrix needs at least one row".into()));
        }
        let mut rows: Vec<Row> = rows.into_iter().map(|(label, seq)| Row { label, seq }).collect();
        if rows.iter().any(|r| !(r.label.x.is_finite() && r.label.x > 0.0)) {
            return Err(Error::Precondition("labels must be positive".into()));
        }
        rows.sort_by(|a, b| a.label.order(&b.label));
        if rows.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::Precondition("duplicate row label".into()));
        }
        let kind = classify(&rows);
        Ok(WeightMatrix {
            name: name.into(),
            rows,
            generator,
            kind,
        })
    }

    /// Rows p!^{s+1} for the given s.
    pub fn gevrey(s_values: &[f64], pmax: usize) -> Result<Self> {
        let generator = RowGenerator::Gevrey { pmax };
        let rows = s_values
            .iter()
            .map(|&s| Ok((RowLabel::base(s), generator.row(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::with_generator("gevrey", rows, Some(generator))
    }

    /// Rows Ω^l for the given l; needs ω ∈ W_0.
    pub fn omega(w: &WeightFunction, l_values: &[f64], pmax: usize) -> Result<Self> {
        let w0 = crate::weight::conditions::check_w0(w);
        if !w0.is_holds() {
            return Err(Error::HypothesisNotCertified(format!("{} is not certified in W_0", w.label)));
        }
        let generator = RowGenerator::Omega {
            weight: Box::new(w.clone()),
            pmax,
        };
        let rows = l_values
            .iter()
            .map(|&l| Ok((RowLabel::base(l), generator.row(l)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::with_generator(format!("Omega[{}]", w.label), rows, Some(generator))
    }

    /// Single-row matrix {M}.
    pub fn constant(seq: LogWeightSequence) -> Result<Self> {
        let name = format!("{{{}}}", seq.label());
        Self::new(name, vec![(RowLabel::base(1.0), seq)])
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn generator(&self) -> Option<&RowGenerator> {
        self.generator.as_ref()
    }

    pub fn labels(&self) -> Vec<RowLabel> {
        self.rows.iter().map(|r| r.label.clone()).collect()
    }

    pub fn get(&self, label: &RowLabel) -> Option<&LogWeightSequence> {
        self.rows.iter().find(|r| &r.label == label).map(|r| &r.seq)
    }

    /// Row for any label: listed, or produced by the generator and the
    /// label's multi-index path.
    pub fn row(&self, label: &RowLabel) -> Result<LogWeightSequence> {
        if let Some(s) = self.get(label) {
            return Ok(s.clone());
        }
        let g = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("no row {label} and no generator")))?;
        let mut seq = g.row(label.x)?;
        for &l in &label.path {
            seq = derive_row(&seq, l)?;
        }
        Ok(seq)
    }

    /// Labels tried as existential witnesses for a given x: the listed
    /// labels sharing its path plus, with a generator, scaled variants.
    pub fn candidates(&self, around: &[&RowLabel]) -> Vec<RowLabel> {
        let mut out: Vec<RowLabel> = Vec::new();
        let path = around.first().map(|l| l.path.clone()).unwrap_or_default();
        for r in &self.rows {
            if r.label.path == path {
                out.push(r.label.clone());
            }
        }
        if self.generator.is_some() {
            for l in around {
                let x = l.x;
                for y in [x / 4.0, x / 2.0, 2.0 * x, 4.0 * x, x + 1.0, 2.0 * x + 1.0] {
                    out.push(l.with_x(y));
                }
            }
        }
        let mut uniq: Vec<RowLabel> = Vec::new();
        for c in out {
            if !uniq.contains(&c) {
                uniq.push(c);
            }
        }
        uniq
    }

    /// Candidate labels of this matrix matched against a row of another
    /// matrix with base label `hint`: every listed label plus, with a
    /// generator, scaled variants of `hint` on each listed path.
    pub fn search_labels(&self, hint: f64) -> Vec<RowLabel> {
        let mut out: Vec<RowLabel> = self.labels();
        if self.generator.is_some() {
            let mut paths: Vec<Vec<f64>> = Vec::new();
            for r in &self.rows {
                if !paths.contains(&r.label.path) {
                    paths.push(r.label.path.clone());
                }
            }
            for path in paths {
                for y in [hint, hint / 4.0, hint / 2.0, 2.0 * hint, 4.0 * hint, hint + 1.0, 2.0 * hint + 1.0] {
                    let l = RowLabel { x: y, path: path.clone() };
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
        }
        out
    }

    /// Every row in LC.
    pub fn is_standard(&self) -> bool {
        self.kind.msc.is_holds()
    }

    /// Apply one multi-index step with parameter l to every row.
    pub fn extended(&self, l: f64) -> Result<WeightMatrix> {
        self.extended_many(&[l])
    }

    /// Union over l of the one-step extensions.
    pub fn extended_many(&self, ls: &[f64]) -> Result<WeightMatrix> {
        let mut rows = Vec::new();
        for &l in ls {
            for r in &self.rows {
                rows.push((r.label.extended(l), derive_row(&r.seq, l)?));
            }
        }
        let names: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
        Self::with_generator(
            format!("{}[;{}]", self.name, names.join("|")),
            rows,
            self.generator.clone(),
        )
    }
}

fn classify(rows: &[Row]) -> MatrixKind {
    let mut bad: Vec<String> = Vec::new();
    for r in rows {
        let v = r.seq.log_values();
        if !r.seq.is_normalized() {
            bad.push(format!("row {} not normalized", r.label));
        }
        if let Some(p) = v.windows(2).position(|w| w[1] < w[0] - EXACT_TOL) {
            bad.push(format!("row {} decreases at p = {}", r.label, p + 1));
        }
    }
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if a.label.path != b.label.path {
                continue;
            }
            let (va, vb) = (a.seq.log_values(), b.seq.log_values());
            if let Some(p) = va.iter().zip(vb).position(|(x, y)| *x > *y + EXACT_TOL * y.abs().max(1.0)) {
                bad.push(format!("row {} exceeds row {} at p = {p}", a.label, b.label));
            }
        }
    }
    let m = if bad.is_empty() {
        Verdict::holds("M").with_value("rows", rows.len() as u64)
    } else {
        Verdict::fails("M").with_value("violations", bad.clone())
    };
    let lc: Vec<Verdict> = rows
        .iter()
        .map(|r| check_in_lc(&r.seq).renamed(format!("in_LC[{}]", r.label)))
        .collect();
    let status = m.status.and(Status::all(lc.iter().map(|v| v.status)));
    let msc = Verdict::new("M_sc", status)
        .with_value("rows", rows.len() as u64)
        .with_parts(lc);
    MatrixKind { m, msc }
}
