//! Three-way membership agreement for D_{[M]}, D_{[ω_M]} and D̂_{[ω_M]} on a
//! battery of sampled functions.
//!
//! Each side is evaluated on a finite grid of (row, parameter) pairs. A pair
//! is Finite when the seminorm ratios stop growing over the last reliable
//! orders (or the Fourier bracket is certified), Growing when the ratios
//! strictly increase or the required spectral data is refused, and Unknown
//! otherwise. The battery only holds synthesized bumps and non-smooth
//! controls; arbitrary L¹ inputs are not exercised.

use rayon::prelude::*;
use serde::Serialize;

use super::bump::bump_builder;
use super::domain::{CompactBox, SampledFunction, DEFAULT_POINTS};
use super::norms::{fourier_norm_weight, seminorm_from};
use super::spectral::FunctionAnalysis;
use crate::error::{Error, Result};
use crate::matrix::{check_matrix_condition, MatrixCondition, Sense, WeightMatrix};
use crate::quasi::matrix_nq_verdict;
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};
use crate::weight::function::{associated_function, sequence_from_weight};

/// Parameter grids and derivative orders of one harness run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessConfig {
    pub k_max: usize,
    /// Fewer reliable orders than this leave the derivative sides Unknown.
    pub min_orders: usize,
    /// Orders at the top of the reliable range that decide a trend.
    pub trend_orders: usize,
    pub derivative_h: Vec<f64>,
    pub weight_l: Vec<f64>,
    pub fourier_h: Vec<f64>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            k_max: 10,
            min_orders: 4,
            trend_orders: 3,
            derivative_h: vec![0.25, 1.0, 4.0, 16.0],
            weight_l: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            fourier_h: vec![1.0 / 16.0, 0.25, 1.0, 4.0],
        }
    }
}

/// A function under test; `built_from` is the sequence a bump was synthesized for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryItem {
    pub function: SampledFunction,
    pub control: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub built_from: Option<LogWeightSequence>,
}

/// Default battery: five bumps and two non-smooth controls.
pub fn standard_battery(depth: usize, n: usize) -> Result<Vec<BatteryItem>> {
    let unit = CompactBox::interval(-1.0, 1.0)?;
    let g2 = LogWeightSequence::gevrey(2.0, 200)?;
    let mut items = vec![BatteryItem {
        function: SampledFunction::standard_bump(unit.clone(), n)?,
        control: false,
        built_from: None,
    }];
    for seq in [
        g2.clone(),
        LogWeightSequence::gevrey(3.0, 200)?,
        LogWeightSequence::factorial_power(1.5, 2.0, 200)?,
    ] {
        items.push(BatteryItem {
            function: bump_builder(&unit, &seq, depth, n)?,
            control: false,
            built_from: Some(seq),
        });
    }
    items.push(BatteryItem {
        function: SampledFunction::standard_bump(CompactBox::interval(-0.5, 0.5)?, n)?,
        control: false,
        built_from: None,
    });
    for d in [0, 1] {
        items.push(BatteryItem {
            function: bump_builder(&unit, &g2, d, n)?,
            control: true,
            built_from: None,
        });
    }
    Ok(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Finite,
    Growing,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    /// Row label x.
    pub row: String,
    /// h, or l on the weight side.
    pub param: f64,
    pub state: Indicator,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Side {
    pub membership: Status,
    pub cells: Vec<Cell>,
}

impl Side {
    fn aggregate(sense: Sense, cells: Vec<Cell>) -> Side {
        let finite = |c: &Cell| c.state == Indicator::Finite;
        let growing = |c: &Cell| c.state == Indicator::Growing;
        let membership = match sense {
            Sense::Roumieu if cells.iter().any(finite) => Status::Holds,
            Sense::Roumieu if cells.iter().all(growing) => Status::Fails,
            Sense::Beurling if cells.iter().any(growing) => Status::Fails,
            Sense::Beurling if cells.iter().all(finite) => Status::Holds,
            _ => Status::Inconclusive,
        };
        Side { membership, cells }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionReport {
    pub label: String,
    pub control: bool,
    /// Highest derivative order with a reliable spectral estimate.
    pub reliable_orders: usize,
    pub derivative: Side,
    pub weight: Side,
    pub fourier: Side,
    /// Holds: the three memberships agree; Fails: two decided ones differ.
    pub agreement: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessReport {
    pub matrix: String,
    pub sense: Sense,
    pub config: HarnessConfig,
    pub hypotheses: Vec<Verdict>,
    pub functions: Vec<FunctionReport>,
    /// Control separation and membership of bumps in their own rows.
    pub checks: Vec<Verdict>,
    pub agreements: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
}

/// Finite when the last `n` ratios are non-increasing, Growing when they
/// strictly increase.
fn trend(ratios: &[f64], n: usize) -> Indicator {
    let tail = &ratios[ratios.len().saturating_sub(n)..];
    if tail.windows(2).all(|w| w[1] <= w[0]) {
        Indicator::Finite
    } else if tail.windows(2).all(|w| w[1] > w[0]) {
        Indicator::Growing
    } else {
        Indicator::Unknown
    }
}

/// Derivative-type cell for one denominator row and scale h.
fn derivative_cell(
    a: &FunctionAnalysis,
    f: &SampledFunction,
    row: &LogWeightSequence,
    h: f64,
    cfg: &HarnessConfig,
) -> (Indicator, Option<f64>, Option<String>) {
    if a.spectrum.is_unresolved() {
        let order = a.first_unreliable(a.k_max()).unwrap_or(1);
        return (Indicator::Growing, None, Some(Error::DerivativeOrderUnreliable { order }.to_string()));
    }
    let top = a.reliable_through().min(cfg.k_max);
    if top < cfg.min_orders {
        return (Indicator::Unknown, None, Some(format!("only {top} reliable orders")));
    }
    match seminorm_from(a, row, f.support(), h, top) {
        Ok(s) => (trend(&s.ratios, cfg.trend_orders), Some(s.value), None),
        Err(e) => (Indicator::Unknown, None, Some(e.to_string())),
    }
}

fn analyse(item: &BatteryItem, m: &WeightMatrix, sense: Sense, cfg: &HarnessConfig) -> Result<FunctionReport> {
    let f = &item.function;
    let a = FunctionAnalysis::new(f, cfg.k_max);
    let mut derivative = Vec::new();
    let mut weight = Vec::new();
    let mut fourier = Vec::new();
    for r in m.rows() {
        let row = r.label.to_string();
        let w = associated_function(&r.seq)?;
        for &h in &cfg.derivative_h {
            let (state, value, note) = derivative_cell(&a, f, &r.seq, h, cfg);
            derivative.push(Cell { row: row.clone(), param: h, state, value, note });
        }
        for &l in &cfg.weight_l {
            let omega_row = sequence_from_weight(&w, l, cfg.k_max)?;
            let (state, value, note) = derivative_cell(&a, f, &omega_row, 1.0, cfg);
            weight.push(Cell { row: row.clone(), param: l, state, value, note });
        }
        for &h in &cfg.fourier_h {
            let cell = match fourier_norm_weight(&a.spectrum, &w, h) {
                Ok(n) => Cell { row: row.clone(), param: h, state: Indicator::Finite, value: Some(n.high), note: None },
                Err(e @ Error::TailDominates { .. }) => Cell {
                    row: row.clone(),
                    param: h,
                    state: Indicator::Growing,
                    value: None,
                    note: Some(e.to_string()),
                },
                Err(e) => return Err(e),
            };
            fourier.push(cell);
        }
    }
    let (derivative, weight, fourier) = (
        Side::aggregate(sense, derivative),
        Side::aggregate(sense, weight),
        Side::aggregate(sense, fourier),
    );
    let decided: Vec<Status> = [derivative.membership, weight.membership, fourier.membership]
        .into_iter()
        .filter(|s| s.is_decided())
        .collect();
    let agreement = if decided.windows(2).any(|w| w[0] != w[1]) {
        Status::Fails
    } else if decided.len() == 3 {
        Status::Holds
    } else {
        Status::Inconclusive
    };
    Ok(FunctionReport {
        label: f.label.clone(),
        control: item.control,
        reliable_orders: a.reliable_through(),
        derivative,
        weight,
        fourier,
        agreement,
    })
}

/// Controls are Growing in every cell; bumps lie in their own row at h = 4.
fn separation_checks(items: &[BatteryItem], reports: &[FunctionReport], cfg: &HarnessConfig) -> Vec<Verdict> {
    let mut checks = Vec::new();
    for (item, rep) in items.iter().zip(reports) {
        if item.control {
            let all_growing = [&rep.derivative, &rep.weight, &rep.fourier]
                .iter()
                .flat_map(|s| &s.cells)
                .all(|c| c.state == Indicator::Growing);
            checks.push(
                Verdict::new("control_separation", Status::from_bool(all_growing)).with_value("function", rep.label.clone()),
            );
        }
        if let Some(seq) = &item.built_from {
            let a = FunctionAnalysis::new(&item.function, cfg.k_max);
            let (state, value, note) = derivative_cell(&a, &item.function, seq, 4.0, cfg);
            let mut v = Verdict::new("own_row_membership", Status::from_bool(state == Indicator::Finite))
                .with_value("function", rep.label.clone())
                .with("h", 4.0)
                .with("value", value.unwrap_or(f64::NAN));
            if let Some(n) = note {
                v = v.because(n);
            }
            checks.push(v);
        }
    }
    checks
}

pub fn theorem51_harness(
    m: &WeightMatrix,
    sense: Sense,
    battery: &[BatteryItem],
    cfg: &HarnessConfig,
) -> Result<HarnessReport> {
    let hypotheses = vec![
        check_matrix_condition(m, MatrixCondition::L(sense)),
        check_matrix_condition(m, MatrixCondition::Mg(sense)),
        matrix_nq_verdict(m, sense)?,
    ];
    if let Some(v) = hypotheses.iter().find(|v| !v.is_holds()) {
        return Err(Error::HypothesisNotCertified(format!("{} is {}", v.condition, v.status)));
    }
    let functions = battery
        .par_iter()
        .map(|item| analyse(item, m, sense, cfg))
        .collect::<Result<Vec<_>>>()?;
    let checks = separation_checks(battery, &functions, cfg);
    let count = |s: Status| functions.iter().filter(|f| f.agreement == s).count();
    Ok(HarnessReport {
        matrix: m.name.clone(),
        sense,
        config: cfg.clone(),
        hypotheses,
        agreements: count(Status::Holds),
        disagreements: count(Status::Fails),
        inconclusive: count(Status::Inconclusive),
        functions,
        checks,
    })
}

/// Harness on the default battery at depth 30.
pub fn theorem51_default(m: &WeightMatrix, sense: Sense) -> Result<HarnessReport> {
    theorem51_harness(m, sense, &standard_battery(30, DEFAULT_POINTS)?, &HarnessConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_classes() {
        assert_eq!(trend(&[5.0, 3.0, 2.0, 2.0], 3), Indicator::Finite);
        assert_eq!(trend(&[1.0, 2.0, 3.0, 4.0], 3), Indicator::Growing);
        assert_eq!(trend(&[1.0, 3.0, 2.0, 4.0], 3), Indicator::Unknown);
    }

    #[test]
    fn gevrey_matrix_agrees() {
        let m = WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 200).unwrap();
        let r = theorem51_default(&m, Sense::Roumieu).unwrap();
        for f in &r.functions {
            let expect = if f.control { Status::Fails } else { Status::Holds };
            assert_eq!(f.agreement, Status::Holds, "{}: {:#?}", f.label, f);
            assert_eq!(f.derivative.membership, expect, "{}", f.label);
        }
        assert_eq!(r.disagreements, 0);
        assert!(r.checks.iter().all(Verdict::is_holds), "{:#?}", r.checks);
    }

    #[test]
    fn quasianalytic_matrix_refused() {
        let q = WeightMatrix::constant(LogWeightSequence::gevrey(1.0, 200).unwrap()).unwrap();
        let battery = standard_battery(30, 1024).unwrap_or_default();
        assert!(matches!(
            theorem51_harness(&q, Sense::Roumieu, &battery, &HarnessConfig::default()),
            Err(Error::HypothesisNotCertified(_))
        ));
    }
}
