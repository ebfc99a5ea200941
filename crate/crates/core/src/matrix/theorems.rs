//! Consistency checks tying matrix conditions to properties of the
//! associated functions: pseudo moderate growth, stability of the
//! multi-index construction, consequences of (M_L) and the BR/ω-triangle
//! correspondence.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::LN_2;

use super::conditions::{check_matrix_condition, limit, limit_value, MatrixCondition, Sense};
use super::matrix::{derive_row, RowLabel, WeightMatrix};
use super::relations::{relation_matrix, MatrixRelation};
use crate::seq::conditions::check_moderate_growth;
use crate::seq::law::{Limit, OmegaGrowth};
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};
use crate::weight::conditions::{check_omega1, GRID_MAX_EXP};
use crate::weight::function::{associated_function, WeightFunction};
use crate::weight::relations::{relation_omega, OmegaRelation};

/// Upper end of inequality grids in s = log t (t up to 10^6).
const S_MAX: f64 = 13.815_510_557_964_274;
const GRID_POINTS: usize = 300;
const REL_TOL: f64 = 1e-12;
/// Parameters l of the default multi-index test set.
pub const STABILITY_LS: [f64; 4] = [2.0, 3.0, 0.5, 0.25];

fn precondition(name: &str, m: &WeightMatrix) -> Option<Verdict> {
    if m.is_standard() {
        None
    } else {
        Some(
            Verdict::inconclusive(name, "matrix not certified (M_sc)")
                .with_value("M_sc", m.kind.msc.status.to_string()),
        )
    }
}

/// Rows and their associated functions, generated on demand.
struct Rows<'a> {
    matrix: &'a WeightMatrix,
    seqs: HashMap<String, Option<LogWeightSequence>>,
    weights: HashMap<String, Option<WeightFunction>>,
}

impl<'a> Rows<'a> {
    fn new(matrix: &'a WeightMatrix) -> Self {
        Rows {
            matrix,
            seqs: HashMap::new(),
            weights: HashMap::new(),
        }
    }

    /// Row `label`, or its multi-index derivation with parameter `l`.
    fn seq(&mut self, label: &RowLabel, l: Option<f64>) -> Option<LogWeightSequence> {
        let key = format!("{label}|{l:?}");
        if let Some(s) = self.seqs.get(&key) {
            return s.clone();
        }
        let base = self.matrix.row(label).ok();
        let s = match (base, l) {
            (Some(b), None) => Some(b),
            (Some(b), Some(l)) => derive_row(&b, l).ok(),
            (None, _) => None,
        };
        self.seqs.insert(key, s.clone());
        s
    }

    fn weight(&mut self, label: &RowLabel, l: Option<f64>) -> Option<WeightFunction> {
        let key = format!("{label}|{l:?}");
        if let Some(w) = self.weights.get(&key) {
            return w.clone();
        }
        let w = self.seq(label, l).and_then(|s| associated_function(&s).ok());
        self.weights.insert(key, w.clone());
        w
    }
}

fn cmp_rel(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0) {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Asymptotic decision of 2ω_a(t) ≤ ω_b(Ht) + H for some H.
fn doubling_analytic(a: &WeightFunction, b: &WeightFunction) -> Status {
    if !(a.is_exact_everywhere() && b.is_exact_everywhere()) {
        return Status::Inconclusive;
    }
    use OmegaGrowth::*;
    match (a.omega_growth(), b.omega_growth()) {
        (Some(Power { exponent: ga, .. }), Some(Power { exponent: gb, .. })) => {
            // H^{γ_b} absorbs the factor 2 once the exponents agree
            Status::from_bool(cmp_rel(gb, ga) != Ordering::Less)
        }
        (Some(LogPower { exponent: da, coef: ca }), Some(LogPower { exponent: db, coef: cb })) => {
            match cmp_rel(db, da) {
                Ordering::Greater => Status::Holds,
                Ordering::Less => Status::Fails,
                Ordering::Equal => match (ca, cb) {
                    (Some(ca), Some(cb)) => match cmp_rel(cb, 2.0 * ca) {
                        Ordering::Greater => Status::Holds,
                        Ordering::Less => Status::Fails,
                        Ordering::Equal => Status::Inconclusive,
                    },
                    _ => Status::Inconclusive,
                },
            }
        }
        (Some(LogPower { .. }), Some(Power { .. })) => Status::Holds,
        (Some(Power { .. }), Some(LogPower { .. })) => Status::Fails,
        _ => Status::Inconclusive,
    }
}

/// Smallest H = 2^k with scale · φ_a(s) ≤ φ_b(s + shift_power · log H) +
/// offset(H) on the shared grid.
fn grid_h(
    a: &WeightFunction,
    b: &WeightFunction,
    scale: f64,
    shift_power: f64,
    offset: impl Fn(f64) -> f64,
) -> Option<f64> {
    (0..=GRID_MAX_EXP).find_map(|k| {
        let log_h = k as f64 * LN_2;
        let h = (k as f64).exp2();
        let shift = shift_power * log_h;
        let top = S_MAX.min(a.valid_to).min(b.valid_to - shift);
        if top <= 0.0 {
            return None;
        }
        let ok = (0..GRID_POINTS).all(|i| {
            let s = top * i as f64 / (GRID_POINTS - 1) as f64;
            let lhs = scale * a.phi_at(s);
            let rhs = b.phi_at(s + shift) + offset(h);
            lhs <= rhs + 1e-9 * rhs.abs().max(1.0)
        });
        ok.then_some(h)
    })
}

fn pseudo_pair(name: &str, a: &WeightFunction, b: &WeightFunction) -> Verdict {
    let status = doubling_analytic(a, b);
    let h = grid_h(a, b, 2.0, 1.0, |h| h);
    let v = Verdict::new(name, status);
    match h {
        Some(h) => v.with("h", h),
        None => v.with("h", f64::INFINITY).with_value("grid_max_exp", GRID_MAX_EXP as i64),
    }
}

/// ∀x ∃y ∃H with 2ω_y(t) ≤ ω_x(Ht) + H (Roumieu) or 2ω_x(t) ≤ ω_y(Ht) + H
/// (Beurling).
fn pseudo_mg(m: &WeightMatrix, rows: &mut Rows<'_>, sense: Sense) -> Verdict {
    let name = format!("pseudo_mg_{sense}");
    let mut parts = Vec::new();
    let mut pairing = serde_json::Map::new();
    for x in m.labels() {
        let Some(wx) = rows.weight(&x, None) else {
            parts.push(Verdict::inconclusive(format!("x={x}"), "row unavailable"));
            continue;
        };
        let mut tried = Vec::new();
        let mut found = None;
        for y in m.candidates(&[&x]) {
            let Some(wy) = rows.weight(&y, None) else { continue };
            let v = match sense {
                Sense::Roumieu => pseudo_pair("pair", &wy, &wx),
                Sense::Beurling => pseudo_pair("pair", &wx, &wy),
            }
            .with_value("y", y.to_string());
            if v.is_holds() {
                found = Some(v);
                break;
            }
            tried.push(v);
        }
        let part = match found {
            Some(v) => {
                pairing.insert(x.to_string(), v.witness["y"].clone());
                let mut p = Verdict::holds(format!("x={x}"));
                p.witness = v.witness;
                p
            }
            None => Verdict::new(format!("x={x}"), Status::any(tried.iter().map(|v| v.status)))
                .with_value("candidates", tried.len() as u64)
                .with_parts(tried),
        };
        parts.push(part);
    }
    Verdict::new(name, Status::all(parts.iter().map(|p| p.status)))
        .with_value("pairing", serde_json::Value::Object(pairing))
        .with_parts(parts)
}

/// Two verdicts that must agree whenever both are decided.
fn agreement(name: &str, a: &Verdict, b: &Verdict) -> Verdict {
    let status = if a.status.is_decided() && b.status.is_decided() {
        Status::from_bool(a.status == b.status)
    } else {
        Status::Inconclusive
    };
    Verdict::new(name, status)
        .with_value(&a.condition, a.status.to_string())
        .with_value(&b.condition, b.status.to_string())
}

/// N_p = min_{0≤q≤p}(L_q + L_{p−q}) and the largest deviation of ω_N from
/// 2ω_M over s ≤ log μ_{P/2}.
pub fn min_convolution_deviation(seq: &LogWeightSequence) -> (Vec<f64>, f64) {
    let v = seq.log_values();
    let n: Vec<f64> = (0..v.len())
        .map(|p| (0..=p).map(|q| v[q] + v[p - q]).fold(f64::INFINITY, f64::min))
        .collect();
    let half = (v.len() - 1) / 2;
    let top = if half >= 1 { v[half] - v[half - 1] } else { 0.0 };
    let phi = |vals: &[f64], s: f64| {
        vals.iter()
            .enumerate()
            .map(|(p, l)| p as f64 * s - l)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut dev: f64 = 0.0;
    for i in 0..GRID_POINTS {
        let s = top.max(0.0) * i as f64 / (GRID_POINTS - 1) as f64;
        dev = dev.max((phi(&n, s) - 2.0 * phi(v, s)).abs());
    }
    (n, dev)
}

fn doubling_device(m: &WeightMatrix) -> Verdict {
    let parts = m
        .rows()
        .iter()
        .map(|r| {
            let (_, dev) = min_convolution_deviation(&r.seq);
            Verdict::new(format!("omega_N_doubles[{}]", r.label), Status::from_bool(dev <= 1e-9))
                .with("max_deviation", dev)
        })
        .collect();
    Verdict::conjunction("omega_N_equals_twice_omega", parts)
}

/// Pseudo moderate growth in both senses, its agreement with (mg), and the
/// min-convolution identity behind it.
pub fn check_pseudo_mg(m: &WeightMatrix) -> Verdict {
    if let Some(v) = precondition("pseudo_mg", m) {
        return v;
    }
    let mut rows = Rows::new(m);
    let mut parts = Vec::new();
    for sense in [Sense::Roumieu, Sense::Beurling] {
        let p = pseudo_mg(m, &mut rows, sense);
        let mg = check_matrix_condition(m, MatrixCondition::Mg(sense));
        parts.push(agreement(&format!("agrees_with_mg_{sense}"), &p, &mg));
        parts.push(p);
        parts.push(mg);
    }
    parts.push(doubling_device(m));
    let status = Status::all(
        parts
            .iter()
            .filter(|p| p.condition.starts_with("agrees") || p.condition.starts_with("omega_N"))
            .map(|p| p.status),
    );
    Verdict::new("pseudo_mg", status)
        .because("status reflects consistency; the condition verdicts are nested")
        .with_value("parts", parts.len() as u64)
        .with_parts(parts)
}

/// Gate ⇒ consequence, vacuous when the gate fails.
fn implication(name: &str, gate: &Verdict, consequent: Verdict) -> Verdict {
    let status = match gate.status {
        Status::Fails => Status::Holds,
        Status::Inconclusive => Status::Inconclusive,
        Status::Holds => consequent.status,
    };
    Verdict::new(name, status)
        .with_value("gate", gate.status.to_string())
        .with_value("consequent", consequent.status.to_string())
        .with_parts([gate.clone(), consequent])
}

/// 2^k ω_x(t) ≤ ω_{y_k}(H^k t) + (2^k − 1)H along the Beurling pseudo-mg
/// pairing, k = 1..3.
fn iterated_beurling(m: &WeightMatrix, rows: &mut Rows<'_>) -> Verdict {
    let first = pseudo_mg(m, rows, Sense::Beurling);
    if !first.is_holds() {
        return Verdict::inconclusive("iterated_mg_beurling", "no Beurling pseudo-mg witness")
            .with_value("pseudo_mg_beurling", first.status.to_string());
    }
    let mut parts = Vec::new();
    for x in m.labels() {
        let Some(wx) = rows.weight(&x, None) else { continue };
        let mut y = x.clone();
        let mut h: f64 = 1.0;
        let mut ok = Status::Holds;
        let mut reached = 0;
        for k in 1..=3 {
            let Some(wy) = rows.weight(&y, None) else { break };
            // one more step: candidate for the next y and its H
            let Some((next, hk)) = m.candidates(&[&y]).into_iter().find_map(|c| {
                let wc = rows.weight(&c, None)?;
                let v = pseudo_pair("pair", &wy, &wc);
                let hh = v.witness_f64("h").filter(|h| h.is_finite())?;
                (v.is_holds()).then_some((c, hh))
            }) else {
                ok = Status::Inconclusive;
                break;
            };
            h = h.max(hk);
            y = next;
            let Some(wk) = rows.weight(&y, None) else { break };
            let scale = (k as f64).exp2();
            let fits = grid_h(&wx, &wk, scale, k as f64, |hh| (scale - 1.0) * hh).is_some();
            ok = ok.and(Status::from_bool(fits));
            reached = k;
        }
        parts.push(
            Verdict::new(format!("x={x}"), ok)
                .with("h", h)
                .with_value("steps", reached as u64)
                .with_value("y_k", y.to_string()),
        );
    }
    Verdict::conjunction("iterated_mg_beurling", parts)
}

/// Stability of M ≈ {M^{x;l}} under (mg), for each l in the test set, and
/// of a second extension against the first.
pub fn check_stability_theorem(m: &WeightMatrix) -> Verdict {
    check_stability_with(m, &STABILITY_LS)
}

pub fn check_stability_with(m: &WeightMatrix, ls: &[f64]) -> Verdict {
    if let Some(v) = precondition("stability", m) {
        return v;
    }
    let mg_r = check_matrix_condition(m, MatrixCondition::Mg(Sense::Roumieu));
    let mg_b = check_matrix_condition(m, MatrixCondition::Mg(Sense::Beurling));
    let mut parts = Vec::new();
    for &l in ls {
        let ext = match m.extended(l) {
            Ok(e) => e,
            Err(e) => {
                parts.push(Verdict::inconclusive(format!("l={l}"), e.to_string()));
                continue;
            }
        };
        let ar = relation_matrix(m, &ext, MatrixRelation::RoumieuApprox);
        let ab = relation_matrix(m, &ext, MatrixRelation::BeurlingApprox);
        let mut sub = vec![
            implication("mg_roumieu_implies_approx", &mg_r, ar),
            implication("mg_beurling_implies_approx", &mg_b, ab),
        ];
        if let Ok(ext2) = ext.extended(l) {
            let r2 = relation_matrix(&ext, &ext2, MatrixRelation::RoumieuApprox);
            let b2 = relation_matrix(&ext, &ext2, MatrixRelation::BeurlingApprox);
            sub.push(Verdict::conjunction("second_extension_approx", vec![r2, b2]));
        }
        parts.push(Verdict::conjunction(format!("l={l}"), sub));
    }
    let mut rows = Rows::new(m);
    parts.push(implication("mg_beurling_implies_iterated", &mg_b, iterated_beurling(m, &mut rows)));
    Verdict::conjunction("stability", parts)
}

/// ∀x ∃y: ω_y(2t) = O(ω_x(t)), with the grid ratio as witness.
fn doubling_relation(m: &WeightMatrix, rows: &mut Rows<'_>) -> Verdict {
    let mut parts = Vec::new();
    for x in m.labels() {
        let Some(wx) = rows.weight(&x, None) else { continue };
        let mut tried = Vec::new();
        let mut found = None;
        for y in m.candidates(&[&x]) {
            let Some(wy) = rows.weight(&y, None) else { continue };
            let rel = relation_omega(&wx, &wy, OmegaRelation::Preceq);
            let top = S_MAX.min(wx.valid_to).min(wy.valid_to - LN_2);
            let ratio = (0..GRID_POINTS)
                .map(|i| 1.0 + (top - 1.0).max(0.0) * i as f64 / (GRID_POINTS - 1) as f64)
                .map(|s| wy.phi_at(s + LN_2) / wx.phi_at(s))
                .fold(0.0, f64::max);
            let v = Verdict::new("pair", rel.status)
                .with("grid_max_ratio", ratio)
                .with_value("y", y.to_string());
            if v.is_holds() {
                found = Some(v);
                break;
            }
            tried.push(v);
        }
        parts.push(match found {
            Some(v) => {
                let mut p = Verdict::holds(format!("x={x}"));
                p.witness = v.witness;
                p
            }
            None => Verdict::new(format!("x={x}"), Status::any(tried.iter().map(|v| v.status))).with_parts(tried),
        });
    }
    Verdict::conjunction("omega_doubling", parts)
}

/// h^j M^{x;a}_j ≤ D M^{y;b}_j (Roumieu, y searched) or
/// h^j M^{y;b}_j ≤ D M^{x;a}_j (Beurling), for h ∈ {2, 4}, a ∈ {1, 2}.
fn mixed_domination(m: &WeightMatrix, rows: &mut Rows<'_>, sense: Sense, hs: &[f64], as_: &[f64]) -> Verdict {
    let mut parts = Vec::new();
    for x in m.labels() {
        for &a in as_ {
            let Some(sx) = rows.seq(&x, Some(a)) else { continue };
            for &h in hs {
                let mut found = None;
                let mut statuses = Vec::new();
                'search: for y in m.candidates(&[&x]) {
                    for b in [1.0, 2.0] {
                        let Some(sy) = rows.seq(&y, Some(b)) else { continue };
                        let (lo, hi) = match sense {
                            Sense::Roumieu => (&sx, &sy),
                            Sense::Beurling => (&sy, &sx),
                        };
                        let lim = limit(lo.growth(), hi.growth());
                        let status = match lim {
                            Limit::MinusInfinity => Status::Holds,
                            Limit::PlusInfinity => Status::Fails,
                            Limit::Finite(d) => match cmp_rel(d + h.ln(), 0.0) {
                                Ordering::Less => Status::Holds,
                                Ordering::Greater => Status::Fails,
                                Ordering::Equal => Status::Inconclusive,
                            },
                            Limit::Unknown => Status::Inconclusive,
                        };
                        statuses.push(status);
                        if status == Status::Holds {
                            let reach = lo.pmax().min(hi.pmax());
                            let d = (0..=reach)
                                .map(|j| j as f64 * h.ln() + lo.log_values()[j] - hi.log_values()[j])
                                .fold(f64::NEG_INFINITY, f64::max);
                            found = Some(
                                Verdict::holds("pair")
                                    .with_value("y", y.to_string())
                                    .with("b", b)
                                    .with("d", d.exp())
                                    .with_value("log_root_limit", limit_value(lim)),
                            );
                            break 'search;
                        }
                    }
                }
                let name = format!("x={x},a={a},h={h}");
                parts.push(match found {
                    Some(v) => {
                        let mut p = Verdict::holds(name);
                        p.witness = v.witness;
                        p
                    }
                    None => Verdict::new(name, Status::any(statuses.iter().copied()))
                        .with_value("candidates", statuses.len() as u64),
                });
            }
        }
    }
    Verdict::conjunction(format!("mixed_domination_{sense}"), parts)
}

/// (M_L) and its consequences: the doubling relation for ω and the
/// mixed-index domination, plus the reverse derivation back to (M_L).
pub fn check_l_consequences(m: &WeightMatrix) -> Verdict {
    if let Some(v) = precondition("L_consequences", m) {
        return v;
    }
    let mut rows = Rows::new(m);
    let l_r = check_matrix_condition(m, MatrixCondition::L(Sense::Roumieu));
    let l_b = check_matrix_condition(m, MatrixCondition::L(Sense::Beurling));
    let doubling = doubling_relation(m, &mut rows);
    let nat_r = mixed_domination(m, &mut rows, Sense::Roumieu, &[2.0, 4.0], &[1.0, 2.0]);
    let nat_b = mixed_domination(m, &mut rows, Sense::Beurling, &[2.0, 4.0], &[1.0, 2.0]);
    let forward_r = implication(
        "L_roumieu_consequences",
        &l_r,
        Verdict::conjunction("consequences", vec![doubling, nat_r.clone()]),
    );
    let forward_b = implication("L_beurling_consequences", &l_b, nat_b.clone());
    // a = 1 rows are the matrix rows, so the h = 2 instance is (M_L) at C = 2
    let reverse_r = implication("reverse_roumieu", &nat_r, l_r.clone());
    let reverse_b = implication("reverse_beurling", &nat_b, l_b.clone());
    Verdict::conjunction("L_consequences", vec![forward_r, forward_b, reverse_r, reverse_b])
}

/// ∃y per x with the ω-triangle relation in the given sense.
fn omega_triangle(m: &WeightMatrix, rows: &mut Rows<'_>, sense: Sense) -> Verdict {
    let mut parts = Vec::new();
    for x in m.labels() {
        let Some(wx) = rows.weight(&x, None) else { continue };
        let mut statuses = Vec::new();
        let mut found = None;
        for y in m.candidates(&[&x]) {
            let Some(wy) = rows.weight(&y, None) else { continue };
            let v = match sense {
                Sense::Roumieu => relation_omega(&wx, &wy, OmegaRelation::Triangle),
                Sense::Beurling => relation_omega(&wy, &wx, OmegaRelation::Triangle),
            };
            statuses.push(v.status);
            if v.is_holds() {
                found = Some(v.with_value("y", y.to_string()));
                break;
            }
        }
        let name = format!("x={x}");
        parts.push(match found {
            Some(v) => {
                let mut p = Verdict::holds(name);
                p.witness = v.witness;
                p
            }
            None => Verdict::new(name, Status::any(statuses.iter().copied()))
                .with_value("candidates", statuses.len() as u64),
        });
    }
    Verdict::conjunction(format!("omega_triangle_{sense}"), parts)
}

/// (M_BR) with per-row (mg) gives the ω-triangle relation; per-row (ω1)
/// with the ω-triangle relation gives (M_BR). Both senses.
pub fn check_br_triangle(m: &WeightMatrix) -> Verdict {
    if let Some(v) = precondition("BR_triangle", m) {
        return v;
    }
    let mut rows = Rows::new(m);
    let row_mg = Verdict::conjunction(
        "rows_mg",
        m.rows().iter().map(|r| check_moderate_growth(&r.seq).renamed(format!("mg[{}]", r.label))).collect(),
    );
    let row_omega1 = Verdict::conjunction(
        "rows_omega1",
        m.rows()
            .iter()
            .map(|r| match associated_function(&r.seq) {
                Ok(w) => check_omega1(&w).renamed(format!("omega1[{}]", r.label)),
                Err(e) => Verdict::inconclusive(format!("omega1[{}]", r.label), e.to_string()),
            })
            .collect(),
    );
    let mut parts = Vec::new();
    for sense in [Sense::Roumieu, Sense::Beurling] {
        let br = check_matrix_condition(m, MatrixCondition::Br(sense));
        let tri = omega_triangle(m, &mut rows, sense);
        let gate = Verdict::conjunction("br_and_mg", vec![br.clone(), row_mg.clone()]);
        parts.push(implication(&format!("br_implies_triangle_{sense}"), &gate, tri.clone()));
        let gate = Verdict::conjunction("omega1_and_triangle", vec![row_omega1.clone(), tri]);
        parts.push(implication(&format!("triangle_implies_br_{sense}"), &gate, br));
    }
    Verdict::conjunction("BR_triangle", parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::law::ln_factorial;

    fn gevrey() -> WeightMatrix {
        WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 100).unwrap()
    }

    fn factorial() -> WeightMatrix {
        WeightMatrix::constant(LogWeightSequence::gevrey(1.0, 100).unwrap()).unwrap()
    }

    #[test]
    fn min_convolution_doubles_omega() {
        let (n, dev) = min_convolution_deviation(&LogWeightSequence::gevrey(1.0, 100).unwrap());
        assert!(dev <= 1e-9, "{dev}");
        // for log-convex rows the minimum sits at the midpoint
        assert!((n[10] - 2.0 * ln_factorial(5.0)).abs() < 1e-9);
    }

    #[test]
    fn single_gevrey_row_pseudo_mg() {
        let g = LogWeightSequence::gevrey(2.0, 200).unwrap();
        let w = associated_function(&g).unwrap();
        let v = pseudo_pair("pair", &w, &w);
        assert!(v.is_holds());
        assert!(v.witness_f64("h").unwrap() <= 16.0);
    }

    #[test]
    fn pseudo_mg_agrees() {
        for m in [gevrey(), factorial()] {
            let v = check_pseudo_mg(&m);
            assert!(v.is_holds(), "{v:#?}");
            assert!(v.find("pseudo_mg_roumieu").unwrap().is_holds());
        }
        let prefix = WeightMatrix::constant(LogWeightSequence::gevrey(1.0, 50).unwrap().without_tail()).unwrap();
        assert_eq!(check_pseudo_mg(&prefix).status, Status::Inconclusive);
    }

    #[test]
    fn power_log_rows_fail_pseudo_mg() {
        let w = WeightFunction::power_log(2.0).unwrap();
        let m = WeightMatrix::omega(&w, &[1.0], 40).unwrap();
        let v = check_pseudo_mg(&m);
        assert!(v.is_holds(), "{v:#?}");
        // a single row: ω_s needs y >= 2x, which the generator supplies
        assert!(v.find("pseudo_mg_roumieu").unwrap().is_holds());
        let fixed = WeightMatrix::new("fixed", vec![(RowLabel::base(1.0), m.rows()[0].seq.clone())]).unwrap();
        let v = check_pseudo_mg(&fixed);
        assert!(v.find("pseudo_mg_roumieu").unwrap().is_fails());
        assert!(v.find("mg_roumieu").unwrap().is_fails());
    }

    #[test]
    fn stability_gevrey() {
        let v = check_stability_with(&gevrey(), &[2.0, 0.5]);
        assert!(v.is_holds(), "{v:#?}");
        let v = check_stability_with(&factorial(), &[2.0]);
        assert!(v.is_holds(), "{v:#?}");
    }

    #[test]
    fn l_consequences() {
        let v = check_l_consequences(&gevrey());
        assert!(v.is_holds(), "{v:#?}");
        let c = v.find("L_roumieu_consequences").unwrap();
        assert_eq!(c.witness["gate"], "holds");
        let v = check_l_consequences(&factorial());
        assert!(v.is_holds(), "{v:#?}");
        assert_eq!(v.find("L_roumieu_consequences").unwrap().witness["gate"], "fails");
    }

    #[test]
    fn br_triangle() {
        let v = check_br_triangle(&gevrey());
        assert!(v.is_holds(), "{v:#?}");
        assert_eq!(v.find("br_implies_triangle_roumieu").unwrap().witness["gate"], "holds");
        let v = check_br_triangle(&factorial());
        assert!(v.is_holds());
        assert_eq!(v.find("br_implies_triangle_roumieu").unwrap().witness["gate"], "fails");
    }
}
