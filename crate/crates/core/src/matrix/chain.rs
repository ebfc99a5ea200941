//! Iterated multi-index construction M^{x;l_1,…,l_j}.

use serde::Serialize;

use super::matrix::{RowLabel, WeightMatrix};
use crate::error::Result;
use crate::verdict::{Status, Verdict};
use crate::weight::function::associated_function;
use crate::weight::relations::{relation_omega, OmegaRelation};

/// Log deviation accepted by the integer-l identity.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Per-row range of exactness for the associated function after a step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDomain {
    pub label: String,
    pub valid_to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiIndexChain {
    pub base: WeightMatrix,
    pub steps: Vec<f64>,
    pub current: WeightMatrix,
    /// valid_to of ω for each current row, one entry per step.
    pub domains: Vec<Vec<RowDomain>>,
}

impl MultiIndexChain {
    pub fn new(base: WeightMatrix) -> Self {
        MultiIndexChain {
            current: base.clone(),
            base,
            steps: Vec::new(),
            domains: Vec::new(),
        }
    }
}

fn domains(m: &WeightMatrix) -> Result<Vec<RowDomain>> {
    m.rows()
        .iter()
        .map(|r| {
            Ok(RowDomain {
                label: r.label.to_string(),
                valid_to: associated_function(&r.seq)?.valid_to,
            })
        })
        .collect()
}

/// Apply ω_M followed by Ω^l to every current row.
pub fn multi_index_step(chain: &MultiIndexChain, l: f64) -> Result<MultiIndexChain> {
    let current = chain.current.extended(l)?;
    let mut out = MultiIndexChain {
        base: chain.base.clone(),
        steps: chain.steps.clone(),
        current,
        domains: chain.domains.clone(),
    };
    out.steps.push(l);
    out.domains.push(domains(&out.current)?);
    Ok(out)
}

/// ω of every current row is equivalent to ω of its base row.
pub fn check_omega_stability(chain: &MultiIndexChain) -> Verdict {
    let mut parts = Vec::new();
    for r in chain.current.rows() {
        let base_label = RowLabel::base(r.label.x);
        let Some(base) = chain.base.get(&base_label) else {
            parts.push(Verdict::inconclusive(r.label.to_string(), "base row missing"));
            continue;
        };
        let v = match (associated_function(base), associated_function(&r.seq)) {
            (Ok(a), Ok(b)) => relation_omega(&a, &b, OmegaRelation::Sim),
            (Err(e), _) | (_, Err(e)) => Verdict::inconclusive("omega_sim", e.to_string()),
        };
        parts.push(v.renamed(format!("sim[{}]", r.label)));
    }
    Verdict::conjunction("omega_stability", parts).with_value("steps", chain.steps.clone())
}

/// M^{x;l_1,…,l_j}_i = (M^x_{iL})^{1/L} with L = l_1⋯l_j, for integer steps;
/// compared in log form for every i with iL within the base prefix.
pub fn check_integer_identity(chain: &MultiIndexChain) -> Verdict {
    check_integer_identity_with(chain, IDENTITY_TOL)
}

pub fn check_integer_identity_with(chain: &MultiIndexChain, tol: f64) -> Verdict {
    if chain.steps.iter().any(|l| l.fract() != 0.0 || *l < 1.0) {
        return Verdict::inconclusive("integer_identity", "steps are not all positive integers");
    }
    let total: usize = chain.steps.iter().map(|&l| l as usize).product();
    let mut worst = (0.0f64, String::new(), 0usize);
    let mut compared = 0u64;
    for r in chain.current.rows() {
        let Some(base) = chain.base.get(&RowLabel::base(r.label.x)) else {
            return Verdict::inconclusive("integer_identity", format!("base row of {} missing", r.label));
        };
        let b = base.log_values();
        for (i, v) in r.seq.log_values().iter().enumerate() {
            let Some(&bv) = b.get(i * total) else { break };
            let dev = (v - bv / total as f64).abs();
            compared += 1;
            if dev > worst.0 {
                worst = (dev, r.label.to_string(), i);
            }
        }
    }
    Verdict::new("integer_identity", Status::from_bool(worst.0 <= tol))
        .with("max_log_deviation", worst.0)
        .with("tolerance", tol)
        .with_value("at_row", worst.1)
        .with_value("at_index", worst.2 as u64)
        .with_value("compared", compared)
}
