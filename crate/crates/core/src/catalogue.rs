//! Built-in families used by batteries and route-agreement checks.

use crate::descriptor::{parse_matrix, parse_sequence};
use crate::error::Result;
use crate::matrix::WeightMatrix;
use crate::seq::LogWeightSequence;

/// Sequence descriptors of the catalogue.
pub const SEQUENCE_FAMILIES: &[&str] = &[
    "gevrey:0.5",
    "gevrey:1",
    "gevrey:1.5",
    "gevrey:2",
    "gevrey:3",
    "gevrey:5",
    "factorial_power:1,2",
    "factorial_power:1.5,0.5",
    "factorial_power:2,3",
    "factorial_power:1.2,1",
    "power_exp:1,2",
    "power_exp:0.5,1.5",
    "power_exp:0.1,1.1",
    "entropy_linear:1.5,0.5,0,0",
    "entropy_linear:1,1,0,0",
    "entropy_linear:3,0,0,0",
    "rescaled:2,gevrey:2",
    "rescaled:0.5,gevrey:2",
    "rescaled:3,factorial_power:1.5,1",
    "mean:gevrey:1|gevrey:3",
    "mean:gevrey:0.5|power_exp:1,2",
    "mean:factorial_power:1,2|gevrey:2",
    "truncated:gevrey:2",
    "truncated:gevrey:1",
    "values:0,0,1,3,6,10,15,21,28,36",
];

/// Matrix descriptors of the catalogue.
pub const MATRIX_FAMILIES: &[&str] = &[
    "gevrey:1,2,3",
    "gevrey:0.5,1",
    "gevrey:1,0.5,0.3333333333333333,0.25",
    "rows:gevrey:1;gevrey:2",
    "rows:gevrey:2;gevrey:3",
    "constant:gevrey:2",
    "constant:factorial_power:1.5,2",
    "omega:powerlog:2@0.5,1,2",
    "omega:rootpower:0.5,1@0.5,1,2",
    "omega:assoc:gevrey:2@0.5,1,2",
];

pub fn sequences(pmax: usize) -> Result<Vec<LogWeightSequence>> {
    SEQUENCE_FAMILIES.iter().map(|d| parse_sequence(d, pmax)).collect()
}

pub fn matrices(pmax: usize) -> Result<Vec<WeightMatrix>> {
    MATRIX_FAMILIES.iter().map(|d| parse_matrix(d, pmax)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::class_nq_verdict;

    #[test]
    fn every_family_parses() {
        assert!(SEQUENCE_FAMILIES.len() >= 20);
        assert_eq!(sequences(200).unwrap().len(), SEQUENCE_FAMILIES.len());
        assert_eq!(matrices(200).unwrap().len(), MATRIX_FAMILIES.len());
    }

    #[test]
    fn nq_routes_agree() {
        for seq in sequences(200).unwrap() {
            let v = class_nq_verdict(&seq);
            assert!(v.is_ok(), "{}: {v:?}", seq.label());
        }
    }
}
