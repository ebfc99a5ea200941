//! Weight matrices, their conditions and relations, the multi-index
//! construction and the stability checks built on it.

pub mod chain;
pub mod conditions;
#[allow(clippy::module_inception)]
pub mod matrix;
pub mod relations;
pub mod report;
pub mod theorems;

pub use chain::{check_integer_identity, check_integer_identity_with, check_omega_stability, multi_index_step, MultiIndexChain};
pub use conditions::{check_all_matrix_conditions, check_matrix_condition, MatrixCondition, Sense};
pub use matrix::{derive_row, RowGenerator, RowLabel, WeightMatrix};
pub use relations::{relation_matrix, MatrixRelation};
pub use report::{comparison_report, ComparisonReport, ReportInput};
pub use theorems::{check_br_triangle, check_l_consequences, check_pseudo_mg, check_stability_theorem, check_stability_with};
