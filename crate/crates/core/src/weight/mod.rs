pub mod conditions;
pub mod convex_pl;
pub mod function;
pub mod relations;

pub use convex_pl::ConvexPL;
pub use function::{associated_function, sequence_from_weight, young_conjugate, WeightFunction, WeightSource};
