pub mod conditions;
pub mod law;
pub mod regularize;
pub mod relations;
pub mod sequence;
pub mod series;

pub use law::{Growth, Lead, Limit, OmegaGrowth, Series, TailLaw, TailSum};
pub use sequence::{DerivedQuotients, LogWeightSequence, Tail, DEFAULT_PMAX};
