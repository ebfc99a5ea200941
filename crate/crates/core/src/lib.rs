pub mod catalogue;
pub mod cli;
pub mod descriptor;
pub mod error;
pub mod fourier;
pub mod matrix;
pub mod output;
pub mod props;
pub mod quasi;
pub mod seq;
pub mod verdict;
pub mod weight;

pub use error::{Error, Result};
pub use verdict::{Status, Verdict};
