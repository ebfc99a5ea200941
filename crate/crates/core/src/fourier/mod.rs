pub mod bump;
pub mod domain;
pub mod harness;
pub mod lemmas;
pub mod norms;
pub mod spectral;

pub use bump::{bump_builder, check_bump_derivatives};
pub use domain::{support_function, CompactBox, SampledFunction};
pub use harness::{standard_battery, theorem51_default, theorem51_harness, HarnessConfig, HarnessReport};
pub use lemmas::{check_lemma53_i, check_lemma53_ii};
pub use norms::{fourier_norm, seminorm_derivative, seminorm_weightfn, FourierNorm, Seminorm};
pub use spectral::{spectrum, FunctionAnalysis, SpectralData};
