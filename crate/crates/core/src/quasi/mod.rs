pub mod minorant;
pub mod sandwich;
pub mod verdicts;

pub use minorant::{construct_minorant, MinorantTrace};
pub use sandwich::{sandwich_construct, Sandwich};
pub use verdicts::{class_nq_verdict, matrix_nq_verdict, small_terms_diagnostic};
