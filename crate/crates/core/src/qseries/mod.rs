//! Truncated `q̃`-expansions with rational exponents, logarithmic expansions and
//! the vector-valued forms built from them.

pub mod builtin;
pub mod integral;
pub mod log;
mod series;
mod vvaf;

pub use log::{log_nome, log_recouple, Direction, LogQExpansion};
pub use series::{combine, nome_modulus, CombineOp, Evaluation, FracQSeries, SeriesJson, MAX_NOME};
pub use vvaf::{mix, CoefficientVector, Flags, TransformCheck, VecEvaluation, Vvaf, BUILTIN_VVAFS};
