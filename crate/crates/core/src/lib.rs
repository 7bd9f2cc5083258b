//! Computational toolkit for vector-valued automorphic forms on PSL2(Z) and its
//! finite-index subgroups.
//!
//! The crate is organised bottom-up:
//!
//! - [`moebius`]: exact PSL2(Z) arithmetic, classification, word decomposition, cusps.
//! - [`repr`]: representations given by the images of `s` and `t`, Jordan analysis,
//!   growth classification, induction and the built-in examples.
//! - [`qseries`]: fractional-exponent q-series, logarithmic expansions, eta/theta
//!   series and vector-valued forms assembled from them.
//! - [`growth`]: empirical coefficient-growth, sup-norm and mean-square checks.
//! - [`lfunc`]: Dirichlet series and completed L-functions with functional equations.
//! - [`expsum`]: exponential sums of Fourier coefficients.

pub mod error;
pub mod expsum;
pub mod fit;
pub mod gamma;
pub mod growth;
pub mod lfunc;
pub mod moebius;
pub mod mp;
pub mod qseries;
pub mod repr;

pub use error::{Error, Result};
pub use moebius::{Cusp, GroupElement, Point, RealMoebius, Subgroup, Word};
pub use qseries::{FracQSeries, LogQExpansion, Vvaf};
pub use repr::{JordanData, Representation};

pub use num_complex::Complex64;
