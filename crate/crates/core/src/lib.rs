//! One-dimensional aperiodic order: the period-doubling Toeplitz point set,
//! the Fibonacci substitution and inflation chain, the Fibonacci
//! cut-and-project set, and the exact autocorrelation and diffraction of
//! the period-doubling sequence together with numerical estimators that
//! check them.
//!
//! Everything that the closed forms describe is computed exactly: words
//! are integer letter ids, geometry lives in `Z[τ]`, and spectral values
//! are rationals. Floating point appears only in Perron–Frobenius
//! numerics, the windowed estimators and SVG output.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod render;
pub mod spectra;
pub mod symbolic;
pub mod toeplitz;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational used for closed-form spectral values.
pub type Rational = num_rational::Ratio<i128>;
