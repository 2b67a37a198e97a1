//! Fluctuation analysis for financial and synthetic time series.
//!
//! The pipeline runs from raw prices to scaling exponents:
//!
//! * [`ingest`] loads CSV columns, builds log returns, shuffled surrogates and profiles.
//! * [`dwt`] provides orthogonal Haar/Daubechies filter banks and the wavelet trend
//!   extraction used by the wavelet-based fluctuation analysis (WBFA).
//! * [`fluct`] computes generalized fluctuation functions with WBFA and MF-DFA and fits h(q).
//! * [`cwt`] computes Morlet scalograms, marginal energy curves and dominant scales.
//! * [`spectrum`] fits the power-law exponent of the Fourier power spectrum.
//! * [`dist`] compares the return density against a matched Gaussian.
//! * [`synth`] generates white noise, fractional Gaussian noise and binomial cascades
//!   with known exponents.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cwt;
pub mod dist;
pub mod dwt;
mod error;
pub mod fluct;
pub mod ingest;
pub mod spectrum;
pub mod stats;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
