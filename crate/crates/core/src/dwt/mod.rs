//! Orthogonal discrete wavelet transforms and wavelet trend extraction.

mod filter;
mod transform;
mod trend;

pub use filter::{make_filter, WaveletFamily, WaveletFilter};
pub use transform::{decompose, reconstruct, Boundary, Decomposition};
pub use trend::{extract_fluctuations, level_scale, FluctuationLevel, FluctuationSet};
