use rayon::prelude::*;

use super::{decompose, reconstruct, Boundary, WaveletFilter};
use crate::ingest::Profile;
use crate::Result;

/// Support, in samples, of the level-`level` cascaded low-pass kernel:
/// `(taps - 1)(2^level - 1) + 1`.
pub fn level_scale(filter: &WaveletFilter, level: usize) -> usize {
    (filter.len() - 1) * ((1usize << level) - 1) + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationLevel {
    pub level: usize,
    pub scale: usize,
    pub fluctuation: Vec<f64>,
    pub trend: Vec<f64>,
}

/// Detrended fluctuations at levels `1..=max_level`, finest first.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSet {
    pub levels: Vec<FluctuationLevel>,
}

/// Wavelet trend removal with forward/reverse averaging.
///
/// For each level the trend is the low-pass reconstruction with all detail bands
/// up to that level discarded. The same is done on the reversed profile, the
/// resulting fluctuation is reversed back, and the two are averaged, so the
/// output commutes with time reversal of the input.
pub fn extract_fluctuations(
    prof: &Profile,
    filter: &WaveletFilter,
    max_level: usize,
    boundary: Boundary,
) -> Result<FluctuationSet> {
    let forward = prof.values();
    let reversed: Vec<f64> = forward.iter().rev().copied().collect();
    let fwd = decompose(forward, filter, max_level, boundary)?;
    let rev = decompose(&reversed, filter, max_level, boundary)?;

    let levels = (1..=max_level)
        .into_par_iter()
        .map(|level| -> Result<FluctuationLevel> {
            let trend_fwd = reconstruct(&fwd, Some(level))?;
            let trend_rev = reconstruct(&rev, Some(level))?;
            let n = forward.len();
            let mut fluctuation = Vec::with_capacity(n);
            let mut trend = Vec::with_capacity(n);
            for i in 0..n {
                let plus = forward[i] - trend_fwd[i];
                let j = n - 1 - i;
                let minus = reversed[j] - trend_rev[j];
                let f = 0.5 * (plus + minus);
                fluctuation.push(f);
                trend.push(forward[i] - f);
            }
            Ok(FluctuationLevel {
                level,
                scale: level_scale(filter, level),
                fluctuation,
                trend,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FluctuationSet { levels })
}
