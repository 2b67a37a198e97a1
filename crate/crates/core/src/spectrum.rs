//! Fourier power spectrum of a profile and its power-law exponent.

use std::io::Write;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::ingest::Profile;
use crate::stats;
use crate::{Error, Result};

/// Default tolerance on `|alpha - (2H + 1)|`.
pub const CONSISTENCY_TOLERANCE: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyBand {
    pub low: f64,
    pub high: f64,
}

impl FrequencyBand {
    /// `[4/N, 1/8]` cycles per sample.
    pub fn default_for_length(n: usize) -> Self {
        Self {
            low: 4.0 / n as f64,
            high: 0.125,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Binning {
    /// Fit the raw periodogram ordinates.
    None,
    /// Average log power within this many log-spaced frequency bins.
    Log(usize),
}

impl Default for Binning {
    fn default() -> Self {
        Binning::Log(16)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaFit {
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub band: FrequencyBand,
    pub binning: Binning,
    /// Raw periodogram ordinates inside the band.
    pub bins_in_band: usize,
    /// Points entering the regression (equals `bins_in_band` when unbinned).
    pub points_fitted: usize,
}

/// One-sided periodogram with DC removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSpectrum {
    /// `k / N` for `k = 1..=floor(N/2)`.
    pub frequencies: Vec<f64>,
    /// `|X_k|^2 / N` of the mean-subtracted profile.
    pub power: Vec<f64>,
    pub length: usize,
    pub fit: Option<AlphaFit>,
}

impl PowerSpectrum {
    /// Sum over all non-DC two-sided ordinates; equals the sum of squared
    /// mean-subtracted samples (N times their population variance).
    pub fn two_sided_total(&self) -> f64 {
        let n = self.length;
        self.power
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let k = i + 1;
                if 2 * k == n {
                    *p
                } else {
                    2.0 * p
                }
            })
            .sum()
    }

    /// CSV with columns `frequency,power`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "frequency,power")?;
        for (f, p) in self.frequencies.iter().zip(&self.power) {
            writeln!(out, "{f},{p}")?;
        }
        Ok(())
    }
}

pub fn power_spectrum(prof: &Profile) -> Result<PowerSpectrum> {
    power_spectrum_of(prof.values())
}

/// Periodogram of an arbitrary sequence, mean removed first.
pub fn power_spectrum_of(values: &[f64]) -> Result<PowerSpectrum> {
    let n = values.len();
    if n < 16 {
        return Err(Error::InvalidSeries(format!("spectrum needs 16 samples, got {n}")));
    }
    let m = stats::mean(values);
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v - m, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    Ok(PowerSpectrum {
        frequencies: (1..=half).map(|k| k as f64 / n as f64).collect(),
        power: buf[1..=half].iter().map(|c| c.norm_sqr() / n as f64).collect(),
        length: n,
        fit: None,
    })
}

/// Least-squares slope of log power against log frequency; `alpha = -slope`.
pub fn fit_alpha(spec: &PowerSpectrum, band: Option<FrequencyBand>, binning: Binning) -> Result<PowerSpectrum> {
    let band = band.unwrap_or_else(|| FrequencyBand::default_for_length(spec.length));
    if !(band.low > 0.0 && band.high > band.low) {
        return Err(Error::InvalidParameter(format!(
            "empty frequency band [{}, {}]",
            band.low, band.high
        )));
    }
    let mut log_f = Vec::new();
    let mut log_p = Vec::new();
    for (&f, &p) in spec.frequencies.iter().zip(&spec.power) {
        if f >= band.low && f <= band.high {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::NonFinite(format!("power {p} at frequency {f}")));
            }
            log_f.push(f.ln());
            log_p.push(p.ln());
        }
    }
    let bins_in_band = log_f.len();
    if bins_in_band < 8 {
        return Err(Error::InvalidParameter(format!(
            "only {bins_in_band} periodogram bins in band, at least 8 required"
        )));
    }
    let (x, y) = match binning {
        Binning::None => (log_f, log_p),
        Binning::Log(bins) => log_bin(&log_f, &log_p, band, bins.max(2)),
    };
    let fit = stats::linear_fit(&x, &y).ok_or_else(|| {
        Error::InvalidParameter("fewer than two populated frequency bins".into())
    })?;
    let mut out = spec.clone();
    out.fit = Some(AlphaFit {
        alpha: -fit.slope,
        alpha_stderr: fit.slope_stderr,
        band,
        binning,
        bins_in_band,
        points_fitted: x.len(),
    });
    Ok(out)
}

/// Mean log frequency and mean log power inside each populated log-spaced bin.
fn log_bin(log_f: &[f64], log_p: &[f64], band: FrequencyBand, bins: usize) -> (Vec<f64>, Vec<f64>) {
    let lo = band.low.ln();
    let width = (band.high.ln() - lo) / bins as f64;
    let mut sums = vec![(0.0, 0.0, 0usize); bins];
    for (&f, &p) in log_f.iter().zip(log_p) {
        let b = (((f - lo) / width).floor() as usize).min(bins - 1);
        sums[b].0 += f;
        sums[b].1 += p;
        sums[b].2 += 1;
    }
    sums.into_iter()
        .filter(|s| s.2 > 0)
        .map(|(f, p, c)| (f / c as f64, p / c as f64))
        .unzip()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Consistency {
    pub predicted_alpha: f64,
    pub gap: f64,
    pub consistent: bool,
}

/// Compares a spectral exponent with `2H + 1`.
pub fn consistency_check(alpha: f64, hurst: f64, tolerance: f64) -> Consistency {
    let predicted_alpha = 2.0 * hurst + 1.0;
    let gap = (alpha - predicted_alpha).abs();
    Consistency {
        predicted_alpha,
        gap,
        consistent: gap <= tolerance,
    }
}
