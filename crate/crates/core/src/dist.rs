//! Return density against a moment-matched Gaussian.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::ingest::ReturnSeries;
use crate::stats;
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 100;
pub const MIN_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityComparison {
    pub bin_centers: Vec<f64>,
    pub bin_width: f64,
    /// Histogram normalized so that `bin_width * sum = 1`.
    pub empirical_density: Vec<f64>,
    /// Normal density with the sample mean and variance, at the bin centers.
    pub gaussian_density: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub excess_kurtosis: f64,
    /// Observed share beyond 3 std of the mean over the Gaussian share 2 Q(3).
    pub tail_ratio: f64,
    pub empirical_peak: f64,
    pub gaussian_peak: f64,
}

impl DensityComparison {
    /// CSV with columns `bin_center,empirical,gaussian`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "bin_center,empirical,gaussian")?;
        for ((c, e), g) in self.bin_centers.iter().zip(&self.empirical_density).zip(&self.gaussian_density) {
            writeln!(out, "{c},{e},{g}")?;
        }
        Ok(())
    }
}

pub fn density_compare(returns: &ReturnSeries, bins: usize) -> Result<DensityComparison> {
    density_compare_values(returns.values(), bins)
}

/// Equal-width bins spanning `[-max|x|, max|x|]`.
pub fn density_compare_values(x: &[f64], bins: usize) -> Result<DensityComparison> {
    let n = x.len();
    if n < MIN_SAMPLES {
        return Err(Error::InvalidSeries(format!(
            "density comparison needs {MIN_SAMPLES} samples, got {n}"
        )));
    }
    if bins < MIN_BINS {
        return Err(Error::InvalidParameter(format!("at least {MIN_BINS} bins required")));
    }
    let reach = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mean = stats::mean(x);
    let std = stats::sample_std(x);
    if !(reach > 0.0 && std > 0.0) {
        return Err(Error::ZeroSigma("returns are constant"));
    }
    let width = 2.0 * reach / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in x {
        let b = (((v + reach) / width).floor() as usize).min(bins - 1);
        counts[b] += 1;
    }
    let bin_centers: Vec<f64> = (0..bins).map(|b| -reach + (b as f64 + 0.5) * width).collect();
    let empirical_density: Vec<f64> = counts.iter().map(|&c| c as f64 / (n as f64 * width)).collect();
    let gaussian_density: Vec<f64> = bin_centers
        .iter()
        .map(|&c| {
            let z = (c - mean) / std;
            (-0.5 * z * z).exp() / (std * (2.0 * PI).sqrt())
        })
        .collect();

    let m2 = stats::population_variance(x);
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n as f64;
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;

    let beyond = x.iter().filter(|v| ((*v - mean) / std).abs() > 3.0).count() as f64 / n as f64;
    let gaussian_tail = erfc(3.0 / std::f64::consts::SQRT_2);
    let tail_ratio = beyond / gaussian_tail;

    let empirical_peak = empirical_density.iter().fold(0.0f64, |m, &v| m.max(v));
    let gaussian_peak = 1.0 / (std * (2.0 * PI).sqrt());
    Ok(DensityComparison {
        bin_centers,
        bin_width: width,
        empirical_density,
        gaussian_density,
        mean,
        std,
        excess_kurtosis,
        tail_ratio,
        empirical_peak,
        gaussian_peak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ramp(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / n as f64 - 0.5).collect()
    }

    #[test]
    fn density_integrates_to_one() {
        let d = density_compare_values(&ramp(1000), 25).unwrap();
        let total: f64 = d.empirical_density.iter().sum::<f64>() * d.bin_width;
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        assert_relative_eq!(d.bin_centers[0] + d.bin_centers[24], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_kurtosis() {
        // Uniform distribution: excess kurtosis -6/5.
        let d = density_compare_values(&ramp(20000), 20).unwrap();
        assert_relative_eq!(d.excess_kurtosis, -1.2, epsilon = 1e-3);
        assert_eq!(d.tail_ratio, 0.0);
    }

    #[test]
    fn affine_invariance() {
        let x: Vec<f64> = (0..500).map(|i| ((i * 7907 % 1009) as f64 / 1009.0 - 0.5).powi(3)).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.5 * v + 2.0).collect();
        let a = density_compare_values(&x, 30).unwrap();
        let b = density_compare_values(&y, 30).unwrap();
        assert_relative_eq!(a.excess_kurtosis, b.excess_kurtosis, epsilon = 1e-9);
        assert_relative_eq!(a.tail_ratio, b.tail_ratio, epsilon = 1e-9);
    }

    #[test]
    fn preconditions() {
        assert!(density_compare_values(&ramp(99), 20).is_err());
        assert!(density_compare_values(&ramp(200), 9).is_err());
        assert!(density_compare_values(&[1.0; 200], 20).is_err());
    }
}
