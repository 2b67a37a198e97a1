//! Morlet continuous wavelet transform.
//!
//! `W_n(s) = s^{-1/2} sum_{n'} x_{n'} psi*((n' - n) / s)` with
//! `psi(t) = pi^{-1/4} exp(i omega0 t) exp(-t^2 / 2)`, evaluated with periodic
//! wrap-around. The kernel is truncated at `|t| <= 9` where the Gaussian
//! envelope is below 3e-18.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::{Error, Result};

pub const DEFAULT_OMEGA0: f64 = 6.0;
const TRUNCATION: f64 = 9.0;

/// Ratio of Fourier wavelength to scale, `4 pi / (omega0 + sqrt(2 + omega0^2))`;
/// about 1.033 for omega0 = 6.
pub fn fourier_factor(omega0: f64) -> f64 {
    4.0 * PI / (omega0 + (2.0 + omega0 * omega0).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorletParams {
    omega0: f64,
    scales: Vec<f64>,
}

impl MorletParams {
    pub fn new(omega0: f64, scales: Vec<f64>) -> Result<Self> {
        if !(omega0 >= 5.0) || !omega0.is_finite() {
            return Err(Error::InvalidParameter(format!("omega0 {omega0} below 5")));
        }
        if scales.is_empty() || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter("scales must be positive and finite".into()));
        }
        if scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("scales must be strictly increasing".into()));
        }
        Ok(Self { omega0, scales })
    }

    /// `2^{j / voices}` for every j with the scale inside `[min, max]`.
    pub fn fractional_dyadic(min: f64, max: f64, voices: usize, omega0: f64) -> Result<Self> {
        if voices == 0 || !(min > 0.0) || !(max >= min) {
            return Err(Error::InvalidParameter(format!(
                "bad scale grid [{min}, {max}] with {voices} voices"
            )));
        }
        let v = voices as f64;
        let j0 = (min.log2() * v - 1e-9).ceil() as i64;
        let j1 = (max.log2() * v + 1e-9).floor() as i64;
        let scales = (j0..=j1).map(|j| 2f64.powf(j as f64 / v)).collect();
        Self::new(omega0, scales)
    }

    /// Default grid for a signal of length `n`: 8 voices per octave over `[2, n/2]`.
    pub fn default_for_length(n: usize) -> Result<Self> {
        Self::fractional_dyadic(2.0, n as f64 / 2.0, 8, DEFAULT_OMEGA0)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CwtMethod {
    /// Circular convolution in the time domain; O(N * s) per scale.
    Direct,
    /// Multiplication of transforms; O(N log N) per scale.
    #[default]
    Fft,
}

/// Complex coefficients over (scale, time).
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    /// Row-major, one row per scale.
    coefficients: Vec<Vec<Complex64>>,
    scales: Vec<f64>,
    fourier_wavelengths: Vec<f64>,
    omega0: f64,
}

impl Scalogram {
    pub fn coefficients(&self) -> &[Vec<Complex64>] {
        &self.coefficients
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn fourier_wavelengths(&self) -> &[f64] {
        &self.fourier_wavelengths
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn len(&self) -> usize {
        self.coefficients.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True where edge effects matter: within `sqrt(2) s` samples of either end.
    pub fn cone_of_influence(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        self.scales
            .iter()
            .map(|&s| {
                let reach = std::f64::consts::SQRT_2 * s;
                (0..n)
                    .map(|i| (i.min(n - 1 - i) as f64) < reach)
                    .collect()
            })
            .collect()
    }

    /// Long-form CSV: `scale,time,magnitude`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "scale,time,magnitude")?;
        for (row, &s) in self.coefficients.iter().zip(&self.scales) {
            for (t, c) in row.iter().enumerate() {
                writeln!(out, "{s},{t},{}", c.norm())?;
            }
        }
        Ok(())
    }

    /// Binary layout, all little-endian: `u64 rows, u64 cols`, then `rows` f64
    /// scales, then `rows * cols` (re, im) f64 pairs in row-major order.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(&(self.scales.len() as u64).to_le_bytes())?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        for s in &self.scales {
            out.write_all(&s.to_le_bytes())?;
        }
        for row in &self.coefficients {
            for c in row {
                out.write_all(&c.re.to_le_bytes())?;
                out.write_all(&c.im.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Scales and coefficients decoded from [`Scalogram::write_binary`].
pub fn read_binary<R: Read>(mut input: R) -> std::io::Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let mut buf = [0u8; 8];
    let mut next = |input: &mut R| -> std::io::Result<[u8; 8]> {
        input.read_exact(&mut buf)?;
        Ok(buf)
    };
    let rows = u64::from_le_bytes(next(&mut input)?) as usize;
    let cols = u64::from_le_bytes(next(&mut input)?) as usize;
    let mut scales = Vec::with_capacity(rows);
    for _ in 0..rows {
        scales.push(f64::from_le_bytes(next(&mut input)?));
    }
    let mut coefficients = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for _ in 0..cols {
            let re = f64::from_le_bytes(next(&mut input)?);
            let im = f64::from_le_bytes(next(&mut input)?);
            row.push(Complex64::new(re, im));
        }
        coefficients.push(row);
    }
    Ok((scales, coefficients))
}

/// `s^{-1/2} psi(t / s)` at integer offset `t`.
fn scaled_morlet(t: f64, s: f64, omega0: f64) -> Complex64 {
    let u = t / s;
    let envelope = PI.powf(-0.25) * (-0.5 * u * u).exp() / s.sqrt();
    Complex64::from_polar(envelope, omega0 * u)
}

fn half_width(s: f64) -> i64 {
    (TRUNCATION * s).ceil() as i64
}

pub fn morlet_cwt(signal: &[f64], params: &MorletParams) -> Result<Scalogram> {
    morlet_cwt_with(signal, params, CwtMethod::Fft)
}

pub fn morlet_cwt_with(signal: &[f64], params: &MorletParams, method: CwtMethod) -> Result<Scalogram> {
    let n = signal.len();
    if n < 2 {
        return Err(Error::InvalidSeries("signal needs at least 2 samples".into()));
    }
    if let Some(&s) = params.scales.iter().find(|&&s| s > n as f64) {
        return Err(Error::ScaleTooLarge {
            scale: s.ceil() as usize,
            length: n,
        });
    }
    let omega0 = params.omega0;
    let coefficients = match method {
        CwtMethod::Direct => params
            .scales
            .par_iter()
            .map(|&s| direct_row(signal, s, omega0))
            .collect(),
        CwtMethod::Fft => {
            let mut planner = FftPlanner::<f64>::new();
            let forward = planner.plan_fft_forward(n);
            let inverse = planner.plan_fft_inverse(n);
            let mut spectrum: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            forward.process(&mut spectrum);
            params
                .scales
                .par_iter()
                .map(|&s| {
                    // h[d] = s^{-1/2} psi(d / s) wrapped onto 0..n, so W = x (*) h.
                    let m = half_width(s);
                    let mut kernel = vec![Complex64::new(0.0, 0.0); n];
                    for d in -m..=m {
                        kernel[d.rem_euclid(n as i64) as usize] += scaled_morlet(d as f64, s, omega0);
                    }
                    forward.process(&mut kernel);
                    let mut row: Vec<Complex64> = spectrum.iter().zip(&kernel).map(|(a, b)| a * b).collect();
                    inverse.process(&mut row);
                    let norm = 1.0 / n as f64;
                    row.iter_mut().for_each(|c| *c *= norm);
                    row
                })
                .collect()
        }
    };
    let factor = fourier_factor(omega0);
    Ok(Scalogram {
        coefficients,
        fourier_wavelengths: params.scales.iter().map(|s| factor * s).collect(),
        scales: params.scales.clone(),
        omega0,
    })
}

fn direct_row(signal: &[f64], s: f64, omega0: f64) -> Vec<Complex64> {
    let n = signal.len() as i64;
    let m = half_width(s);
    let taps: Vec<Complex64> = (-m..=m).map(|d| scaled_morlet(d as f64, s, omega0).conj()).collect();
    (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, tap) in taps.iter().enumerate() {
                let idx = (i + k as i64 - m).rem_euclid(n) as usize;
                acc += signal[idx] * tap;
            }
            acc
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marginal {
    /// One value per scale: `sum_n |W_n(s)|^2`.
    Scale,
    /// One value per time index: `sum_s |W_n(s)|^2`.
    Time,
}

pub fn periodogram(scalogram: &Scalogram, mode: Marginal) -> Vec<f64> {
    match mode {
        Marginal::Scale => scalogram
            .coefficients
            .iter()
            .map(|row| row.iter().map(|c| c.norm_sqr()).sum())
            .collect(),
        Marginal::Time => {
            let mut out = vec![0.0; scalogram.len()];
            for row in &scalogram.coefficients {
                for (o, c) in out.iter_mut().zip(row) {
                    *o += c.norm_sqr();
                }
            }
            out
        }
    }
}

/// Time-averaged magnitude `mean_n |W_n(s)|` per scale.
pub fn mean_magnitude(scalogram: &Scalogram) -> Vec<f64> {
    scalogram
        .coefficients
        .iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>() / row.len() as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominantScale {
    pub scale: f64,
    pub wavelength: f64,
    pub energy: f64,
}

/// The `k` strongest strict interior local maxima of a scale marginal, largest
/// first; equal energies are ordered by smaller scale.
pub fn dominant_scales(marginal: &[f64], scales: &[f64], k: usize, omega0: f64) -> Result<Vec<DominantScale>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if marginal.len() != scales.len() {
        return Err(Error::InvalidParameter("marginal and scale lengths differ".into()));
    }
    let factor = fourier_factor(omega0);
    let mut peaks: Vec<DominantScale> = (1..marginal.len().saturating_sub(1))
        .filter(|&j| marginal[j] > marginal[j - 1] && marginal[j] > marginal[j + 1])
        .map(|j| DominantScale {
            scale: scales[j],
            wavelength: factor * scales[j],
            energy: marginal[j],
        })
        .collect();
    if peaks.is_empty() {
        return Err(Error::NoLocalMaxima);
    }
    peaks.sort_by(|a, b| b.energy.total_cmp(&a.energy).then(a.scale.total_cmp(&b.scale)));
    peaks.truncate(k);
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sinusoid(n: usize, period: f64) -> Vec<f64> {
        (0..n).map(|t| (2.0 * PI * t as f64 / period).sin()).collect()
    }

    #[test]
    fn wavelength_factor() {
        assert_relative_eq!(fourier_factor(6.0), 1.0330436, epsilon = 1e-7);
        let p = MorletParams::new(6.0, vec![2.0, 4.0, 7.5]).unwrap();
        let sc = morlet_cwt(&sinusoid(64, 8.0), &p).unwrap();
        for (l, s) in sc.fourier_wavelengths().iter().zip(p.scales()) {
            assert_relative_eq!(*l, 4.0 * PI * s / (6.0 + 38f64.sqrt()), epsilon = 1e-12);
        }
    }

    #[test]
    fn params_validation() {
        assert!(MorletParams::new(4.0, vec![1.0]).is_err());
        assert!(MorletParams::new(6.0, vec![2.0, 2.0]).is_err());
        assert!(MorletParams::new(6.0, vec![]).is_err());
        let g = MorletParams::default_for_length(1024).unwrap();
        assert_relative_eq!(g.scales()[0], 2.0);
        assert_relative_eq!(*g.scales().last().unwrap(), 512.0, epsilon = 1e-9);
        assert_eq!(g.scales().len(), 8 * 8 + 1);
    }

    #[test]
    fn zero_signal() {
        let p = MorletParams::default_for_length(128).unwrap();
        let sc = morlet_cwt(&vec![0.0; 128], &p).unwrap();
        assert!(sc.coefficients().iter().flatten().all(|c| c.norm() == 0.0));
        assert!(periodogram(&sc, Marginal::Scale).iter().all(|&v| v == 0.0));
        assert!(periodogram(&sc, Marginal::Time).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimensions_and_scale_limit() {
        let p = MorletParams::new(6.0, vec![2.0, 3.0, 5.0]).unwrap();
        let sc = morlet_cwt(&sinusoid(40, 10.0), &p).unwrap();
        assert_eq!(sc.coefficients().len(), 3);
        assert!(sc.coefficients().iter().all(|r| r.len() == 40));
        let too_big = MorletParams::new(6.0, vec![2.0, 50.0]).unwrap();
        assert!(matches!(morlet_cwt(&sinusoid(40, 10.0), &too_big), Err(Error::ScaleTooLarge { .. })));
    }

    #[test]
    fn direct_matches_fft_small() {
        let x: Vec<f64> = (0..96).map(|i| ((i * 31 % 17) as f64 - 8.0) / 8.0).collect();
        let p = MorletParams::new(6.0, vec![1.5, 4.0, 20.0, 90.0]).unwrap();
        let a = morlet_cwt_with(&x, &p, CwtMethod::Direct).unwrap();
        let b = morlet_cwt_with(&x, &p, CwtMethod::Fft).unwrap();
        for (ra, rb) in a.coefficients().iter().zip(b.coefficients()) {
            for (ca, cb) in ra.iter().zip(rb) {
                assert!((ca - cb).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn monotone_marginal_has_no_peak() {
        let m = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(dominant_scales(&m, &[1.0, 2.0, 3.0, 4.0], 1, 6.0), Err(Error::NoLocalMaxima)));
        assert!(dominant_scales(&m, &[1.0, 2.0, 3.0, 4.0], 0, 6.0).is_err());
    }

    #[test]
    fn peaks_ordered_by_energy_then_scale() {
        let m = [0.0, 5.0, 0.0, 5.0, 0.0, 7.0, 1.0];
        let s = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let p = dominant_scales(&m, &s, 3, 6.0).unwrap();
        assert_eq!(p.iter().map(|d| d.scale).collect::<Vec<_>>(), [6.0, 2.0, 4.0]);
        assert_eq!(dominant_scales(&m, &s, 1, 6.0).unwrap().len(), 1);
    }

    #[test]
    fn cone_of_influence_edges() {
        let p = MorletParams::new(6.0, vec![2.0, 10.0]).unwrap();
        let sc = morlet_cwt(&sinusoid(100, 10.0), &p).unwrap();
        let coi = sc.cone_of_influence();
        assert!(coi[0][0] && coi[0][2] && !coi[0][3] && coi[0][99]);
        assert!(coi[1][14] && !coi[1][15] && !coi[1][84] && coi[1][85]);
    }

    #[test]
    fn binary_layout_round_trips() {
        let p = MorletParams::new(6.0, vec![2.0, 3.0]).unwrap();
        let sc = morlet_cwt(&sinusoid(16, 5.0), &p).unwrap();
        let mut buf = Vec::new();
        sc.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 2 * 8 + 2 * 16 * 16);
        assert_eq!(&buf[..8], &2u64.to_le_bytes());
        assert_eq!(&buf[8..16], &16u64.to_le_bytes());
        let (scales, coeffs) = read_binary(buf.as_slice()).unwrap();
        assert_eq!(scales, p.scales());
        assert_eq!(coeffs, sc.coefficients());
    }
}
