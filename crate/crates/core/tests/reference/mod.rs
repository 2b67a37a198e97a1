//! Literal reference implementations shared by the oracle tests.
//!
//! The references materialize every segment, evaluate the power mean (and the
//! logarithmic q = 0 average) term by term, build the periodic wavelet
//! transform as dense matrices and solve the MF-DFA fits with an SVD.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbfa_core::dwt::WaveletFilter;

pub fn random_series(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut acc = 0.0;
    random_series(n, seed)
        .into_iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

pub fn segments(x: &[f64], s: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let m = n / s;
    let mut out = Vec::new();
    for b in 1..=m {
        out.push(x[(b - 1) * s..b * s].to_vec());
    }
    for b in 1..=m {
        out.push(x[n - b * s..n - (b - 1) * s].to_vec());
    }
    out
}

/// F_q(s) from a list of segment variances, literally.
pub fn literal_fq(f2: &[f64], q: f64) -> f64 {
    let two_m = f2.len() as f64;
    if q == 0.0 {
        let mut acc = 0.0;
        for v in f2 {
            acc += v.ln();
        }
        (acc / (2.0 * two_m)).exp()
    } else {
        let mut acc = 0.0;
        for v in f2 {
            acc += v.powf(q / 2.0);
        }
        (acc / two_m).powf(1.0 / q)
    }
}

pub fn literal_segment_moments(x: &[f64], s: usize, q: &[f64]) -> Vec<f64> {
    let f2: Vec<f64> = segments(x, s)
        .iter()
        .map(|seg| seg.iter().map(|v| v * v).sum::<f64>() / s as f64)
        .collect();
    q.iter().map(|&q| literal_fq(&f2, q)).collect()
}

/// Periodic analysis operator (approximation rows) on a length-`n` input,
/// including the single zero pad used for odd `n`.
pub fn analysis_matrix(n: usize, filter: &WaveletFilter) -> DMatrix<f64> {
    let padded = n + n % 2;
    let half = padded / 2;
    let lo = filter.lowpass();
    let mut a = DMatrix::<f64>::zeros(half, padded);
    for k in 0..half {
        for (j, &h) in lo.iter().enumerate() {
            a[(k, (2 * k + j) % padded)] += h;
        }
    }
    // drop the pad column: the padded sample is always zero
    a.columns(0, n).into_owned()
}

/// Level-L low-pass projection as one dense matrix.
pub fn trend_matrix(n: usize, filter: &WaveletFilter, level: usize) -> DMatrix<f64> {
    let mut lengths = vec![n];
    for _ in 0..level {
        let last = *lengths.last().unwrap();
        lengths.push(last.div_ceil(2));
    }
    let mut down = DMatrix::<f64>::identity(n, n);
    let mut up = DMatrix::<f64>::identity(n, n);
    for l in 0..level {
        let a = analysis_matrix(lengths[l], filter);
        down = &a * down;
        up *= a.transpose();
    }
    up * down
}

pub fn reference_wbfa(profile: &[f64], filter: &WaveletFilter, scales_levels: &[(usize, usize)], q: &[f64]) -> Vec<Vec<f64>> {
    let n = profile.len();
    let p = DVector::from_column_slice(profile);
    let rev: Vec<f64> = profile.iter().rev().copied().collect();
    let pr = DVector::from_column_slice(&rev);
    let mut columns = Vec::new();
    for &(level, scale) in scales_levels {
        let t = trend_matrix(n, filter, level);
        let f_plus = &p - &t * &p;
        let f_rev = &pr - &t * &pr;
        let fluct: Vec<f64> = (0..n).map(|i| 0.5 * (f_plus[i] + f_rev[n - 1 - i])).collect();
        columns.push(literal_segment_moments(&fluct, scale, q));
    }
    (0..q.len()).map(|qi| columns.iter().map(|c| c[qi]).collect()).collect()
}

pub fn svd_residual_variance(seg: &[f64], order: usize) -> f64 {
    let s = seg.len();
    let center = (s as f64 - 1.0) / 2.0;
    let vander = DMatrix::from_fn(s, order + 1, |i, p| ((i as f64 - center) / s as f64).powi(p as i32));
    let y = DVector::from_column_slice(seg);
    let coeffs = vander.clone().svd(true, true).solve(&y, 1e-14).unwrap();
    let r = y - vander * coeffs;
    r.iter().map(|v| v * v).sum::<f64>() / s as f64
}
