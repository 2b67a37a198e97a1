//! Synthetic series with analytically known scaling.
//!
//! Every generator draws from a ChaCha8 stream seeded with `seed` and uses the
//! ziggurat standard normal of `rand_distr`, so output is reproducible bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::ingest::TimeSeries;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    GaussianWhite,
    Fgn { hurst: f64 },
    BinomialCascade { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub length: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length < 64 {
            return Err(Error::InvalidParameter(format!(
                "generator length {} below minimum 64",
                self.length
            )));
        }
        match self.kind {
            GeneratorKind::GaussianWhite => Ok(()),
            GeneratorKind::Fgn { hurst } if hurst > 0.0 && hurst < 1.0 => Ok(()),
            GeneratorKind::Fgn { hurst } => {
                Err(Error::InvalidParameter(format!("hurst {hurst} outside (0, 1)")))
            }
            GeneratorKind::BinomialCascade { a } => {
                if !(a > 0.5 && a < 1.0) {
                    Err(Error::InvalidParameter(format!("cascade weight {a} outside (0.5, 1)")))
                } else if !self.length.is_power_of_two() {
                    Err(Error::InvalidParameter(format!(
                        "cascade length {} is not a power of two",
                        self.length
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn name(&self) -> String {
        match self.kind {
            GeneratorKind::GaussianWhite => format!("gaussian-white-seed{}", self.seed),
            GeneratorKind::Fgn { hurst } => format!("fgn-h{hurst}-seed{}", self.seed),
            GeneratorKind::BinomialCascade { a } => format!("binomial-cascade-a{a}"),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let values = match spec.kind {
        GeneratorKind::GaussianWhite => white_values(spec.length, spec.seed),
        GeneratorKind::Fgn { hurst } => fgn_values(spec.length, hurst, spec.seed)?,
        GeneratorKind::BinomialCascade { a } => cascade_values(spec.length.trailing_zeros(), a),
    };
    TimeSeries::new(values, None, spec.name())
}

pub fn gaussian_white(length: usize, seed: u64) -> Result<TimeSeries> {
    generate(&GeneratorSpec {
        kind: GeneratorKind::GaussianWhite,
        length,
        seed,
    })
}

pub fn fgn(length: usize, hurst: f64, seed: u64) -> Result<TimeSeries> {
    generate(&GeneratorSpec {
        kind: GeneratorKind::Fgn { hurst },
        length,
        seed,
    })
}

pub fn binomial_cascade(length: usize, a: f64) -> Result<TimeSeries> {
    generate(&GeneratorSpec {
        kind: GeneratorKind::BinomialCascade { a },
        length,
        seed: 0,
    })
}

/// Generalized Hurst exponent of the binomial cascade,
/// `1/q - ln(a^q + (1-a)^q) / (q ln 2)`, with the q -> 0 limit `-ln(a(1-a)) / (2 ln 2)`.
pub fn cascade_hq(a: f64, q: f64) -> f64 {
    let b = 1.0 - a;
    if q == 0.0 {
        return -(a * b).ln() / (2.0 * std::f64::consts::LN_2);
    }
    1.0 / q - (a.powf(q) + b.powf(q)).ln() / (q * std::f64::consts::LN_2)
}

/// Autocovariance of unit-variance fGn at integer lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let k = k as f64;
    let e = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

fn white_values(length: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..length).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Davies-Harte circulant embedding: the fGn covariance is embedded in a
/// circulant of size 2n whose eigenvalues (its DFT) must be non-negative.
fn fgn_values(length: usize, hurst: f64, seed: u64) -> Result<Vec<f64>> {
    let n = length;
    let m = 2 * n;
    let mut row: Vec<Complex64> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex64::new(fgn_autocovariance(hurst, k), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex64::new(fgn_autocovariance(hurst, k), 0.0));
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let max_eig = row.iter().fold(0.0f64, |acc, c| acc.max(c.re));
    let min_eig = row.iter().fold(f64::INFINITY, |acc, c| acc.min(c.re));
    if min_eig < -1e-10 * max_eig {
        return Err(Error::EmbeddingFailure { min_eigenvalue: min_eig });
    }
    let eig: Vec<f64> = row.iter().map(|c| c.re.max(0.0)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let mf = m as f64;
    let mut w = vec![Complex64::new(0.0, 0.0); m];
    w[0] = Complex64::new((eig[0] / mf).sqrt() * normal(), 0.0);
    w[n] = Complex64::new((eig[n] / mf).sqrt() * normal(), 0.0);
    for k in 1..n {
        let s = (eig[k] / (2.0 * mf)).sqrt();
        let z = Complex64::new(s * normal(), s * normal());
        w[k] = z;
        w[m - k] = z.conj();
    }
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re).collect())
}

/// `x_i = a^{n(i)} (1-a)^{k-n(i)}` with `n(i)` the number of set bits of the
/// zero-based index.
fn cascade_values(k: u32, a: f64) -> Vec<f64> {
    let b = 1.0 - a;
    (0..1usize << k)
        .map(|i| {
            let ones = i.count_ones() as i32;
            a.powi(ones) * b.powi(k as i32 - ones)
        })
        .collect()
}
