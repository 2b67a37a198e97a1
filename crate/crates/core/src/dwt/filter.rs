use std::f64::consts::SQRT_2;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveletFamily {
    Haar,
    Daubechies,
}

impl WaveletFamily {
    fn name(self) -> &'static str {
        match self {
            WaveletFamily::Haar => "haar",
            WaveletFamily::Daubechies => "daubechies",
        }
    }
}

impl std::str::FromStr for WaveletFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(Self::Haar),
            "db" | "daubechies" => Ok(Self::Daubechies),
            other => Err(Error::InvalidParameter(format!("unknown wavelet family {other:?}"))),
        }
    }
}

/// Orthonormal conjugate-mirror filter pair.
///
/// `order` is the tap count, so Daubechies-4 has four taps and two vanishing moments.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    family: WaveletFamily,
    order: usize,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletFilter {
    pub fn family(&self) -> WaveletFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }

    /// Number of polynomial degrees annihilated by the high-pass filter.
    pub fn vanishing_moments(&self) -> usize {
        self.order / 2
    }
}

impl std::fmt::Display for WaveletFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.family {
            WaveletFamily::Haar => write!(f, "Haar"),
            WaveletFamily::Daubechies => write!(f, "Db-{}", self.order),
        }
    }
}

pub fn make_filter(family: WaveletFamily, order: usize) -> Result<WaveletFilter> {
    let unsupported = || Error::UnsupportedWavelet {
        family: family.name(),
        order,
    };
    let lowpass = match family {
        WaveletFamily::Haar if order == 2 => vec![1.0 / SQRT_2; 2],
        WaveletFamily::Haar => return Err(unsupported()),
        WaveletFamily::Daubechies if (2..=20).contains(&order) && order.is_multiple_of(2) => {
            daubechies_lowpass(order / 2)
        }
        WaveletFamily::Daubechies => return Err(unsupported()),
    };
    let len = lowpass.len();
    let highpass = (0..len)
        .map(|k| {
            let v = lowpass[len - 1 - k];
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(WaveletFilter {
        family,
        order,
        lowpass,
        highpass,
    })
}

/// Minimum-phase Daubechies low-pass filter with `moments` vanishing moments.
///
/// |m0(w)|^2 = cos^2(w/2)^K P(sin^2(w/2)) with P(y) = sum_k C(K-1+k, k) y^k.
/// Each root y_j of P maps to a reciprocal pair z, 1/z of
/// z^2 - (2 - 4 y_j) z + 1 = 0; the root inside the unit circle is kept.
fn daubechies_lowpass(moments: usize) -> Vec<f64> {
    let k = moments;
    let p: Vec<f64> = (0..k).map(|j| binomial(k - 1 + j, j)).collect();
    let y_roots = polynomial_roots(&p);

    // Coefficients in ascending powers of z.
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..k {
        poly = multiply_linear(&poly, Complex64::new(1.0, 0.0));
    }
    for y in y_roots {
        let b = Complex64::new(2.0, 0.0) - 4.0 * y;
        let disc = (b * b - 4.0).sqrt();
        let z1 = (b + disc) / 2.0;
        let z2 = (b - disc) / 2.0;
        let inside = if z1.norm() < z2.norm() { z1 } else { z2 };
        poly = multiply_linear(&poly, -inside);
    }
    let sum: f64 = poly.iter().map(|c| c.re).sum();
    let scale = SQRT_2 / sum;
    poly.iter().rev().map(|c| c.re * scale).collect()
}

/// poly * (z + c), ascending coefficients.
fn multiply_linear(poly: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
    for (i, &a) in poly.iter().enumerate() {
        out[i] += a * c;
        out[i + 1] += a;
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All complex roots of a real polynomial with ascending coefficients, by
/// Durand-Kerner iteration followed by Newton polishing.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lead, 0.0)).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let deriv = |z: Complex64| {
        monic
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| acc * z + c * i as f64)
    };

    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|i| seed.powu(i as u32) * radius * 0.5).collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            let step = eval(zi) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / d;
        }
    }
    roots
}
