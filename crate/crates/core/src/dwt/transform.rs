use serde::{Deserialize, Serialize};

use super::WaveletFilter;
use crate::{Error, Result};

/// Signal extension used at the edges of each pyramid level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Wrap-around. Odd-length levels are padded with a single zero, so every
    /// level keeps ceil(n/2) coefficients and the transform stays orthogonal.
    #[default]
    Periodic,
    /// Half-sample symmetric extension by `taps - 1` samples on each side.
    /// Expansive (floor((n + taps) / 2) coefficients per level) but perfectly
    /// reconstructing.
    Symmetric,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Self::Periodic),
            "symmetric" => Ok(Self::Symmetric),
            other => Err(Error::InvalidParameter(format!("unknown boundary {other:?}"))),
        }
    }
}

/// Multilevel pyramid. `details[0]` is the finest level.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    filter: WaveletFilter,
    boundary: Boundary,
    approx: Vec<f64>,
    details: Vec<Vec<f64>>,
    /// Input length at each level, `lengths[0]` being the original signal.
    lengths: Vec<usize>,
}

impl Decomposition {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Detail coefficients of `level` (1-based, 1 = finest).
    pub fn detail(&self, level: usize) -> &[f64] {
        &self.details[level - 1]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn filter(&self) -> &WaveletFilter {
        &self.filter
    }

    pub fn original_length(&self) -> usize {
        self.lengths[0]
    }

    /// Length of the approximation signal entering `level` (1-based).
    pub fn level_input_length(&self, level: usize) -> usize {
        self.lengths[level - 1]
    }
}

pub fn decompose(
    signal: &[f64],
    filter: &WaveletFilter,
    levels: usize,
    boundary: Boundary,
) -> Result<Decomposition> {
    let n = signal.len();
    if levels == 0 {
        return Err(Error::InvalidParameter("at least one level required".into()));
    }
    if n < filter.len() || levels >= usize::BITS as usize || (1usize << levels) > n {
        return Err(Error::TooManyLevels { levels, length: n });
    }
    let mut current = signal.to_vec();
    let mut details = Vec::with_capacity(levels);
    let mut lengths = Vec::with_capacity(levels + 1);
    for _ in 0..levels {
        lengths.push(current.len());
        let (a, d) = match boundary {
            Boundary::Periodic => analyze_periodic(&current, filter),
            Boundary::Symmetric => analyze_symmetric(&current, filter),
        };
        details.push(d);
        current = a;
    }
    lengths.push(current.len());
    Ok(Decomposition {
        filter: filter.clone(),
        boundary,
        approx: current,
        details,
        lengths,
    })
}

/// Inverse pyramid. With `Some(level)`, detail bands `1..=level` are treated as
/// zero, which yields the level-`level` low-pass trend.
pub fn reconstruct(decomp: &Decomposition, zero_details_through: Option<usize>) -> Result<Vec<f64>> {
    let cut = zero_details_through.unwrap_or(0);
    if cut > decomp.levels() {
        return Err(Error::InvalidParameter(format!(
            "level {cut} out of range 0..={}",
            decomp.levels()
        )));
    }
    let filter = &decomp.filter;
    let mut current = decomp.approx.clone();
    for level in (1..=decomp.levels()).rev() {
        let out_len = decomp.lengths[level - 1];
        let zeros;
        let detail: &[f64] = if level <= cut {
            zeros = vec![0.0; decomp.details[level - 1].len()];
            &zeros
        } else {
            &decomp.details[level - 1]
        };
        current = match decomp.boundary {
            Boundary::Periodic => synthesize_periodic(&current, detail, filter, out_len),
            Boundary::Symmetric => synthesize_symmetric(&current, detail, filter, out_len),
        };
    }
    Ok(current)
}

fn analyze_periodic(x: &[f64], filter: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let n = x.len() + x.len() % 2;
    let half = n / 2;
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let at = |i: usize| -> f64 {
        let i = i % n;
        if i < x.len() {
            x[i]
        } else {
            0.0
        }
    };
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for j in 0..lo.len() {
            let v = at(2 * k + j);
            a += lo[j] * v;
            d += hi[j] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

fn synthesize_periodic(approx: &[f64], detail: &[f64], filter: &WaveletFilter, out_len: usize) -> Vec<f64> {
    let n = 2 * approx.len();
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let mut out = vec![0.0; n];
    for k in 0..approx.len() {
        for j in 0..lo.len() {
            out[(2 * k + j) % n] += lo[j] * approx[k] + hi[j] * detail[k];
        }
    }
    out.truncate(out_len);
    out
}

/// Half-sample symmetric index into a signal of length `n`.
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let mut r = i.rem_euclid(period);
    if r >= n {
        r = period - 1 - r;
    }
    r as usize
}

fn analyze_symmetric(x: &[f64], filter: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let taps = filter.len();
    let ext = taps as isize - 1;
    let count = (n + taps) / 2;
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let mut approx = vec![0.0; count];
    let mut detail = vec![0.0; count];
    for k in 0..count {
        let mut a = 0.0;
        let mut d = 0.0;
        for j in 0..taps {
            let v = x[reflect((2 * k + j) as isize - ext, n)];
            a += lo[j] * v;
            d += hi[j] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

fn synthesize_symmetric(approx: &[f64], detail: &[f64], filter: &WaveletFilter, out_len: usize) -> Vec<f64> {
    let taps = filter.len();
    let ext = taps - 1;
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let mut out = vec![0.0; out_len];
    for k in 0..approx.len() {
        for j in 0..taps {
            let i = 2 * k + j;
            if i >= ext && i - ext < out_len {
                out[i - ext] += lo[j] * approx[k] + hi[j] * detail[k];
            }
        }
    }
    out
}
