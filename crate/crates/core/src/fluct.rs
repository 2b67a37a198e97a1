//! Generalized fluctuation functions F_q(s) and their power-law exponents h(q).
//!
//! Two estimators share the segmenting and moment code:
//!
//! * [`wbfa`] removes a wavelet low-pass trend per decomposition level,
//! * [`mfdfa`] removes a least-squares polynomial per segment.
//!
//! Segments of length `s` are laid left-to-right and again right-to-left so
//! both ends of the series are covered, giving `2 M_s` segments with
//! `M_s = floor(N / s)`. For each segment `F^2(b, s)` is the mean squared
//! fluctuation; the order-q moment is the power mean
//! `(mean_b F^2(b,s)^{q/2})^{1/q}`, and the q = 0 limit is the geometric mean
//! `exp(mean_b ln F^2(b,s) / 2)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::dwt::{self, Boundary, WaveletFilter};
use crate::ingest::Profile;
use crate::stats;
use crate::{Error, Result};

/// Minimum number of scales a fit needs.
pub const MIN_SCALES: usize = 4;

/// Relative variance floor below which a segment counts as degenerate.
pub const DEGENERATE_FLOOR: f64 = 1e-15;

/// Share of excluded segments above which a q row is flagged unreliable.
pub const UNRELIABLE_FRACTION: f64 = 0.01;

/// Strictly increasing moment orders. Zero is allowed only in q0 mode, where it
/// is evaluated through the logarithmic average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QGrid {
    values: Vec<f64>,
    q0_mode: bool,
}

impl QGrid {
    pub fn new(values: Vec<f64>, q0_mode: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty q grid".into()));
        }
        if values.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidParameter("q values must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("q grid must be strictly increasing".into()));
        }
        if !q0_mode && values.contains(&0.0) {
            return Err(Error::InvalidParameter("q = 0 requires q0 mode".into()));
        }
        Ok(Self { values, q0_mode })
    }

    /// `min, min + step, ..., max`; zero is kept only with `q0_mode`.
    pub fn range(min: f64, max: f64, step: f64, q0_mode: bool) -> Result<Self> {
        if !(step > 0.0) || min > max {
            return Err(Error::InvalidParameter(format!("bad q range {min}:{max}:{step}")));
        }
        let count = ((max - min) / step + 1e-9).floor() as usize + 1;
        let values = (0..count)
            .map(|i| {
                let q = min + i as f64 * step;
                // snap values that should be integers or halves
                (q * 1e9).round() / 1e9
            })
            .filter(|&q| q0_mode || q != 0.0)
            .collect();
        Self::new(values, q0_mode)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn q0_mode(&self) -> bool {
        self.q0_mode
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, q: f64) -> Option<usize> {
        self.values.iter().position(|&v| v == q)
    }
}

impl Default for QGrid {
    /// -4 to 4 in steps of 0.5, including q = 0.
    fn default() -> Self {
        Self::range(-4.0, 4.0, 0.5, true).expect("default grid is valid")
    }
}

/// Which scales an estimator evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScalePolicy {
    /// Defaults to `max(8, minimum meaningful window)`.
    pub s_min: Option<usize>,
    /// Defaults to `N / 4`.
    pub s_max: Option<usize>,
    /// MF-DFA grid density; 4 log-spaced scales per octave when unset.
    pub per_octave: Option<usize>,
}

impl ScalePolicy {
    fn bounds(&self, n: usize, floor: usize) -> Result<(usize, usize)> {
        let s_min = self.s_min.unwrap_or(8.max(floor));
        let s_max = self.s_max.unwrap_or(n / 4);
        if s_min >= s_max {
            return Err(Error::InvalidParameter(format!(
                "empty scale range [{s_min}, {s_max}] for length {n}"
            )));
        }
        Ok((s_min, s_max))
    }
}

/// F_q(s) over a (q, scale) grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationMatrix {
    pub scales: Vec<usize>,
    pub q: QGrid,
    /// `fq[qi][si]`.
    pub fq: Vec<Vec<f64>>,
    /// `2 M_s` per scale.
    pub segment_counts: Vec<usize>,
    /// Segments dropped as degenerate, per scale.
    pub excluded: Vec<usize>,
}

impl FluctuationMatrix {
    pub fn row(&self, q: f64) -> Option<&[f64]> {
        self.q.position(q).map(|i| self.fq[i].as_slice())
    }

    /// True when more than 1% of the segments at some scale were dropped; only
    /// q <= 0 rows are sensitive to this.
    pub fn unreliable(&self, qi: usize) -> bool {
        self.q.values()[qi] <= 0.0
            && self
                .excluded
                .iter()
                .zip(&self.segment_counts)
                .any(|(&e, &c)| e as f64 > UNRELIABLE_FRACTION * c as f64)
    }

    /// Long-form CSV: `q,scale,fq`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "q,scale,fq")?;
        for (qi, &q) in self.q.values().iter().enumerate() {
            for (si, &s) in self.scales.iter().enumerate() {
                writeln!(out, "{q},{s},{}", self.fq[qi][si])?;
            }
        }
        Ok(())
    }
}

/// Mean squared value of each of the `2 M_s` segments: left-to-right first,
/// then right-to-left.
pub fn segment_variances(fluct: &[f64], scale: usize) -> Result<Vec<f64>> {
    let n = fluct.len();
    if scale < 2 {
        return Err(Error::InvalidParameter(format!("scale {scale} below 2")));
    }
    if n < 2 * scale {
        return Err(Error::ScaleTooLarge { scale, length: n });
    }
    let m = n / scale;
    let mean_square = |seg: &[f64]| seg.iter().map(|v| v * v).sum::<f64>() / scale as f64;
    let mut out = Vec::with_capacity(2 * m);
    for b in 0..m {
        out.push(mean_square(&fluct[b * scale..(b + 1) * scale]));
    }
    for b in 0..m {
        out.push(mean_square(&fluct[n - (b + 1) * scale..n - b * scale]));
    }
    Ok(out)
}

/// Power means of segment variances for every q, after dropping segments at or
/// below `floor`. Returns the moments and the number of dropped segments.
fn power_means(f2: &[f64], q: &QGrid, floor: f64, scale: usize) -> Result<(Vec<f64>, usize)> {
    let kept: Vec<f64> = f2.iter().copied().filter(|&v| v > floor).collect();
    let excluded = f2.len() - kept.len();
    let has_nonpositive_q = q.values().iter().any(|&q| q <= 0.0);
    if kept.is_empty() || (excluded > 0 && floor == 0.0 && has_nonpositive_q) {
        return Err(Error::DegenerateSegments {
            scale,
            message: format!("{excluded} of {} segments have zero fluctuation", f2.len()),
        });
    }
    let count = kept.len() as f64;
    let moments = q
        .values()
        .iter()
        .map(|&q| {
            if q == 0.0 {
                (kept.iter().map(|v| v.ln()).sum::<f64>() / (2.0 * count)).exp()
            } else {
                (kept.iter().map(|v| v.powf(q / 2.0)).sum::<f64>() / count).powf(1.0 / q)
            }
        })
        .collect();
    Ok((moments, excluded))
}

/// F_q(s) of a fluctuation signal at one scale, one value per q.
///
/// Any all-zero segment is an error when the grid has q <= 0.
pub fn segment_moments(fluct: &[f64], scale: usize, q: &QGrid) -> Result<Vec<f64>> {
    let f2 = segment_variances(fluct, scale)?;
    Ok(power_means(&f2, q, 0.0, scale)?.0)
}

/// Like [`segment_moments`], but segments with `F^2 <= floor` are dropped and counted.
pub fn segment_moments_with_floor(
    fluct: &[f64],
    scale: usize,
    q: &QGrid,
    floor: f64,
) -> Result<(Vec<f64>, usize)> {
    let f2 = segment_variances(fluct, scale)?;
    power_means(&f2, q, floor, scale)
}

fn degenerate_floor(prof: &Profile) -> f64 {
    let v = stats::sample_variance(&prof.increments());
    if v.is_finite() {
        DEGENERATE_FLOOR * v
    } else {
        0.0
    }
}

struct Column {
    moments: Vec<f64>,
    segments: usize,
    excluded: usize,
}

fn assemble(scales: Vec<usize>, q: &QGrid, columns: Vec<Column>) -> Result<FluctuationMatrix> {
    if scales.len() < MIN_SCALES {
        return Err(Error::TooFewScales {
            found: scales.len(),
            required: MIN_SCALES,
        });
    }
    let fq = (0..q.len())
        .map(|qi| columns.iter().map(|c| c.moments[qi]).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    for (qi, row) in fq.iter().enumerate() {
        if let Some(si) = row.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::NonFinite(format!(
                "F_q(s) = {} at q = {}, s = {}",
                row[si],
                q.values()[qi],
                scales[si]
            )));
        }
    }
    Ok(FluctuationMatrix {
        scales,
        q: q.clone(),
        fq,
        segment_counts: columns.iter().map(|c| c.segments).collect(),
        excluded: columns.iter().map(|c| c.excluded).collect(),
    })
}

/// Wavelet-based fluctuation analysis: one scale per decomposition level.
pub fn wbfa(
    prof: &Profile,
    filter: &WaveletFilter,
    q: &QGrid,
    policy: &ScalePolicy,
    boundary: Boundary,
) -> Result<FluctuationMatrix> {
    let n = prof.len();
    if n < 4 * filter.len() {
        return Err(Error::InvalidSeries(format!(
            "profile length {n} below 4 x filter support {}",
            filter.len()
        )));
    }
    let (s_min, s_max) = policy.bounds(n, filter.len())?;
    let mut max_level = 0;
    while (1usize << (max_level + 1)) <= n {
        let scale = dwt::level_scale(filter, max_level + 1);
        if scale > s_max || 2 * scale > n {
            break;
        }
        max_level += 1;
    }
    if max_level == 0 {
        return Err(Error::TooFewScales {
            found: 0,
            required: MIN_SCALES,
        });
    }
    let set = dwt::extract_fluctuations(prof, filter, max_level, boundary)?;
    let floor = degenerate_floor(prof);
    let usable: Vec<_> = set
        .levels
        .iter()
        .filter(|l| l.scale >= s_min && l.scale <= s_max)
        .collect();
    let scales: Vec<usize> = usable.iter().map(|l| l.scale).collect();
    if scales.len() < MIN_SCALES {
        return Err(Error::TooFewScales {
            found: scales.len(),
            required: MIN_SCALES,
        });
    }
    let columns = usable
        .par_iter()
        .map(|l| {
            let f2 = segment_variances(&l.fluctuation, l.scale)?;
            let (moments, excluded) = power_means(&f2, q, floor, l.scale)?;
            Ok(Column {
                moments,
                segments: f2.len(),
                excluded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(scales, q, columns)
}

/// Log-spaced integer scales in `[s_min, s_max]`, deduplicated.
pub fn log_scales(s_min: usize, s_max: usize, per_octave: usize) -> Vec<usize> {
    let per_octave = per_octave.max(1) as f64;
    let octaves = (s_max as f64 / s_min as f64).log2();
    let steps = (octaves * per_octave).floor() as usize;
    let mut out: Vec<usize> = (0..=steps)
        .map(|i| (s_min as f64 * 2f64.powf(i as f64 / per_octave)).round() as usize)
        .filter(|&s| s >= s_min && s <= s_max)
        .collect();
    out.dedup();
    out
}

/// Orthonormal polynomial basis of degree `order` on `0..len`, by modified
/// Gram-Schmidt on centered monomials (two passes).
fn polynomial_basis(len: usize, order: usize) -> Vec<Vec<f64>> {
    let center = (len as f64 - 1.0) / 2.0;
    let half = center.max(1.0);
    let x: Vec<f64> = (0..len).map(|i| (i as f64 - center) / half).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
    for p in 0..=order {
        let mut v: Vec<f64> = x.iter().map(|&t| t.powi(p as i32)).collect();
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    basis
}

/// Mean squared residual of each `2 M_s` segment after a least-squares
/// polynomial fit of degree `poly_order`.
pub fn detrended_segment_variances(profile: &[f64], scale: usize, poly_order: usize) -> Result<Vec<f64>> {
    let n = profile.len();
    if scale <= poly_order + 1 {
        return Err(Error::InvalidParameter(format!(
            "scale {scale} must exceed polynomial order + 1 = {}",
            poly_order + 1
        )));
    }
    if n < 2 * scale {
        return Err(Error::ScaleTooLarge { scale, length: n });
    }
    let basis = polynomial_basis(scale, poly_order);
    let m = n / scale;
    let residual = |seg: &[f64]| -> f64 {
        let coeffs: Vec<f64> = basis
            .iter()
            .map(|b| b.iter().zip(seg).map(|(a, y)| a * y).sum())
            .collect();
        let mut sse = 0.0;
        for (i, &y) in seg.iter().enumerate() {
            let fit: f64 = basis.iter().zip(&coeffs).map(|(b, c)| b[i] * c).sum();
            let r = y - fit;
            sse += r * r;
        }
        sse / scale as f64
    };
    let mut out = Vec::with_capacity(2 * m);
    for b in 0..m {
        out.push(residual(&profile[b * scale..(b + 1) * scale]));
    }
    for b in 0..m {
        out.push(residual(&profile[n - (b + 1) * scale..n - b * scale]));
    }
    Ok(out)
}

/// Multifractal detrended fluctuation analysis with polynomial detrending.
pub fn mfdfa(prof: &Profile, poly_order: usize, q: &QGrid, policy: &ScalePolicy) -> Result<FluctuationMatrix> {
    if poly_order < 1 {
        return Err(Error::InvalidParameter("polynomial order must be at least 1".into()));
    }
    let n = prof.len();
    let (s_min, s_max) = policy.bounds(n, poly_order + 2)?;
    if s_min <= poly_order + 1 {
        return Err(Error::InvalidParameter(format!(
            "s_min {s_min} must exceed polynomial order + 1"
        )));
    }
    let s_max = s_max.min(n / 2);
    let scales = log_scales(s_min, s_max, policy.per_octave.unwrap_or(4));
    if scales.len() < MIN_SCALES {
        return Err(Error::TooFewScales {
            found: scales.len(),
            required: MIN_SCALES,
        });
    }
    let floor = degenerate_floor(prof);
    let columns = scales
        .par_iter()
        .map(|&s| {
            let f2 = detrended_segment_variances(prof.values(), s, poly_order)?;
            let (moments, excluded) = power_means(&f2, q, floor, s)?;
            Ok(Column {
                moments,
                segments: f2.len(),
                excluded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(scales, q, columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HqEntry {
    pub q: f64,
    pub exponent: f64,
    pub stderr: f64,
    pub r2: f64,
    /// False when degenerate segments made this row unreliable.
    pub reliable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FitRange {
    pub s_min: usize,
    pub s_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub hq: Vec<HqEntry>,
    /// h(2).
    pub hurst: f64,
    /// False when the Hurst exponent falls outside (0, 1); the value is not clamped.
    pub hurst_in_unit_interval: bool,
    pub fit_range: FitRange,
    /// max h(q) - min h(q) over the grid.
    pub multifractal_width: f64,
}

impl ScalingResult {
    pub fn h(&self, q: f64) -> Option<f64> {
        self.hq.iter().find(|e| e.q == q).map(|e| e.exponent)
    }
}

/// Least-squares slope of ln F_q(s) against ln s for every q.
///
/// The grid must contain q = 2, which defines the Hurst exponent.
pub fn fit_scaling(matrix: &FluctuationMatrix, fit_range: Option<FitRange>) -> Result<ScalingResult> {
    let idx: Vec<usize> = (0..matrix.scales.len())
        .filter(|&i| {
            fit_range.is_none_or(|r| matrix.scales[i] >= r.s_min && matrix.scales[i] <= r.s_max)
        })
        .collect();
    if idx.len() < MIN_SCALES {
        return Err(Error::TooFewScales {
            found: idx.len(),
            required: MIN_SCALES,
        });
    }
    let log_s: Vec<f64> = idx.iter().map(|&i| (matrix.scales[i] as f64).ln()).collect();
    let mut hq = Vec::with_capacity(matrix.q.len());
    for (qi, &q) in matrix.q.values().iter().enumerate() {
        let mut log_f = Vec::with_capacity(idx.len());
        for &i in &idx {
            let v = matrix.fq[qi][i];
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonFinite(format!("F_q(s) = {v} at q = {q}")));
            }
            log_f.push(v.ln());
        }
        let fit = stats::linear_fit(&log_s, &log_f).ok_or(Error::TooFewScales {
            found: idx.len(),
            required: MIN_SCALES,
        })?;
        hq.push(HqEntry {
            q,
            exponent: fit.slope,
            stderr: fit.slope_stderr,
            r2: fit.r2,
            reliable: !matrix.unreliable(qi),
        });
    }
    let hurst = hq
        .iter()
        .find(|e| e.q == 2.0)
        .map(|e| e.exponent)
        .ok_or_else(|| Error::InvalidParameter("q grid must contain 2".into()))?;
    let (lo, hi) = hq
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e.exponent), hi.max(e.exponent)));
    Ok(ScalingResult {
        hq,
        hurst,
        hurst_in_unit_interval: hurst > 0.0 && hurst < 1.0,
        fit_range: FitRange {
            s_min: matrix.scales[idx[0]],
            s_max: matrix.scales[*idx.last().unwrap()],
        },
        multifractal_width: hi - lo,
    })
}

/// JSON document with the matrix and its fitted exponents.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingExport<'a> {
    pub scales: &'a [usize],
    pub q: &'a [f64],
    pub fq: &'a [Vec<f64>],
    pub hq: &'a [HqEntry],
    pub fit_range: FitRange,
    pub width: f64,
}

impl<'a> ScalingExport<'a> {
    pub fn new(matrix: &'a FluctuationMatrix, result: &'a ScalingResult) -> Self {
        Self {
            scales: &matrix.scales,
            q: matrix.q.values(),
            fq: &matrix.fq,
            hq: &result.hq,
            fit_range: result.fit_range,
            width: result.multifractal_width,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(v: &[f64]) -> QGrid {
        QGrid::new(v.to_vec(), v.contains(&0.0)).unwrap()
    }

    #[test]
    fn default_grid() {
        let g = QGrid::default();
        assert_eq!(g.len(), 17);
        assert_eq!(g.values()[0], -4.0);
        assert_eq!(g.values()[8], 0.0);
        assert!(g.position(2.0).is_some());
        assert!(QGrid::new(vec![0.0, 1.0], false).is_err());
        assert!(QGrid::new(vec![1.0, 1.0], false).is_err());
    }

    #[test]
    fn alternating_constant_magnitude() {
        let c = 0.37;
        let x: Vec<f64> = (0..200).map(|i| if i % 2 == 0 { c } else { -c }).collect();
        let q = QGrid::default();
        for s in [4, 7, 16, 50] {
            for v in segment_moments(&x, s, &q).unwrap() {
                assert_relative_eq!(v, c, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn q2_is_rms_over_covered_samples() {
        // With N divisible by s every sample is covered twice, so F_2 is the plain RMS.
        let x: Vec<f64> = (0..96).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let rms = (x.iter().map(|v| v * v).sum::<f64>() / 96.0).sqrt();
        let f = segment_moments(&x, 12, &grid(&[2.0])).unwrap();
        assert_relative_eq!(f[0], rms, max_relative = 1e-12);
    }

    #[test]
    fn zero_segment_with_negative_q_is_degenerate() {
        let mut x = vec![1.0; 64];
        for v in &mut x[..16] {
            *v = 0.0;
        }
        assert!(matches!(
            segment_moments(&x, 16, &grid(&[-2.0, 2.0])),
            Err(Error::DegenerateSegments { .. })
        ));
        assert!(segment_moments(&x, 16, &grid(&[1.0, 2.0])).is_ok());
        let (_, excluded) = segment_moments_with_floor(&x, 16, &grid(&[-2.0, 2.0]), 1e-20).unwrap();
        assert_eq!(excluded, 2);
    }

    #[test]
    fn scale_errors() {
        let x = vec![1.0; 31];
        assert!(matches!(segment_moments(&x, 16, &grid(&[2.0])), Err(Error::ScaleTooLarge { .. })));
        assert!(segment_moments(&x, 1, &grid(&[2.0])).is_err());
    }

    #[test]
    fn exact_power_law_fit() {
        let scales = vec![8, 16, 32, 64, 128];
        let q = grid(&[-2.0, 0.0, 2.0]);
        let fq = vec![scales.iter().map(|&s| (s as f64).sqrt()).collect::<Vec<_>>(); 3];
        let m = FluctuationMatrix {
            segment_counts: vec![10; 5],
            excluded: vec![0; 5],
            scales,
            q,
            fq,
        };
        let r = fit_scaling(&m, None).unwrap();
        for e in &r.hq {
            assert_relative_eq!(e.exponent, 0.5, epsilon = 1e-12);
            assert!(e.stderr < 1e-12);
            assert_relative_eq!(e.r2, 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(r.hurst, 0.5, epsilon = 1e-12);
        assert!(r.multifractal_width < 1e-12);
        let ranged = fit_scaling(&m, Some(FitRange { s_min: 16, s_max: 128 })).unwrap();
        assert_eq!(ranged.fit_range, FitRange { s_min: 16, s_max: 128 });
        assert!(fit_scaling(&m, Some(FitRange { s_min: 32, s_max: 128 })).is_err());
    }

    #[test]
    fn log_scale_grid() {
        let s = log_scales(8, 64, 4);
        assert_eq!(s.first(), Some(&8));
        assert_eq!(s.last(), Some(&64));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.len(), 13);
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = polynomial_basis(37, 3);
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                assert_relative_eq!(dot, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn quadratic_profile_is_degenerate_under_mfdfa() {
        let p = Profile::from_values((0..1024).map(|t| 0.3 * (t * t) as f64 - 2.0 * t as f64).collect(), false);
        let r = mfdfa(&p, 2, &QGrid::default(), &ScalePolicy::default());
        assert!(matches!(r, Err(Error::DegenerateSegments { .. })), "{r:?}");
    }

    #[test]
    fn too_few_scales() {
        let p = Profile::from_values((0..64).map(|t| (t as f64).sin()).collect(), false);
        let f = dwt::make_filter(dwt::WaveletFamily::Daubechies, 6).unwrap();
        assert!(matches!(
            wbfa(&p, &f, &QGrid::default(), &ScalePolicy::default(), Boundary::Periodic),
            Err(Error::TooFewScales { .. }) | Err(Error::InvalidParameter(_))
        ));
    }
}
