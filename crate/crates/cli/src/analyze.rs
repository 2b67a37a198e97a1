//! The `analyze` pipeline: returns, both estimators on the original and the
//! shuffled series, the power spectrum and the return density.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use wbfa_core::dist::{self, DensityComparison};
use wbfa_core::dwt::{make_filter, Boundary, WaveletFilter};
use wbfa_core::fluct::{self, FitRange, FluctuationMatrix, HqEntry, QGrid, ScalePolicy, ScalingResult};
use wbfa_core::ingest::{self, Normalization, Profile, ReturnSeries};
use wbfa_core::spectrum::{self, AlphaFit, Binning, Consistency, PowerSpectrum};

use crate::config::{AnalysisConfig, InputKind, ReportFormat};
use crate::error::CliError;
use crate::input::{self, LoadedInput};
use crate::output::{self, write_with};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    pub name: String,
    pub path: String,
    pub kind: InputKind,
    pub rows_read: usize,
    pub rows_used: usize,
    pub rows_skipped: usize,
    pub returns: usize,
    pub normalization: Normalization,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub wavelet: String,
    pub boundary: Boundary,
    pub poly_order: usize,
    pub q: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<usize>,
    pub shuffle_seeds: Vec<u64>,
    pub density_bins: usize,
    pub spectrum_binning: Binning,
}

/// Mean and sample standard deviation over the shuffle seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedStat {
    pub mean: f64,
    pub std: f64,
    pub values: Vec<f64>,
}

impl SeedStat {
    fn new(values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mean = wbfa_core::stats::mean(&values);
        let std = if values.len() > 1 {
            wbfa_core::stats::sample_std(&values)
        } else {
            0.0
        };
        Some(Self { mean, std, values })
    }
}

/// Hurst exponents of the original and shuffled returns for both estimators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1 {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_wbfa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_wbfa_shuffled: Option<SeedStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_mfdfa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_mfdfa_shuffled: Option<SeedStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub method: String,
    pub hurst: f64,
    pub hurst_in_unit_interval: bool,
    pub multifractal_width: f64,
    pub fit_range: FitRange,
    pub scales: Vec<usize>,
    pub hq: Vec<HqEntry>,
    /// Seed-averaged h(q) of the shuffled returns, aligned with `hq`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hq_shuffled_mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub hurst_source: &'static str,
    pub hurst: f64,
    pub tolerance: f64,
    #[serde(flatten)]
    pub check: Consistency,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(flatten)]
    pub fit: AlphaFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub mean: f64,
    pub std: f64,
    pub excess_kurtosis: f64,
    pub tail_ratio: f64,
    pub empirical_peak: f64,
    pub gaussian_peak: f64,
    pub bins: usize,
    pub fat_tailed: bool,
    pub sharper_peak: bool,
}

/// The JSON report written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub input: InputSummary,
    pub settings: Settings,
    pub table1: Table1,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wbfa: Option<EstimatorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mfdfa: Option<EstimatorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionReport>,
    pub warnings: Vec<String>,
}

impl Report {
    /// Pretty JSON, rejecting any non-finite number.
    pub fn to_json(&self) -> Result<String, CliError> {
        let value = serde_json::to_value(self).map_err(|e| CliError::numerical(e.to_string()))?;
        if let Some(path) = first_null(&value, "$") {
            return Err(CliError::numerical(format!("non-finite value in report at {path}")));
        }
        let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::numerical(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }
}

/// serde_json encodes NaN and infinities as null; the report never contains a
/// genuine null.
fn first_null(v: &serde_json::Value, path: &str) -> Option<String> {
    match v {
        serde_json::Value::Null => Some(path.to_string()),
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, x)| first_null(x, &format!("{path}[{i}]"))),
        serde_json::Value::Object(map) => map.iter().find_map(|(k, x)| first_null(x, &format!("{path}.{k}"))),
        _ => None,
    }
}

/// Everything computed by the pipeline, before rendering.
pub struct Analysis {
    pub report: Report,
    pub input: LoadedInput,
    pub wbfa: Option<(FluctuationMatrix, ScalingResult)>,
    pub mfdfa: Option<(FluctuationMatrix, ScalingResult)>,
    pub spectrum: Option<PowerSpectrum>,
    pub density: Option<DensityComparison>,
    pub first_shuffle: Option<ReturnSeries>,
}

/// Files written by [`cmd_analyze`].
#[derive(Debug, Clone)]
pub struct AnalyzeOutput {
    pub report: Report,
    pub json: String,
    pub files: Vec<PathBuf>,
}

/// h(q) rows of one shuffled series for (WBFA, MF-DFA).
type SeedRows = (Option<Vec<f64>>, Option<Vec<f64>>);

struct Estimators {
    filter: WaveletFilter,
    q: QGrid,
    policy: ScalePolicy,
}

impl Estimators {
    fn new(cfg: &AnalysisConfig) -> Result<Self, CliError> {
        Ok(Self {
            filter: make_filter(cfg.wavelet.family, cfg.wavelet.order)?,
            q: QGrid::range(cfg.q.min, cfg.q.max, cfg.q.step, true)?,
            policy: ScalePolicy {
                s_min: cfg.scales.s_min,
                s_max: cfg.scales.s_max,
                per_octave: None,
            },
        })
    }

    fn wbfa(&self, prof: &Profile, boundary: Boundary) -> Result<(FluctuationMatrix, ScalingResult), CliError> {
        let m = fluct::wbfa(prof, &self.filter, &self.q, &self.policy, boundary)?;
        let fit = fluct::fit_scaling(&m, None)?;
        Ok((m, fit))
    }

    fn mfdfa(&self, prof: &Profile, order: usize) -> Result<(FluctuationMatrix, ScalingResult), CliError> {
        let m = fluct::mfdfa(prof, order, &self.q, &self.policy)?;
        let fit = fluct::fit_scaling(&m, None)?;
        Ok((m, fit))
    }
}

fn estimator_report(method: String, fit: &ScalingResult, matrix: &FluctuationMatrix, shuffled: &[Vec<f64>]) -> EstimatorReport {
    let hq_shuffled_mean = if shuffled.is_empty() {
        Vec::new()
    } else {
        (0..fit.hq.len())
            .map(|i| shuffled.iter().map(|h| h[i]).sum::<f64>() / shuffled.len() as f64)
            .collect()
    };
    EstimatorReport {
        method,
        hurst: fit.hurst,
        hurst_in_unit_interval: fit.hurst_in_unit_interval,
        multifractal_width: fit.multifractal_width,
        fit_range: fit.fit_range,
        scales: matrix.scales.clone(),
        hq: fit.hq.clone(),
        hq_shuffled_mean,
    }
}

fn reliability_warnings(name: &str, fit: &ScalingResult, warnings: &mut Vec<String>) {
    for e in fit.hq.iter().filter(|e| !e.reliable) {
        warnings.push(format!("{name}: h(q={}) unreliable, degenerate segments excluded", e.q));
    }
    if !fit.hurst_in_unit_interval {
        warnings.push(format!("{name}: Hurst exponent {} outside (0, 1)", fit.hurst));
    }
}

/// Runs the configured analyses without touching the filesystem beyond
/// reading the input.
pub fn analyze(cfg: &AnalysisConfig) -> Result<Analysis, CliError> {
    cfg.validate()?;
    if !cfg.analyses.any() {
        return Err(CliError::validation("no analyses selected"));
    }
    let input = input::load(cfg)?;
    let est = Estimators::new(cfg)?;
    let prof = ingest::profile(&input.returns, true);
    let a = cfg.analyses;
    let boundary = cfg.wavelet.boundary;

    let wbfa = a.wbfa.then(|| est.wbfa(&prof, boundary)).transpose()?;
    let mfdfa = a.mfdfa.then(|| est.mfdfa(&prof, cfg.poly_order)).transpose()?;

    // Per-seed h(q) rows, collected in seed order.
    let shuffles: Vec<SeedRows> = if a.wbfa || a.mfdfa {
        cfg.shuffle
            .seeds
            .par_iter()
            .map(|&seed| -> Result<_, CliError> {
                let p = ingest::profile(&ingest::shuffle(&input.returns, seed), true);
                let hq = |fit: ScalingResult| fit.hq.iter().map(|e| e.exponent).collect::<Vec<_>>();
                let w = a.wbfa.then(|| est.wbfa(&p, boundary).map(|r| hq(r.1))).transpose()?;
                let m = a.mfdfa.then(|| est.mfdfa(&p, cfg.poly_order).map(|r| hq(r.1))).transpose()?;
                Ok((w, m))
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.context("shuffled series"))?
    } else {
        Vec::new()
    };
    let shuffled_w: Vec<Vec<f64>> = shuffles.iter().filter_map(|s| s.0.clone()).collect();
    let shuffled_m: Vec<Vec<f64>> = shuffles.iter().filter_map(|s| s.1.clone()).collect();
    let q2 = est.q.position(2.0).expect("validated grid contains q = 2");

    let binning = cfg.spectrum.binning();
    let spectrum = if a.spectrum {
        let raw = spectrum::power_spectrum(&prof)?;
        Some(spectrum::fit_alpha(&raw, cfg.spectrum.band(raw.length), binning)?)
    } else {
        None
    };
    let density = a
        .dist
        .then(|| dist::density_compare(&input.returns, cfg.density_bins))
        .transpose()?;

    let mut warnings = Vec::new();
    if let Some((_, fit)) = &wbfa {
        reliability_warnings("wbfa", fit, &mut warnings);
    }
    if let Some((_, fit)) = &mfdfa {
        reliability_warnings("mfdfa", fit, &mut warnings);
    }

    let hurst_for_check = wbfa
        .as_ref()
        .map(|(_, f)| ("wbfa", f.hurst))
        .or_else(|| mfdfa.as_ref().map(|(_, f)| ("mfdfa", f.hurst)));
    let spectrum_report = spectrum.as_ref().map(|s| {
        let fit = s.fit.expect("fitted spectrum");
        SpectrumReport {
            fit,
            consistency: hurst_for_check.map(|(source, h)| ConsistencyReport {
                hurst_source: source,
                hurst: h,
                tolerance: cfg.spectrum.consistency_tolerance,
                check: spectrum::consistency_check(fit.alpha, h, cfg.spectrum.consistency_tolerance),
            }),
        }
    });
    if let Some(s) = &spectrum_report {
        if let Some(c) = s.consistency.as_ref().filter(|c| !c.check.consistent) {
            warnings.push(format!(
                "spectrum: alpha {:.4} differs from 2H + 1 = {:.4} by {:.4}",
                s.fit.alpha, c.check.predicted_alpha, c.check.gap
            ));
        }
    }

    let report = Report {
        schema_version: SCHEMA_VERSION,
        input: InputSummary {
            name: input.series.name().to_string(),
            path: cfg.input_path()?.display().to_string(),
            kind: cfg.input.kind,
            rows_read: input.load.rows_read,
            rows_used: input.load.rows_used,
            rows_skipped: input.load.rows_skipped,
            returns: input.returns.len(),
            normalization: input.returns.normalization(),
            sigma: input.returns.sigma(),
        },
        settings: Settings {
            wavelet: est.filter.to_string(),
            boundary,
            poly_order: cfg.poly_order,
            q: est.q.values().to_vec(),
            s_min: cfg.scales.s_min,
            s_max: cfg.scales.s_max,
            shuffle_seeds: cfg.shuffle.seeds.clone(),
            density_bins: cfg.density_bins,
            spectrum_binning: binning,
        },
        table1: Table1 {
            h_wbfa: wbfa.as_ref().map(|(_, f)| f.hurst),
            h_wbfa_shuffled: SeedStat::new(shuffled_w.iter().map(|h| h[q2]).collect()),
            h_mfdfa: mfdfa.as_ref().map(|(_, f)| f.hurst),
            h_mfdfa_shuffled: SeedStat::new(shuffled_m.iter().map(|h| h[q2]).collect()),
        },
        wbfa: wbfa
            .as_ref()
            .map(|(m, f)| estimator_report(format!("WBFA ({})", est.filter), f, m, &shuffled_w)),
        mfdfa: mfdfa
            .as_ref()
            .map(|(m, f)| estimator_report(format!("MF-DFA (order {})", cfg.poly_order), f, m, &shuffled_m)),
        spectrum: spectrum_report,
        distribution: density.as_ref().map(|d| DistributionReport {
            mean: d.mean,
            std: d.std,
            excess_kurtosis: d.excess_kurtosis,
            tail_ratio: d.tail_ratio,
            empirical_peak: d.empirical_peak,
            gaussian_peak: d.gaussian_peak,
            bins: d.bin_centers.len(),
            fat_tailed: d.excess_kurtosis > 1.0 && d.tail_ratio > 2.0,
            sharper_peak: d.empirical_peak > d.gaussian_peak,
        }),
        warnings,
    };
    let first_shuffle = cfg.shuffle.seeds.first().map(|&s| ingest::shuffle(&input.returns, s));
    Ok(Analysis {
        report,
        input,
        wbfa,
        mfdfa,
        spectrum,
        density,
        first_shuffle,
    })
}

/// Runs [`analyze`] and writes `report.json`, plus the CSV bundle when selected.
pub fn cmd_analyze(cfg: &AnalysisConfig) -> Result<AnalyzeOutput, CliError> {
    crate::with_threads(cfg.threads, || {
        let analysis = analyze(cfg)?;
        let json = analysis.report.to_json()?;
        let dir = &cfg.output_dir;
        let mut files = Vec::new();
        let report_path = dir.join("report.json");
        output::write_atomic(&report_path, json.as_bytes())?;
        files.push(report_path);
        if cfg.format == ReportFormat::CsvBundle {
            files.extend(write_bundle(cfg, &analysis)?);
        }
        Ok(AnalyzeOutput {
            report: analysis.report,
            json,
            files,
        })
    })
}

fn write_bundle(cfg: &AnalysisConfig, a: &Analysis) -> Result<Vec<PathBuf>, CliError> {
    let dir = &cfg.output_dir;
    let mut files = Vec::new();

    let path = dir.join("returns.csv");
    let prof = ingest::profile(&a.input.returns, false);
    write_with(&path, |out| input::write_returns_csv(out, &a.input, a.first_shuffle.as_ref(), &prof))?;
    files.push(path);

    if a.wbfa.is_some() || a.mfdfa.is_some() {
        let path = dir.join("hq.csv");
        write_with(&path, |out| write_hq_csv(out, &a.report))?;
        files.push(path);
    }
    for (name, est) in [("fq_wbfa.csv", &a.wbfa), ("fq_mfdfa.csv", &a.mfdfa)] {
        if let Some((m, _)) = est {
            let path = dir.join(name);
            write_with(&path, |out| m.write_csv(out))?;
            files.push(path);
        }
    }
    if let Some(s) = &a.spectrum {
        let path = dir.join("spectrum.csv");
        write_with(&path, |out| s.write_csv(out))?;
        files.push(path);
    }
    if let Some(d) = &a.density {
        let path = dir.join("density.csv");
        write_with(&path, |out| d.write_csv(out))?;
        files.push(path);
    }
    Ok(files)
}

fn write_hq_csv(out: &mut Vec<u8>, r: &Report) -> std::io::Result<()> {
    writeln!(out, "q,h_wbfa,h_wbfa_stderr,h_wbfa_shuffled,h_mfdfa,h_mfdfa_stderr,h_mfdfa_shuffled")?;
    let q = &r.settings.q;
    let cells = |e: &Option<EstimatorReport>, i: usize| match e {
        Some(e) => format!(
            "{},{},{}",
            e.hq[i].exponent,
            e.hq[i].stderr,
            e.hq_shuffled_mean.get(i).map(f64::to_string).unwrap_or_default()
        ),
        None => ",,".to_string(),
    };
    for (i, qv) in q.iter().enumerate() {
        writeln!(out, "{qv},{},{}", cells(&r.wbfa, i), cells(&r.mfdfa, i))?;
    }
    Ok(())
}
