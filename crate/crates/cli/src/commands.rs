//! The `cwt`, `spectrum`, `synth` and `returns` subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wbfa_core::cwt::{self, DominantScale, Marginal, MorletParams, Scalogram};
use wbfa_core::ingest;
use wbfa_core::spectrum::{self, AlphaFit, Consistency};
use wbfa_core::synth::{self, GeneratorSpec};

use crate::analyze::SCHEMA_VERSION;
use crate::config::{AnalysisConfig, CwtInput, InputKind, ReportFormat};
use crate::error::CliError;
use crate::input;
use crate::output::{write_atomic, write_with};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub scale: f64,
    pub wavelength: f64,
    pub energy: f64,
}

/// Dominant-scale summary written as `cwt_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CwtSummary {
    pub schema_version: u32,
    pub input: CwtInput,
    pub length: usize,
    pub omega0: f64,
    pub fourier_factor: f64,
    pub scale_min: f64,
    pub scale_max: f64,
    pub voices: usize,
    /// Global maximum of the scale marginal `sum_n |W|^2`.
    pub peak: Peak,
    /// Strongest local maxima of the scale marginal `sum_n |W|^2`.
    pub dominant_energy: Vec<DominantScale>,
    /// Strongest local maxima of the time-averaged magnitude; `energy` holds that mean.
    pub dominant_magnitude: Vec<DominantScale>,
}

#[derive(Debug, Clone)]
pub struct CwtOutput {
    pub summary: CwtSummary,
    pub scalogram: Scalogram,
    pub json: String,
    pub files: Vec<PathBuf>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::numerical(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// The series the scalogram is computed from, mean removed.
pub fn cwt_signal(cfg: &AnalysisConfig) -> Result<Vec<f64>, CliError> {
    let loaded = input::load(cfg)?;
    let raw: Vec<f64> = match cfg.cwt.input {
        CwtInput::Price => {
            if loaded.kind == InputKind::Returns {
                return Err(CliError::validation(
                    "cwt input \"price\" needs a price series; choose returns or profile",
                ));
            }
            loaded.series.values().to_vec()
        }
        CwtInput::Returns => loaded.returns.values().to_vec(),
        CwtInput::Profile => ingest::profile(&loaded.returns, true).values().to_vec(),
    };
    let mean = wbfa_core::stats::mean(&raw);
    let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
    let magnitude = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let spread = centered.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(spread > 1e-12 * magnitude) {
        return Err(wbfa_core::Error::ZeroSigma("cwt input").into());
    }
    Ok(centered)
}

pub fn cmd_cwt(cfg: &AnalysisConfig) -> Result<CwtOutput, CliError> {
    cfg.validate()?;
    crate::with_threads(cfg.threads, || {
        let signal = cwt_signal(cfg)?;
        let n = signal.len();
        let c = &cfg.cwt;
        let max_scale = c.max_scale.unwrap_or(n as f64 / 2.0);
        let params = MorletParams::fractional_dyadic(c.min_scale, max_scale, c.voices, c.omega0)?;
        let sc = cwt::morlet_cwt(&signal, &params)?;
        let energy = cwt::periodogram(&sc, Marginal::Scale);
        let magnitude = cwt::mean_magnitude(&sc);
        let j = (0..energy.len())
            .max_by(|&a, &b| energy[a].total_cmp(&energy[b]).then(b.cmp(&a)))
            .ok_or_else(|| CliError::validation("empty scale grid"))?;
        let summary = CwtSummary {
            schema_version: SCHEMA_VERSION,
            input: c.input,
            length: n,
            omega0: c.omega0,
            fourier_factor: cwt::fourier_factor(c.omega0),
            scale_min: params.scales()[0],
            scale_max: *params.scales().last().expect("non-empty grid"),
            voices: c.voices,
            peak: Peak {
                scale: sc.scales()[j],
                wavelength: sc.fourier_wavelengths()[j],
                energy: energy[j],
            },
            dominant_energy: cwt::dominant_scales(&energy, sc.scales(), c.dominant, c.omega0)?,
            dominant_magnitude: cwt::dominant_scales(&magnitude, sc.scales(), c.dominant, c.omega0)?,
        };
        let json = to_json(&summary)?;

        let dir = &cfg.output_dir;
        let mut files = Vec::new();
        let mut emit = |name: &str, bytes: Vec<u8>| -> Result<(), CliError> {
            let path = dir.join(name);
            write_atomic(&path, &bytes)?;
            files.push(path);
            Ok(())
        };
        emit("cwt_summary.json", json.clone().into_bytes())?;
        let mut bin = Vec::new();
        sc.write_binary(&mut bin).map_err(CliError::from)?;
        emit("scalogram.bin", bin)?;
        let mut per = Vec::new();
        writeln!(per, "scale,wavelength,energy,mean_magnitude")?;
        for k in 0..energy.len() {
            writeln!(per, "{},{},{},{}", sc.scales()[k], sc.fourier_wavelengths()[k], energy[k], magnitude[k])?;
        }
        emit("periodogram.csv", per)?;
        let mut tm = Vec::new();
        writeln!(tm, "time,energy")?;
        for (t, e) in cwt::periodogram(&sc, Marginal::Time).iter().enumerate() {
            writeln!(tm, "{t},{e}")?;
        }
        emit("time_marginal.csv", tm)?;
        if cfg.format == ReportFormat::CsvBundle {
            let mut long = Vec::new();
            sc.write_csv(&mut long)?;
            emit("scalogram.csv", long)?;
        }
        if c.cone_of_influence {
            emit("coi.csv", coi_csv(&sc)?)?;
        }
        Ok(CwtOutput {
            summary,
            scalogram: sc,
            json,
            files,
        })
    })
}

/// Per time index, the largest scale unaffected by the boundary (0 when none is).
fn coi_csv(sc: &Scalogram) -> std::io::Result<Vec<u8>> {
    let mask = sc.cone_of_influence();
    let mut out = Vec::new();
    writeln!(out, "time,max_valid_scale")?;
    for t in 0..sc.len() {
        let valid = (0..mask.len())
            .rev()
            .find(|&j| !mask[j][t])
            .map_or(0.0, |j| sc.scales()[j]);
        writeln!(out, "{t},{valid}")?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub schema_version: u32,
    pub length: usize,
    #[serde(flatten)]
    pub fit: AlphaFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<Consistency>,
}

#[derive(Debug, Clone)]
pub struct SpectrumOutput {
    pub summary: SpectrumSummary,
    pub json: String,
    pub files: Vec<PathBuf>,
}

/// Power spectrum of the mean-subtracted profile; `hurst` adds the 2H + 1 check.
pub fn cmd_spectrum(cfg: &AnalysisConfig, hurst: Option<f64>) -> Result<SpectrumOutput, CliError> {
    cfg.validate()?;
    let loaded = input::load(cfg)?;
    let prof = ingest::profile(&loaded.returns, true);
    let raw = spectrum::power_spectrum(&prof)?;
    let spec = spectrum::fit_alpha(&raw, cfg.spectrum.band(raw.length), cfg.spectrum.binning())?;
    let fit = spec.fit.expect("fitted spectrum");
    let summary = SpectrumSummary {
        schema_version: SCHEMA_VERSION,
        length: spec.length,
        fit,
        consistency: hurst.map(|h| spectrum::consistency_check(fit.alpha, h, cfg.spectrum.consistency_tolerance)),
    };
    let json = to_json(&summary)?;
    let dir = &cfg.output_dir;
    let csv_path = dir.join("spectrum.csv");
    write_with(&csv_path, |out| spec.write_csv(out))?;
    let json_path = dir.join("spectrum.json");
    write_atomic(&json_path, json.as_bytes())?;
    Ok(SpectrumOutput {
        summary,
        json,
        files: vec![csv_path, json_path],
    })
}

/// Writes a generated series as `index,value`, readable by `load_csv` with
/// column `value`. With `price_scale`, the values are the price path
/// `100 exp(price_scale * cumsum(x))` instead of the increments.
pub fn cmd_synth(spec: &GeneratorSpec, price_scale: Option<f64>, path: &Path) -> Result<usize, CliError> {
    let series = synth::generate(spec)?;
    let values: Vec<f64> = match price_scale {
        None => series.values().to_vec(),
        Some(k) if k > 0.0 && k.is_finite() => {
            let mut level = 0.0;
            series
                .values()
                .iter()
                .map(|x| {
                    level += k * x;
                    100.0 * level.exp()
                })
                .collect()
        }
        Some(k) => return Err(CliError::validation(format!("price scale {k} must be positive"))),
    };
    write_with(path, |out| {
        writeln!(out, "index,value")?;
        for (i, v) in values.iter().enumerate() {
            writeln!(out, "{i},{v}")?;
        }
        Ok(())
    })?;
    Ok(values.len())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnsSummary {
    pub schema_version: u32,
    pub returns: usize,
    pub normalization: ingest::Normalization,
    pub sigma: f64,
    pub mean: f64,
    pub std: f64,
}

/// Writes `returns.csv` (returns, first shuffle, profile) and summarizes.
pub fn cmd_returns(cfg: &AnalysisConfig) -> Result<(ReturnsSummary, PathBuf), CliError> {
    cfg.validate()?;
    let loaded = input::load(cfg)?;
    let shuffled = cfg.shuffle.seeds.first().map(|&s| ingest::shuffle(&loaded.returns, s));
    let prof = ingest::profile(&loaded.returns, false);
    let path = cfg.output_dir.join("returns.csv");
    write_with(&path, |out| input::write_returns_csv(out, &loaded, shuffled.as_ref(), &prof))?;
    let r = loaded.returns.values();
    let summary = ReturnsSummary {
        schema_version: SCHEMA_VERSION,
        returns: r.len(),
        normalization: loaded.returns.normalization(),
        sigma: loaded.returns.sigma(),
        mean: wbfa_core::stats::mean(r),
        std: wbfa_core::stats::sample_std(r),
    };
    Ok((summary, path))
}

pub fn summary_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    to_json(value)
}
