//! Analysis configuration, loadable from a TOML file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wbfa_core::dwt::{Boundary, WaveletFamily};
use wbfa_core::ingest::{Column, CsvOptions, MissingPolicy, Normalization};
use wbfa_core::spectrum::{Binning, FrequencyBand};

use crate::error::CliError;

/// How the input column is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    /// Positive prices; log returns are computed.
    #[default]
    Price,
    /// Already a return/increment series.
    Returns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    /// `report.json` only.
    Json,
    /// `report.json` plus one CSV per plot.
    #[default]
    CsvBundle,
}

/// Which series the scalogram is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CwtInput {
    #[default]
    Price,
    Returns,
    Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub path: Option<PathBuf>,
    /// Header name, or a zero-based index when numeric.
    pub column: String,
    pub label_column: Option<String>,
    pub has_header: bool,
    pub missing: MissingPolicy,
    pub kind: InputKind,
    pub normalization: Normalization,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self {
            path: None,
            column: "value".into(),
            label_column: None,
            has_header: true,
            missing: MissingPolicy::Strict,
            kind: InputKind::Price,
            normalization: Normalization::SeriesStd,
        }
    }
}

impl InputConfig {
    pub fn csv_options(&self) -> CsvOptions {
        let parse = |s: &str| s.parse::<Column>().expect("column parsing is infallible");
        CsvOptions {
            column: parse(&self.column),
            label_column: self.label_column.as_deref().map(parse),
            has_header: self.has_header,
            missing: self.missing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveletConfig {
    pub family: WaveletFamily,
    pub order: usize,
    pub boundary: Boundary,
}

impl Default for WaveletConfig {
    fn default() -> Self {
        Self {
            family: WaveletFamily::Daubechies,
            order: 6,
            boundary: Boundary::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QConfig {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for QConfig {
    fn default() -> Self {
        Self {
            min: -4.0,
            max: 4.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleConfig {
    pub s_min: Option<usize>,
    pub s_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShuffleConfig {
    pub seeds: Vec<u64>,
}

impl Default for ShuffleConfig {
    fn default() -> Self {
        Self {
            seeds: (0..10).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Analyses {
    pub wbfa: bool,
    pub mfdfa: bool,
    pub spectrum: bool,
    pub dist: bool,
}

impl Default for Analyses {
    fn default() -> Self {
        Self {
            wbfa: true,
            mfdfa: true,
            spectrum: true,
            dist: true,
        }
    }
}

impl Analyses {
    pub const NAMES: [&'static str; 4] = ["wbfa", "mfdfa", "spectrum", "dist"];

    pub fn none() -> Self {
        Self {
            wbfa: false,
            mfdfa: false,
            spectrum: false,
            dist: false,
        }
    }

    pub fn any(&self) -> bool {
        self.wbfa || self.mfdfa || self.spectrum || self.dist
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, CliError> {
        let mut a = Self::none();
        for name in names {
            match name.as_ref() {
                "wbfa" => a.wbfa = true,
                "mfdfa" => a.mfdfa = true,
                "spectrum" => a.spectrum = true,
                "dist" => a.dist = true,
                "none" => {}
                other => {
                    return Err(CliError::validation(format!(
                        "unknown analysis {other:?}; expected one of {:?}",
                        Self::NAMES
                    )))
                }
            }
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub band_low: Option<f64>,
    pub band_high: Option<f64>,
    /// Number of log-frequency bins; 0 fits the raw periodogram.
    pub log_bins: usize,
    pub consistency_tolerance: f64,
}

impl SpectrumConfig {
    /// Explicit fit band, filling an unset edge from the default for length `n`.
    pub fn band(&self, n: usize) -> Option<FrequencyBand> {
        if self.band_low.is_none() && self.band_high.is_none() {
            return None;
        }
        let d = FrequencyBand::default_for_length(n);
        Some(FrequencyBand {
            low: self.band_low.unwrap_or(d.low),
            high: self.band_high.unwrap_or(d.high),
        })
    }

    pub fn binning(&self) -> Binning {
        match self.log_bins {
            0 => Binning::None,
            k => Binning::Log(k),
        }
    }
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            band_low: None,
            band_high: None,
            log_bins: 16,
            consistency_tolerance: wbfa_core::spectrum::CONSISTENCY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CwtConfig {
    pub input: CwtInput,
    pub min_scale: f64,
    /// Defaults to half the signal length.
    pub max_scale: Option<f64>,
    pub voices: usize,
    pub omega0: f64,
    /// Number of dominant scales reported.
    pub dominant: usize,
    pub cone_of_influence: bool,
}

impl Default for CwtConfig {
    fn default() -> Self {
        Self {
            input: CwtInput::Price,
            min_scale: 2.0,
            max_scale: None,
            voices: 8,
            omega0: wbfa_core::cwt::DEFAULT_OMEGA0,
            dominant: 2,
            cone_of_influence: false,
        }
    }
}

/// Complete configuration for every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub input: InputConfig,
    pub wavelet: WaveletConfig,
    pub poly_order: usize,
    pub q: QConfig,
    pub scales: ScaleConfig,
    pub shuffle: ShuffleConfig,
    pub analyses: Analyses,
    pub spectrum: SpectrumConfig,
    pub density_bins: usize,
    pub cwt: CwtConfig,
    pub output_dir: PathBuf,
    pub format: ReportFormat,
    /// Worker threads; the rayon default when unset. Results do not depend on it.
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            input: InputConfig::default(),
            wavelet: WaveletConfig::default(),
            poly_order: 2,
            q: QConfig::default(),
            scales: ScaleConfig::default(),
            shuffle: ShuffleConfig::default(),
            analyses: Analyses::default(),
            spectrum: SpectrumConfig::default(),
            density_bins: 50,
            cwt: CwtConfig::default(),
            output_dir: PathBuf::from("out"),
            format: ReportFormat::CsvBundle,
            threads: None,
        }
    }
}

impl AnalysisConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Checks the invariants shared by the subcommands.
    pub fn validate(&self) -> Result<(), CliError> {
        if let (Some(lo), Some(hi)) = (self.scales.s_min, self.scales.s_max) {
            if lo >= hi {
                return Err(CliError::validation(format!("s_min {lo} must be below s_max {hi}")));
            }
        }
        if self.q.min > 2.0 || self.q.max < 2.0 {
            return Err(CliError::validation("q range must include q = 2"));
        }
        if self.threads == Some(0) {
            return Err(CliError::validation("threads must be positive"));
        }
        if self.cwt.dominant == 0 {
            return Err(CliError::validation("cwt.dominant must be at least 1"));
        }
        Ok(())
    }

    pub fn input_path(&self) -> Result<&Path, CliError> {
        self.input
            .path
            .as_deref()
            .ok_or_else(|| CliError::validation("no input file given"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = AnalysisConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(AnalysisConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = AnalysisConfig::from_toml_str(
            "poly_order = 3\n[input]\ncolumn = \"High\"\nkind = \"price\"\n[wavelet]\nfamily = \"haar\"\norder = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.poly_order, 3);
        assert_eq!(cfg.input.column, "High");
        assert_eq!(cfg.wavelet.family, WaveletFamily::Haar);
        assert_eq!(cfg.shuffle.seeds.len(), 10);
        assert!(cfg.analyses.any());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(AnalysisConfig::from_toml_str("polyorder = 3\n").is_err());
    }

    #[test]
    fn scale_bounds_checked() {
        let cfg = AnalysisConfig {
            scales: ScaleConfig {
                s_min: Some(64),
                s_max: Some(32),
            },
            ..Default::default()
        };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn analyses_from_names() {
        let a = Analyses::from_names(&["wbfa", "dist"]).unwrap();
        assert!(a.wbfa && a.dist && !a.mfdfa && !a.spectrum);
        assert!(!Analyses::from_names(&["none"]).unwrap().any());
        assert!(Analyses::from_names(&["fft"]).is_err());
    }
}
