//! Input loading shared by the subcommands.

use std::io::Write;

use wbfa_core::ingest::{self, LoadReport, Profile, ReturnSeries, TimeSeries};

use crate::config::{AnalysisConfig, InputKind};
use crate::error::CliError;

/// The raw series and the return series derived from it.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub series: TimeSeries,
    pub load: LoadReport,
    pub kind: InputKind,
    pub returns: ReturnSeries,
}

impl LoadedInput {
    /// Raw-series index aligned with return `t`.
    fn source_index(&self, t: usize) -> usize {
        match self.kind {
            InputKind::Price => t + 1,
            InputKind::Returns => t,
        }
    }
}

pub fn load(cfg: &AnalysisConfig) -> Result<LoadedInput, CliError> {
    let path = cfg.input_path()?;
    let (series, load) = ingest::load_csv(path, &cfg.input.csv_options())?;
    let returns = match cfg.input.kind {
        InputKind::Price => ingest::log_returns(&series, cfg.input.normalization)?,
        InputKind::Returns => {
            ReturnSeries::from_increments(series.values().to_vec(), cfg.input.normalization)?
        }
    };
    Ok(LoadedInput {
        series,
        load,
        kind: cfg.input.kind,
        returns,
    })
}

/// `index,label,input,return,shuffled,profile`; the shuffled column is empty
/// when no shuffle is given.
pub fn write_returns_csv(
    out: &mut Vec<u8>,
    input: &LoadedInput,
    shuffled: Option<&ReturnSeries>,
    profile: &Profile,
) -> std::io::Result<()> {
    writeln!(out, "index,label,input,return,shuffled,profile")?;
    let labels = input.series.labels();
    for (t, r) in input.returns.values().iter().enumerate() {
        let src = input.source_index(t);
        let label = labels.map(|l| l[src].as_str()).unwrap_or("");
        let shuffled = shuffled.map(|s| s.values()[t].to_string()).unwrap_or_default();
        writeln!(
            out,
            "{t},{},{},{r},{shuffled},{}",
            csv_field(label),
            input.series.values()[src],
            profile.values()[t]
        )?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
