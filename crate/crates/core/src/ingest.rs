//! Loading price series and turning them into returns and profiles.

use std::fs::File;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::stats;
use crate::{Error, Result};

/// Ordered real-valued samples, optionally labelled with dates.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
    name: String,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, labels: Option<Vec<String>>, name: impl Into<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "at least 2 samples required, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("sample {i} is not finite")));
        }
        if let Some(labels) = &labels {
            if labels.len() != values.len() {
                return Err(Error::InvalidSeries(format!(
                    "{} labels for {} values",
                    labels.len(),
                    values.len()
                )));
            }
        }
        Ok(Self {
            values,
            labels,
            name: name.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which divisor scales the log returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Sample standard deviation of the price series itself.
    #[default]
    SeriesStd,
    /// Sample standard deviation of the raw log differences.
    ReturnStd,
    None,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series-std" => Ok(Self::SeriesStd),
            "return-std" => Ok(Self::ReturnStd),
            "none" => Ok(Self::None),
            other => Err(Error::InvalidParameter(format!(
                "unknown normalization {other:?} (expected series-std, return-std or none)"
            ))),
        }
    }
}

/// Scaled log returns and the divisor that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
    normalization: Normalization,
    sigma: f64,
}

impl ReturnSeries {
    /// Wraps a series that already holds increments (white noise, fGn, a cascade, ...).
    ///
    /// Both std normalizations divide by the sample std of `values`.
    pub fn from_increments(values: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries("empty increment series".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries("increments must be finite".into()));
        }
        let sigma = match normalization {
            Normalization::None => 1.0,
            Normalization::SeriesStd | Normalization::ReturnStd => {
                nonzero_sigma(stats::sample_std(&values), max_abs(&values), "increments are constant")?
            }
        };
        let values = values.into_iter().map(|v| v / sigma).collect();
        Ok(Self {
            values,
            normalization,
            sigma,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same normalization metadata with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            normalization: self.normalization,
            sigma: self.sigma / factor,
        }
    }
}

/// Rejects a sigma that is zero up to rounding relative to the data magnitude.
fn nonzero_sigma(sigma: f64, magnitude: f64, what: &'static str) -> Result<f64> {
    if sigma.is_finite() && sigma > 1e-12 * magnitude {
        Ok(sigma)
    } else {
        Err(Error::ZeroSigma(what))
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Cumulative sum of (optionally mean-adjusted) returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
    zero_mean: bool,
}

impl Profile {
    /// Wraps an arbitrary sequence as a profile, e.g. for reversed or synthetic inputs.
    pub fn from_values(values: Vec<f64>, zero_mean: bool) -> Self {
        Self { values, zero_mean }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn zero_mean(&self) -> bool {
        self.zero_mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Increments of the profile; the first one is measured from zero.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.values
            .iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect()
    }
}

/// Column reference in a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    /// Purely numeric strings are treated as zero-based indices.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    /// Any blank or unparsable cell aborts the load.
    #[default]
    Strict,
    /// Rows with blank or unparsable cells are skipped and counted.
    Lenient,
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub column: Column,
    pub label_column: Option<Column>,
    /// Always true when a column is selected by name.
    pub has_header: bool,
    pub missing: MissingPolicy,
}

impl CsvOptions {
    pub fn named(column: &str) -> Self {
        Self {
            column: Column::Name(column.to_string()),
            label_column: None,
            has_header: true,
            missing: MissingPolicy::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_used: usize,
    pub rows_skipped: usize,
}

/// Reads one numeric column (and optionally a label column) in file order.
pub fn load_csv(path: &Path, options: &CsvOptions) -> Result<(TimeSeries, LoadReport)> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_csv(file, options, name)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv<R: std::io::Read>(
    mut reader: R,
    options: &CsvOptions,
    name: String,
) -> Result<(TimeSeries, LoadReport)> {
    let mut raw = Vec::new();
    reader
        .read_to_end(&mut raw)
        .map_err(|e| Error::Csv(csv::Error::from(e)))?;
    let named = matches!(options.column, Column::Name(_))
        || matches!(options.label_column, Some(Column::Name(_)));
    let has_header = options.has_header || named;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(raw.as_slice());

    let headers = if has_header {
        Some(rdr.headers()?.clone())
    } else {
        None
    };
    let resolve = |col: &Column| -> Result<usize> {
        match col {
            Column::Index(i) => Ok(*i),
            Column::Name(n) => headers
                .as_ref()
                .and_then(|h| h.iter().position(|f| f == n))
                .ok_or_else(|| Error::InvalidParameter(format!("no column named {n:?}"))),
        }
    };
    let value_idx = resolve(&options.column)?;
    let label_idx = options.label_column.as_ref().map(resolve).transpose()?;

    let mut values = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    let mut report = LoadReport {
        rows_read: 0,
        rows_used: 0,
        rows_skipped: 0,
    };
    // The csv reader drops blank lines silently and does not count them; file
    // lines are recovered from byte offsets so a blank line surfaces as a row
    // with a missing value.
    let mut next_line = if has_header { 2 } else { 1 };
    let (mut scanned, mut line) = (0usize, 1usize);
    for record in rdr.records() {
        let record = record?;
        let mut start = record.position().map_or(scanned, |p| p.byte() as usize);
        // Positions point just past the previous record, before any blank lines.
        while matches!(raw.get(start), Some(b'\n' | b'\r')) {
            start += 1;
        }
        line += raw[scanned..start].iter().filter(|&&b| b == b'\n').count();
        scanned = start;
        let row = line;
        if row > next_line {
            match options.missing {
                MissingPolicy::Strict => {
                    return Err(Error::Row {
                        row: next_line,
                        message: "missing value".to_string(),
                    })
                }
                MissingPolicy::Lenient => {
                    report.rows_read += row - next_line;
                    report.rows_skipped += row - next_line;
                }
            }
        }
        next_line = row + 1;
        report.rows_read += 1;
        let cell = record.get(value_idx).unwrap_or("");
        let parsed = match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(format!("non-finite value {cell:?}")),
            Err(_) if cell.is_empty() => Err("missing value".to_string()),
            Err(_) => Err(format!("cannot parse {cell:?} as a number")),
        };
        match parsed {
            Ok(v) => {
                values.push(v);
                if let (Some(labels), Some(idx)) = (labels.as_mut(), label_idx) {
                    labels.push(record.get(idx).unwrap_or("").to_string());
                }
                report.rows_used += 1;
            }
            Err(message) => match options.missing {
                MissingPolicy::Strict => return Err(Error::Row { row, message }),
                MissingPolicy::Lenient => report.rows_skipped += 1,
            },
        }
    }
    if values.len() < 2 {
        return Err(Error::InvalidSeries(format!(
            "only {} usable rows, at least 2 required",
            values.len()
        )));
    }
    Ok((TimeSeries::new(values, labels, name)?, report))
}

/// Log differences of a positive price series divided by the chosen sigma.
pub fn log_returns(series: &TimeSeries, normalization: Normalization) -> Result<ReturnSeries> {
    let x = series.values();
    if let Some(i) = x.iter().position(|&v| v <= 0.0) {
        return Err(Error::InvalidSeries(format!(
            "price at index {i} is not positive ({})",
            x[i]
        )));
    }
    let raw: Vec<f64> = x.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    let sigma = match normalization {
        Normalization::None => 1.0,
        Normalization::SeriesStd => nonzero_sigma(stats::sample_std(x), max_abs(x), "price series is constant")?,
        Normalization::ReturnStd => {
            nonzero_sigma(stats::sample_std(&raw), max_abs(&raw), "log differences are constant")?
        }
    };
    Ok(ReturnSeries {
        values: raw.into_iter().map(|r| r / sigma).collect(),
        normalization,
        sigma,
    })
}

/// Seeded Fisher-Yates permutation (ChaCha8 stream seeded from `seed`).
pub fn shuffle(returns: &ReturnSeries, seed: u64) -> ReturnSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = returns.values.clone();
    values.shuffle(&mut rng);
    ReturnSeries {
        values,
        normalization: returns.normalization,
        sigma: returns.sigma,
    }
}

pub fn profile(returns: &ReturnSeries, subtract_mean: bool) -> Profile {
    let m = if subtract_mean {
        stats::mean(returns.values())
    } else {
        0.0
    };
    let mut acc = 0.0;
    let values = returns
        .values()
        .iter()
        .map(|&g| {
            acc += g - m;
            acc
        })
        .collect();
    Profile {
        values,
        zero_mean: subtract_mean,
    }
}
