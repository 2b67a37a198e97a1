use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wbfa_cli::commands::{self, summary_json};
use wbfa_cli::config::{Analyses, AnalysisConfig, CwtInput, InputKind, ReportFormat};
use wbfa_cli::CliError;
use wbfa_core::dwt::{Boundary, WaveletFamily};
use wbfa_core::ingest::{MissingPolicy, Normalization};
use wbfa_core::synth::{GeneratorKind, GeneratorSpec};

/// Multifractal fluctuation analysis of price and return series.
#[derive(Parser)]
#[command(name = "wbfa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// WBFA and MF-DFA exponents, shuffled surrogates, spectrum and density.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        est: EstimatorArgs,
    },
    /// Morlet scalogram, marginals and dominant scales.
    Cwt {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        cwt: CwtArgs,
    },
    /// Power spectrum of the profile and its exponent alpha.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Hurst exponent for the alpha = 2H + 1 check.
        #[arg(long)]
        hurst: Option<f64>,
    },
    /// Generate a synthetic series as CSV (`index,value`).
    Synth(SynthArgs),
    /// Normalized returns, a shuffled copy and the profile as CSV.
    Returns {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV file.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Value column: header name or zero-based index.
    #[arg(long)]
    column: Option<String>,
    /// Date/label column.
    #[arg(long)]
    label_column: Option<String>,
    /// The file has no header row (index columns only).
    #[arg(long)]
    no_header: bool,
    /// Skip rows with missing or unparsable values instead of failing.
    #[arg(long)]
    lenient: bool,
    #[arg(long, value_enum)]
    kind: Option<InputKind>,
    #[arg(long, value_parser = parse_normalization)]
    normalization: Option<Normalization>,
    /// Shuffle seeds, comma separated.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Use seeds 0..N.
    #[arg(long, conflicts_with = "seeds")]
    shuffles: Option<u64>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct EstimatorArgs {
    #[arg(long, value_parser = parse_family)]
    wavelet: Option<WaveletFamily>,
    /// Filter length (2 for Haar, even 2..=20 for Daubechies).
    #[arg(long)]
    wavelet_order: Option<usize>,
    #[arg(long, value_parser = parse_boundary)]
    boundary: Option<Boundary>,
    /// MF-DFA detrending polynomial order.
    #[arg(long)]
    poly_order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    q_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q_max: Option<f64>,
    #[arg(long)]
    q_step: Option<f64>,
    #[arg(long)]
    s_min: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    /// Analyses to run, comma separated: wbfa, mfdfa, spectrum, dist.
    #[arg(long, value_delimiter = ',')]
    analyses: Option<Vec<String>>,
    #[arg(long)]
    density_bins: Option<usize>,
    #[command(flatten)]
    spectrum: SpectrumArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Lower edge of the fit band in cycles per sample.
    #[arg(long)]
    band_low: Option<f64>,
    /// Upper edge of the fit band in cycles per sample.
    #[arg(long)]
    band_high: Option<f64>,
    /// Log-frequency bins for the fit; 0 fits raw periodogram ordinates.
    #[arg(long)]
    log_bins: Option<usize>,
}

#[derive(Args)]
struct CwtArgs {
    /// Series to transform.
    #[arg(long, value_enum)]
    signal: Option<CwtInput>,
    #[arg(long)]
    min_scale: Option<f64>,
    #[arg(long)]
    max_scale: Option<f64>,
    /// Scales per octave.
    #[arg(long)]
    voices: Option<usize>,
    #[arg(long)]
    omega0: Option<f64>,
    /// Number of dominant scales to report.
    #[arg(short = 'k', long)]
    dominant: Option<usize>,
    /// Also write the cone-of-influence boundary.
    #[arg(long)]
    coi: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    GaussianWhite,
    Fgn,
    BinomialCascade,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: SynthKind,
    #[arg(long, default_value_t = 8192)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hurst exponent for fgn.
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,
    /// Cascade weight in (0.5, 1).
    #[arg(long, default_value_t = 0.75)]
    a: f64,
    /// Emit the price path 100 exp(k cumsum(x)) instead of the increments.
    #[arg(long)]
    price_scale: Option<f64>,
    #[arg(short, long)]
    output: PathBuf,
}

fn parse_normalization(s: &str) -> Result<Normalization, String> {
    s.parse().map_err(|e: wbfa_core::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<WaveletFamily, String> {
    s.parse().map_err(|e: wbfa_core::Error| e.to_string())
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: wbfa_core::Error| e.to_string())
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl CommonArgs {
    fn config(&self) -> Result<AnalysisConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => AnalysisConfig::from_file(path)?,
            None => AnalysisConfig::default(),
        };
        if self.input.is_some() {
            cfg.input.path = self.input.clone();
        }
        set(&mut cfg.input.column, self.column.clone());
        if self.label_column.is_some() {
            cfg.input.label_column = self.label_column.clone();
        }
        if self.no_header {
            cfg.input.has_header = false;
        }
        if self.lenient {
            cfg.input.missing = MissingPolicy::Lenient;
        }
        set(&mut cfg.input.kind, self.kind);
        set(&mut cfg.input.normalization, self.normalization);
        set(&mut cfg.shuffle.seeds, self.seeds.clone());
        if let Some(n) = self.shuffles {
            cfg.shuffle.seeds = (0..n).collect();
        }
        set(&mut cfg.output_dir, self.output_dir.clone());
        set(&mut cfg.format, self.format);
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        Ok(cfg)
    }
}

impl SpectrumArgs {
    fn apply(&self, cfg: &mut AnalysisConfig) {
        if self.band_low.is_some() {
            cfg.spectrum.band_low = self.band_low;
        }
        if self.band_high.is_some() {
            cfg.spectrum.band_high = self.band_high;
        }
        set(&mut cfg.spectrum.log_bins, self.log_bins);
    }
}

impl EstimatorArgs {
    fn apply(&self, cfg: &mut AnalysisConfig) -> Result<(), CliError> {
        set(&mut cfg.wavelet.family, self.wavelet);
        set(&mut cfg.wavelet.order, self.wavelet_order);
        set(&mut cfg.wavelet.boundary, self.boundary);
        set(&mut cfg.poly_order, self.poly_order);
        set(&mut cfg.q.min, self.q_min);
        set(&mut cfg.q.max, self.q_max);
        set(&mut cfg.q.step, self.q_step);
        if self.s_min.is_some() {
            cfg.scales.s_min = self.s_min;
        }
        if self.s_max.is_some() {
            cfg.scales.s_max = self.s_max;
        }
        if let Some(names) = &self.analyses {
            cfg.analyses = Analyses::from_names(names)?;
        }
        set(&mut cfg.density_bins, self.density_bins);
        self.spectrum.apply(cfg);
        Ok(())
    }
}

impl CwtArgs {
    fn apply(&self, cfg: &mut AnalysisConfig) {
        let c = &mut cfg.cwt;
        set(&mut c.input, self.signal);
        set(&mut c.min_scale, self.min_scale);
        if self.max_scale.is_some() {
            c.max_scale = self.max_scale;
        }
        set(&mut c.voices, self.voices);
        set(&mut c.omega0, self.omega0);
        set(&mut c.dominant, self.dominant);
        if self.coi {
            c.cone_of_influence = true;
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze { common, est } => {
            let mut cfg = common.config()?;
            est.apply(&mut cfg)?;
            Ok(wbfa_cli::cmd_analyze(&cfg)?.json)
        }
        Command::Cwt { common, cwt } => {
            let mut cfg = common.config()?;
            cwt.apply(&mut cfg);
            Ok(commands::cmd_cwt(&cfg)?.json)
        }
        Command::Spectrum {
            common,
            spectrum,
            hurst,
        } => {
            let mut cfg = common.config()?;
            spectrum.apply(&mut cfg);
            Ok(commands::cmd_spectrum(&cfg, hurst)?.json)
        }
        Command::Synth(args) => {
            let kind = match args.kind {
                SynthKind::GaussianWhite => GeneratorKind::GaussianWhite,
                SynthKind::Fgn => GeneratorKind::Fgn { hurst: args.hurst },
                SynthKind::BinomialCascade => GeneratorKind::BinomialCascade { a: args.a },
            };
            let spec = GeneratorSpec {
                kind,
                length: args.length,
                seed: args.seed,
            };
            let rows = commands::cmd_synth(&spec, args.price_scale, &args.output)?;
            summary_json(&serde_json::json!({
                "output": args.output.display().to_string(),
                "rows": rows,
                "generator": spec.kind,
                "length": spec.length,
                "seed": spec.seed,
            }))
        }
        Command::Returns { common } => {
            let cfg = common.config()?;
            let (summary, _) = commands::cmd_returns(&cfg)?;
            summary_json(&summary)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
