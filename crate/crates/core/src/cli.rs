//! Command-line front end: `compress`, `decompress`, `tune`, `stats` and
//! `bench`.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage error,
//! 3 corrupt input on decompress.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{self, CorpusError, GeneratorSpec, HistogramMode};
use crate::decoder::{self, DecompressError};
use crate::params::{self, ParamError, Params, RawParams, DEFAULT_BLOCK_BYTES};
use crate::pipeline::{self, CompressError};
use crate::pool;
use crate::tuner::{self, TunerConfig, TunerError};

/// Header row of the CSV written by `bench` and by `--csv`.
pub const CSV_HEADER: &str =
    "corpus,S,W,C,I,threads,in_bytes,out_bytes,ratio,seconds,throughput_bps";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CORRUPT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Corrupt(DecompressError),
    #[error(transparent)]
    Compress(#[from] CompressError),
    #[error(transparent)]
    Tuner(#[from] TunerError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Corrupt(_) => EXIT_CORRUPT,
            _ => EXIT_FAILURE,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(io_err(path))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(io_err(path))
}

/// Appends CSV rows, writing the header first when the file is new or empty.
pub fn append_csv(path: &Path, rows: &[String]) -> Result<(), CliError> {
    let needs_header = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    let mut text = String::new();
    if needs_header {
        text.push_str(CSV_HEADER);
        text.push('\n');
    }
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    file.write_all(text.as_bytes()).map_err(io_err(path))
}

#[derive(Debug, Parser)]
#[command(name = "chunklz", version, about = "Chunk-parallel multi-byte LZSS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a file into a .plz container file.
    Compress(CompressArgs),
    /// Decompress a .plz file.
    Decompress(DecompressArgs),
    /// Pick symbol width and window from a pilot pass over field files.
    Tune(TuneArgs),
    /// Match-length histogram of a file as CSV.
    Stats(StatsArgs),
    /// Ratio and throughput over a parameter grid on a synthetic corpus.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Symbol width in bytes (1, 2, 4).
    #[arg(short = 'S', long = "symbol-width", default_value_t = 2)]
    pub symbol_width: usize,
    /// Sliding window in symbols (4..=255).
    #[arg(short = 'W', long, conflicts_with = "level")]
    pub window: Option<usize>,
    /// Compression level 1-4 (windows 32, 64, 128, 255).
    #[arg(long)]
    pub level: Option<u8>,
    /// Chunk size in symbols.
    #[arg(short = 'C', long = "chunk", default_value_t = 2048)]
    pub chunk_size: usize,
    /// Matching interval in symbols.
    #[arg(short = 'I', long, default_value_t = 1)]
    pub interval: usize,
    /// Block size in bytes.
    #[arg(long, default_value_t = DEFAULT_BLOCK_BYTES)]
    pub block_bytes: usize,
}

impl ParamArgs {
    pub fn params(&self) -> Result<Params, ParamError> {
        let window = match (self.window, self.level) {
            (Some(w), _) => w,
            (None, Some(level)) => params::level_to_window(level)?,
            (None, None) => 128,
        };
        RawParams {
            symbol_width: self.symbol_width,
            window,
            chunk_size: self.chunk_size,
            interval: self.interval,
            block_bytes: self.block_bytes,
        }
        .validate()
    }
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Append a CSV row with the run report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecompressArgs {
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// Base parameters; -S is ignored in favor of --declared-width.
    #[command(flatten)]
    pub params: ParamArgs,
    /// Width in bytes of the fields' element type.
    #[arg(long, default_value_t = 2)]
    pub declared_width: usize,
    #[arg(long, default_value_t = tuner::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = tuner::DEFAULT_PILOT_BYTES)]
    pub pilot_bytes: usize,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(required = true)]
    pub fields: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Count every per-position match instead of emitted pointers.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Runlen,
    Quantlike,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = CorpusKind::Runlen)]
    pub corpus: CorpusKind,
    /// Corpus size in bytes.
    #[arg(long, default_value_t = 16 << 20)]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 64.0)]
    pub mean_run: f64,
    #[arg(long, default_value_t = 4)]
    pub alphabet: u16,
    #[arg(long, default_value_t = 0.9)]
    pub dominant_prob: f64,
    #[arg(long, default_value_t = 2)]
    pub width: usize,
}

impl CorpusArgs {
    pub fn spec(&self) -> GeneratorSpec {
        match self.corpus {
            CorpusKind::Runlen => {
                GeneratorSpec::runlen(self.size, self.seed, self.mean_run, self.alphabet)
            }
            CorpusKind::Quantlike => {
                GeneratorSpec::quantlike(self.size, self.seed, self.dominant_prob, self.width)
            }
            CorpusKind::Uniform => GeneratorSpec::uniform(self.size, self.seed),
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Benchmark this file instead of a generated corpus.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(
        short = 'S',
        long = "symbol-widths",
        value_delimiter = ',',
        default_value = "2"
    )]
    pub symbol_widths: Vec<usize>,
    #[arg(
        short = 'W',
        long = "windows",
        value_delimiter = ',',
        default_value = "128"
    )]
    pub windows: Vec<usize>,
    #[arg(
        short = 'C',
        long = "chunks",
        value_delimiter = ',',
        default_value = "2048"
    )]
    pub chunks: Vec<usize>,
    #[arg(
        short = 'I',
        long = "intervals",
        value_delimiter = ',',
        default_value = "1"
    )]
    pub intervals: Vec<usize>,
    #[arg(long = "threads", value_delimiter = ',', default_value = "0")]
    pub threads: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_BLOCK_BYTES)]
    pub block_bytes: usize,
    /// Append rows here instead of printing CSV to stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Outcome of one compress or decompress run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub operation: &'static str,
    pub input_bytes: u64,
    pub output_bytes: u64,
    /// Original size over compressed size.
    pub ratio: f64,
    pub seconds: f64,
    /// Original bytes per second of wall time.
    pub throughput_bps: f64,
    pub threads: usize,
    pub params: Params,
}

impl RunReport {
    pub fn new(
        operation: &'static str,
        input_bytes: usize,
        output_bytes: usize,
        seconds: f64,
        threads: usize,
        params: Params,
    ) -> Self {
        let (original, compressed) = if operation == "decompress" {
            (output_bytes, input_bytes)
        } else {
            (input_bytes, output_bytes)
        };
        RunReport {
            operation,
            input_bytes: input_bytes as u64,
            output_bytes: output_bytes as u64,
            ratio: original as f64 / compressed.max(1) as f64,
            seconds,
            throughput_bps: original as f64 / seconds.max(1e-9),
            threads,
            params,
        }
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "operation: {}", self.operation);
        let _ = writeln!(out, "input_bytes: {}", self.input_bytes);
        let _ = writeln!(out, "output_bytes: {}", self.output_bytes);
        let _ = writeln!(out, "ratio: {:.6}", self.ratio);
        let _ = writeln!(out, "seconds: {:.6}", self.seconds);
        let _ = writeln!(out, "throughput_bps: {:.0}", self.throughput_bps);
        let _ = writeln!(out, "threads: {}", self.threads);
        let _ = writeln!(out, "symbol_width: {}", p.symbol_width());
        let _ = writeln!(out, "window: {}", p.window());
        let _ = writeln!(out, "chunk_size: {}", p.chunk_size());
        let _ = writeln!(out, "interval: {}", p.interval());
        out
    }

    pub fn to_csv_row(&self, corpus: &str) -> String {
        let p = &self.params;
        format!(
            "{corpus},{},{},{},{},{},{},{},{:.6},{:.6},{:.0}",
            p.symbol_width(),
            p.window(),
            p.chunk_size(),
            p.interval(),
            self.threads,
            self.input_bytes,
            self.output_bytes,
            self.ratio,
            self.seconds,
            self.throughput_bps
        )
    }
}

fn resolved_threads(threads: usize) -> usize {
    if threads == 0 {
        pool::hardware_threads()
    } else {
        threads
    }
}

/// Compresses `data`, timing the compression call only.
pub fn timed_compress(
    data: &[u8],
    params: &Params,
    threads: usize,
) -> Result<(Vec<u8>, RunReport), CliError> {
    let start = Instant::now();
    let out = pipeline::compress(data, params, threads)?;
    let seconds = start.elapsed().as_secs_f64();
    let report = RunReport::new(
        "compress",
        data.len(),
        out.len(),
        seconds,
        resolved_threads(threads),
        *params,
    );
    Ok((out, report))
}

pub fn cmd_compress(args: &CompressArgs) -> Result<RunReport, CliError> {
    let params = args.params.params()?;
    let data = read(&args.input)?;
    let (out, report) = timed_compress(&data, &params, args.threads)?;
    write(&args.output, &out)?;
    if let Some(csv) = &args.csv {
        append_csv(csv, &[report.to_csv_row(&args.input.display().to_string())])?;
    }
    Ok(report)
}

pub fn cmd_decompress(args: &DecompressArgs) -> Result<RunReport, CliError> {
    let data = read(&args.input)?;
    let start = Instant::now();
    let containers = crate::format::read_file(&data)
        .map_err(|e| CliError::Corrupt(DecompressError::Format(e)))?;
    let out = decoder::decompress_blocks(&containers, args.threads).map_err(CliError::Corrupt)?;
    let seconds = start.elapsed().as_secs_f64();
    write(&args.output, &out)?;

    let params = match containers.first() {
        Some(c) => c.header.params().map_err(|e| CliError::Corrupt(e.into()))?,
        None => Params::default(),
    };
    let report = RunReport::new(
        "decompress",
        data.len(),
        out.len(),
        seconds,
        resolved_threads(args.threads),
        params,
    );
    if let Some(csv) = &args.csv {
        append_csv(csv, &[report.to_csv_row(&args.input.display().to_string())])?;
    }
    Ok(report)
}

pub fn cmd_tune(args: &TuneArgs) -> Result<String, CliError> {
    let base = args.params.params()?;
    let fields = args
        .fields
        .iter()
        .map(|p| read(p))
        .collect::<Result<Vec<_>, _>>()?;
    let config = TunerConfig {
        threshold: args.threshold,
        pilot_bytes: args.pilot_bytes,
        threads: args.threads,
    };
    let report = match tuner::pilot(&fields, args.declared_width, &base, &config) {
        Err(TunerError::DeclaredWidth(w)) => {
            return Err(CliError::Usage(format!(
                "--declared-width {w} is not 1, 2 or 4"
            )))
        }
        other => other?,
    };
    let text = report.to_text();
    if let Some(out) = &args.out {
        write(out, text.as_bytes())?;
    }
    Ok(text)
}

pub fn cmd_stats(args: &StatsArgs) -> Result<String, CliError> {
    let params = args.params.params()?;
    let data = read(&args.input)?;
    let mode = if args.raw {
        HistogramMode::Raw
    } else {
        HistogramMode::Selected
    };
    let csv = corpus::match_length_histogram(&data, &params, mode).to_csv();
    if let Some(out) = &args.out {
        write(out, csv.as_bytes())?;
    }
    Ok(csv)
}

/// Runs the grid and returns CSV rows (without the header).
pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<String>, CliError> {
    let (label, data) = match &args.input {
        Some(path) => (path.display().to_string(), read(path)?),
        None => {
            let spec = args.corpus.spec();
            (spec.kind.name().to_string(), corpus::generate(&spec)?)
        }
    };

    let mut rows = Vec::new();
    for &s in &args.symbol_widths {
        for &w in &args.windows {
            for &c in &args.chunks {
                for &i in &args.intervals {
                    let params = RawParams {
                        symbol_width: s,
                        window: w,
                        chunk_size: c,
                        interval: i,
                        block_bytes: args.block_bytes,
                    }
                    .validate()?;
                    for &t in &args.threads {
                        let (_, report) = timed_compress(&data, &params, t)?;
                        rows.push(report.to_csv_row(&label));
                    }
                }
            }
        }
    }
    if let Some(csv) = &args.csv {
        append_csv(csv, &rows)?;
    }
    Ok(rows)
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Compress(a) => cmd_compress(a).map(|r| r.to_text()),
        Command::Decompress(a) => cmd_decompress(a).map(|r| r.to_text()),
        Command::Tune(a) => {
            let text = cmd_tune(a)?;
            Ok(if a.out.is_some() { String::new() } else { text })
        }
        Command::Stats(a) => {
            let csv = cmd_stats(a)?;
            Ok(if a.out.is_some() { String::new() } else { csv })
        }
        Command::Bench(a) => {
            let rows = cmd_bench(a)?;
            if a.csv.is_some() {
                return Ok(String::new());
            }
            let mut out = format!("{CSV_HEADER}\n");
            for r in rows {
                out.push_str(&r);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Parses `args`, runs the command, prints its output and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
