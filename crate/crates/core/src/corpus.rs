//! Synthetic corpora and match-length statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use thiserror::Error;

use crate::encoder;
use crate::params::{Params, RawParams};
use crate::partition;
use crate::pipeline;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("invalid generator: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// Runs of single bytes with geometric lengths (mean `mean_run`), the
    /// run value drawn from `alphabet` distinct bytes, never repeating the
    /// previous run's value.
    RunLength { mean_run: f64, alphabet: u16 },
    /// Quantization-code-like symbols of `width` bytes: a dominant code with
    /// probability `dominant_prob`, otherwise a nearby code.
    QuantLike { dominant_prob: f64, width: usize },
    /// Independent uniform bytes.
    Uniform,
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::RunLength { .. } => "runlen",
            GeneratorKind::QuantLike { .. } => "quantlike",
            GeneratorKind::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub size: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn runlen(size: usize, seed: u64, mean_run: f64, alphabet: u16) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::RunLength { mean_run, alphabet },
            size,
            seed,
        }
    }

    pub fn quantlike(size: usize, seed: u64, dominant_prob: f64, width: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::QuantLike {
                dominant_prob,
                width,
            },
            size,
            seed,
        }
    }

    pub fn uniform(size: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Uniform,
            size,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.size == 0 {
            return Err(CorpusError::Invalid("size must be positive".into()));
        }
        match self.kind {
            GeneratorKind::RunLength { mean_run, alphabet } => {
                if !mean_run.is_finite() || mean_run < 1.0 {
                    return Err(CorpusError::Invalid(format!("mean_run {mean_run} < 1")));
                }
                if !(1..=256).contains(&alphabet) {
                    return Err(CorpusError::Invalid(format!(
                        "alphabet {alphabet} outside 1..=256"
                    )));
                }
            }
            GeneratorKind::QuantLike {
                dominant_prob,
                width,
            } => {
                if !(0.0..=1.0).contains(&dominant_prob) {
                    return Err(CorpusError::Invalid(format!(
                        "dominant_prob {dominant_prob} outside [0, 1]"
                    )));
                }
                if ![1, 2, 4].contains(&width) {
                    return Err(CorpusError::Invalid(format!("width {width} not 1, 2 or 4")));
                }
            }
            GeneratorKind::Uniform => {}
        }
        Ok(())
    }
}

/// Generates the corpus described by `spec`; a pure function of the spec.
pub fn generate(spec: &GeneratorSpec) -> Result<Vec<u8>, CorpusError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.size);

    match spec.kind {
        GeneratorKind::Uniform => {
            out.resize(spec.size, 0);
            rng.fill(out.as_mut_slice());
        }
        GeneratorKind::RunLength { mean_run, alphabet } => {
            let extra = Geometric::new(1.0 / mean_run).expect("p in (0, 1]");
            let mut prev: Option<u16> = None;
            while out.len() < spec.size {
                let value = match prev {
                    Some(p) if alphabet > 1 => {
                        let v = rng.random_range(0..alphabet - 1);
                        if v >= p {
                            v + 1
                        } else {
                            v
                        }
                    }
                    _ => rng.random_range(0..alphabet),
                };
                prev = Some(value);
                let run = 1 + extra.sample(&mut rng) as usize;
                let run = run.min(spec.size - out.len());
                out.extend(std::iter::repeat_n(value as u8, run));
            }
        }
        GeneratorKind::QuantLike {
            dominant_prob,
            width,
        } => {
            // cuSZ-style quantization radius: the "zero error" code sits in
            // the middle of the code range.
            let dominant: u32 = if width == 1 { 128 } else { 512 };
            let spread = Geometric::new(0.5).expect("p in (0, 1]");
            while out.len() < spec.size {
                let code = if rng.random_bool(dominant_prob) {
                    dominant
                } else {
                    let step = 1 + spread.sample(&mut rng).min(100) as u32;
                    if rng.random_bool(0.5) {
                        dominant + step
                    } else {
                        dominant - step
                    }
                };
                let bytes = code.to_le_bytes();
                let take = width.min(spec.size - out.len());
                out.extend_from_slice(&bytes[..take]);
            }
        }
    }
    Ok(out)
}

/// Empirical byte entropy in bits per byte.
pub fn byte_entropy(data: &[u8]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let mut counts = [0u64; 256];
    for &b in data {
        counts[b as usize] += 1;
    }
    let n = data.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HistogramMode {
    /// Lengths of pointers the encoder actually emits.
    #[default]
    Selected,
    /// Lengths of every per-position match in the raw match tables.
    Raw,
}

/// Counts of match lengths in symbols, indexed by length (1..=255).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchHistogram {
    pub symbol_width: usize,
    pub counts: Vec<u64>,
}

impl MatchHistogram {
    fn new(symbol_width: usize) -> Self {
        MatchHistogram {
            symbol_width,
            counts: vec![0; 256],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Fraction of matches whose byte length exceeds `threshold`.
    pub fn fraction_bytes_over(&self, threshold: usize) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let over: u64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(len, _)| len * self.symbol_width > threshold)
            .map(|(_, c)| c)
            .sum();
        over as f64 / total as f64
    }

    /// `(symbol_length, count)` for every non-empty bucket.
    pub fn buckets(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(len, &c)| (len, c))
    }

    fn absorb(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    /// CSV rows `length,count,byte_length,fraction_gt_128,fraction_gt_256`
    /// where the fraction columns hold this bucket's share of all matches
    /// when its byte length is over the threshold (so each column sums to
    /// the overall fraction), followed by a `# total` summary line.
    pub fn to_csv(&self) -> String {
        let total = self.total().max(1) as f64;
        let mut out = String::from("length,count,byte_length,fraction_gt_128,fraction_gt_256\n");
        for (len, count) in self.buckets() {
            let bytes = len * self.symbol_width;
            let share = count as f64 / total;
            let gt128 = if bytes > 128 { share } else { 0.0 };
            let gt256 = if bytes > 256 { share } else { 0.0 };
            out.push_str(&format!("{len},{count},{bytes},{gt128:.6},{gt256:.6}\n"));
        }
        out.push_str(&format!(
            "# total={},fraction_gt_128={:.6},fraction_gt_256={:.6}\n",
            self.total(),
            self.fraction_bytes_over(128),
            self.fraction_bytes_over(256)
        ));
        out
    }
}

/// Match-length histogram of `data` chunked as by `params`, with interval
/// matching disabled.
pub fn match_length_histogram(data: &[u8], params: &Params, mode: HistogramMode) -> MatchHistogram {
    let params = RawParams {
        interval: 1,
        ..params.to_raw()
    }
    .validate()
    .expect("interval 1 is always valid");
    let plan = partition::plan(data.len(), &params);
    let chunks: Vec<_> = plan
        .blocks
        .iter()
        .flat_map(|b| {
            (0..b.num_chunks).map(move |k| {
                let r = b.chunk_bytes(k, &params);
                b.byte_start + r.start..b.byte_start + r.end
            })
        })
        .collect();

    let width = params.symbol_width();
    chunks
        .into_par_iter()
        .map(|range| {
            let bytes = &data[range];
            let table = pipeline::match_bytes(bytes, &params, &mut ());
            let mut hist = MatchHistogram::new(width);
            match mode {
                HistogramMode::Raw => {
                    for r in table.records.iter().filter(|r| r.is_match()) {
                        hist.counts[r.length as usize] += 1;
                    }
                }
                HistogramMode::Selected => {
                    let res = encoder::resolve_tokens(&table, &params)
                        .expect("matcher tables never overrun");
                    for t in res.tokens {
                        if let Some(r) = t.pointer {
                            hist.counts[r.length as usize] += 1;
                        }
                    }
                }
            }
            hist
        })
        .reduce(|| MatchHistogram::new(width), MatchHistogram::absorb)
}
