//! Lightweight symbol-width and window selection.
//!
//! A pilot pass compresses each field with the declared multi-byte symbol
//! width. If the mean ratio stays below a threshold, multi-byte matching is
//! not paying off and single-byte symbols are used with the base window;
//! otherwise the declared width is kept and the window is scaled by it,
//! capped at 255.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::params::{ParamError, Params, MAX_WINDOW};
use crate::pipeline::{self, CompressError};

pub const DEFAULT_THRESHOLD: f64 = 1.5;
pub const DEFAULT_PILOT_BYTES: usize = 4 << 20;

#[derive(Debug, Error)]
pub enum TunerError {
    #[error("no fields to tune on")]
    NoFields,
    #[error("field {0} is empty")]
    EmptyField(usize),
    #[error("declared width {0} is not 1, 2 or 4")]
    DeclaredWidth(usize),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Compress(#[from] CompressError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunerConfig {
    pub threshold: f64,
    /// Bytes of each field compressed by the pilot pass.
    pub pilot_bytes: usize,
    pub threads: usize,
}

impl Default for TunerConfig {
    fn default() -> Self {
        TunerConfig {
            threshold: DEFAULT_THRESHOLD,
            pilot_bytes: DEFAULT_PILOT_BYTES,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PilotReport {
    pub declared_width: usize,
    pub field_ratios: Vec<f64>,
    pub average_ratio: f64,
    pub threshold: f64,
    pub chosen: Params,
}

impl PilotReport {
    /// `key: value` lines, ending with the matching compress flags.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fields: {}", self.field_ratios.len());
        for (i, r) in self.field_ratios.iter().enumerate() {
            let _ = writeln!(out, "field_{i}_ratio: {r:.6}");
        }
        let _ = writeln!(out, "declared_width: {}", self.declared_width);
        let _ = writeln!(out, "average_ratio: {:.6}", self.average_ratio);
        let _ = writeln!(out, "threshold: {}", self.threshold);
        let p = &self.chosen;
        let _ = writeln!(out, "symbol_width: {}", p.symbol_width());
        let _ = writeln!(out, "window: {}", p.window());
        let _ = writeln!(out, "chunk_size: {}", p.chunk_size());
        let _ = writeln!(out, "interval: {}", p.interval());
        let _ = writeln!(
            out,
            "flags: -S {} -W {} -C {} -I {}",
            p.symbol_width(),
            p.window(),
            p.chunk_size(),
            p.interval()
        );
        out
    }
}

/// The selection rule on its own: a function of the pilot average only.
pub fn decide(
    average_ratio: f64,
    threshold: f64,
    declared_width: usize,
    base: &Params,
) -> Result<Params, ParamError> {
    if average_ratio < threshold {
        base.with_symbol_width_and_window(1, base.window())
    } else {
        let window = (base.window() * declared_width).min(MAX_WINDOW);
        base.with_symbol_width_and_window(declared_width, window)
    }
}

pub fn pilot<F: AsRef<[u8]> + Sync>(
    fields: &[F],
    declared_width: usize,
    base: &Params,
    config: &TunerConfig,
) -> Result<PilotReport, TunerError> {
    if fields.is_empty() {
        return Err(TunerError::NoFields);
    }
    if let Some(i) = fields.iter().position(|f| f.as_ref().is_empty()) {
        return Err(TunerError::EmptyField(i));
    }
    if ![1, 2, 4].contains(&declared_width) {
        return Err(TunerError::DeclaredWidth(declared_width));
    }
    let pilot_params = base.with_symbol_width_and_window(declared_width, base.window())?;

    let field_ratios = crate::pool::install(config.threads, || {
        fields
            .par_iter()
            .map(|f| {
                let f = f.as_ref();
                let sample = &f[..f.len().min(config.pilot_bytes)];
                let containers =
                    pipeline::compress_containers_in_current_pool(sample, &pilot_params)?;
                let out: usize = containers.iter().map(|c| c.serialized_len()).sum();
                Ok(sample.len() as f64 / out as f64)
            })
            .collect::<Result<Vec<f64>, CompressError>>()
    })?;
    let average_ratio = field_ratios.iter().sum::<f64>() / field_ratios.len() as f64;
    let chosen = decide(average_ratio, config.threshold, declared_width, base)?;

    Ok(PilotReport {
        declared_width,
        field_ratios,
        average_ratio,
        threshold: config.threshold,
        chosen,
    })
}

pub fn select_params<F: AsRef<[u8]> + Sync>(
    fields: &[F],
    declared_width: usize,
    base: &Params,
) -> Result<Params, TunerError> {
    Ok(pilot(fields, declared_width, base, &TunerConfig::default())?.chosen)
}
