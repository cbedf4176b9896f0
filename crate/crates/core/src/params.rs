//! Validated compression parameters shared by every pipeline stage.

use thiserror::Error;

/// Legal symbol widths in bytes.
pub const SYMBOL_WIDTHS: [usize; 3] = [1, 2, 4];
/// Legal chunk sizes in symbols.
pub const CHUNK_SIZES: [usize; 5] = [1024, 2048, 4096, 8192, 16384];
/// Legal matching intervals in symbols.
pub const INTERVALS: [usize; 5] = [1, 2, 4, 8, 16];
/// Smallest usable window. Zero is reserved on the wire for "no match".
pub const MIN_WINDOW: usize = 4;
/// Largest window; offsets are stored in one byte.
pub const MAX_WINDOW: usize = 255;
/// Default block size in bytes.
pub const DEFAULT_BLOCK_BYTES: usize = 256 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{field} = {value} is out of range (legal: {legal})")]
    OutOfRange {
        field: &'static str,
        value: u64,
        legal: &'static str,
    },
    #[error("chunk_size {chunk} must be larger than window {window}")]
    ChunkNotLargerThanWindow { chunk: usize, window: usize },
    #[error(
        "block_bytes {block} must be a positive multiple of chunk_size * symbol_width = {unit}"
    )]
    BlockNotAligned { block: usize, unit: usize },
    #[error("compression level {0} is out of range (legal: 1..=4)")]
    Level(u8),
}

/// Unvalidated parameter set, as collected from flags or a container header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawParams {
    pub symbol_width: usize,
    pub window: usize,
    pub chunk_size: usize,
    pub interval: usize,
    pub block_bytes: usize,
}

impl Default for RawParams {
    fn default() -> Self {
        RawParams {
            symbol_width: 2,
            window: 128,
            chunk_size: 2048,
            interval: 1,
            block_bytes: DEFAULT_BLOCK_BYTES,
        }
    }
}

impl RawParams {
    pub fn validate(self) -> Result<Params, ParamError> {
        let RawParams {
            symbol_width,
            window,
            chunk_size,
            interval,
            block_bytes,
        } = self;

        if !SYMBOL_WIDTHS.contains(&symbol_width) {
            return Err(ParamError::OutOfRange {
                field: "symbol_width",
                value: symbol_width as u64,
                legal: "1, 2, 4",
            });
        }
        if !(MIN_WINDOW..=MAX_WINDOW).contains(&window) {
            return Err(ParamError::OutOfRange {
                field: "window",
                value: window as u64,
                legal: "4..=255",
            });
        }
        if !CHUNK_SIZES.contains(&chunk_size) {
            return Err(ParamError::OutOfRange {
                field: "chunk_size",
                value: chunk_size as u64,
                legal: "1024, 2048, 4096, 8192, 16384",
            });
        }
        if !INTERVALS.contains(&interval) {
            return Err(ParamError::OutOfRange {
                field: "interval",
                value: interval as u64,
                legal: "1, 2, 4, 8, 16",
            });
        }
        // Always true for the enumerated sets, kept so the sets can grow.
        if chunk_size <= window {
            return Err(ParamError::ChunkNotLargerThanWindow {
                chunk: chunk_size,
                window,
            });
        }
        debug_assert!(chunk_size.is_power_of_two() && chunk_size % interval == 0);
        let unit = chunk_size * symbol_width;
        if block_bytes == 0 || block_bytes % unit != 0 {
            return Err(ParamError::BlockNotAligned {
                block: block_bytes,
                unit,
            });
        }

        Ok(Params {
            symbol_width,
            window,
            chunk_size,
            interval,
            min_match: min_match_for(symbol_width),
            block_bytes,
        })
    }
}

/// Smallest match length (in symbols) whose 2-byte pointer is strictly
/// shorter than the literals it replaces.
pub const fn min_match_for(symbol_width: usize) -> usize {
    2 / symbol_width + 1
}

/// Maps a compression level to its window size: 32, 64, 128, 255.
pub fn level_to_window(level: u8) -> Result<usize, ParamError> {
    match level {
        1 => Ok(32),
        2 => Ok(64),
        3 => Ok(128),
        4 => Ok(255),
        other => Err(ParamError::Level(other)),
    }
}

/// A parameter set that satisfies every invariant. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    symbol_width: usize,
    window: usize,
    chunk_size: usize,
    interval: usize,
    min_match: usize,
    block_bytes: usize,
}

impl Default for Params {
    fn default() -> Self {
        RawParams::default()
            .validate()
            .expect("default parameters are valid")
    }
}

impl Params {
    pub fn new(raw: RawParams) -> Result<Self, ParamError> {
        raw.validate()
    }

    pub fn symbol_width(&self) -> usize {
        self.symbol_width
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn interval(&self) -> usize {
        self.interval
    }

    pub fn min_match(&self) -> usize {
        self.min_match
    }

    pub fn block_bytes(&self) -> usize {
        self.block_bytes
    }

    /// Bytes covered by one full chunk.
    pub fn chunk_bytes(&self) -> usize {
        self.chunk_size * self.symbol_width
    }

    pub fn to_raw(&self) -> RawParams {
        RawParams {
            symbol_width: self.symbol_width,
            window: self.window,
            chunk_size: self.chunk_size,
            interval: self.interval,
            block_bytes: self.block_bytes,
        }
    }

    /// Copy with a different symbol width and window, revalidated.
    pub fn with_symbol_width_and_window(
        &self,
        symbol_width: usize,
        window: usize,
    ) -> Result<Self, ParamError> {
        RawParams {
            symbol_width,
            window,
            ..self.to_raw()
        }
        .validate()
    }
}
