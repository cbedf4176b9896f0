//! Token resolution and per-chunk encoding.
//!
//! A single sequential walk over the match table decides which positions
//! start a token and how many bytes each token takes. The per-symbol size
//! array (zero for positions swallowed by a pointer) is then scanned with
//! the two-sweep exclusive scan, which gives every token its byte offset in
//! the chunk payload, so the token writes are independent of each other.

use thiserror::Error;

use crate::matcher::{MatchRecord, MatchTable};
use crate::params::Params;
use crate::scan::{self, ScanError};

/// Wire size of a pointer token: one length byte, one offset byte.
pub const POINTER_BYTES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("pointer at symbol {position} with length {length} overruns chunk of {len} symbols")]
    Overrun {
        position: usize,
        length: usize,
        len: usize,
    },
    #[error(
        "chunk has {bytes} bytes but the match table covers {symbols} symbols of {width} bytes"
    )]
    SizeMismatch {
        bytes: usize,
        symbols: usize,
        width: usize,
    },
    #[error(transparent)]
    Scan(#[from] ScanError),
}

/// One LZSS token. Literal symbols are held as their little-endian value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Literal(u32),
    Pointer { length: u8, offset: u8 },
}

impl Token {
    pub fn is_pointer(&self) -> bool {
        matches!(self, Token::Pointer { .. })
    }

    /// Symbols covered by the token.
    pub fn span(&self) -> usize {
        match self {
            Token::Literal(_) => 1,
            Token::Pointer { length, .. } => *length as usize,
        }
    }

    pub fn wire_size(&self, symbol_width: usize) -> usize {
        match self {
            Token::Literal(_) => symbol_width,
            Token::Pointer { .. } => POINTER_BYTES,
        }
    }

    /// Reads the literal symbol at `bytes[..width]`.
    pub fn literal_from(bytes: &[u8]) -> Token {
        let mut le = [0u8; 4];
        le[..bytes.len()].copy_from_slice(bytes);
        Token::Literal(u32::from_le_bytes(le))
    }
}

/// Packed flag bits, MSB-first within each byte; 1 marks a pointer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlagBits {
    bytes: Vec<u8>,
    len: usize,
}

impl FlagBits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reads bit `index` from an MSB-first flag array.
pub fn flag_bit(flags: &[u8], index: usize) -> bool {
    flags[index / 8] & (0x80 >> (index % 8)) != 0
}

/// A token start chosen by the resolution walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlacedToken {
    pub position: usize,
    /// `Some` for pointers; `None` for literals.
    pub pointer: Option<MatchRecord>,
}

/// Output of the sequential resolution walk.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Resolution {
    /// Compressed bytes starting at each symbol; zero inside pointers.
    pub sizes: Vec<u64>,
    pub flags: FlagBits,
    pub tokens: Vec<PlacedToken>,
}

pub fn resolve_tokens(table: &MatchTable, params: &Params) -> Result<Resolution, EncodeError> {
    let len = table.len();
    let width = params.symbol_width() as u64;
    let min_match = params.min_match();

    let mut sizes = vec![0u64; len];
    let mut flags = FlagBits::new();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < len {
        let record = table.records[i];
        if record.encodes_as_pointer(min_match) {
            let length = record.length as usize;
            if i + length > len {
                return Err(EncodeError::Overrun {
                    position: i,
                    length,
                    len,
                });
            }
            sizes[i] = POINTER_BYTES as u64;
            flags.push(true);
            tokens.push(PlacedToken {
                position: i,
                pointer: Some(record),
            });
            i += length;
        } else {
            sizes[i] = width;
            flags.push(false);
            tokens.push(PlacedToken {
                position: i,
                pointer: None,
            });
            i += 1;
        }
    }

    Ok(Resolution {
        sizes,
        flags,
        tokens,
    })
}

/// Encoded form of one chunk before deflating.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChunkArtifacts {
    pub flags: FlagBits,
    pub payload: Vec<u8>,
}

impl ChunkArtifacts {
    pub fn token_count(&self) -> usize {
        self.flags.len()
    }

    pub fn payload_size(&self) -> usize {
        self.payload.len()
    }

    /// `ceil(token_count / 8)`.
    pub fn flag_size(&self) -> usize {
        self.flags.as_bytes().len()
    }
}

/// Writes one token at `offset` in `payload`.
pub(crate) fn write_token(
    payload: &mut [u8],
    offset: usize,
    token: &PlacedToken,
    chunk: &[u8],
    width: usize,
) {
    match token.pointer {
        Some(record) => {
            payload[offset] = record.length;
            payload[offset + 1] = record.offset;
        }
        None => {
            let start = token.position * width;
            payload[offset..offset + width].copy_from_slice(&chunk[start..start + width]);
        }
    }
}

/// Exclusive offsets of every position, computed by the two-sweep scan over
/// the size array zero-padded to a power of two. Returns `(offsets, total)`.
pub fn local_offsets(sizes: &[u64]) -> Result<(Vec<u64>, u64), EncodeError> {
    if sizes.is_empty() {
        return Ok((Vec::new(), 0));
    }
    let mut padded = vec![0u64; sizes.len().next_power_of_two()];
    padded[..sizes.len()].copy_from_slice(sizes);
    let total = scan::local_exclusive_scan_in_place(&mut padded)?;
    padded.truncate(sizes.len());
    Ok((padded, total))
}

/// Encodes one chunk. `chunk` holds the chunk's logical symbols as raw
/// bytes, `table` the matches for those symbols.
pub fn encode_chunk(
    chunk: &[u8],
    table: &MatchTable,
    params: &Params,
) -> Result<ChunkArtifacts, EncodeError> {
    let width = params.symbol_width();
    if chunk.len() != table.len() * width {
        return Err(EncodeError::SizeMismatch {
            bytes: chunk.len(),
            symbols: table.len(),
            width,
        });
    }
    let resolution = resolve_tokens(table, params)?;
    let (offsets, total) = local_offsets(&resolution.sizes)?;

    let mut payload = vec![0u8; total as usize];
    for token in &resolution.tokens {
        write_token(
            &mut payload,
            offsets[token.position] as usize,
            token,
            chunk,
            width,
        );
    }

    Ok(ChunkArtifacts {
        flags: resolution.flags,
        payload,
    })
}
