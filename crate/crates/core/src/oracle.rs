//! Reference implementations used to check the pipeline: textbook
//! sequential LZSS over one chunk, and an optimal parse for tiny inputs.
//!
//! Both use their own exhaustive window scan over raw symbol bytes and share
//! only the match rules with the matcher: a match starts inside the last `W`
//! symbols, is no longer than its offset or 255, stops at the end of the
//! data, and among equally long matches the one furthest back is chosen.

use thiserror::Error;

use crate::encoder::{Token, POINTER_BYTES};
use crate::params::Params;

/// Largest input `optimal_parse` accepts, in symbols.
pub const OPTIMAL_PARSE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{len} bytes is not a whole number of {width}-byte symbols")]
    PartialSymbol { len: usize, width: usize },
    #[error("{symbols} symbols exceeds the oracle limit of {limit}")]
    TooLarge { symbols: usize, limit: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    /// Symbol position where each token starts.
    pub positions: Vec<usize>,
}

impl TokenStream {
    pub fn payload_size(&self, symbol_width: usize) -> usize {
        self.tokens.iter().map(|t| t.wire_size(symbol_width)).sum()
    }

    pub fn pointer_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_pointer()).count()
    }
}

struct Symbols<'a> {
    bytes: &'a [u8],
    width: usize,
}

impl<'a> Symbols<'a> {
    fn new(bytes: &'a [u8], params: &Params) -> Result<Self, OracleError> {
        let width = params.symbol_width();
        if !bytes.len().is_multiple_of(width) {
            return Err(OracleError::PartialSymbol {
                len: bytes.len(),
                width,
            });
        }
        Ok(Symbols { bytes, width })
    }

    fn len(&self) -> usize {
        self.bytes.len() / self.width
    }

    fn get(&self, i: usize) -> &'a [u8] {
        &self.bytes[i * self.width..(i + 1) * self.width]
    }

    /// `(length, offset)` of the longest legal match at `p`; `(0, 0)` when
    /// nothing matches.
    fn longest_match(&self, p: usize, window: usize) -> (usize, usize) {
        let n = self.len();
        let mut best = (0, 0);
        for offset in 1..=window.min(p) {
            let cap = offset.min(255).min(n - p);
            let length = (0..cap)
                .take_while(|&k| self.get(p - offset + k) == self.get(p + k))
                .count();
            if length > 0 && length >= best.0 {
                best = (length, offset);
            }
        }
        best
    }
}

/// Greedy left-to-right LZSS over a single chunk, with interval 1.
pub fn sequential_lzss(data: &[u8], params: &Params) -> Result<TokenStream, OracleError> {
    let symbols = Symbols::new(data, params)?;
    let n = symbols.len();
    if n > params.chunk_size() {
        return Err(OracleError::TooLarge {
            symbols: n,
            limit: params.chunk_size(),
        });
    }

    let mut stream = TokenStream::default();
    let mut pos = 0;
    while pos < n {
        let (length, offset) = symbols.longest_match(pos, params.window());
        stream.positions.push(pos);
        if length >= params.min_match() {
            stream.tokens.push(Token::Pointer {
                length: length as u8,
                offset: offset as u8,
            });
            pos += length;
        } else {
            stream.tokens.push(Token::literal_from(symbols.get(pos)));
            pos += 1;
        }
    }
    Ok(stream)
}

/// Smallest payload size, in bytes, over every parse of `data` under the
/// same match rules.
pub fn optimal_parse(data: &[u8], params: &Params) -> Result<usize, OracleError> {
    let symbols = Symbols::new(data, params)?;
    let n = symbols.len();
    if n > OPTIMAL_PARSE_LIMIT {
        return Err(OracleError::TooLarge {
            symbols: n,
            limit: OPTIMAL_PARSE_LIMIT,
        });
    }

    let width = params.symbol_width();
    // Every length up to the longest match at a position is also legal
    // there (same offset, shorter copy).
    let mut best = vec![0usize; n + 1];
    for p in (0..n).rev() {
        let mut cost = width + best[p + 1];
        let (longest, _) = symbols.longest_match(p, params.window());
        for length in params.min_match()..=longest {
            cost = cost.min(POINTER_BYTES + best[p + length]);
        }
        best[p] = cost;
    }
    Ok(best[0])
}
