//! Chunk-parallel decompression.
//!
//! Each chunk is replayed on its own from its flag and payload slices: a
//! 0 bit copies the next symbol from the payload, a 1 bit reads a
//! `[length][offset]` pair and copies `length` symbols from `offset`
//! symbols back in the same chunk. Malformed input yields a located
//! [`DecodeError`], never a panic or an out-of-bounds read.

use rayon::prelude::*;
use thiserror::Error;

use crate::encoder::{flag_bit, Token, POINTER_BYTES};
use crate::format::{self, Container, FormatError};
use crate::params::Params;
use crate::pool;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("corrupt chunk {chunk} of block {block} at token {token}: {reason}")]
pub struct DecodeError {
    pub block: usize,
    pub chunk: usize,
    pub token: usize,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum DecompressError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Walks the tokens of one chunk, checking that every pointer stays inside
/// the already covered part of the chunk. `visit` receives each token with
/// the symbol position it starts at.
fn walk_tokens<F>(
    flags: &[u8],
    payload: &[u8],
    logical_len: usize,
    width: usize,
    mut visit: F,
) -> Result<(), (usize, String)>
where
    F: FnMut(Token, usize, &[u8]),
{
    let flag_capacity = flags.len() * 8;
    let mut position = 0;
    let mut cursor = 0;
    let mut token = 0;

    while position < logical_len {
        if token >= flag_capacity {
            return Err((token, "flag array exhausted".into()));
        }
        if flag_bit(flags, token) {
            let Some(pair) = payload.get(cursor..cursor + POINTER_BYTES) else {
                return Err((token, "payload exhausted in pointer".into()));
            };
            let (length, offset) = (pair[0], pair[1]);
            if length == 0 || offset == 0 {
                return Err((
                    token,
                    format!("pointer ({length}, {offset}) is not a match"),
                ));
            }
            if offset as usize > position {
                return Err((
                    token,
                    format!("offset {offset} reaches before chunk start at symbol {position}"),
                ));
            }
            if position + length as usize > logical_len {
                return Err((
                    token,
                    format!("length {length} at symbol {position} overruns {logical_len} symbols"),
                ));
            }
            visit(Token::Pointer { length, offset }, position, pair);
            position += length as usize;
            cursor += POINTER_BYTES;
        } else {
            let Some(symbol) = payload.get(cursor..cursor + width) else {
                return Err((token, "payload exhausted in literal".into()));
            };
            visit(Token::literal_from(symbol), position, symbol);
            position += 1;
            cursor += width;
        }
        token += 1;
    }

    if cursor != payload.len() {
        return Err((
            token,
            format!("{} unused payload bytes", payload.len() - cursor),
        ));
    }
    if flags.len() != token.div_ceil(8) {
        return Err((
            token,
            format!("{} flag bytes for {token} tokens", flags.len()),
        ));
    }
    if token % 8 != 0 && flags[flags.len() - 1] & (0xFF >> (token % 8)) != 0 {
        return Err((token, "non-zero flag padding".into()));
    }
    Ok(())
}

/// Rebuilds one chunk into `out`, which must hold exactly
/// `logical_len * symbol_width` bytes.
fn decode_into(
    flags: &[u8],
    payload: &[u8],
    logical_len: usize,
    width: usize,
    out: &mut [u8],
) -> Result<(), (usize, String)> {
    debug_assert_eq!(out.len(), logical_len * width);
    walk_tokens(
        flags,
        payload,
        logical_len,
        width,
        |token, position, raw| {
            let dst = position * width;
            match token {
                Token::Literal(_) => out[dst..dst + width].copy_from_slice(raw),
                Token::Pointer { length, offset } => {
                    let src = dst - offset as usize * width;
                    let count = length as usize * width;
                    if offset >= length {
                        out.copy_within(src..src + count, dst);
                    } else {
                        // overlapping copy, forward one byte at a time
                        for i in 0..count {
                            out[dst + i] = out[src + i];
                        }
                    }
                }
            }
        },
    )
}

/// Decompresses a single chunk given its flag and payload slices.
pub fn decompress_chunk(
    flags: &[u8],
    payload: &[u8],
    logical_len: usize,
    params: &Params,
) -> Result<Vec<u8>, DecodeError> {
    let width = params.symbol_width();
    let mut out = vec![0u8; logical_len * width];
    decode_into(flags, payload, logical_len, width, &mut out).map_err(|(token, reason)| {
        DecodeError {
            block: 0,
            chunk: 0,
            token,
            reason,
        }
    })?;
    Ok(out)
}

/// Token sequence of chunk `k` of a container.
pub fn chunk_tokens(container: &Container, k: usize) -> Result<Vec<Token>, DecompressError> {
    let params = container.validate()?;
    let mut tokens = Vec::new();
    walk_tokens(
        container.chunk_flags(k),
        container.chunk_payload(k),
        container.header.chunk_len(k),
        params.symbol_width(),
        |t, _, _| tokens.push(t),
    )
    .map_err(|(token, reason)| DecodeError {
        block: 0,
        chunk: k,
        token,
        reason,
    })?;
    Ok(tokens)
}

fn decompress_block_into(
    container: &Container,
    block: usize,
    out: &mut [u8],
) -> Result<(), DecompressError> {
    let params = container.validate()?;
    let width = params.symbol_width();
    let chunk_bytes = params.chunk_bytes();
    let n = container.num_chunks();
    let header = &container.header;

    let (body, tail) = out.split_at_mut(out.len() - header.tail_len as usize);
    tail.copy_from_slice(&container.tail);

    body.par_chunks_mut(chunk_bytes)
        .enumerate()
        .try_for_each(|(k, dst)| {
            decode_into(
                container.chunk_flags(k),
                container.chunk_payload(k),
                header.chunk_len(k),
                width,
                dst,
            )
            .map_err(|(token, reason)| DecodeError {
                block,
                chunk: k,
                token,
                reason,
            })
        })?;
    debug_assert_eq!(body.len().div_ceil(chunk_bytes.max(1)), n);
    Ok(())
}

/// Decompresses one container using `workers` threads (0 = all cores).
/// The output does not depend on the worker count.
pub fn decompress(container: &Container, workers: usize) -> Result<Vec<u8>, DecompressError> {
    decompress_blocks(std::slice::from_ref(container), workers)
}

/// Decompresses a sequence of containers into one buffer.
pub fn decompress_blocks(
    containers: &[Container],
    workers: usize,
) -> Result<Vec<u8>, DecompressError> {
    for c in containers {
        c.validate()?;
    }
    let total: u64 = containers.iter().map(|c| c.header.original_len).sum();
    let mut out = vec![0u8; total as usize];
    pool::install(workers, || {
        let mut rest = out.as_mut_slice();
        for (block, c) in containers.iter().enumerate() {
            let (dst, tail) = rest.split_at_mut(c.header.original_len as usize);
            decompress_block_into(c, block, dst)?;
            rest = tail;
        }
        Ok::<_, DecompressError>(())
    })?;
    Ok(out)
}

/// Decompresses a serialized `.plz` file.
pub fn decompress_file(bytes: &[u8], workers: usize) -> Result<Vec<u8>, DecompressError> {
    let containers = format::read_file(bytes)?;
    decompress_blocks(&containers, workers)
}
