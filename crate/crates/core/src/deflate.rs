//! Compaction of per-chunk artifacts into the contiguous flag and payload
//! streams of a block, at the offsets produced by the global scan.

use rayon::prelude::*;
use thiserror::Error;

use crate::encoder::ChunkArtifacts;
use crate::format::OffsetTables;
use crate::scan::BlockOffsets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeflateError {
    #[error("offset tables have {tables} entries for {chunks} chunks")]
    TableLength { tables: usize, chunks: usize },
    #[error("chunk {chunk}: {stream} range of {range} bytes does not fit {size} bytes")]
    SizeMismatch {
        chunk: usize,
        stream: &'static str,
        range: usize,
        size: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOutput {
    pub tables: OffsetTables,
    pub flag_stream: Vec<u8>,
    pub payload_stream: Vec<u8>,
}

/// Cuts `stream` into consecutive disjoint slices given by `offsets`.
fn split_by_offsets<'a>(mut stream: &'a mut [u8], offsets: &[u32]) -> Vec<&'a mut [u8]> {
    let mut parts = Vec::with_capacity(offsets.len().saturating_sub(1));
    for w in offsets.windows(2) {
        let (head, rest) = stream.split_at_mut((w[1] - w[0]) as usize);
        parts.push(head);
        stream = rest;
    }
    parts
}

fn check_sizes(
    artifacts: &[ChunkArtifacts],
    offsets: &[u32],
    stream: &'static str,
    size_of: impl Fn(&ChunkArtifacts) -> usize,
) -> Result<(), DeflateError> {
    if offsets.len() != artifacts.len() + 1 || offsets[0] != 0 {
        return Err(DeflateError::TableLength {
            tables: offsets.len(),
            chunks: artifacts.len(),
        });
    }
    for (k, (a, w)) in artifacts.iter().zip(offsets.windows(2)).enumerate() {
        let range = w[1].checked_sub(w[0]).map(|r| r as usize);
        if range != Some(size_of(a)) {
            return Err(DeflateError::SizeMismatch {
                chunk: k,
                stream,
                range: range.unwrap_or(0),
                size: size_of(a),
            });
        }
    }
    Ok(())
}

/// Copies every chunk's flags and payload to its globally scanned range.
/// Chunks write disjoint ranges and run in parallel on the current pool.
pub fn deflate_block(
    artifacts: &[ChunkArtifacts],
    offsets: BlockOffsets,
) -> Result<BlockOutput, DeflateError> {
    check_sizes(artifacts, &offsets.payload, "payload", |a| a.payload_size())?;
    check_sizes(artifacts, &offsets.flags, "flag", |a| a.flag_size())?;

    let n = artifacts.len();
    let mut payload_stream = vec![0u8; offsets.payload[n] as usize];
    let mut flag_stream = vec![0u8; offsets.flags[n] as usize];

    split_by_offsets(&mut payload_stream, &offsets.payload)
        .into_par_iter()
        .zip(split_by_offsets(&mut flag_stream, &offsets.flags))
        .zip(artifacts)
        .for_each(|((payload, flags), art)| {
            payload.copy_from_slice(&art.payload);
            flags.copy_from_slice(art.flags.as_bytes());
        });

    Ok(BlockOutput {
        tables: OffsetTables {
            payload_offsets: offsets.payload,
            flag_offsets: offsets.flags,
        },
        flag_stream,
        payload_stream,
    })
}
