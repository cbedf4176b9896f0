//! Two-level partition: the input is cut into blocks (one container each)
//! and every block into fixed-size symbol chunks that are compressed
//! independently. Bytes that do not fill a whole symbol at the very end
//! form a raw tail stored verbatim.

use std::ops::Range;

use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPlan {
    pub byte_start: usize,
    pub byte_len: usize,
    pub num_chunks: usize,
    /// Logical symbols in the last chunk; 0 only when the block has no chunks.
    pub last_chunk_len: usize,
    pub tail_len: usize,
}

impl BlockPlan {
    pub fn symbol_count(&self, chunk_size: usize) -> usize {
        if self.num_chunks == 0 {
            0
        } else {
            (self.num_chunks - 1) * chunk_size + self.last_chunk_len
        }
    }

    /// Logical symbols of chunk `k`.
    pub fn chunk_len(&self, k: usize, chunk_size: usize) -> usize {
        if k + 1 == self.num_chunks {
            self.last_chunk_len
        } else {
            chunk_size
        }
    }

    /// Byte range of chunk `k`, relative to the block start.
    pub fn chunk_bytes(&self, k: usize, params: &Params) -> Range<usize> {
        let start = k * params.chunk_bytes();
        start..start + self.chunk_len(k, params.chunk_size()) * params.symbol_width()
    }

    /// Byte range of the raw tail, relative to the block start.
    pub fn tail_bytes(&self) -> Range<usize> {
        self.byte_len - self.tail_len..self.byte_len
    }

    pub fn byte_range(&self) -> Range<usize> {
        self.byte_start..self.byte_start + self.byte_len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    pub total_bytes: usize,
    pub blocks: Vec<BlockPlan>,
}

impl PartitionPlan {
    pub fn num_chunks(&self) -> usize {
        self.blocks.iter().map(|b| b.num_chunks).sum()
    }
}

pub fn plan(total_bytes: usize, params: &Params) -> PartitionPlan {
    let width = params.symbol_width();
    let chunk = params.chunk_size();
    let tail_len = total_bytes % width;

    let mut blocks = Vec::new();
    let mut start = 0;
    while start < total_bytes {
        let byte_len = params.block_bytes().min(total_bytes - start);
        let is_last = start + byte_len == total_bytes;
        let block_tail = if is_last { tail_len } else { 0 };
        let symbols = (byte_len - block_tail) / width;
        let num_chunks = symbols.div_ceil(chunk);
        let last_chunk_len = if num_chunks == 0 {
            0
        } else {
            symbols - (num_chunks - 1) * chunk
        };
        blocks.push(BlockPlan {
            byte_start: start,
            byte_len,
            num_chunks,
            last_chunk_len,
            tail_len: block_tail,
        });
        start += byte_len;
    }

    PartitionPlan {
        total_bytes,
        blocks,
    }
}
