//! The compression pipeline.
//!
//! Per block:
//!
//! 1. every chunk, independently and in parallel, is matched, resolved into
//!    tokens, scanned with the two-sweep scan and encoded;
//! 2. once all chunks are done, the per-chunk payload and flag sizes are
//!    scanned into the block's offset tables;
//! 3. the chunk outputs are deflated into two gap-free streams.

use rayon::prelude::*;
use thiserror::Error;

use crate::deflate::{self, DeflateError};
use crate::encoder::{self, ChunkArtifacts, EncodeError};
use crate::format::{self, Container, ContainerHeader, FormatError, OffsetTables};
use crate::matcher::{self, ComparisonStats, MatchTable, Probe};
use crate::params::Params;
use crate::partition::{self, BlockPlan};
use crate::pool;
use crate::scan::{ChunkTotals, ScanError};

#[derive(Debug, Error)]
pub enum CompressError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Deflate(#[from] DeflateError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Match table for the logical symbols held in `bytes`.
pub fn match_bytes<P: Probe>(bytes: &[u8], params: &Params, probe: &mut P) -> MatchTable {
    match params.symbol_width() {
        1 => matcher::match_chunk_probed(bytes, params, probe),
        2 => matcher::match_chunk_probed(&matcher::symbols_from_bytes::<u16>(bytes), params, probe),
        4 => matcher::match_chunk_probed(&matcher::symbols_from_bytes::<u32>(bytes), params, probe),
        w => unreachable!("validated params cannot have symbol width {w}"),
    }
}

fn compress_chunk<P: Probe + Default>(
    bytes: &[u8],
    params: &Params,
) -> Result<(ChunkArtifacts, P), EncodeError> {
    let mut probe = P::default();
    let table = match_bytes(bytes, params, &mut probe);
    let artifacts = encoder::encode_chunk(bytes, &table, params)?;
    Ok((artifacts, probe))
}

fn compress_block<P: Probe + Default + Send>(
    block: &[u8],
    plan: &BlockPlan,
    params: &Params,
) -> Result<(Container, P), CompressError> {
    let results = (0..plan.num_chunks)
        .into_par_iter()
        .map(|k| compress_chunk::<P>(&block[plan.chunk_bytes(k, params)], params))
        .collect::<Result<Vec<_>, _>>()?;

    let mut probe = P::default();
    let mut artifacts = Vec::with_capacity(results.len());
    for (art, p) in results {
        probe.absorb(p);
        artifacts.push(art);
    }

    let totals = ChunkTotals {
        payload_sizes: artifacts.iter().map(|a| a.payload_size() as u64).collect(),
        flag_sizes: artifacts.iter().map(|a| a.flag_size() as u64).collect(),
    };
    let output = deflate::deflate_block(&artifacts, totals.scan()?)?;

    let container = Container {
        header: ContainerHeader::new(
            params,
            plan.byte_len as u64,
            plan.num_chunks as u32,
            plan.tail_len as u8,
        ),
        tables: output.tables,
        flag_stream: output.flag_stream,
        payload_stream: output.payload_stream,
        tail: block[plan.tail_bytes()].to_vec(),
    };
    Ok((container, probe))
}

fn empty_container(params: &Params) -> Container {
    Container {
        header: ContainerHeader::new(params, 0, 0, 0),
        tables: OffsetTables {
            payload_offsets: vec![0],
            flag_offsets: vec![0],
        },
        flag_stream: Vec::new(),
        payload_stream: Vec::new(),
        tail: Vec::new(),
    }
}

fn compress_blocks<P: Probe + Default + Send>(
    data: &[u8],
    params: &Params,
) -> Result<(Vec<Container>, P), CompressError> {
    let plan = partition::plan(data.len(), params);
    if plan.blocks.is_empty() {
        return Ok((vec![empty_container(params)], P::default()));
    }
    let mut probe = P::default();
    let mut containers = Vec::with_capacity(plan.blocks.len());
    for block in &plan.blocks {
        let (c, p) = compress_block::<P>(&data[block.byte_range()], block, params)?;
        probe.absorb(p);
        containers.push(c);
    }
    Ok((containers, probe))
}

/// Compresses `data` into one container per block, collecting matcher
/// statistics in `P`. Empty input yields a single empty container.
pub fn compress_probed<P: Probe + Default + Send>(
    data: &[u8],
    params: &Params,
    threads: usize,
) -> Result<(Vec<Container>, P), CompressError> {
    pool::install(threads, || compress_blocks(data, params))
}

/// Like [`compress_containers`] but runs on whatever rayon pool is current.
pub fn compress_containers_in_current_pool(
    data: &[u8],
    params: &Params,
) -> Result<Vec<Container>, CompressError> {
    compress_blocks::<()>(data, params).map(|(c, ())| c)
}

pub fn compress_containers(
    data: &[u8],
    params: &Params,
    threads: usize,
) -> Result<Vec<Container>, CompressError> {
    compress_probed::<()>(data, params, threads).map(|(c, ())| c)
}

/// Compresses `data` into a serialized `.plz` file. The output is
/// independent of `threads` (0 = all cores).
pub fn compress(data: &[u8], params: &Params, threads: usize) -> Result<Vec<u8>, CompressError> {
    let containers = compress_containers(data, params, threads)?;
    Ok(format::write_file(&containers)?)
}

/// Like [`compress`], also reporting per-position matcher work.
pub fn compress_instrumented(
    data: &[u8],
    params: &Params,
    threads: usize,
) -> Result<(Vec<u8>, ComparisonStats), CompressError> {
    let (containers, stats) = compress_probed::<ComparisonStats>(data, params, threads)?;
    Ok((format::write_file(&containers)?, stats))
}
