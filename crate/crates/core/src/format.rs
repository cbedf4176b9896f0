//! The `.plz` container.
//!
//! One container per block, laid out as
//!
//! ```text
//! header (26 bytes)
//!   magic "PLZ1" | version u8 = 1 | symbol_width u8 | window u8 | interval u8
//!   | reserved u8 = 0 | chunk_size u32 | original_len u64 | num_chunks u32
//!   | tail_len u8
//! payload_offsets  (num_chunks + 1) x u32
//! flag_offsets     (num_chunks + 1) x u32
//! flag_stream
//! payload_stream
//! tail             tail_len raw bytes
//! ```
//!
//! All integers are little-endian. A file is a concatenation of containers.

use thiserror::Error;

use crate::params::{Params, RawParams, DEFAULT_BLOCK_BYTES};

pub const MAGIC: [u8; 4] = *b"PLZ1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("unsupported format: {0}")]
    Unsupported(String),
    #[error("corrupt container at byte {offset}: {reason}")]
    Corrupt { offset: usize, reason: String },
    #[error("invalid container: {0}")]
    Invalid(String),
}

fn corrupt(offset: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Corrupt {
        offset,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub symbol_width: u8,
    pub window: u8,
    pub interval: u8,
    /// Chunk size in symbols.
    pub chunk_size: u32,
    /// Bytes of original data in this block, tail included.
    pub original_len: u64,
    pub num_chunks: u32,
    pub tail_len: u8,
}

impl ContainerHeader {
    pub fn new(params: &Params, original_len: u64, num_chunks: u32, tail_len: u8) -> Self {
        ContainerHeader {
            symbol_width: params.symbol_width() as u8,
            window: params.window() as u8,
            interval: params.interval() as u8,
            chunk_size: params.chunk_size() as u32,
            original_len,
            num_chunks,
            tail_len,
        }
    }

    /// The embedded parameters. Block size is not persisted, so the default
    /// is used; it does not affect decoding.
    pub fn params(&self) -> Result<Params, FormatError> {
        RawParams {
            symbol_width: self.symbol_width as usize,
            window: self.window as usize,
            chunk_size: self.chunk_size as usize,
            interval: self.interval as usize,
            block_bytes: DEFAULT_BLOCK_BYTES,
        }
        .validate()
        .map_err(|e| FormatError::Invalid(e.to_string()))
    }

    /// Whole symbols covered by the chunks.
    pub fn symbol_count(&self) -> u64 {
        (self.original_len - self.tail_len as u64) / self.symbol_width as u64
    }

    /// Logical length in symbols of chunk `k`.
    pub fn chunk_len(&self, k: usize) -> usize {
        let chunk = self.chunk_size as u64;
        let start = k as u64 * chunk;
        (self.symbol_count() - start).min(chunk) as usize
    }

    fn check(&self) -> Result<Params, String> {
        let params = self.params().map_err(|e| e.to_string())?;
        let width = self.symbol_width as u64;
        if self.tail_len as u64 >= width {
            return Err(format!(
                "tail_len {} not below symbol width {width}",
                self.tail_len
            ));
        }
        if self.original_len < self.tail_len as u64 {
            return Err("original_len shorter than tail".into());
        }
        if !(self.original_len - self.tail_len as u64).is_multiple_of(width) {
            return Err("original_len minus tail is not a whole number of symbols".into());
        }
        let expected = self.symbol_count().div_ceil(self.chunk_size as u64);
        if expected != self.num_chunks as u64 {
            return Err(format!(
                "num_chunks {} does not match {} symbols",
                self.num_chunks,
                self.symbol_count()
            ));
        }
        Ok(params)
    }

    fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.symbol_width);
        out.push(self.window);
        out.push(self.interval);
        out.push(0);
        out.extend_from_slice(&self.chunk_size.to_le_bytes());
        out.extend_from_slice(&self.original_len.to_le_bytes());
        out.extend_from_slice(&self.num_chunks.to_le_bytes());
        out.push(self.tail_len);
    }

    fn read(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < 4 || bytes[..4] != MAGIC {
            if bytes.len() < 4 && MAGIC.starts_with(bytes) {
                return Err(corrupt(bytes.len(), "truncated header"));
            }
            return Err(FormatError::Unsupported(format!(
                "bad magic {:02x?}",
                &bytes[..bytes.len().min(4)]
            )));
        }
        if bytes.len() < 5 {
            return Err(corrupt(bytes.len(), "truncated header"));
        }
        if bytes[4] != VERSION {
            return Err(FormatError::Unsupported(format!("version {}", bytes[4])));
        }
        if bytes.len() < HEADER_LEN {
            return Err(corrupt(bytes.len(), "truncated header"));
        }
        if bytes[8] != 0 {
            return Err(corrupt(8, "reserved byte is not zero"));
        }
        Ok(ContainerHeader {
            symbol_width: bytes[5],
            window: bytes[6],
            interval: bytes[7],
            chunk_size: u32::from_le_bytes(bytes[9..13].try_into().unwrap()),
            original_len: u64::from_le_bytes(bytes[13..21].try_into().unwrap()),
            num_chunks: u32::from_le_bytes(bytes[21..25].try_into().unwrap()),
            tail_len: bytes[25],
        })
    }
}

/// Exclusive prefixes of per-chunk stream sizes, `num_chunks + 1` entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OffsetTables {
    pub payload_offsets: Vec<u32>,
    pub flag_offsets: Vec<u32>,
}

fn check_table(table: &[u32], num_chunks: usize, stream_len: usize) -> Result<(), String> {
    if table.len() != num_chunks + 1 {
        return Err(format!(
            "table has {} entries, expected {}",
            table.len(),
            num_chunks + 1
        ));
    }
    if table[0] != 0 {
        return Err("first entry is not zero".into());
    }
    if let Some(i) = table.windows(2).position(|w| w[1] < w[0]) {
        return Err(format!("entry {} decreases", i + 1));
    }
    if table[num_chunks] as usize != stream_len {
        return Err(format!(
            "last entry {} does not match stream length {stream_len}",
            table[num_chunks]
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: ContainerHeader,
    pub tables: OffsetTables,
    pub flag_stream: Vec<u8>,
    pub payload_stream: Vec<u8>,
    pub tail: Vec<u8>,
}

impl Container {
    /// Checks every structural invariant and returns the embedded params.
    pub fn validate(&self) -> Result<Params, FormatError> {
        let params = self.header.check().map_err(FormatError::Invalid)?;
        let n = self.header.num_chunks as usize;
        check_table(&self.tables.payload_offsets, n, self.payload_stream.len())
            .map_err(|e| FormatError::Invalid(format!("payload offsets: {e}")))?;
        check_table(&self.tables.flag_offsets, n, self.flag_stream.len())
            .map_err(|e| FormatError::Invalid(format!("flag offsets: {e}")))?;
        if self.tail.len() != self.header.tail_len as usize {
            return Err(FormatError::Invalid(format!(
                "tail has {} bytes, header says {}",
                self.tail.len(),
                self.header.tail_len
            )));
        }
        Ok(params)
    }

    pub fn num_chunks(&self) -> usize {
        self.header.num_chunks as usize
    }

    pub fn serialized_len(&self) -> usize {
        HEADER_LEN
            + 8 * (self.num_chunks() + 1)
            + self.flag_stream.len()
            + self.payload_stream.len()
            + self.tail.len()
    }

    /// Flag bytes of chunk `k`.
    pub fn chunk_flags(&self, k: usize) -> &[u8] {
        let t = &self.tables.flag_offsets;
        &self.flag_stream[t[k] as usize..t[k + 1] as usize]
    }

    /// Payload bytes of chunk `k`.
    pub fn chunk_payload(&self, k: usize) -> &[u8] {
        let t = &self.tables.payload_offsets;
        &self.payload_stream[t[k] as usize..t[k + 1] as usize]
    }
}

pub fn write_container(container: &Container) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::with_capacity(container.serialized_len());
    append_container(container, &mut out)?;
    Ok(out)
}

/// Serializes `container` onto the end of `out`.
pub fn append_container(container: &Container, out: &mut Vec<u8>) -> Result<(), FormatError> {
    container.validate()?;
    out.reserve(container.serialized_len());
    container.header.write(out);
    for v in &container.tables.payload_offsets {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in &container.tables.flag_offsets {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&container.flag_stream);
    out.extend_from_slice(&container.payload_stream);
    out.extend_from_slice(&container.tail);
    Ok(())
}

/// Parses exactly one container spanning all of `bytes`.
pub fn read_container(bytes: &[u8]) -> Result<Container, FormatError> {
    let (container, used) = read_container_prefix(bytes)?;
    if used != bytes.len() {
        return Err(corrupt(used, "trailing bytes after container"));
    }
    Ok(container)
}

fn read_table(bytes: &[u8], at: usize, entries: usize) -> Vec<u32> {
    bytes[at..at + 4 * entries]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect()
}

/// Parses the container at the start of `bytes`; returns it with the
/// number of bytes consumed.
pub fn read_container_prefix(bytes: &[u8]) -> Result<(Container, usize), FormatError> {
    let header = ContainerHeader::read(bytes)?;
    header.check().map_err(|e| corrupt(0, e))?;

    let n = header.num_chunks as usize;
    let table_bytes = 4 * (n + 1);
    let payload_at = HEADER_LEN;
    let flags_at = payload_at + table_bytes;
    let streams_at = flags_at + table_bytes;
    if bytes.len() < streams_at {
        return Err(corrupt(bytes.len(), "truncated offset tables"));
    }
    let tables = OffsetTables {
        payload_offsets: read_table(bytes, payload_at, n + 1),
        flag_offsets: read_table(bytes, flags_at, n + 1),
    };
    for (name, table, at) in [
        ("payload", &tables.payload_offsets, payload_at),
        ("flag", &tables.flag_offsets, flags_at),
    ] {
        if table[0] != 0 {
            return Err(corrupt(at, format!("{name} offsets do not start at zero")));
        }
        if let Some(i) = table.windows(2).position(|w| w[1] < w[0]) {
            return Err(corrupt(
                at + 4 * (i + 1),
                format!("{name} offsets not monotone"),
            ));
        }
    }

    let flag_len = tables.flag_offsets[n] as usize;
    let payload_len = tables.payload_offsets[n] as usize;
    let tail_len = header.tail_len as usize;
    let end = streams_at + flag_len + payload_len + tail_len;
    if bytes.len() < end {
        return Err(corrupt(bytes.len(), "truncated streams"));
    }
    let flag_stream = bytes[streams_at..streams_at + flag_len].to_vec();
    let payload_at = streams_at + flag_len;
    let payload_stream = bytes[payload_at..payload_at + payload_len].to_vec();
    let tail = bytes[end - tail_len..end].to_vec();

    Ok((
        Container {
            header,
            tables,
            flag_stream,
            payload_stream,
            tail,
        },
        end,
    ))
}

/// Reads every container of a multi-block file until EOF. A file holds at
/// least one container, so zero bytes is corrupt.
pub fn read_file(mut bytes: &[u8]) -> Result<Vec<Container>, FormatError> {
    if bytes.is_empty() {
        return Err(corrupt(0, "empty file"));
    }
    let mut containers = Vec::new();
    let mut base = 0;
    while !bytes.is_empty() {
        let (c, used) = read_container_prefix(bytes).map_err(|e| match e {
            FormatError::Corrupt { offset, reason } => FormatError::Corrupt {
                offset: base + offset,
                reason,
            },
            other => other,
        })?;
        containers.push(c);
        bytes = &bytes[used..];
        base += used;
    }
    Ok(containers)
}

pub fn write_file(containers: &[Container]) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::with_capacity(containers.iter().map(Container::serialized_len).sum());
    for c in containers {
        append_container(c, &mut out)?;
    }
    Ok(out)
}
